//! State vectors for the model family.
//!
//! Fixed-size arrays keep the integrators allocation-free in the hot loop and
//! make the dimension part of the type. Log-states are ordinary reals; the
//! population states are strictly positive whenever an integrator produced
//! them.

/// Two-variable population state `(x, y)`.
pub type State2 = [f64; 2];

/// Three-variable population state `(x, y, z)`.
pub type State3 = [f64; 3];

/// Log coordinates `(v1, v2, v3) = (ln x, ln y, ln z)`; unconstrained reals.
pub type LogState3 = [f64; 3];

/// Stacked state of two interacting populations `(x1, y1, z1, x2, y2, z2)`.
pub type State6 = [f64; 6];

/// Componentwise exponential, the inverse of [`ln3`].
#[inline]
pub fn exp3(v: LogState3) -> State3 {
    [v[0].exp(), v[1].exp(), v[2].exp()]
}

/// Componentwise natural log; caller guarantees positivity.
#[inline]
pub fn ln3(s: State3) -> LogState3 {
    [s[0].ln(), s[1].ln(), s[2].ln()]
}

/// True when every component is a finite number.
#[inline]
pub fn all_finite(s: &[f64]) -> bool {
    s.iter().all(|v| v.is_finite())
}

/// True when every component is strictly positive (and finite).
#[inline]
pub fn all_positive(s: &[f64]) -> bool {
    s.iter().all(|v| v.is_finite() && *v > 0.0)
}

/// Sup-norm distance between two equal-length vectors.
#[inline]
pub fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max)
}

/// Euclidean distance between two equal-length vectors.
#[inline]
pub fn euclid_dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q) * (p - q))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_ln_round_trip() {
        let s = [0.07, 0.053, 0.05];
        let back = exp3(ln3(s));
        for i in 0..3 {
            assert!((back[i] - s[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn positivity_and_finiteness_checks() {
        assert!(all_positive(&[1.0, 1e-300, 2.0]));
        assert!(!all_positive(&[1.0, 0.0]));
        assert!(!all_positive(&[1.0, -1.0]));
        assert!(all_finite(&[0.0, -3.0]));
        assert!(!all_finite(&[f64::NAN]));
        assert!(!all_finite(&[f64::INFINITY]));
    }

    #[test]
    fn distances() {
        assert_eq!(sup_dist(&[1.0, 2.0], &[1.5, 1.0]), 1.0);
        assert!((euclid_dist(&[0.0, 0.0], &[3.0, 4.0]) - 5.0).abs() < 1e-15);
    }
}
