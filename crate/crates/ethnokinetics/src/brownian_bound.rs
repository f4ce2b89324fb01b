//! Tail bound for the running range of Brownian motion, checked by Monte
//! Carlo, and the threshold `k` derived from it.
//!
//! For standard Brownian motion on `[0, τ]`, the probability that `|W|`
//! ever reaches level `a` is bounded by the reflection principle:
//!
//! ```text
//! P( sup_{t<=τ} |W_t| >= a ) <= (4/sqrt(2π)) ∫_{a/sqrt(τ)}^∞ e^{-y²/2} dy
//! ```
//!
//! [`brownian_range_bound`] estimates the left side empirically and returns
//! it next to the analytic right side; the discrete-time supremum can only
//! miss excursions, so the estimate errs on the conservative side and the
//! bound should dominate up to Monte Carlo noise. [`min_k_for_tau`] inverts
//! the bound: the smallest log-growth step `k` for which a noise of scale
//! `σ_max` crosses half a step within time `τ` with probability below 1/3.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::noise::derive_seed;

/// `sqrt(2π)`.
const SQRT_TWO_PI: f64 = 2.5066282746310002;

/// Integrand of the Gaussian tail.
fn phi(y: f64) -> f64 {
    (-0.5 * y * y).exp()
}

/// Adaptive Simpson quadrature with the classic 1/15 error estimate.
fn simpson_adaptive(f: fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn recurse(
        f: fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(a, fa, m, fm, flm);
        let right = simpson(m, fm, b, fb, frm);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let fm = f(0.5 * (a + b));
    let whole = simpson(a, fa, b, fb, fm);
    recurse(f, a, fa, b, fb, fm, whole, tol, 48)
}

/// `(4/sqrt(2π)) ∫_d^∞ e^{-y²/2} dy`, the analytic range bound expressed
/// through the standardized threshold `d = a/sqrt(τ)`. The integral is
/// truncated at `d + 12`, far beyond double precision relevance, and
/// evaluated by adaptive Simpson to 1e-12.
pub fn gaussian_tail_bound(d: f64) -> f64 {
    4.0 / SQRT_TWO_PI * simpson_adaptive(phi, d, d + 12.0, 1e-12)
}

/// Whether one Euler path of standard Brownian motion on `[0, tau]` with
/// step `h` ever reaches `|w| >= a`. Exits at the first crossing.
fn path_hits(a: f64, n_steps: usize, sqrt_h: f64, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = 0.0f64;
    for _ in 0..n_steps {
        let g: f64 = StandardNormal.sample(&mut rng);
        w += sqrt_h * g;
        if w.abs() >= a {
            return true;
        }
    }
    false
}

/// Estimate `P(sup_{t<=tau} |W_t| >= a)` over `n_samples` independent
/// Euler paths with step `dt` (snapped so the horizon is hit exactly), and
/// return it together with the analytic reflection bound. Paths use seeds
/// derived from `seed` and run in parallel, so the estimate is independent
/// of the thread count.
pub fn brownian_range_bound(
    a: f64,
    tau: f64,
    n_samples: usize,
    seed: u64,
    dt: f64,
) -> Result<(f64, f64)> {
    for (v, field) in [(a, "a"), (tau, "tau"), (dt, "dt")] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidParam {
                field,
                message: format!("must be positive and finite, got {v}"),
            });
        }
    }
    if n_samples == 0 {
        return Err(Error::InvalidParam {
            field: "n_samples",
            message: "need at least one sample path".into(),
        });
    }
    let n_steps = (tau / dt).ceil().max(1.0) as usize;
    let sqrt_h = (tau / n_steps as f64).sqrt();
    let hits = (0..n_samples)
        .into_par_iter()
        .filter(|&i| path_hits(a, n_steps, sqrt_h, derive_seed(seed, i as u64)))
        .count();
    let empirical = hits as f64 / n_samples as f64;
    Ok((empirical, gaussian_tail_bound(a / tau.sqrt())))
}

/// Smallest `k` (to within 1e-6, by bisection) such that
/// `4(1 - Φ(k / (2 σ_max sqrt(τ)))) < 1/3`: a noise of scale `σ_max` then
/// crosses half a log-step of size `k` within time `τ` with probability
/// below 1/3, which is what the confinement argument needs per stage.
pub fn min_k_for_tau(tau: f64, sigma_max: f64) -> Result<f64> {
    for (v, field) in [(tau, "tau"), (sigma_max, "sigma_max")] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidParam {
                field,
                message: format!("must be positive and finite, got {v}"),
            });
        }
    }
    let scale = 2.0 * sigma_max * tau.sqrt();
    let crossing_prob = |k: f64| gaussian_tail_bound(k / scale);
    let third = 1.0 / 3.0;
    let mut lo = 0.0;
    let mut hi = scale.max(1.0);
    while crossing_prob(hi) >= third {
        hi *= 2.0;
        if hi > 1e9 {
            return Err(Error::InvalidParam {
                field: "tau",
                message: "no finite threshold found (inputs out of range)".into(),
            });
        }
    }
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if crossing_prob(mid) < third {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
