//! Right-hand sides (drifts) for every model in the family.
//!
//! All population equations share the multiplicative structure
//! `u̇ = u · (rate · bracket)`, which makes the coordinate hyperplanes
//! invariant and lets the same bracket expressions serve three purposes:
//! deterministic derivatives, log-coordinate drifts (divide by `u`, i.e.
//! drop the leading factor), and the facet sign checks of the confinement
//! analysis (evaluate the bracket on a prism face).
//!
//! Everything here is a pure function; no state, no allocation.

use crate::noise::NoiseSpec;
use crate::params::{InteractionSpec, LVParams, ThreeVarParams, TwoVarParams};
use crate::state::{LogState3, State2, State3, State6};

/// Logistic pair with cross-coupling: `(x(1−x+β₁y), γy(1−y+β₂x))`.
#[inline]
pub fn rhs_lotka_volterra(s: State2, p: &LVParams) -> State2 {
    [
        s[0] * (1.0 - s[0] + p.beta1 * s[1]),
        s[1] * (p.gamma * (1.0 - s[1] + p.beta2 * s[0])),
    ]
}

/// Square bracket of the two-variable x equation:
/// `(1−x)(x−α) + β₁(y−y₀)`.
#[inline]
pub fn bracket_two_var_x(s: State2, p: &TwoVarParams) -> f64 {
    (1.0 - s[0]) * (s[0] - p.alpha) + p.beta1 * (s[1] - p.y0)
}

/// Square bracket of the two-variable y equation: `y₀ − y + β₂x`.
#[inline]
pub fn bracket_two_var_y(s: State2, p: &TwoVarParams) -> f64 {
    p.y0 - s[1] + p.beta2 * s[0]
}

/// Two-variable excitable model.
#[inline]
pub fn rhs_two_var(s: State2, p: &TwoVarParams) -> State2 {
    [
        s[0] * bracket_two_var_x(s, p),
        s[1] * (p.gamma * bracket_two_var_y(s, p)),
    ]
}

/// Square bracket of the three-variable x equation:
/// `(1−x)(x−α₁) + β₁₂(y−y₀) + β₁₃(z−z₀)`.
#[inline]
pub fn bracket_x(s: State3, p: &ThreeVarParams) -> f64 {
    (1.0 - s[0]) * (s[0] - p.alpha1) + p.beta12 * (s[1] - p.y0) + p.beta13 * (s[2] - p.z0)
}

/// Square bracket of the three-variable y equation:
/// `y₀ − y + β₂₁x + β₂₃(z−z₀)`.
#[inline]
pub fn bracket_y(s: State3, p: &ThreeVarParams) -> f64 {
    p.y0 - s[1] + p.beta21 * s[0] + p.beta23 * (s[2] - p.z0)
}

/// Square bracket of the three-variable z equation:
/// `(z₀−z)(z−α₂) + β₃₁x + β₃₂(y−y₀)`.
#[inline]
pub fn bracket_z(s: State3, p: &ThreeVarParams) -> f64 {
    (p.z0 - s[2]) * (s[2] - p.alpha2) + p.beta31 * s[0] + p.beta32 * (s[1] - p.y0)
}

/// Three-variable excitable model.
#[inline]
pub fn rhs_three_var(s: State3, p: &ThreeVarParams) -> State3 {
    [
        s[0] * (p.gamma1 * bracket_x(s, p)),
        s[1] * (p.gamma2 * bracket_y(s, p)),
        s[2] * (p.gamma3 * bracket_z(s, p)),
    ]
}

/// Drift of the three-variable model in log coordinates `v = ln(x,y,z)`.
///
/// By the chain rule this is exactly `rhs_three_var(exp(v)) / exp(v)`
/// componentwise; the shared bracket helpers make the identity hold to the
/// last bit, which the tests rely on. No noise correction appears here: the
/// log-coordinate stochastic equations carry additive noise and an
/// uncorrected drift.
#[inline]
pub fn drift_log_three_var(v: LogState3, p: &ThreeVarParams) -> LogState3 {
    let s = crate::state::exp3(v);
    [
        p.gamma1 * bracket_x(s, p),
        p.gamma2 * bracket_y(s, p),
        p.gamma3 * bracket_z(s, p),
    ]
}

/// Drift of the stochastic model in the original coordinates, including the
/// Itô corrections `σᵢ²/2` that arise when the log-coordinate equations are
/// transformed back:
///
/// ```text
/// dX = X(γ₁[(1−X)(X−α₁)+β₁₂(Y−y₀)+β₁₃(Z−z₀)] + σ₁²/2)dt + σ₁X dW₁
/// ```
///
/// and likewise for Y and Z. With `σ = 0` this reduces to
/// [`rhs_three_var`].
#[inline]
pub fn drift_direct_three_var(s: State3, p: &ThreeVarParams, sigma: [f64; 3]) -> State3 {
    [
        s[0] * (p.gamma1 * bracket_x(s, p) + 0.5 * sigma[0] * sigma[0]),
        s[1] * (p.gamma2 * bracket_y(s, p) + 0.5 * sigma[1] * sigma[1]),
        s[2] * (p.gamma3 * bracket_z(s, p) + 0.5 * sigma[2] * sigma[2]),
    ]
}

#[inline]
fn ethnos(s: State6, which: usize) -> State3 {
    let o = 3 * which;
    [s[o], s[o + 1], s[o + 2]]
}

/// Deterministic drift of the six-equation two-population system in original
/// coordinates, Itô corrections included.
///
/// Time gates:
/// * `t < T1`: the second population does not exist yet; its three drift
///   components are exactly zero (the integrator freezes the state).
/// * `t >= T1 + T2`: communication is open and the suppression terms
///   `−c₁X₂` (inside the bracket of ẋ₁) and `−c₂X₁` (inside ẋ₂) are active.
/// * In between, the populations evolve independently.
pub fn drift_interaction(
    s: State6,
    p: &ThreeVarParams,
    ispec: &InteractionSpec,
    noise: &NoiseSpec,
    t: f64,
) -> State6 {
    let sig = noise.sigmas();
    let communicating = t >= ispec.communication_time();
    let s1 = ethnos(s, 0);
    let s2 = ethnos(s, 1);

    let bx1 = if communicating {
        bracket_x(s1, p) - ispec.c1 * s2[0]
    } else {
        bracket_x(s1, p)
    };
    let d1 = [
        s1[0] * (p.gamma1 * bx1 + 0.5 * sig[0] * sig[0]),
        s1[1] * (p.gamma2 * bracket_y(s1, p) + 0.5 * sig[1] * sig[1]),
        s1[2] * (p.gamma3 * bracket_z(s1, p) + 0.5 * sig[2] * sig[2]),
    ];

    if t < ispec.t1 {
        return [d1[0], d1[1], d1[2], 0.0, 0.0, 0.0];
    }

    let bx2 = if communicating {
        bracket_x(s2, p) - ispec.c2 * s1[0]
    } else {
        bracket_x(s2, p)
    };
    let d2 = [
        s2[0] * (p.gamma1 * bx2 + 0.5 * sig[0] * sig[0]),
        s2[1] * (p.gamma2 * bracket_y(s2, p) + 0.5 * sig[1] * sig[1]),
        s2[2] * (p.gamma3 * bracket_z(s2, p) + 0.5 * sig[2] * sig[2]),
    ];

    [d1[0], d1[1], d1[2], d2[0], d2[1], d2[2]]
}
