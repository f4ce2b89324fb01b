//! Parameter records for every model in the family.
//!
//! The structs are plain data with public fields; `validate` enforces the
//! structural invariants (positivity of rates, threshold ranges). The sign
//! restrictions `beta12 <= 0`, `beta32 <= 0` required by the stochastic
//! positivity argument and the prism confinement checks are *not* part of
//! `validate`: deterministic scenarios legitimately use other sign patterns,
//! so those checks live in [`ThreeVarParams::validate_noise_signs`] and are
//! applied only at the stochastic/confinement module boundaries.

use crate::error::{Error, Result};

#[inline]
fn require(cond: bool, field: &'static str, message: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParam {
            field,
            message: message.to_string(),
        })
    }
}

#[inline]
fn require_finite(value: f64, field: &'static str) -> Result<()> {
    require(value.is_finite(), field, "must be a finite number")
}

/// Detached logistic pair with cross-coupling:
/// `ẋ = x(1 − x + β₁y)`, `ẏ = γy(1 − y + β₂x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LVParams {
    pub beta1: f64,
    pub beta2: f64,
    /// Relative rate of the second species; positive.
    pub gamma: f64,
}

impl LVParams {
    pub fn validate(&self) -> Result<()> {
        require_finite(self.beta1, "beta1")?;
        require_finite(self.beta2, "beta2")?;
        require_finite(self.gamma, "gamma")?;
        require(self.gamma > 0.0, "gamma", "must be positive")
    }
}

/// Two-variable excitable model:
/// `ẋ = x[(1−x)(x−α) + β₁(y−y₀)]`, `ẏ = γy[y₀ − y + β₂x]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoVarParams {
    /// Excitation threshold; in (0, 1).
    pub alpha: f64,
    /// Background equilibrium level of y; positive.
    pub y0: f64,
    pub beta1: f64,
    pub beta2: f64,
    /// Relative rate of the y dynamics; positive.
    pub gamma: f64,
}

impl TwoVarParams {
    pub fn validate(&self) -> Result<()> {
        for (v, name) in [
            (self.alpha, "alpha"),
            (self.y0, "y0"),
            (self.beta1, "beta1"),
            (self.beta2, "beta2"),
            (self.gamma, "gamma"),
        ] {
            require_finite(v, name)?;
        }
        require(
            self.alpha > 0.0 && self.alpha < 1.0,
            "alpha",
            "must lie strictly between 0 and 1",
        )?;
        require(self.y0 > 0.0, "y0", "must be positive")?;
        require(self.gamma > 0.0, "gamma", "must be positive")
    }
}

/// Three-variable excitable model; see the crate-level overview for the
/// equations. Coupling `beta_ij` feeds variable `j` into equation `i` with
/// the index order (1, 2, 3) = (x, y, z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeVarParams {
    /// Excitation threshold of x; positive.
    pub alpha1: f64,
    /// Lower root of the z self-dynamics; positive.
    pub alpha2: f64,
    /// Background equilibrium level of y; positive.
    pub y0: f64,
    /// Upper root of the z self-dynamics; non-negative.
    pub z0: f64,
    pub beta12: f64,
    pub beta13: f64,
    pub beta21: f64,
    pub beta23: f64,
    pub beta31: f64,
    pub beta32: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
}

impl ThreeVarParams {
    pub fn validate(&self) -> Result<()> {
        for (v, name) in [
            (self.alpha1, "alpha1"),
            (self.alpha2, "alpha2"),
            (self.y0, "y0"),
            (self.z0, "z0"),
            (self.beta12, "beta12"),
            (self.beta13, "beta13"),
            (self.beta21, "beta21"),
            (self.beta23, "beta23"),
            (self.beta31, "beta31"),
            (self.beta32, "beta32"),
            (self.gamma1, "gamma1"),
            (self.gamma2, "gamma2"),
            (self.gamma3, "gamma3"),
        ] {
            require_finite(v, name)?;
        }
        require(self.alpha1 > 0.0, "alpha1", "must be positive")?;
        require(self.alpha2 > 0.0, "alpha2", "must be positive")?;
        require(self.y0 > 0.0, "y0", "must be positive")?;
        require(self.z0 >= 0.0, "z0", "must be non-negative")?;
        require(self.gamma1 > 0.0, "gamma1", "must be positive")?;
        require(self.gamma2 > 0.0, "gamma2", "must be positive")?;
        require(self.gamma3 > 0.0, "gamma3", "must be positive")
    }

    /// Standing sign assumption for the stochastic positivity argument and
    /// the prism drift checks: the y-into-x and y-into-z couplings must be
    /// non-positive, so the relevant brackets are maximized as y -> 0+.
    pub fn validate_noise_signs(&self) -> Result<()> {
        if self.beta12 > 0.0 {
            return Err(Error::ParamSignViolation(format!(
                "beta12 = {} but must be <= 0",
                self.beta12
            )));
        }
        if self.beta32 > 0.0 {
            return Err(Error::ParamSignViolation(format!(
                "beta32 = {} but must be <= 0",
                self.beta32
            )));
        }
        Ok(())
    }
}

/// Strengths and lags of the two-population coupling: suppression strengths
/// `c1`, `c2`, the birth lag `T1` of the second population, and the
/// communication lag `T2` after its birth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionSpec {
    pub c1: f64,
    pub c2: f64,
    pub t1: f64,
    pub t2: f64,
}

impl InteractionSpec {
    pub fn validate(&self) -> Result<()> {
        for (v, name) in [
            (self.c1, "c1"),
            (self.c2, "c2"),
            (self.t1, "t1"),
            (self.t2, "t2"),
        ] {
            require_finite(v, name)?;
        }
        // Zero is allowed: c = 0 turns suppression off, which is how an
        // uncoupled reference run is expressed.
        require(self.c1 >= 0.0, "c1", "must be non-negative")?;
        require(self.c2 >= 0.0, "c2", "must be non-negative")?;
        require(self.t1 >= 0.0, "t1", "must be non-negative")?;
        require(self.t2 >= 0.0, "t2", "must be non-negative")
    }

    /// Time at which cross-suppression switches on.
    #[inline]
    pub fn communication_time(&self) -> f64 {
        self.t1 + self.t2
    }
}

/// Conversion from model units to historical units: one model time unit is
/// `years_per_unit` years, `x = 1` is `k` individuals of the active
/// population, and the background populations carry an extra factor of
/// `nonpassionary_factor` on top of `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealScale {
    pub years_per_unit: f64,
    pub k: f64,
    pub nonpassionary_factor: f64,
}

impl Default for RealScale {
    fn default() -> Self {
        RealScale {
            years_per_unit: 15.0,
            k: 10_000.0,
            nonpassionary_factor: 100.0,
        }
    }
}

impl RealScale {
    pub fn validate(&self) -> Result<()> {
        require(
            self.years_per_unit > 0.0 && self.years_per_unit.is_finite(),
            "years_per_unit",
            "must be positive",
        )?;
        require(self.k > 0.0 && self.k.is_finite(), "k", "must be positive")?;
        require(
            self.nonpassionary_factor > 0.0 && self.nonpassionary_factor.is_finite(),
            "nonpassionary_factor",
            "must be positive",
        )
    }
}
