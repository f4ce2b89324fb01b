//! Crate-wide error type.
//!
//! Every fallible operation returns [`Result`]. Numerical failures carry the
//! context needed to diagnose them (the time of a blow-up, the size of a
//! residual); configuration failures name the offending field so CLI error
//! messages can point at the exact line of a scenario file.

use thiserror::Error;

/// Unified error type for integration, analysis, and scenario I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// An integrator produced a NaN, an overflow, or (for the direct
    /// stochastic scheme) a non-positive population component. Usually means
    /// the step size is too large for the parameter set.
    #[error("non-finite or non-positive state at t = {t}: {detail}")]
    NonFiniteState { t: f64, detail: String },

    /// The standing sign assumptions for the stochastic and confinement
    /// analysis (beta12 <= 0 and beta32 <= 0) do not hold.
    #[error("parameter sign violation: {0}")]
    ParamSignViolation(String),

    /// A parameter record violates one of its structural invariants.
    #[error("invalid parameter {field}: {message}")]
    InvalidParam { field: &'static str, message: String },

    /// A point handed to the stability classifier is not actually an
    /// equilibrium of the supplied right-hand side.
    #[error("residual norm {residual:.3e} too large for equilibrium classification (limit {limit:.1e})")]
    ResidualTooLarge { residual: f64, limit: f64 },

    /// The upward scan for a valid base prism exhausted its search range.
    #[error("no valid base prism with a0 = c0 <= {limit}")]
    NoValidBase { limit: f64 },

    /// A prism or prism sequence failed one of its construction checks.
    #[error("prism construction failed: {0}")]
    PrismCheckFailed(String),

    /// A time that must coincide with a grid point (a lag boundary, for
    /// instance) does not lie on the grid.
    #[error("required time t = {t} does not fall on a grid point")]
    KnotMisalignment { t: f64 },

    /// A scenario file could not be parsed. `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A scenario parsed but violates a semantic invariant.
    #[error("invalid scenario: field {field}: {message}")]
    Validation { field: String, message: String },

    /// No bundled preset with the given name.
    #[error("unknown preset '{name}' (available: {available})")]
    UnknownPreset { name: String, available: String },

    /// File system failure while writing outputs.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit code bucket: 2 for configuration mistakes the user can fix by
    /// editing inputs, 1 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::Validation { .. }
            | Error::UnknownPreset { .. }
            | Error::InvalidParam { .. }
            | Error::ParamSignViolation(_) => 2,
            _ => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_partition_config_vs_runtime() {
        let config = Error::Validation {
            field: "params.gamma1".into(),
            message: "must be positive".into(),
        };
        assert_eq!(config.exit_code(), 2);
        let runtime = Error::NonFiniteState {
            t: 1.5,
            detail: "x overflowed".into(),
        };
        assert_eq!(runtime.exit_code(), 1);
    }

    #[test]
    fn messages_name_the_context() {
        let e = Error::Parse {
            line: 7,
            message: "expected key=value".into(),
        };
        assert!(e.to_string().contains("line 7"));
        let e = Error::KnotMisalignment { t: 30.0 };
        assert!(e.to_string().contains("30"));
    }
}
