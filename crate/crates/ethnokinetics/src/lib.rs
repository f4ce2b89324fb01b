//! Excitable population-dynamics models of polity formation ("ethnokinetics").
//!
//! The crate implements a family of nondimensional models for the rise and
//! decline of a politically active population fraction `x` coupled to one or
//! two background populations (`y`, `z`):
//!
//! ```text
//! two-variable:    ẋ = x[(1−x)(x−α) + β₁(y−y₀)]
//!                  ẏ = γ y[y₀ − y + β₂ x]
//!
//! three-variable:  ẋ = γ₁ x[(1−x)(x−α₁) + β₁₂(y−y₀) + β₁₃(z−z₀)]
//!                  ẏ = γ₂ y[y₀ − y + β₂₁ x + β₂₃(z−z₀)]
//!                  ż = γ₃ z[(z₀−z)(z−α₂) + β₃₁ x + β₃₂(y−y₀)]
//! ```
//!
//! The cubic factor in the `x` equation makes the system excitable: a
//! perturbation above the threshold triggers a large transient excursion (a
//! "bust") before the state relaxes back to a stable equilibrium.
//!
//! On top of the deterministic core the crate provides
//!
//! * Itô stochastic extensions with multiplicative noise, integrated by
//!   Euler–Maruyama either in log coordinates (positivity by construction,
//!   [`sde::integrate_sde_log`]) or directly ([`sde::integrate_sde_direct`]),
//! * a six-equation system of two interacting populations with a birth lag
//!   `T₁` and a communication lag `T₂` ([`interaction`]),
//! * equilibrium enumeration with Jacobian stability classification and
//!   nullcline tracing ([`equilibria`], [`nullclines`]),
//! * confinement checks on growing rectangular prisms together with a
//!   Brownian range bound and the induced growth-rate threshold
//!   ([`prism`], [`brownian_bound`]),
//! * ensemble statistics over seeded Monte Carlo runs ([`sde::ensemble_stats`]),
//! * a flat-text scenario format with bundled presets and CSV/SVG writers
//!   ([`scenario`], [`output`]).
//!
//! All randomness flows through explicit 64-bit seeds; identical inputs
//! produce bit-identical outputs regardless of worker count.

pub mod brownian_bound;
pub mod equilibria;
pub mod error;
pub mod grid;
pub mod interaction;
pub mod models;
pub mod noise;
pub mod nullclines;
pub mod ode;
pub mod output;
pub mod params;
pub mod prism;
pub mod scenario;
pub mod sde;
pub mod state;
pub mod trajectory;

pub use error::{Error, Result};
pub use grid::TimeGrid;
pub use noise::{BrownianPath, NoiseSpec};
pub use params::{InteractionSpec, LVParams, RealScale, ThreeVarParams, TwoVarParams};
pub use state::{LogState3, State2, State3, State6};
pub use trajectory::Trajectory;
