//! Sampled solution curves and their post-processing.
//!
//! [`Trajectory`] stores one state vector per grid point in a flat row-major
//! buffer. Post-processing covers the phenomenology the models are built
//! around: was the excitation threshold crossed, how high was the bust, how
//! long did it last, and which equilibrium did the system settle into
//! ([`detect_excitation`]); plus conversion of model units to calendar years
//! and head counts ([`scale_to_real`]).

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::params::RealScale;
use crate::state;

/// A discretized solution: `labels.len()` variables sampled at every grid
/// point, all values finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    grid: TimeGrid,
    labels: Vec<String>,
    /// Row-major `[time][variable]`.
    data: Vec<f64>,
}

impl Trajectory {
    pub fn new(grid: TimeGrid, labels: Vec<String>, data: Vec<f64>) -> Result<Self> {
        let expect = grid.len() * labels.len();
        if data.len() != expect {
            return Err(Error::InvalidParam {
                field: "trajectory",
                message: format!(
                    "{} samples for {} grid points x {} variables",
                    data.len(),
                    grid.len(),
                    labels.len()
                ),
            });
        }
        if let Some(bad) = data.iter().position(|v| !v.is_finite()) {
            let t = grid.times()[bad / labels.len()];
            return Err(Error::NonFiniteState {
                t,
                detail: format!("sample of '{}' is not finite", labels[bad % labels.len()]),
            });
        }
        Ok(Trajectory { grid, labels, data })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn times(&self) -> &[f64] {
        self.grid.times()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n_vars(&self) -> usize {
        self.labels.len()
    }

    /// Number of time points.
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a valid grid has at least two points
    }

    #[inline]
    pub fn value(&self, time_index: usize, var: usize) -> f64 {
        self.data[time_index * self.labels.len() + var]
    }

    #[inline]
    pub fn row(&self, time_index: usize) -> &[f64] {
        let w = self.labels.len();
        &self.data[time_index * w..(time_index + 1) * w]
    }

    pub fn final_state(&self) -> &[f64] {
        self.row(self.len() - 1)
    }

    pub fn column(&self, var: usize) -> Vec<f64> {
        (0..self.len()).map(|i| self.value(i, var)).collect()
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }

    /// `(time, value)` of the maximum of one variable (first occurrence).
    pub fn max_of(&self, var: usize) -> (f64, f64) {
        let mut best = (self.times()[0], self.value(0, var));
        for i in 1..self.len() {
            let v = self.value(i, var);
            if v > best.1 {
                best = (self.times()[i], v);
            }
        }
        best
    }

    /// `(time, value)` of the minimum of one variable (first occurrence).
    pub fn min_of(&self, var: usize) -> (f64, f64) {
        let mut best = (self.times()[0], self.value(0, var));
        for i in 1..self.len() {
            let v = self.value(i, var);
            if v < best.1 {
                best = (self.times()[i], v);
            }
        }
        best
    }
}

/// Thresholds steering [`detect_excitation`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExcitationCriteria {
    /// A trajectory counts as excited when the tracked component reaches
    /// this level.
    pub excitation_level: f64,
    /// The spike duration is the total time spent above this level.
    pub duration_level: f64,
    /// Euclidean radius for matching the final state to a known
    /// equilibrium.
    pub settle_tolerance: f64,
}

impl ExcitationCriteria {
    /// Defaults for a run started at `x0` in a model with threshold `alpha`:
    /// excited means doubling the larger of the two, the duration level is
    /// half of that, and equilibria are matched within 1e-3.
    pub fn default_for(x0: f64, alpha: f64) -> Self {
        let excitation_level = 2.0 * x0.max(alpha);
        ExcitationCriteria {
            excitation_level,
            duration_level: 0.5 * excitation_level,
            settle_tolerance: 1e-3,
        }
    }
}

/// Outcome of the threshold analysis of one trajectory component.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationReport {
    pub excited: bool,
    pub peak_value: f64,
    pub peak_time: f64,
    /// Total time the component spends above the duration level, crossing
    /// times resolved by linear interpolation between samples.
    pub spike_duration: f64,
    pub terminal_state: Vec<f64>,
    /// Index into the supplied equilibrium list, when the final state lies
    /// within the settle tolerance of one of them.
    pub terminal_attractor: Option<usize>,
}

/// Total time a sampled signal spends above `level`, with linearly
/// interpolated crossing times.
pub fn time_above(times: &[f64], values: &[f64], level: f64) -> f64 {
    debug_assert_eq!(times.len(), values.len());
    let mut total = 0.0;
    for i in 0..times.len().saturating_sub(1) {
        let h = times[i + 1] - times[i];
        let (a, b) = (values[i], values[i + 1]);
        match (a > level, b > level) {
            (true, true) => total += h,
            (false, false) => {}
            (true, false) => total += h * (a - level) / (a - b),
            (false, true) => total += h * (b - level) / (b - a),
        }
    }
    total
}

/// Peak, spike duration, and terminal-attractor analysis of component
/// `x_index`. `known_equilibria` may be empty; it is consulted only for
/// `terminal_attractor`.
pub fn detect_excitation(
    traj: &Trajectory,
    x_index: usize,
    criteria: &ExcitationCriteria,
    known_equilibria: &[Vec<f64>],
) -> ExcitationReport {
    let xs = traj.column(x_index);
    let (peak_time, peak_value) = traj.max_of(x_index);
    let spike_duration = time_above(traj.times(), &xs, criteria.duration_level);
    let terminal_state = traj.final_state().to_vec();
    let terminal_attractor = known_equilibria
        .iter()
        .enumerate()
        .map(|(i, eq)| (i, state::euclid_dist(&terminal_state, eq)))
        .filter(|(_, d)| *d <= criteria.settle_tolerance)
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .map(|(i, _)| i);
    ExcitationReport {
        excited: peak_value >= criteria.excitation_level,
        peak_value,
        peak_time,
        spike_duration,
        terminal_state,
        terminal_attractor,
    }
}

/// Convert a model-unit trajectory into years and head counts: times are
/// multiplied by `years_per_unit`, active-population variables (labels
/// starting with `x`) by `k`, and all other variables by
/// `nonpassionary_factor * k`.
pub fn scale_to_real(traj: &Trajectory, scale: &RealScale) -> Trajectory {
    let factors: Vec<f64> = traj
        .labels()
        .iter()
        .map(|l| {
            if l.starts_with('x') {
                scale.k
            } else {
                scale.nonpassionary_factor * scale.k
            }
        })
        .collect();
    let w = traj.n_vars();
    let mut data = Vec::with_capacity(traj.len() * w);
    for i in 0..traj.len() {
        for (v, f) in traj.row(i).iter().zip(&factors) {
            data.push(v * f);
        }
    }
    Trajectory {
        grid: traj.grid().scaled(scale.years_per_unit),
        labels: traj.labels().to_vec(),
        data,
    }
}
