//! The coupled two-population system: six equations, two time gates.
//!
//! Population 2 ("the younger ethnos") is born at `T1`: before that its
//! state is frozen at the shared initial condition by skipping its update
//! entirely — not by zeroing noise. From `T1 + T2` on, the two x-equations
//! suppress each other through `−c₁X₂` / `−c₂X₁` inside their brackets.
//! Both gates are evaluated at the left endpoint of every step and must
//! fall on grid points, which [`TimeGrid::with_knots`] guarantees.
//!
//! Integration runs in log coordinates per population (additive noise,
//! positivity by construction), with the suppression term entering the
//! v₁-drift as `−γ₁c₁·exp(v₂ₓ)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::models::{bracket_x, bracket_y, bracket_z};
use crate::noise::{BrownianPath, NoiseSpec};
use crate::params::{InteractionSpec, ThreeVarParams};
use crate::state::{exp3, ln3, State3, State6};
use crate::trajectory::Trajectory;

/// Log-coordinate drift of the six-equation system at time `t` (no Itô
/// corrections — they cancel in the change of variables).
///
/// Before `T1` the population-2 components are reported as zero, mirroring
/// the direct-coordinate drift; the integrator freezes that population by
/// not applying any update (drift or noise) at all.
pub fn drift_interaction_log(
    v: State6,
    p: &ThreeVarParams,
    ispec: &InteractionSpec,
    t: f64,
) -> State6 {
    let communicating = t >= ispec.communication_time();
    let s1 = exp3([v[0], v[1], v[2]]);
    let s2 = exp3([v[3], v[4], v[5]]);

    let bx1 = if communicating {
        bracket_x(s1, p) - ispec.c1 * s2[0]
    } else {
        bracket_x(s1, p)
    };
    let d1 = [
        p.gamma1 * bx1,
        p.gamma2 * bracket_y(s1, p),
        p.gamma3 * bracket_z(s1, p),
    ];

    if t < ispec.t1 {
        return [d1[0], d1[1], d1[2], 0.0, 0.0, 0.0];
    }

    let bx2 = if communicating {
        bracket_x(s2, p) - ispec.c2 * s1[0]
    } else {
        bracket_x(s2, p)
    };
    [
        d1[0],
        d1[1],
        d1[2],
        p.gamma1 * bx2,
        p.gamma2 * bracket_y(s2, p),
        p.gamma3 * bracket_z(s2, p),
    ]
}

/// Joint trajectory of both populations (columns `x1,y1,z1,x2,y2,z2`)
/// together with the coupling specification that produced it.
#[derive(Debug, Clone)]
pub struct DualTrajectory {
    traj: Trajectory,
    spec: InteractionSpec,
}

impl DualTrajectory {
    pub fn trajectory(&self) -> &Trajectory {
        &self.traj
    }

    pub fn into_trajectory(self) -> Trajectory {
        self.traj
    }

    pub fn spec(&self) -> &InteractionSpec {
        &self.spec
    }

    pub fn grid(&self) -> &TimeGrid {
        self.traj.grid()
    }

    /// State of population `which` (0 or 1) at a time index.
    pub fn ethnos_state(&self, which: usize, time_index: usize) -> State3 {
        assert!(which < 2);
        let row = self.traj.row(time_index);
        [row[3 * which], row[3 * which + 1], row[3 * which + 2]]
    }

    /// `(time, value)` of the x-peak of population `which` (0 or 1).
    pub fn x_peak(&self, which: usize) -> (f64, f64) {
        assert!(which < 2);
        self.traj.max_of(3 * which)
    }
}

/// Euler–Maruyama integration of the coupled system. `path` must carry six
/// components on the same grid: 0–2 drive population 1, 3–5 population 2
/// (population 2's increments are discarded while it is frozen).
pub fn integrate_interacting(
    p: &ThreeVarParams,
    n: &NoiseSpec,
    ispec: &InteractionSpec,
    initial: State3,
    grid: &TimeGrid,
    path: &BrownianPath,
) -> Result<DualTrajectory> {
    p.validate()?;
    p.validate_noise_signs()?;
    n.validate()?;
    ispec.validate()?;
    if initial.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidParam {
            field: "initial",
            message: format!("all components must be strictly positive, got {initial:?}"),
        });
    }
    if path.dims() != 6 {
        return Err(Error::InvalidParam {
            field: "path",
            message: format!("need a 6-component driver, got {}", path.dims()),
        });
    }
    if path.grid() != grid {
        return Err(Error::InvalidParam {
            field: "path",
            message: "Brownian path was generated on a different grid".into(),
        });
    }
    // The gates only switch cleanly if they coincide with grid points.
    for gate in [ispec.t1, ispec.communication_time()] {
        if gate > grid.t0() && gate <= grid.tf() {
            grid.knot_index(gate)?;
        }
    }

    let sigma = n.sigmas();
    let times = grid.times();
    let mut v1 = ln3(initial);
    let mut v2 = ln3(initial);
    // Emitted population-2 state; stays bitwise equal to `initial` until the
    // first post-T1 update.
    let mut s2 = initial;
    let mut data = Vec::with_capacity(times.len() * 6);
    data.extend_from_slice(&initial);
    data.extend_from_slice(&s2);
    for step in 0..grid.n_steps() {
        let t = times[step];
        let h = grid.step(step);
        let dw = path.increments_at(step);
        let d = drift_interaction_log([v1[0], v1[1], v1[2], v2[0], v2[1], v2[2]], p, ispec, t);
        for i in 0..3 {
            v1[i] += d[i] * h + sigma[i] * dw[i];
        }
        if t >= ispec.t1 {
            for i in 0..3 {
                v2[i] += d[i + 3] * h + sigma[i] * dw[i + 3];
            }
            s2 = exp3(v2);
        }
        if !(v1.iter().all(|c| c.is_finite()) && v2.iter().all(|c| c.is_finite())) {
            return Err(Error::NonFiniteState {
                t: times[step + 1],
                detail: format!("log-space state became non-finite: v1={v1:?} v2={v2:?}"),
            });
        }
        data.extend_from_slice(&exp3(v1));
        data.extend_from_slice(&s2);
    }
    let traj = Trajectory::new(
        grid.clone(),
        ["x1", "y1", "z1", "x2", "y2", "z2"]
            .map(String::from)
            .to_vec(),
        data,
    )?;
    Ok(DualTrajectory { traj, spec: *ispec })
}

/// Which population ended up suppressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suppressed {
    Ethnos1,
    Ethnos2,
    Neither,
}

impl fmt::Display for Suppressed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suppressed::Ethnos1 => "ethnos1",
            Suppressed::Ethnos2 => "ethnos2",
            Suppressed::Neither => "neither",
        })
    }
}

/// Peak comparison of the two populations' x components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominanceReport {
    pub peak1: f64,
    pub peak2: f64,
    /// `peak2 / peak1`.
    pub peak_ratio: f64,
    pub suppressed: Suppressed,
    /// The relative quantity the verdict is based on: the relative peak
    /// difference, or — when reference peaks are supplied — the gap between
    /// the two populations' relative shortfalls from their own references.
    pub margin: f64,
}

/// Classify by raw peaks: the smaller-peak population is suppressed unless
/// the relative peak difference is within `tie_tolerance`.
pub fn dominance_report(dt: &DualTrajectory, tie_tolerance: f64) -> DominanceReport {
    let peak1 = dt.x_peak(0).1;
    let peak2 = dt.x_peak(1).1;
    let margin = (peak1 - peak2).abs() / peak1.max(peak2);
    let suppressed = if margin <= tie_tolerance {
        Suppressed::Neither
    } else if peak1 < peak2 {
        Suppressed::Ethnos1
    } else {
        Suppressed::Ethnos2
    };
    DominanceReport {
        peak1,
        peak2,
        peak_ratio: peak2 / peak1,
        suppressed,
        margin,
    }
}

/// Classify against uncoupled reference peaks (`reference_peaks[i]` is what
/// population `i+1` reaches with the coupling turned off): the population
/// whose peak falls furthest below its own reference is suppressed.
pub fn dominance_report_with_references(
    dt: &DualTrajectory,
    tie_tolerance: f64,
    reference_peaks: [f64; 2],
) -> DominanceReport {
    let peak1 = dt.x_peak(0).1;
    let peak2 = dt.x_peak(1).1;
    let deficit1 = (reference_peaks[0] - peak1) / reference_peaks[0];
    let deficit2 = (reference_peaks[1] - peak2) / reference_peaks[1];
    let margin = (deficit1 - deficit2).abs();
    let suppressed = if margin <= tie_tolerance {
        Suppressed::Neither
    } else if deficit1 > deficit2 {
        Suppressed::Ethnos1
    } else {
        Suppressed::Ethnos2
    };
    DominanceReport {
        peak1,
        peak2,
        peak_ratio: peak2 / peak1,
        suppressed,
        margin,
    }
}
