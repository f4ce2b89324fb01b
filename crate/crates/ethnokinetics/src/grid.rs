//! Discretized time axes.
//!
//! A [`TimeGrid`] is a strictly increasing list of sample times built from a
//! requested step `dt`. Times that *must* be hit exactly (the lag boundaries
//! `T1` and `T1 + T2` of the interaction model, for instance) are declared as
//! mandatory knots; each inter-knot segment then gets its own snapped step
//! `dt' = span / ceil(span / dt)`, so `dt'` never exceeds the request and
//! every knot lands on a grid point bit-exactly.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    t0: f64,
    tf: f64,
    dt: f64,
    knots: Vec<f64>,
    times: Vec<f64>,
    /// First step index of each inter-knot segment (ascending).
    seg_start: Vec<usize>,
    /// Snapped step of each segment. [`TimeGrid::step`] returns these
    /// stored values rather than differences of rounded times, so equal-span
    /// segments report bit-identical steps wherever they sit on the axis.
    seg_step: Vec<f64>,
}

/// Relative slack used when deciding whether `span/dt` is "really" an
/// integer that floating-point noise pushed just above it.
const RATIO_SLACK: f64 = 1e-9;

/// Append the interior points and right endpoint of the segment `(a, b]`;
/// returns the snapped step used.
fn segment_times(times: &mut Vec<f64>, a: f64, b: f64, dt: f64) -> f64 {
    let span = b - a;
    let ratio = span / dt;
    let mut n = ratio.ceil();
    if n > 1.0 && (ratio - (n - 1.0)).abs() <= RATIO_SLACK * ratio.max(1.0) {
        // span is an integer multiple of dt up to rounding; don't add a step.
        n -= 1.0;
    }
    let n = n.max(1.0) as usize;
    let h = span / n as f64;
    for i in 1..n {
        times.push(a + i as f64 * h);
    }
    times.push(b);
    h
}

impl TimeGrid {
    /// Uniform grid over `[t0, tf]` with step at most `dt`.
    pub fn new(t0: f64, tf: f64, dt: f64) -> Result<Self> {
        Self::with_knots(t0, tf, dt, &[])
    }

    /// Grid over `[t0, tf]` forced through every time in `knots`.
    pub fn with_knots(t0: f64, tf: f64, dt: f64, knots: &[f64]) -> Result<Self> {
        if !t0.is_finite() || !tf.is_finite() || t0 >= tf {
            return Err(Error::InvalidParam {
                field: "grid",
                message: format!("need t0 < tf, got [{t0}, {tf}]"),
            });
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidParam {
                field: "grid.dt",
                message: format!("step must be positive, got {dt}"),
            });
        }
        let mut ks: Vec<f64> = Vec::new();
        for &k in knots {
            if !k.is_finite() || k < t0 || k > tf {
                return Err(Error::InvalidParam {
                    field: "grid.knots",
                    message: format!("knot {k} outside [{t0}, {tf}]"),
                });
            }
            ks.push(k);
        }
        ks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // Drop duplicates and knots indistinguishable from the endpoints.
        ks.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
        ks.retain(|&k| (k - t0).abs() > 1e-12 && (k - tf).abs() > 1e-12);

        let mut bounds = Vec::with_capacity(ks.len() + 2);
        bounds.push(t0);
        bounds.extend_from_slice(&ks);
        bounds.push(tf);

        let mut times = vec![t0];
        let mut seg_start = Vec::with_capacity(bounds.len() - 1);
        let mut seg_step = Vec::with_capacity(bounds.len() - 1);
        for w in bounds.windows(2) {
            seg_start.push(times.len() - 1);
            seg_step.push(segment_times(&mut times, w[0], w[1], dt));
        }
        for w in times.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidParam {
                    field: "grid",
                    message: format!("grid not strictly increasing near t = {}", w[0]),
                });
            }
        }
        Ok(TimeGrid {
            t0,
            tf,
            dt,
            knots: ks,
            times,
            seg_start,
            seg_step,
        })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn tf(&self) -> f64 {
        self.tf
    }

    /// The requested (maximum) step; actual segment steps may be smaller.
    pub fn dt_requested(&self) -> f64 {
        self.dt
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Number of grid points (steps + 1).
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least two points
    }

    pub fn n_steps(&self) -> usize {
        self.times.len() - 1
    }

    /// Width of step `i`: the snapped step of the segment containing it.
    /// Integrators advance with this value, so two equal-length segments
    /// anywhere on the axis drive bit-identical recurrences (times built by
    /// repeated addition would differ in their last ulps).
    pub fn step(&self, i: usize) -> f64 {
        assert!(i < self.n_steps(), "step index {i} out of range");
        let seg = self.seg_start.partition_point(|&s| s <= i) - 1;
        self.seg_step[seg]
    }

    /// Index of the grid point equal to `t` (within a 1e-9 relative slack);
    /// [`Error::KnotMisalignment`] if `t` is not on the grid.
    pub fn knot_index(&self, t: f64) -> Result<usize> {
        let tol = 1e-9 * t.abs().max(1.0);
        let i = self.times.partition_point(|&x| x < t - tol);
        if i < self.times.len() && (self.times[i] - t).abs() <= tol {
            Ok(i)
        } else {
            Err(Error::KnotMisalignment { t })
        }
    }

    /// A grid with every step subdivided `factor` times. Original points are
    /// preserved bit-exactly, so paths on the refined grid coarsen back onto
    /// this one.
    pub fn refine(&self, factor: usize) -> TimeGrid {
        assert!(factor >= 1);
        let mut times = Vec::with_capacity(self.n_steps() * factor + 1);
        times.push(self.t0);
        for w in self.times.windows(2) {
            let h = (w[1] - w[0]) / factor as f64;
            for j in 1..factor {
                times.push(w[0] + j as f64 * h);
            }
            times.push(w[1]);
        }
        TimeGrid {
            t0: self.t0,
            tf: self.tf,
            dt: self.dt / factor as f64,
            knots: self.knots.clone(),
            times,
            seg_start: self.seg_start.iter().map(|s| s * factor).collect(),
            seg_step: self.seg_step.iter().map(|h| h / factor as f64).collect(),
        }
    }

    /// The same grid with every time multiplied by `factor` (used when
    /// rescaling model units to years).
    pub fn scaled(&self, factor: f64) -> TimeGrid {
        TimeGrid {
            t0: self.t0 * factor,
            tf: self.tf * factor,
            dt: self.dt * factor,
            knots: self.knots.iter().map(|k| k * factor).collect(),
            times: self.times.iter().map(|t| t * factor).collect(),
            seg_start: self.seg_start.clone(),
            seg_step: self.seg_step.iter().map(|h| h * factor).collect(),
        }
    }
}
