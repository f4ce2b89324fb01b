//! Euler–Maruyama integration of the stochastic three-variable model and
//! ensemble statistics.
//!
//! Two coordinate systems discretize the same Itô process:
//!
//! * **log-space** (the default): the state is `v = ln(X)`, the drift is the
//!   plain bracket (no Itô correction — it cancels in the change of
//!   variables) and noise enters additively as `σ dW`. Exponentiating keeps
//!   every sample strictly positive by construction.
//! * **direct**: the state is `X` itself, the drift carries the `σ²/2 X`
//!   correction and noise enters multiplicatively as `σ X dW`. Kept as a
//!   cross-check; it can step a component to zero or below when `dt` is too
//!   large, which is reported as an error rather than patched.
//!
//! Ensembles derive one seed per run from the base seed with
//! [`derive_seed`](crate::noise::derive_seed), so results do not depend on
//! execution order or worker count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::models::{drift_direct_three_var, drift_log_three_var};
use crate::noise::{derive_seed, BrownianPath, NoiseSpec};
use crate::params::ThreeVarParams;
use crate::state::{exp3, ln3, State3};
use crate::trajectory::Trajectory;

/// Maximum number of stored band points per variable in an
/// [`EnsembleSummary`]; full-resolution trajectories are still used for
/// peaks and bust counts.
const MAX_BAND_POINTS: usize = 2001;

/// Seeded Brownian driver on a grid (convenience wrapper over
/// [`BrownianPath::generate`]).
pub fn brownian_path(grid: &TimeGrid, dims: usize, seed: u64) -> BrownianPath {
    BrownianPath::generate(grid, dims, seed)
}

fn check_model_inputs(p: &ThreeVarParams, n: &NoiseSpec, initial: State3) -> Result<()> {
    p.validate()?;
    p.validate_noise_signs()?;
    n.validate()?;
    if initial.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidParam {
            field: "initial",
            message: format!("all components must be strictly positive, got {initial:?}"),
        });
    }
    Ok(())
}

fn check_sde_inputs(
    p: &ThreeVarParams,
    n: &NoiseSpec,
    initial: State3,
    grid: &TimeGrid,
    path: &BrownianPath,
) -> Result<()> {
    check_model_inputs(p, n, initial)?;
    if path.dims() != 3 {
        return Err(Error::InvalidParam {
            field: "path",
            message: format!("need a 3-component driver, got {}", path.dims()),
        });
    }
    if path.grid() != grid {
        return Err(Error::InvalidParam {
            field: "path",
            message: "Brownian path was generated on a different grid".into(),
        });
    }
    Ok(())
}

/// Euler–Maruyama in log coordinates; returns exponentiated (population)
/// samples, which are strictly positive for every seed.
pub fn integrate_sde_log(
    p: &ThreeVarParams,
    n: &NoiseSpec,
    initial: State3,
    grid: &TimeGrid,
    path: &BrownianPath,
) -> Result<Trajectory> {
    check_sde_inputs(p, n, initial, grid, path)?;
    let sigma = n.sigmas();
    let times = grid.times();
    let mut data = Vec::with_capacity(times.len() * 3);
    let mut v = ln3(initial);
    data.extend_from_slice(&exp3(v));
    for step in 0..grid.n_steps() {
        let h = grid.step(step);
        let d = drift_log_three_var(v, p);
        let dw = path.increments_at(step);
        for i in 0..3 {
            v[i] += d[i] * h + sigma[i] * dw[i];
        }
        if !v.iter().all(|c| c.is_finite()) {
            return Err(Error::NonFiniteState {
                t: times[step + 1],
                detail: format!("log-space state became non-finite: {v:?}"),
            });
        }
        data.extend_from_slice(&exp3(v));
    }
    Trajectory::new(
        grid.clone(),
        vec!["x".into(), "y".into(), "z".into()],
        data,
    )
}

/// Euler–Maruyama directly on the population variables, with the Itô
/// `σ²/2` drift corrections. Errors if a step drives a component to zero,
/// below zero, or out of range — the signal that `dt` is too large for the
/// noise level.
pub fn integrate_sde_direct(
    p: &ThreeVarParams,
    n: &NoiseSpec,
    initial: State3,
    grid: &TimeGrid,
    path: &BrownianPath,
) -> Result<Trajectory> {
    check_sde_inputs(p, n, initial, grid, path)?;
    let sigma = n.sigmas();
    let times = grid.times();
    let mut data = Vec::with_capacity(times.len() * 3);
    let mut s = initial;
    data.extend_from_slice(&s);
    for step in 0..grid.n_steps() {
        let h = grid.step(step);
        let d = drift_direct_three_var(s, p, sigma);
        let dw = path.increments_at(step);
        for i in 0..3 {
            s[i] += d[i] * h + sigma[i] * s[i] * dw[i];
        }
        if !s.iter().all(|c| c.is_finite() && *c > 0.0) {
            return Err(Error::NonFiniteState {
                t: times[step + 1],
                detail: format!(
                    "direct-coordinate state left the positive octant: {s:?} (dt too large?)"
                ),
            });
        }
        data.extend_from_slice(&s);
    }
    Trajectory::new(
        grid.clone(),
        vec!["x".into(), "y".into(), "z".into()],
        data,
    )
}

/// Largest pointwise gap between one variable of two trajectories whose
/// grids share endpoints, with the finer grid an integer refinement of the
/// coarser. Comparison runs over the coarse grid's points.
pub fn sup_discrepancy(a: &Trajectory, b: &Trajectory, var: usize) -> Result<f64> {
    let (coarse, fine) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let (nc, nf) = (coarse.len() - 1, fine.len() - 1);
    if nc == 0 || nf % nc != 0 {
        return Err(Error::InvalidParam {
            field: "trajectories",
            message: format!("step counts {nc} and {nf} are not integer-aligned"),
        });
    }
    let stride = nf / nc;
    let mut sup = 0.0f64;
    for i in 0..=nc {
        let (tc, tf) = (coarse.times()[i], fine.times()[i * stride]);
        if (tc - tf).abs() > 1e-9 * tc.abs().max(1.0) {
            return Err(Error::InvalidParam {
                field: "trajectories",
                message: format!("grids disagree at t={tc} vs t={tf}"),
            });
        }
        sup = sup.max((coarse.value(i, var) - fine.value(i * stride, var)).abs());
    }
    Ok(sup)
}

/// Number of completed excursions of `values` above `level`. The counter is
/// hysteretic: after an excursion is counted, the signal must descend to
/// `level/4` before a new excursion may be counted. A series starting above
/// `level` counts that first excursion.
pub fn count_busts(values: &[f64], level: f64) -> usize {
    let rearm = level / 4.0;
    let mut armed = true;
    let mut busts = 0;
    for &v in values {
        if armed && v >= level {
            busts += 1;
            armed = false;
        } else if !armed && v <= rearm {
            armed = true;
        }
    }
    busts
}

/// Ensemble statistics over repeated stochastic integrations.
///
/// Band arrays are indexed `[variable][band time]` and may be subsampled
/// (at most [`MAX_BAND_POINTS`] points); `peak_values` and `bust_counts`
/// are per successful run, in run-index order, measured at full resolution.
#[derive(Debug, Clone)]
pub struct EnsembleSummary {
    pub band_times: Vec<f64>,
    pub labels: Vec<String>,
    pub mean: Vec<Vec<f64>>,
    pub p10: Vec<Vec<f64>>,
    pub p50: Vec<Vec<f64>>,
    pub p90: Vec<Vec<f64>>,
    pub peak_values: Vec<f64>,
    pub bust_counts: Vec<usize>,
    pub runs_requested: usize,
    pub base_seed: u64,
    /// `(run index, error description)` for runs that failed to integrate.
    pub failures: Vec<(usize, String)>,
}

impl EnsembleSummary {
    pub fn runs_completed(&self) -> usize {
        self.peak_values.len()
    }

    /// Fraction of successful runs with at least `min_busts` busts.
    pub fn fraction_with_busts(&self, min_busts: usize) -> f64 {
        if self.bust_counts.is_empty() {
            return 0.0;
        }
        let hits = self.bust_counts.iter().filter(|&&c| c >= min_busts).count();
        hits as f64 / self.bust_counts.len() as f64
    }

    pub fn median_peak(&self) -> f64 {
        let mut sorted = self.peak_values.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        quantile_sorted(&sorted, 0.5)
    }

    pub fn mean_peak(&self) -> f64 {
        self.peak_values.iter().sum::<f64>() / self.peak_values.len().max(1) as f64
    }

    /// Sample standard deviation of the per-run peaks.
    pub fn peak_spread(&self) -> f64 {
        let n = self.peak_values.len();
        if n < 2 {
            return 0.0;
        }
        let m = self.mean_peak();
        let ss: f64 = self.peak_values.iter().map(|p| (p - m).powi(2)).sum();
        (ss / (n - 1) as f64).sqrt()
    }
}

/// Linear-interpolation quantile of an ascending-sorted slice.
fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = q * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = h - lo as f64;
    // Exact when the bracketing order statistics coincide (degenerate
    // ensembles must yield bitwise-equal bands), monotone in `frac`
    // otherwise.
    if frac == 0.0 || sorted[lo] == sorted[hi] {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

fn band_indices(len: usize) -> Vec<usize> {
    let stride = len.div_ceil(MAX_BAND_POINTS).max(1);
    let mut idx: Vec<usize> = (0..len).step_by(stride).collect();
    if *idx.last().unwrap() != len - 1 {
        idx.push(len - 1);
    }
    idx
}

/// Integrate `runs` independent realizations (log-space scheme) and reduce
/// them to quantile bands, per-run x-peaks, and per-run bust counts.
///
/// Run `r` uses the seed `derive_seed(n.seed, r)`, so the ensemble is
/// reproducible regardless of how the parallel scheduler interleaves runs.
/// Failed runs are recorded in `failures` and excluded from statistics;
/// only if every run fails is the first error returned.
pub fn ensemble_stats(
    p: &ThreeVarParams,
    n: &NoiseSpec,
    initial: State3,
    grid: &TimeGrid,
    runs: usize,
    bust_level: f64,
) -> Result<EnsembleSummary> {
    if runs == 0 {
        return Err(Error::InvalidParam {
            field: "runs",
            message: "need at least one run".into(),
        });
    }
    if !(bust_level > 0.0) {
        return Err(Error::InvalidParam {
            field: "bust_level",
            message: format!("must be positive, got {bust_level}"),
        });
    }
    check_model_inputs(p, n, initial)?;

    // Each run is reduced to band samples + peak + bust count inside the
    // worker, so at most one full trajectory per worker is alive at a time.
    struct RunReduce {
        bands: Vec<f64>, // [var * n_bands + band]
        peak: f64,
        busts: usize,
        labels: Vec<String>,
    }
    let idx = band_indices(grid.len());
    let mut outcomes: Vec<(usize, Result<RunReduce>)> = (0..runs)
        .into_par_iter()
        .map(|run| {
            let run_noise = NoiseSpec {
                seed: derive_seed(n.seed, run as u64),
                ..*n
            };
            let path = BrownianPath::generate(grid, 3, run_noise.seed);
            let reduced = integrate_sde_log(p, &run_noise, initial, grid, &path).map(|t| {
                let mut bands = Vec::with_capacity(t.n_vars() * idx.len());
                for var in 0..t.n_vars() {
                    bands.extend(idx.iter().map(|&i| t.value(i, var)));
                }
                RunReduce {
                    bands,
                    peak: t.max_of(0).1,
                    busts: count_busts(&t.column(0), bust_level),
                    labels: t.labels().to_vec(),
                }
            });
            (run, reduced)
        })
        .collect();
    outcomes.sort_by_key(|(run, _)| *run);

    let mut reduced: Vec<RunReduce> = Vec::with_capacity(runs);
    let mut failures: Vec<(usize, String)> = Vec::new();
    let mut first_error: Option<Error> = None;
    for (run, outcome) in outcomes {
        match outcome {
            Ok(r) => reduced.push(r),
            Err(e) => {
                failures.push((run, e.to_string()));
                first_error.get_or_insert(e);
            }
        }
    }
    if reduced.is_empty() {
        return Err(first_error.expect("runs >= 1, so either a result or an error exists"));
    }

    let n_vars = reduced[0].labels.len();
    let band_times: Vec<f64> = idx.iter().map(|&i| grid.times()[i]).collect();
    let mut mean = vec![vec![0.0; idx.len()]; n_vars];
    let mut p10 = vec![vec![0.0; idx.len()]; n_vars];
    let mut p50 = vec![vec![0.0; idx.len()]; n_vars];
    let mut p90 = vec![vec![0.0; idx.len()]; n_vars];
    let mut pool = vec![0.0; reduced.len()];
    for var in 0..n_vars {
        for b in 0..idx.len() {
            for (r, rec) in reduced.iter().enumerate() {
                pool[r] = rec.bands[var * idx.len() + b];
            }
            mean[var][b] = pool.iter().sum::<f64>() / pool.len() as f64;
            pool.sort_by(|a, b| a.partial_cmp(b).unwrap());
            p10[var][b] = quantile_sorted(&pool, 0.10);
            p50[var][b] = quantile_sorted(&pool, 0.50);
            p90[var][b] = quantile_sorted(&pool, 0.90);
        }
    }

    Ok(EnsembleSummary {
        band_times,
        labels: reduced[0].labels.clone(),
        mean,
        p10,
        p50,
        p90,
        peak_values: reduced.iter().map(|r| r.peak).collect(),
        bust_counts: reduced.iter().map(|r| r.busts).collect(),
        runs_requested: runs,
        base_seed: n.seed,
        failures,
    })
}
