//! Confinement boxes ("prisms") for the three-variable model.
//!
//! A prism is the box `(0,a] x (0,b] x (0,c]`. On its three outer facets the
//! corresponding square bracket of the model must be negative — then the
//! deterministic flow points inward and no trajectory can leave. A geometric
//! sequence of such prisms (growth factor `e^k` per step) is the scaffolding
//! for the almost-sure confinement argument in the stochastic case; this
//! module builds the sequence numerically and verifies every facet and
//! inter-prism slab by dense sampling.
//!
//! The facet conditions quantify over all `y > 0` (respectively all free
//! coordinates); with the standing sign assumptions `β₁₂ ≤ 0`, `β₃₂ ≤ 0`
//! the brackets are maximal in the limit `y → 0⁺`, so the scans substitute
//! `y = 0` instead of sampling an unbounded coordinate.

use std::fmt;

use crate::error::{Error, Result};
use crate::models::{bracket_x, bracket_y, bracket_z};
use crate::params::ThreeVarParams;
use crate::state::State3;

/// Upper limit of the base-size scan; beyond it the search reports
/// [`Error::NoValidBase`].
const BASE_SCAN_LIMIT: f64 = 1e6;
/// Multiplicative step of the base-size scan.
const BASE_SCAN_FACTOR: f64 = 1.05;
/// Sample count for the 1-D curve scans during the base search.
const BASE_SCAN_SAMPLES: usize = 1000;
/// Relative margin by which strict inequalities are over-satisfied.
const STRICT_MARGIN: f64 = 1e-6;

/// The box `(0,a] x (0,b] x (0,c]` with the standing assumption
/// `a, b, c > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prism {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Prism {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        for (v, name) in [(a, "a"), (b, "b"), (c, "c")] {
            if !(v > 1.0) || !v.is_finite() {
                return Err(Error::InvalidParam {
                    field: "prism",
                    message: format!("{name} must be finite and > 1, got {v}"),
                });
            }
        }
        Ok(Prism { a, b, c })
    }

    /// Strict interior containment.
    pub fn contains(&self, s: State3) -> bool {
        s[0] > 0.0 && s[0] < self.a && s[1] > 0.0 && s[1] < self.b && s[2] > 0.0 && s[2] < self.c
    }
}

impl fmt::Display for Prism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(0,{}]x(0,{}]x(0,{}]", self.a, self.b, self.c)
    }
}

/// Which outer facet of the prism a verdict refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Facet {
    X,
    Y,
    Z,
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Facet::X => "x=a",
            Facet::Y => "y=b",
            Facet::Z => "z=c",
        })
    }
}

/// Result of scanning one facet: the largest bracket value found and where.
/// `worst_point` coordinates of 0 stand for the open-boundary limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FacetVerdict {
    pub facet: Facet,
    pub worst_value: f64,
    pub worst_point: State3,
    pub pass: bool,
}

/// Facet verdicts for one prism.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftCheckReport {
    pub prism: Prism,
    pub facets: [FacetVerdict; 3],
}

impl DriftCheckReport {
    pub fn all_pass(&self) -> bool {
        self.facets.iter().all(|f| f.pass)
    }
}

fn check_signs(p: &ThreeVarParams) -> Result<()> {
    p.validate()?;
    p.validate_noise_signs()
}

/// Inclusive linear grid of `n >= 2` points over `[lo, hi]`.
fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    debug_assert!(n >= 2);
    let span = hi - lo;
    let last = n - 1;
    (0..n).map(move |i| {
        if i == last {
            hi
        } else {
            lo + span * (i as f64 / last as f64)
        }
    })
}

fn scan_worst(points: impl Iterator<Item = State3>, f: impl Fn(State3) -> f64) -> (f64, State3) {
    let mut worst = (f64::NEG_INFINITY, [0.0; 3]);
    for s in points {
        let v = f(s);
        if v > worst.0 {
            worst = (v, s);
        }
    }
    worst
}

/// Evaluate the inward-drift condition on each outer facet of `prism`,
/// sampling `samples_per_facet` points along every free coordinate (the
/// unbounded `y` directions are replaced by their analytic worst case
/// `y = 0`). A facet passes iff the sampled supremum is negative.
pub fn prism_drift_check(
    p: &ThreeVarParams,
    prism: &Prism,
    samples_per_facet: usize,
) -> Result<DriftCheckReport> {
    check_signs(p)?;
    let m = samples_per_facet.max(2);
    let (a, b, c) = (prism.a, prism.b, prism.c);

    // x = a: free z in (0, c], y at its sup (y -> 0+).
    let (wx, px) = scan_worst(
        linspace(0.0, c, m).map(|z| [a, 0.0, z]),
        |s| bracket_x(s, p),
    );
    // y = b: free x in (0, a] and z in (0, c].
    let (wy, py) = scan_worst(
        linspace(0.0, a, m).flat_map(|x| linspace(0.0, c, m).map(move |z| [x, b, z])),
        |s| bracket_y(s, p),
    );
    // z = c: free x in (0, a], y at its sup (y -> 0+).
    let (wz, pz) = scan_worst(
        linspace(0.0, a, m).map(|x| [x, 0.0, c]),
        |s| bracket_z(s, p),
    );

    let verdict = |facet, worst_value: f64, worst_point| FacetVerdict {
        facet,
        worst_value,
        worst_point,
        pass: worst_value < 0.0,
    };
    Ok(DriftCheckReport {
        prism: *prism,
        facets: [
            verdict(Facet::X, wx, px),
            verdict(Facet::Y, wy, py),
            verdict(Facet::Z, wz, pz),
        ],
    })
}

/// A geometric ladder of nested prisms: `a` and `c` grow by exactly
/// `growth = e^k` per step, `b` by at least that factor.
#[derive(Debug, Clone, PartialEq)]
pub struct PrismSequence {
    pub k: f64,
    /// `e^k`, computed once; the `a`/`c` recurrences multiply by this exact
    /// value.
    pub growth: f64,
    pub prisms: Vec<Prism>,
    pub origin_state: State3,
}

impl PrismSequence {
    /// Whether every consecutive `a` and `c` pair satisfies the recurrence
    /// bit-for-bit (`a_i == a_{i-1} * growth`) and every `b` ratio is at
    /// least `growth`.
    pub fn ratios_exact(&self) -> bool {
        self.prisms.windows(2).all(|w| {
            w[1].a == w[0].a * self.growth
                && w[1].c == w[0].c * self.growth
                && w[1].b >= w[0].b * self.growth
        })
    }
}

/// Worst sampled bracket values in the slab between two consecutive prisms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabVerdict {
    /// Index of the outer prism.
    pub index: usize,
    /// Worst (largest) bracket value per coordinate band: x-band, y-band,
    /// z-band.
    pub worst: [f64; 3],
}

impl SlabVerdict {
    pub fn pass(&self) -> bool {
        self.worst.iter().all(|w| *w < 0.0)
    }
}

/// Full verification of a sequence: facet check of prism 0 plus every
/// inter-prism slab, all by dense sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceReport {
    pub base: DriftCheckReport,
    pub slabs: Vec<SlabVerdict>,
}

impl SequenceReport {
    pub fn all_pass(&self) -> bool {
        self.base.all_pass() && self.slabs.iter().all(SlabVerdict::pass)
    }
}

/// Check the slab between `inner` and `outer`: whenever one coordinate sits
/// in its growth band (e.g. `x` in `[inner.a, outer.a]`) and the others are
/// anywhere inside `outer`, the matching bracket must be negative, so the
/// flow pushes the state back before it can reach the next prism boundary.
fn slab_worsts(
    p: &ThreeVarParams,
    inner: &Prism,
    outer: &Prism,
    samples: usize,
) -> [f64; 3] {
    let m = samples.max(2);
    // x-band: y at its sup (0), z free in (0, outer.c].
    let (wx, _) = scan_worst(
        linspace(inner.a, outer.a, m)
            .flat_map(|x| linspace(0.0, outer.c, m).map(move |z| [x, 0.0, z])),
        |s| bracket_x(s, p),
    );
    // y-band: x and z free inside the outer prism.
    let (wy, _) = scan_worst(
        linspace(inner.b, outer.b, m).flat_map(|y| {
            linspace(0.0, outer.a, m)
                .flat_map(move |x| linspace(0.0, outer.c, m).map(move |z| [x, y, z]))
        }),
        |s| bracket_y(s, p),
    );
    // z-band: y at its sup (0), x free in (0, outer.a].
    let (wz, _) = scan_worst(
        linspace(inner.c, outer.c, m)
            .flat_map(|z| linspace(0.0, outer.a, m).map(move |x| [x, 0.0, z])),
        |s| bracket_z(s, p),
    );
    [wx, wy, wz]
}

/// Verify an existing sequence at the given sampling resolution.
pub fn verify_sequence(
    p: &ThreeVarParams,
    seq: &PrismSequence,
    samples: usize,
) -> Result<SequenceReport> {
    check_signs(p)?;
    let base = prism_drift_check(p, &seq.prisms[0], samples)?;
    let slabs = seq
        .prisms
        .windows(2)
        .enumerate()
        .map(|(i, w)| SlabVerdict {
            index: i + 1,
            worst: slab_worsts(p, &w[0], &w[1], samples),
        })
        .collect();
    Ok(SequenceReport { base, slabs })
}

/// Whether `a0 = c0 = a` makes both reduced facet curves negative
/// (sampled), with the free coordinate extended to the *next* prism's
/// boundary `a * growth`. The extension matters: while `x` sits in the band
/// `[a_0, a_1]` the other coordinates may roam the whole of prism 1, so the
/// x-bracket must stay negative for `z` up to `c_1`, not just `c_0`. The
/// bracket parabolas are decreasing beyond their vertices (which lie below
/// 1), so negativity at the base band is inherited by every later slab.
fn base_size_ok(p: &ThreeVarParams, a: f64, growth: f64) -> bool {
    let reach = a * growth;
    let x_ok = linspace(0.0, reach, BASE_SCAN_SAMPLES).all(|z| bracket_x([a, 0.0, z], p) < 0.0);
    if !x_ok {
        return false;
    }
    linspace(0.0, reach, BASE_SCAN_SAMPLES).all(|x| bracket_z([x, 0.0, a], p) < 0.0)
}

fn b_feed(p: &ThreeVarParams, a_next: f64, c_next: f64) -> f64 {
    p.y0 + p.beta21 * a_next + p.beta23 * (c_next - p.z0)
}

/// Construct an `n`-prism sequence with log-growth `k` whose first prism
/// strictly contains `initial`.
///
/// The base size `a0 = c0` is the smallest value on a geometric scan
/// (factor 1.05 upward from `max(1, x(0), z(0)) + 1e-6`) whose x- and
/// z-facets confine; each `b_i` is the feed requirement
/// `y0 + β₂₁a_{i+1} + β₂₃(c_{i+1} − z0)` — over-satisfied by a relative
/// `1e-6` margin so the strict slab inequalities survive sampling — unless
/// the growth floor `b_{i-1}·e^k` is larger. The finished sequence is
/// re-verified facet by facet and slab by slab before it is returned.
pub fn build_prism_sequence(
    p: &ThreeVarParams,
    k: f64,
    n: usize,
    initial: State3,
) -> Result<PrismSequence> {
    check_signs(p)?;
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidParam {
            field: "k",
            message: format!("log-growth step must be positive, got {k}"),
        });
    }
    if n == 0 {
        return Err(Error::InvalidParam {
            field: "n",
            message: "need at least one prism".into(),
        });
    }
    if initial.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidParam {
            field: "initial",
            message: format!("all components must be strictly positive, got {initial:?}"),
        });
    }

    let growth = k.exp();
    let mut a0 = initial[0].max(initial[2]).max(1.0) + 1e-6;
    while !base_size_ok(p, a0, growth) {
        a0 *= BASE_SCAN_FACTOR;
        if a0 > BASE_SCAN_LIMIT {
            return Err(Error::NoValidBase {
                limit: BASE_SCAN_LIMIT,
            });
        }
    }
    // a_i = c_i throughout; one extra entry feeds b_{n-1}.
    let mut sizes = Vec::with_capacity(n + 1);
    sizes.push(a0);
    for i in 0..n {
        sizes.push(sizes[i] * growth);
    }

    let mut prisms: Vec<Prism> = Vec::with_capacity(n);
    for i in 0..n {
        let feed = b_feed(p, sizes[i + 1], sizes[i + 1]);
        let mut b = feed.max(initial[1]).max(1.0) * (1.0 + STRICT_MARGIN);
        if let Some(prev) = prisms.last() {
            b = b.max(prev.b * growth);
        }
        prisms.push(Prism::new(sizes[i], b, sizes[i])?);
    }

    let seq = PrismSequence {
        k,
        growth,
        prisms,
        origin_state: initial,
    };
    if !seq.prisms[0].contains(initial) {
        return Err(Error::PrismCheckFailed(format!(
            "base prism {} does not contain the initial state {initial:?}",
            seq.prisms[0]
        )));
    }
    let report = verify_sequence(p, &seq, 50)?;
    if !report.base.all_pass() {
        let bad = report.base.facets.iter().find(|f| !f.pass).unwrap();
        return Err(Error::PrismCheckFailed(format!(
            "facet {} of the base prism has bracket {} >= 0",
            bad.facet, bad.worst_value
        )));
    }
    if let Some(bad) = report.slabs.iter().find(|s| !s.pass()) {
        return Err(Error::PrismCheckFailed(format!(
            "slab {} has a non-negative bracket: worsts {:?}",
            bad.index, bad.worst
        )));
    }
    Ok(seq)
}
