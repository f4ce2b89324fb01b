//! Steady states and their stability.
//!
//! The two- and three-variable models have a small set of closed-form
//! equilibrium families on the coordinate hyperplanes (the multiplicative
//! RHS structure pins at least one variable to zero); interior states with
//! `x > 0` are hunted numerically with grid-seeded Newton iteration.
//! Stability comes from the eigenvalues of a central finite-difference
//! Jacobian; no hand-derived matrices, so one code path covers every model.

use nalgebra::{Complex, DMatrix, DVector, Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::models;
use crate::params::{ThreeVarParams, TwoVarParams};
use crate::state::State3;

/// Which closed-form family (or numeric search) produced an equilibrium.
///
/// Two-variable families: `Origin`, `AxisY` (the rest state `(0, y0)`),
/// `AxisXPair` (roots on the x-axis), `Interior`. Three-variable `x = 0`
/// families: `X2Family` (z = 0), `X34Family` (y and z coupled), `X56Family`
/// (y = 0). `Numeric` marks Newton finds with `x > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Origin,
    AxisY,
    AxisXPair,
    Interior,
    X2Family,
    X34Family,
    X56Family,
    Numeric,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Family::Origin => "origin",
            Family::AxisY => "axis_y",
            Family::AxisXPair => "axis_x_pair",
            Family::Interior => "interior",
            Family::X2Family => "x2_family",
            Family::X34Family => "x34_family",
            Family::X56Family => "x56_family",
            Family::Numeric => "numeric",
        };
        f.write_str(s)
    }
}

/// Sign pattern of the Jacobian eigenvalues' real parts, with a +-1e-8
/// dead band around zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    /// All real parts below -1e-8.
    Stable,
    /// All real parts above +1e-8.
    Unstable,
    /// Mixed signs.
    Saddle,
    /// At least one real part within 1e-8 of zero.
    Marginal,
}

impl std::fmt::Display for Stability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
            Stability::Saddle => "saddle",
            Stability::Marginal => "marginal",
        };
        f.write_str(s)
    }
}

/// One steady state: its coordinates, originating family, stability class, and the
/// Jacobian eigenvalues (sorted by descending real part).
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumReport {
    pub point: Vec<f64>,
    pub family: Family,
    pub stability: Stability,
    pub eigenvalues: Vec<Complex<f64>>,
}

impl EquilibriumReport {
    /// Largest eigenvalue real part (the growth rate of the most unstable
    /// direction).
    pub fn re_lambda_max(&self) -> f64 {
        self.eigenvalues.first().map(|e| e.re).unwrap_or(f64::NAN)
    }
}

/// Result of an equilibrium enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriaScan {
    pub reports: Vec<EquilibriumReport>,
    /// Closed-form quadratics whose root pair was complex (no real
    /// equilibrium to report).
    pub omitted_complex_pairs: usize,
    /// Newton seeds that failed to converge anywhere.
    pub newton_failures: usize,
}

/// Residual bound every *reported* equilibrium satisfies.
const RESIDUAL_ACCEPT: f64 = 1e-10;
/// Residual bound for points handed to the classifier.
const RESIDUAL_CLASSIFY: f64 = 1e-8;
/// Dead band on eigenvalue real parts.
const EIG_TOL: f64 = 1e-8;
/// Newton finds closer than this are considered the same point.
const MERGE_RADIUS: f64 = 1e-6;

/// Central finite-difference Jacobian with per-column step
/// `h_j = 1e-6 * max(1, |x_j|)`.
pub fn jacobian_fd<F>(rhs: F, x: &[f64]) -> DMatrix<f64>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let n = x.len();
    let mut j = DMatrix::zeros(n, n);
    let mut xp = x.to_vec();
    let mut xm = x.to_vec();
    for col in 0..n {
        let h = 1e-6 * x[col].abs().max(1.0);
        xp[col] = x[col] + h;
        xm[col] = x[col] - h;
        let fp = rhs(&xp);
        let fm = rhs(&xm);
        for row in 0..n {
            j[(row, col)] = (fp[row] - fm[row]) / (2.0 * h);
        }
        xp[col] = x[col];
        xm[col] = x[col];
    }
    j
}

fn residual_norm<F>(rhs: &F, x: &[f64]) -> f64
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    rhs(x).iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Stability class and sorted eigenvalues of the linearization at `point`.
/// Fails with [`Error::ResidualTooLarge`] when `point` is not an
/// equilibrium of `rhs` to within 1e-8.
pub fn classify_equilibrium<F>(rhs: F, point: &[f64]) -> Result<(Stability, Vec<Complex<f64>>)>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let residual = residual_norm(&rhs, point);
    if !(residual < RESIDUAL_CLASSIFY) {
        return Err(Error::ResidualTooLarge {
            residual,
            limit: RESIDUAL_CLASSIFY,
        });
    }
    let j = jacobian_fd(&rhs, point);
    let eig: DVector<Complex<f64>> = j.complex_eigenvalues();
    let mut eigenvalues: Vec<Complex<f64>> = eig.iter().copied().collect();
    eigenvalues.sort_by(|a, b| {
        b.re.partial_cmp(&a.re)
            .unwrap()
            .then(b.im.partial_cmp(&a.im).unwrap())
    });
    let any_marginal = eigenvalues.iter().any(|e| e.re.abs() <= EIG_TOL);
    let all_neg = eigenvalues.iter().all(|e| e.re < -EIG_TOL);
    let all_pos = eigenvalues.iter().all(|e| e.re > EIG_TOL);
    let stability = if any_marginal {
        Stability::Marginal
    } else if all_neg {
        Stability::Stable
    } else if all_pos {
        Stability::Unstable
    } else {
        Stability::Saddle
    };
    Ok((stability, eigenvalues))
}

/// A few Newton steps to push a closed-form point's residual down to
/// machine level when parameter arithmetic left it slightly off.
fn polish<F>(rhs: &F, point: &mut [f64])
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    for _ in 0..5 {
        if residual_norm(rhs, point) < 1e-13 {
            return;
        }
        let n = point.len();
        let j = jacobian_fd(rhs, point);
        let f = DVector::from_vec(rhs(point));
        if let Some(delta) = j.lu().solve(&(-f)) {
            for i in 0..n {
                point[i] += delta[i];
            }
        } else {
            return;
        }
    }
}

fn report<F>(rhs: &F, mut point: Vec<f64>, family: Family) -> Option<EquilibriumReport>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    polish(rhs, &mut point);
    if residual_norm(rhs, &point) >= RESIDUAL_ACCEPT {
        return None;
    }
    let (stability, eigenvalues) = classify_equilibrium(rhs, &point).ok()?;
    Some(EquilibriumReport {
        point,
        family,
        stability,
        eigenvalues,
    })
}

/// Real roots of `x^2 + px + q`, or `None` when the pair is complex.
fn quadratic_roots(p: f64, q: f64) -> Option<(f64, f64)> {
    let disc = p * p - 4.0 * q;
    if disc < 0.0 {
        return None;
    }
    let s = disc.sqrt();
    Some(((-p - s) / 2.0, (-p + s) / 2.0))
}

/// All closed-form equilibria of the two-variable model: the origin, the
/// rest state `(0, y0)`, the x-axis root pair of
/// `(1-x)(x-alpha) - beta1*y0 = 0`, and the intersections of the cubic
/// nullcline with the line `y = y0 + beta2*x`. Complex root pairs are
/// omitted and counted. Coinciding family members are reported once per
/// family, not deduplicated across families.
pub fn equilibria_two_var(p: &TwoVarParams) -> Result<EquilibriaScan> {
    p.validate()?;
    let rhs = |s: &[f64]| models::rhs_two_var([s[0], s[1]], p).to_vec();
    let mut reports = Vec::new();
    let mut omitted = 0;

    if let Some(r) = report(&rhs, vec![0.0, 0.0], Family::Origin) {
        reports.push(r);
    }
    if let Some(r) = report(&rhs, vec![0.0, p.y0], Family::AxisY) {
        reports.push(r);
    }
    // x-axis: (1-x)(x-alpha) + beta1(0-y0) = 0
    // <=> x^2 - (1+alpha)x + (alpha + beta1*y0) = 0.
    match quadratic_roots(-(1.0 + p.alpha), p.alpha + p.beta1 * p.y0) {
        Some((x_lo, x_hi)) => {
            for x in [x_lo, x_hi] {
                if let Some(r) = report(&rhs, vec![x, 0.0], Family::AxisXPair) {
                    reports.push(r);
                }
            }
        }
        None => omitted += 1,
    }
    // Interior: substitute y = y0 + beta2*x into the x bracket:
    // x^2 - (1 + alpha + beta1*beta2)x + alpha = 0.
    match quadratic_roots(-(1.0 + p.alpha + p.beta1 * p.beta2), p.alpha) {
        Some((x_lo, x_hi)) => {
            for x in [x_lo, x_hi] {
                let y = p.y0 + p.beta2 * x;
                if let Some(r) = report(&rhs, vec![x, y], Family::Interior) {
                    reports.push(r);
                }
            }
        }
        None => omitted += 1,
    }
    Ok(EquilibriaScan {
        reports,
        omitted_complex_pairs: omitted,
        newton_failures: 0,
    })
}

fn newton3(rhs: impl Fn(State3) -> State3, mut x: State3) -> Option<State3> {
    for _ in 0..50 {
        let fx = rhs(x);
        let mut j = Matrix3::zeros();
        for col in 0..3 {
            let h = 1e-6 * x[col].abs().max(1.0);
            let mut xp = x;
            let mut xm = x;
            xp[col] += h;
            xm[col] -= h;
            let fp = rhs(xp);
            let fm = rhs(xm);
            for row in 0..3 {
                j[(row, col)] = (fp[row] - fm[row]) / (2.0 * h);
            }
        }
        let delta = j.lu().solve(&Vector3::new(-fx[0], -fx[1], -fx[2]))?;
        for i in 0..3 {
            x[i] += delta[i];
        }
        if x.iter().any(|v| !v.is_finite() || v.abs() > 1e6) {
            return None;
        }
        if delta.amax() < 1e-12 {
            return Some(x);
        }
    }
    None
}

/// All equilibria of the three-variable model.
///
/// Closed forms cover the `x = 0` hyperplane exhaustively:
/// * the origin,
/// * `(0, y0 - beta23*z0, 0)`,
/// * the pair `(0, y0, z0)` and
///   `(0, y0 + beta23*(zc - z0), zc)` with `zc = alpha2 + beta23*beta32`,
/// * `(0, 0, z)` for the real roots of
///   `z^2 - (z0+alpha2)z + (z0*alpha2 + beta32*y0) = 0`.
///
/// States with `x > 0` are found by Newton iteration seeded on a 20x20x20
/// grid over `[0, 1.2]^3`; converged finds are kept when `x > 1e-6`,
/// deduplicated within 1e-6, and must pass the same residual bound as the
/// closed forms. Coinciding closed-form members (degenerate parameter sets)
/// are reported once per family.
pub fn equilibria_three_var(p: &ThreeVarParams) -> Result<EquilibriaScan> {
    p.validate()?;
    let rhs = |s: &[f64]| models::rhs_three_var([s[0], s[1], s[2]], p).to_vec();
    let mut reports = Vec::new();
    let mut omitted = 0;

    if let Some(r) = report(&rhs, vec![0.0, 0.0, 0.0], Family::Origin) {
        reports.push(r);
    }
    if let Some(r) = report(&rhs, vec![0.0, p.y0 - p.beta23 * p.z0, 0.0], Family::X2Family) {
        reports.push(r);
    }
    let zc = p.alpha2 + p.beta23 * p.beta32;
    for (y, z) in [
        (p.y0, p.z0),
        (p.y0 + p.beta23 * (zc - p.z0), zc),
    ] {
        if let Some(r) = report(&rhs, vec![0.0, y, z], Family::X34Family) {
            reports.push(r);
        }
    }
    match quadratic_roots(
        -(p.z0 + p.alpha2),
        p.z0 * p.alpha2 + p.beta32 * p.y0,
    ) {
        Some((z_lo, z_hi)) => {
            for z in [z_lo, z_hi] {
                if let Some(r) = report(&rhs, vec![0.0, 0.0, z], Family::X56Family) {
                    reports.push(r);
                }
            }
        }
        None => omitted += 1,
    }

    // Numeric hunt for x > 0 states.
    let rhs3 = |s: State3| models::rhs_three_var(s, p);
    let mut failures = 0;
    let mut numeric: Vec<State3> = Vec::new();
    let n_seed = 20;
    for i in 0..n_seed {
        for j in 0..n_seed {
            for k in 0..n_seed {
                let cell = |idx: usize| (idx as f64 + 0.5) * 1.2 / n_seed as f64;
                match newton3(rhs3, [cell(i), cell(j), cell(k)]) {
                    Some(x) => {
                        if x[0] > 1e-6
                            && residual_norm(&rhs, &x) < RESIDUAL_ACCEPT
                            && !numeric
                                .iter()
                                .any(|f| crate::state::sup_dist(f, &x) < MERGE_RADIUS)
                            && !reports
                                .iter()
                                .any(|r| crate::state::sup_dist(&r.point, &x) < MERGE_RADIUS)
                        {
                            numeric.push(x);
                        }
                    }
                    None => failures += 1,
                }
            }
        }
    }
    numeric.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap());
    for x in numeric {
        if let Some(r) = report(&rhs, x.to_vec(), Family::Numeric) {
            reports.push(r);
        }
    }

    Ok(EquilibriaScan {
        reports,
        omitted_complex_pairs: omitted,
        newton_failures: failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TimeGrid;
    use crate::ode::integrate_three_var;
    use crate::state::{euclid_dist, sup_dist};

    fn two_var_demo() -> TwoVarParams {
        TwoVarParams {
            alpha: 0.02,
            y0: 0.05,
            beta1: -1.0 / 3.0,
            beta2: 2.5,
            gamma: 0.1,
        }
    }

    fn three_var_demo() -> ThreeVarParams {
        ThreeVarParams {
            alpha1: 0.03,
            alpha2: 0.11,
            y0: 0.075,
            z0: 0.22,
            beta12: -6.0,
            beta13: 0.6,
            beta21: 0.2,
            beta23: 0.1,
            beta31: 0.5,
            beta32: 0.0,
            gamma1: 1.0,
            gamma2: 0.7,
            gamma3: 0.2,
        }
    }

    fn find<'a>(
        scan: &'a EquilibriaScan,
        target: &[f64],
        tol: f64,
    ) -> Option<&'a EquilibriumReport> {
        scan.reports
            .iter()
            .find(|r| r.point.len() == target.len() && sup_dist(&r.point, target) < tol)
    }

    #[test]
    fn two_var_demo_set() {
        let scan = equilibria_two_var(&two_var_demo()).unwrap();
        let origin = find(&scan, &[0.0, 0.0], 1e-12).expect("origin");
        assert_eq!(origin.stability, Stability::Saddle);
        let rest = find(&scan, &[0.0, 0.05], 1e-12).expect("rest state");
        assert_eq!(rest.stability, Stability::Stable);
        // x-axis pair from the quadratic x^2 - 1.02x + 1/300.
        assert!(find(&scan, &[0.00327851173779233, 0.0], 1e-11).is_some());
        assert!(find(&scan, &[1.0167214882622075, 0.0], 1e-11).is_some());
        // No interior intersections for this parameter set: the quadratic
        // x^2 - 0.186667x + 0.02 has negative discriminant.
        assert!(scan.reports.iter().all(|r| r.family != Family::Interior));
        assert_eq!(scan.omitted_complex_pairs, 1);
        assert_eq!(scan.reports.len(), 4);
    }

    #[test]
    fn every_reported_point_has_tiny_residual() {
        let p = three_var_demo();
        let scan = equilibria_three_var(&p).unwrap();
        for r in &scan.reports {
            let f = models::rhs_three_var([r.point[0], r.point[1], r.point[2]], &p);
            let norm = f.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!(norm < 1e-10, "residual {norm} at {:?}", r.point);
        }
    }

    #[test]
    fn three_var_demo_x0_states_and_stability() {
        let scan = equilibria_three_var(&three_var_demo()).unwrap();
        let expected: [( [f64; 3], bool ); 6] = [
            ([0.0, 0.0, 0.0], false),
            ([0.0, 0.053, 0.0], true),
            ([0.0, 0.064, 0.11], false),
            ([0.0, 0.075, 0.22], true),
            ([0.0, 0.0, 0.22], false),
            ([0.0, 0.0, 0.11], false),
        ];
        for (point, stable) in expected {
            let r = find(&scan, &point, 1e-9).unwrap_or_else(|| panic!("missing {point:?}"));
            assert_eq!(
                r.stability == Stability::Stable,
                stable,
                "stability of {point:?} is {:?}",
                r.stability
            );
        }
        // Exactly two stable states overall.
        let stable_count = scan
            .reports
            .iter()
            .filter(|r| r.stability == Stability::Stable)
            .count();
        assert_eq!(stable_count, 2);
        assert!(scan.reports.len() >= 6);
        // Whatever the Newton hunt finds with x > 0 must not be stable.
        for r in scan.reports.iter().filter(|r| r.family == Family::Numeric) {
            assert!(r.point[0] > 1e-6);
            assert_ne!(r.stability, Stability::Stable, "numeric find {:?}", r.point);
        }
    }

    #[test]
    fn degenerate_z0_collapses_families() {
        // With z0 = 0 the x2 state and the first x34 member coincide at
        // (0, y0, 0); both family entries are still reported.
        let p = ThreeVarParams {
            z0: 0.0,
            ..three_var_demo()
        };
        let scan = equilibria_three_var(&p).unwrap();
        let coinciding = scan
            .reports
            .iter()
            .filter(|r| sup_dist(&r.point, &[0.0, 0.075, 0.0]) < 1e-9)
            .count();
        assert!(coinciding >= 2, "expected duplicated rest state");
        // The second x34 branch moves to (0, 0.086, 0.11).
        assert!(find(&scan, &[0.0, 0.086, 0.11], 1e-9).is_some());
    }

    #[test]
    fn classifier_rejects_non_equilibria() {
        let p = two_var_demo();
        let rhs = |s: &[f64]| models::rhs_two_var([s[0], s[1]], &p).to_vec();
        let err = classify_equilibrium(rhs, &[0.5, 0.5]).unwrap_err();
        assert!(matches!(err, Error::ResidualTooLarge { .. }));
    }

    #[test]
    fn rest_state_jacobian_matches_triangular_eigenvalue() {
        // At (0, y0) the Jacobian is triangular; one eigenvalue is exactly
        // -gamma*y0 and the finite-difference version must hit it to 1e-5.
        let p = two_var_demo();
        let rhs = |s: &[f64]| models::rhs_two_var([s[0], s[1]], &p).to_vec();
        let (_, eigs) = classify_equilibrium(rhs, &[0.0, p.y0]).unwrap();
        let target = -p.gamma * p.y0;
        let hit = eigs
            .iter()
            .map(|e| (e.re - target).abs() + e.im.abs())
            .fold(f64::INFINITY, f64::min);
        assert!(hit < 1e-5, "closest eigenvalue misses -gamma*y0 by {hit}");
        // The other eigenvalue is -alpha (from the x equation).
        let hit2 = eigs
            .iter()
            .map(|e| (e.re - (-p.alpha)).abs() + e.im.abs())
            .fold(f64::INFINITY, f64::min);
        assert!(hit2 < 1e-5);
    }

    #[test]
    fn newton_refinement_barely_moves_closed_forms() {
        let p = three_var_demo();
        let rhs3 = |s: State3| models::rhs_three_var(s, &p);
        for point in [
            [0.0, 0.053, 0.0],
            [0.0, 0.075, 0.22],
            [0.0, 0.064, 0.11],
        ] {
            let refined = newton3(rhs3, point).expect("newton from closed form");
            assert!(
                sup_dist(&refined, &point) < 1e-9,
                "moved {:?} -> {refined:?}",
                point
            );
        }
    }

    #[test]
    fn stable_states_attract_and_saddles_repel() {
        let p = three_var_demo();
        // Perturb a stable state by 1e-4: the trajectory stays within 1e-2.
        let grid = TimeGrid::new(0.0, 500.0, 1e-3).unwrap();
        let stable = [0.0, 0.075, 0.22];
        let start = [1e-4, 0.075 + 1e-4, 0.22 + 1e-4];
        let traj = integrate_three_var(&p, start, &grid).unwrap();
        let mut worst = 0.0f64;
        for i in 0..traj.len() {
            worst = worst.max(euclid_dist(traj.row(i), &stable));
        }
        assert!(worst < 1e-2, "stable state let go: {worst}");

        // Kick a saddle 1e-3 along its unstable direction (+x at
        // (0, 0, 0.22), where the x bracket is +0.42): the flow leaves a
        // 0.05-ball around it.
        let saddle = [0.0, 0.0, 0.22];
        let grid = TimeGrid::new(0.0, 200.0, 1e-3).unwrap();
        let traj = integrate_three_var(&p, [1e-3, 1e-12, 0.22], &grid).unwrap();
        let mut escaped = false;
        for i in 0..traj.len() {
            if euclid_dist(traj.row(i), &saddle) > 0.05 {
                escaped = true;
                break;
            }
        }
        assert!(escaped, "saddle held the trajectory");
    }

    #[test]
    fn rest_state_eigenvalues_are_triangular_exact() {
        // The Jacobian at (0, y0) is triangular for any coupling signs, so
        // its eigenvalues are -alpha and -gamma*y0 independent of beta1,
        // beta2; verify on a sign-flipped variant too.
        for p in [
            two_var_demo(),
            TwoVarParams {
                beta1: 1.0 / 3.0,
                beta2: -2.5,
                ..two_var_demo()
            },
        ] {
            let scan = equilibria_two_var(&p).unwrap();
            let rest = find(&scan, &[0.0, p.y0], 1e-12).expect("rest state");
            assert_eq!(rest.stability, Stability::Stable);
            let mut res: Vec<f64> = rest.eigenvalues.iter().map(|e| e.re).collect();
            res.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mut want = [-p.alpha, -p.gamma * p.y0];
            want.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (got, expect) in res.iter().zip(want) {
                assert!((got - expect).abs() < 1e-5);
            }
        }
    }
}
