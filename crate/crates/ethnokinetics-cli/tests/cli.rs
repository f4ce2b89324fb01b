//! End-to-end tests of the command-line interface: subcommand dispatch,
//! file emission, determinism, and the exit-code contract (0 success,
//! 1 runtime failure, 2 configuration failure).

use std::path::Path;
use std::process::{Command, Output};

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ethnokinetics"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn presets_lists_all_bundled_names() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["presets"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for name in ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7a", "fig7b", "fig8"] {
        assert!(text.contains(name), "missing {name} in:\n{text}");
    }
}

#[test]
fn simulate_preset_with_dt_override() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["simulate", "--preset", "fig2", "--dt", "0.1", "--out", "."]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("fig2.csv")).unwrap();
    assert!(csv.starts_with("t,x,y\n0,0.1,0.05\n"));
    assert_eq!(csv.lines().count(), 1002, "header + 1001 grid points");
    assert!(stdout(&out).contains("peaks at"));
}

#[test]
fn simulate_scenario_file_with_plot() {
    let dir = tempfile::tempdir().unwrap();
    let scn = "\
model = two_var
params.alpha = 0.02
params.y0 = 0.05
params.beta1 = -0.3333333333333333
params.beta2 = 2.5
params.gamma = 0.1
initial = 0.1 0.05
grid.tf = 2
grid.dt = 0.01
outputs = csv
";
    std::fs::write(dir.path().join("mini.scn"), scn).unwrap();
    let out = run_in(dir.path(), &["simulate", "--scenario", "mini.scn", "--plot", "--out", "runs"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(dir.path().join("runs/mini.csv").is_file());
    let svg = std::fs::read_to_string(dir.path().join("runs/mini.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn configuration_failures_exit_2() {
    let dir = tempfile::tempdir().unwrap();

    let bad = "model = two_var\nparams.alpha = 0.02\nparams.y0 = 0.05\n\
               params.beta1 = 1\nparams.beta2 = 1\nparams.gamma = -1\n\
               initial = 0.1 0.05\ngrid.tf = 1\n";
    std::fs::write(dir.path().join("bad.scn"), bad).unwrap();
    let out = run_in(dir.path(), &["simulate", "--scenario", "bad.scn"]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("gamma"));

    let out = run_in(dir.path(), &["simulate", "--preset", "fig99"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("fig4"), "lists available presets");

    let out = run_in(dir.path(), &["simulate"]);
    assert_eq!(out.status.code(), Some(2));

    // Model/subcommand mismatch.
    let out = run_in(dir.path(), &["sde", "--preset", "fig2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn runtime_failures_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    // A huge z-coupling makes every candidate base prism fail, which is a
    // runtime (construction) failure, not a configuration mistake.
    let scn = "\
model = three_var
params.alpha1 = 0.03
params.alpha2 = 0.11
params.y0 = 0.075
params.z0 = 0.22
params.beta12 = -6
params.beta13 = 2000000
params.beta21 = 0.2
params.beta23 = 0.1
params.beta31 = 0.5
params.beta32 = 0
params.gamma1 = 1
params.gamma2 = 0.7
params.gamma3 = 0.2
initial = 0.07 0.053 0.05
grid.tf = 1
";
    std::fs::write(dir.path().join("huge.scn"), scn).unwrap();
    let out = run_in(dir.path(), &["prism", "--scenario", "huge.scn"]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
    assert!(stderr(&out).contains("base prism"));
}

#[test]
fn equilibria_preset_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["equilibria", "--preset", "fig4", "--out", "."]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("fig4_equilibria.csv")).unwrap();
    assert!(csv.starts_with("x,y,z,family,stability,re_lambda_max\n"));
    assert!(csv.lines().count() >= 7, "six axis states plus header:\n{csv}");
    assert!(csv.contains("stable"));
}

#[test]
fn nullclines_plot_emits_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["nullclines", "--preset", "fig2", "--plot", "--out", "."]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("fig2_nullclines.csv")).unwrap();
    assert!(csv.starts_with("nullcline,polyline,x,y\n"));
    assert!(csv.lines().any(|l| l.starts_with("x,")));
    assert!(csv.lines().any(|l| l.starts_with("y,")));
    let svg = std::fs::read_to_string(dir.path().join("fig2_nullclines.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn ensemble_is_deterministic_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let scn = "\
model = sde
params.alpha1 = 0.03
params.alpha2 = 0.11
params.y0 = 0.075
params.z0 = 0.22
params.beta12 = -6
params.beta13 = 0.6
params.beta21 = 0.2
params.beta23 = 0.1
params.beta31 = 0.5
params.beta32 = 0
params.gamma1 = 1
params.gamma2 = 0.7
params.gamma3 = 0.2
initial = 0.07 0.053 0.05
grid.tf = 2
grid.dt = 0.01
noise.sigma1 = 0.1
noise.sigma2 = 0.1
noise.sigma3 = 0.1
noise.seed = 5
";
    std::fs::write(dir.path().join("ens.scn"), scn).unwrap();
    let base = ["ensemble", "--scenario", "ens.scn", "--runs", "6", "--out"];
    let out1 = run_in(dir.path(), &[&base[..], &["one", "--workers", "1"]].concat());
    assert!(out1.status.success(), "{}", stderr(&out1));
    assert!(stdout(&out1).contains("6 of 6 runs"));
    let out2 = run_in(dir.path(), &[&base[..], &["two", "--workers", "3"]].concat());
    assert!(out2.status.success(), "{}", stderr(&out2));
    let a = std::fs::read(dir.path().join("one/ens_ensemble.csv")).unwrap();
    let b = std::fs::read(dir.path().join("two/ens_ensemble.csv")).unwrap();
    assert_eq!(a, b, "merged statistics must not depend on worker count");
    assert!(a.starts_with(b"t,mean_x,p10_x,p50_x,p90_x,"));
}

#[test]
fn interact_reports_dominance() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["interact", "--preset", "fig8", "--dt", "0.5", "--seed", "3", "--out", "."],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("x1 peak") && text.contains("suppressed:"), "{text}");
    let csv = std::fs::read_to_string(dir.path().join("fig8.csv")).unwrap();
    assert!(csv.starts_with("t,x1,y1,z1,x2,y2,z2\n"));
}

#[test]
fn prism_builds_and_writes_the_ladder() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["prism", "--preset", "fig4", "--out", "."]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("all facet and slab checks pass"));
    let csv = std::fs::read_to_string(dir.path().join("fig4_prisms.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4, "header + three prisms:\n{csv}");
}

#[test]
fn bounds_tabulates_the_range_probabilities() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["bounds", "--paths", "400", "--dt", "0.02", "--out", "."],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("min k for tau = 1, sigma = 1: 2.765988"));
    let csv = std::fs::read_to_string(dir.path().join("bounds.csv")).unwrap();
    assert!(csv.starts_with("a,tau,empirical,bound\n"));
    assert_eq!(csv.lines().count(), 13, "header + 12 (a, tau) cells");
}
