//! Command-line front end: scenario-driven runs of the excitable population
//! models with CSV/SVG artifacts.
//!
//! Every analysis surface is one subcommand; scenarios come from a flat
//! config file (`--scenario`) or a bundled preset (`--preset`), with
//! `--dt`/`--seed` overrides. Exit codes: 0 success, 1 runtime failure
//! (integration blow-up, failed construction), 2 configuration failure
//! (parse or validation error, unknown preset).

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use ethnokinetics::brownian_bound::{brownian_range_bound, min_k_for_tau};
use ethnokinetics::equilibria::{equilibria_three_var, equilibria_two_var, EquilibriaScan};
use ethnokinetics::error::{Error, Result};
use ethnokinetics::interaction::{dominance_report, integrate_interacting};
use ethnokinetics::nullclines::{
    trace_nullclines_three_var_slice, trace_nullclines_two_var, NullclineVar, Polyline, Window,
};
use ethnokinetics::output;
use ethnokinetics::prism::build_prism_sequence;
use ethnokinetics::scenario::{
    integrate_scenario, load_scenario, run_scenario, ModelKind, ModelParams, OutputKind,
    Scenario, PRESET_NAMES,
};
use ethnokinetics::sde::{
    brownian_path, ensemble_stats, integrate_sde_direct, integrate_sde_log, sup_discrepancy,
};

#[derive(Parser)]
#[command(
    name = "ethnokinetics",
    version,
    about = "Excitable models of polity formation: simulation, stability analysis, and stochastic confinement checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario and write the requested outputs
    Simulate(RunArgs),
    /// Enumerate steady states and classify their stability
    Equilibria(RunArgs),
    /// Trace phase-plane nullclines
    Nullclines(RunArgs),
    /// Integrate the stochastic model with both schemes and compare them
    Sde(RunArgs),
    /// Monte Carlo ensemble statistics over seeded runs
    Ensemble(EnsembleArgs),
    /// Coupled two-population run with a dominance report
    Interact(RunArgs),
    /// Build and verify a confinement prism sequence
    Prism(PrismArgs),
    /// Brownian range bound: Monte Carlo versus the analytic tail
    Bounds(BoundsArgs),
    /// List the bundled presets
    Presets,
}

#[derive(Args)]
struct Source {
    /// Scenario config file
    #[arg(long, value_name = "FILE", conflicts_with = "preset")]
    scenario: Option<String>,
    /// Bundled preset name (see `presets`)
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
}

impl Source {
    /// Load the scenario and pick an output file stem.
    fn resolve(&self) -> Result<(Scenario, String)> {
        let spec = match (&self.scenario, &self.preset) {
            (Some(path), None) => path.clone(),
            (None, Some(name)) => name.clone(),
            _ => {
                return Err(Error::Validation {
                    field: "scenario".into(),
                    message: "provide exactly one of --scenario FILE or --preset NAME".into(),
                })
            }
        };
        let scenario = load_scenario(&spec)?;
        let stem = Path::new(&spec)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "scenario".into());
        Ok((scenario, stem))
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    source: Source,
    /// Output directory
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// Override the noise seed
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Override the grid step
    #[arg(long, value_name = "X")]
    dt: Option<f64>,
    /// Also emit an SVG plot
    #[arg(long)]
    plot: bool,
}

impl RunArgs {
    fn resolve(&self) -> Result<(Scenario, String)> {
        let (mut s, stem) = self.source.resolve()?;
        if let Some(dt) = self.dt {
            s = s.with_dt(dt)?;
        }
        if let Some(seed) = self.seed {
            s = s.with_seed(seed);
        }
        if self.plot && !s.outputs.contains(&OutputKind::Svg) {
            s.outputs.push(OutputKind::Svg);
        }
        Ok((s, stem))
    }
}

#[derive(Args)]
struct EnsembleArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Number of Monte Carlo runs
    #[arg(long, default_value_t = 200)]
    runs: usize,
    /// Bust-counting threshold on x
    #[arg(long, value_name = "LEVEL", default_value_t = 0.3)]
    bust_level: f64,
    /// Worker threads (default: all cores)
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
}

#[derive(Args)]
struct PrismArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Log-growth step between consecutive prisms
    #[arg(long, default_value_t = 0.75)]
    k: f64,
    /// Number of prisms to build
    #[arg(long, default_value_t = 3)]
    prisms: usize,
}

#[derive(Args)]
struct BoundsArgs {
    /// Output directory
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// Monte Carlo paths per (a, tau) cell
    #[arg(long, default_value_t = 20_000)]
    paths: usize,
    /// Euler step for the sample paths
    #[arg(long, value_name = "X", default_value_t = 1e-3)]
    dt: f64,
    /// Base seed for the path ensemble
    #[arg(long, value_name = "N", default_value_t = 2026)]
    seed: u64,
    /// Worker threads (default: all cores)
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
}

fn set_workers(workers: Option<usize>) {
    if let Some(n) = workers {
        // Ignore the error if a pool already exists; the run stays correct,
        // only the thread count differs.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn cmd_simulate(args: &RunArgs) -> Result<()> {
    let (s, stem) = args.resolve()?;
    let written = run_scenario(&s, &args.out, &stem)?;
    let traj = integrate_scenario(&s)?;
    let (pt, pv) = traj.max_of(0);
    println!(
        "{}: {} peaks at {pv:.6} (t = {pt:.3}); final state {:?}",
        stem,
        traj.labels()[0],
        traj.final_state()
    );
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn scan_for(s: &Scenario) -> Result<EquilibriaScan> {
    match &s.params {
        ModelParams::TwoVar(p) => equilibria_two_var(p),
        ModelParams::ThreeVar(p) => equilibria_three_var(p),
        ModelParams::LotkaVolterra(_) => Err(Error::Validation {
            field: "model".into(),
            message: "equilibria analysis covers the excitable models only".into(),
        }),
    }
}

fn cmd_equilibria(args: &RunArgs) -> Result<()> {
    let (s, stem) = args.resolve()?;
    let scan = scan_for(&s)?;
    let path = args.out.join(format!("{stem}_equilibria.csv"));
    output::write_text(&path, &output::equilibria_csv(&scan))?;
    for r in &scan.reports {
        println!(
            "({}) {:?} -> {} [{}], max Re lambda = {:.6}",
            r.family,
            r.point,
            r.stability,
            r.eigenvalues.len(),
            r.re_lambda_max()
        );
    }
    println!(
        "{} equilibria ({} complex pairs omitted); wrote {}",
        scan.reports.len(),
        scan.omitted_complex_pairs,
        path.display()
    );
    Ok(())
}

fn trace_families(s: &Scenario, window: &Window) -> Result<Vec<(NullclineVar, Vec<Polyline>)>> {
    let (nx, ny) = (400, 400);
    match &s.params {
        ModelParams::TwoVar(p) => Ok(vec![
            (
                NullclineVar::X,
                trace_nullclines_two_var(p, NullclineVar::X, window, nx, ny)?,
            ),
            (
                NullclineVar::Y,
                trace_nullclines_two_var(p, NullclineVar::Y, window, nx, ny)?,
            ),
        ]),
        ModelParams::ThreeVar(p) => Ok(vec![
            (
                NullclineVar::X,
                trace_nullclines_three_var_slice(p, NullclineVar::X, p.z0, window, nx, ny)?,
            ),
            (
                NullclineVar::Y,
                trace_nullclines_three_var_slice(p, NullclineVar::Y, p.z0, window, nx, ny)?,
            ),
        ]),
        ModelParams::LotkaVolterra(_) => Err(Error::Validation {
            field: "model".into(),
            message: "nullcline tracing covers the excitable models only".into(),
        }),
    }
}

fn cmd_nullclines(args: &RunArgs) -> Result<()> {
    let (s, stem) = args.resolve()?;
    // Window covering the relevant phase-plane region of every bundled run.
    let window = Window::new(-0.1, 1.2, -0.1, 1.2)?;
    let sets = trace_families(&s, &window)?;
    let path = args.out.join(format!("{stem}_nullclines.csv"));
    output::write_text(&path, &output::nullclines_csv(&sets))?;
    println!("wrote {}", path.display());
    if args.plot {
        let svg = args.out.join(format!("{stem}_nullclines.svg"));
        output::write_text(
            &svg,
            &output::svg_phase_plane(&sets, &window, &format!("{stem} nullclines")),
        )?;
        println!("wrote {}", svg.display());
    }
    Ok(())
}

fn cmd_sde(args: &RunArgs) -> Result<()> {
    let (s, stem) = args.resolve()?;
    if s.model != ModelKind::Sde {
        return Err(Error::Validation {
            field: "model".into(),
            message: "the sde subcommand needs a scenario with model = sde".into(),
        });
    }
    let (p, n) = (
        s.params.three_var().expect("sde scenarios carry three-variable parameters"),
        s.noise.as_ref().expect("validated"),
    );
    let initial = [s.initial[0], s.initial[1], s.initial[2]];
    let path = brownian_path(&s.grid, 3, n.seed);
    let log = integrate_sde_log(p, n, initial, &s.grid, &path)?;
    let written = run_scenario(&s, &args.out, &stem)?;
    match integrate_sde_direct(p, n, initial, &s.grid, &path) {
        Ok(direct) => {
            let d = sup_discrepancy(&log, &direct, 0)?;
            println!("log vs direct scheme, sup discrepancy of x: {d:.6}");
        }
        Err(e) => println!("direct scheme failed ({e}); log-scheme output kept"),
    }
    let (pt, pv) = log.max_of(0);
    println!("x peaks at {pv:.6} (t = {pt:.3}), seed {}", n.seed);
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn cmd_ensemble(args: &EnsembleArgs) -> Result<()> {
    set_workers(args.workers);
    let (s, stem) = args.run.resolve()?;
    if s.model != ModelKind::Sde {
        return Err(Error::Validation {
            field: "model".into(),
            message: "the ensemble subcommand needs a scenario with model = sde".into(),
        });
    }
    let p = s.params.three_var().expect("sde scenarios carry three-variable parameters");
    let n = s.noise.as_ref().expect("validated");
    let initial = [s.initial[0], s.initial[1], s.initial[2]];
    let summary = ensemble_stats(p, n, initial, &s.grid, args.runs, args.bust_level)?;
    let path = args.run.out.join(format!("{stem}_ensemble.csv"));
    output::write_text(&path, &output::ensemble_csv(&summary))?;
    println!(
        "{} of {} runs completed (base seed {})",
        summary.runs_completed(),
        summary.runs_requested,
        summary.base_seed
    );
    println!(
        "busts >= 2 (level {}): fraction {:.4}",
        args.bust_level,
        summary.fraction_with_busts(2)
    );
    println!(
        "x peak: median {:.4}, mean {:.4}, spread {:.4}",
        summary.median_peak(),
        summary.mean_peak(),
        summary.peak_spread()
    );
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_interact(args: &RunArgs) -> Result<()> {
    let (s, stem) = args.resolve()?;
    if s.model != ModelKind::Interaction {
        return Err(Error::Validation {
            field: "model".into(),
            message: "the interact subcommand needs a scenario with model = interaction".into(),
        });
    }
    let p = s.params.three_var().expect("interaction scenarios carry three-variable parameters");
    let n = s.noise.as_ref().expect("validated");
    let ispec = s.interaction.as_ref().expect("validated");
    let initial = [s.initial[0], s.initial[1], s.initial[2]];
    let path = brownian_path(&s.grid, 6, n.seed);
    let dual = integrate_interacting(p, n, ispec, initial, &s.grid, &path)?;
    let report = dominance_report(&dual, 1e-3);
    let written = run_scenario(&s, &args.out, &stem)?;
    println!(
        "x1 peak {:.6}, x2 peak {:.6}, ratio {:.4}",
        report.peak1, report.peak2, report.peak_ratio
    );
    println!(
        "suppressed: {} (margin {:.4})",
        report.suppressed, report.margin
    );
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn cmd_prism(args: &PrismArgs) -> Result<()> {
    let (s, stem) = args.run.resolve()?;
    let p = s.params.three_var().ok_or_else(|| Error::Validation {
        field: "model".into(),
        message: "prism construction needs three-variable parameters".into(),
    })?;
    let initial = [s.initial[0], s.initial[1], s.initial[2]];
    let seq = build_prism_sequence(p, args.k, args.prisms, initial)?;
    let mut csv = String::from("index,a,b,c\n");
    for (i, prism) in seq.prisms.iter().enumerate() {
        println!(
            "prism {i}: a = {:.6}, b = {:.6}, c = {:.6}",
            prism.a, prism.b, prism.c
        );
        csv.push_str(&format!(
            "{i},{},{},{}\n",
            output::format_float(prism.a),
            output::format_float(prism.b),
            output::format_float(prism.c)
        ));
    }
    let path = args.run.out.join(format!("{stem}_prisms.csv"));
    output::write_text(&path, &csv)?;
    println!(
        "all facet and slab checks pass (k = {}, growth = {:.6})",
        seq.k, seq.growth
    );
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_bounds(args: &BoundsArgs) -> Result<()> {
    set_workers(args.workers);
    let mut csv = String::from("a,tau,empirical,bound\n");
    println!("range probability P(sup |W| >= a on [0, tau]), {} paths each:", args.paths);
    for &a in &[1.0, 1.5, 2.0, 3.0] {
        for &tau in &[0.5, 1.0, 2.0] {
            let (emp, bound) = brownian_range_bound(a, tau, args.paths, args.seed, args.dt)?;
            println!("  a = {a:<4} tau = {tau:<4} empirical {emp:.4}  bound {bound:.4}");
            csv.push_str(&format!(
                "{a},{tau},{},{}\n",
                output::format_float(emp),
                output::format_float(bound)
            ));
        }
    }
    let k = min_k_for_tau(1.0, 1.0)?;
    println!("min k for tau = 1, sigma = 1: {k:.6}");
    let path = args.out.join("bounds.csv");
    output::write_text(&path, &csv)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_presets() -> Result<()> {
    let notes = [
        ("fig2", "planar excitable spike (x up to ~0.93)"),
        ("fig3", "planar variant where y collapses during the excursion"),
        ("fig4", "reference three-variable excitable run"),
        ("fig5", "z0 = 0 variant, excursion tops out near x = 0.2"),
        ("fig6", "alternative couplings, excursion near x = 0.64"),
        ("fig7a", "stochastic run, sigma = 0.05"),
        ("fig7b", "stochastic run, sigma = 0.1"),
        ("fig8", "two coupled populations, birth lag 30, communication lag 5"),
    ];
    debug_assert_eq!(notes.len(), PRESET_NAMES.len());
    for (name, note) in notes {
        println!("{name:<6} {note}");
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Equilibria(a) => cmd_equilibria(a),
        Command::Nullclines(a) => cmd_nullclines(a),
        Command::Sde(a) => cmd_sde(a),
        Command::Ensemble(a) => cmd_ensemble(a),
        Command::Interact(a) => cmd_interact(a),
        Command::Prism(a) => cmd_prism(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Presets => cmd_presets(),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
