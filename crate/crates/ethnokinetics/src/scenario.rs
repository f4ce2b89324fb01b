//! Scenario files and bundled presets.
//!
//! A scenario is a flat `key = value` text file with dotted section
//! prefixes — diff-friendly and schema-free:
//!
//! ```text
//! # three-variable excitable run
//! model = three_var
//! params.alpha1 = 0.03
//! params.alpha2 = 0.11
//! params.y0 = 0.075
//! params.z0 = 0.22
//! params.beta12 = -6
//! params.beta13 = 0.6
//! params.beta21 = 0.2
//! params.beta23 = 0.1
//! params.beta31 = 0.5
//! params.beta32 = 0
//! params.gamma1 = 1
//! params.gamma2 = 0.7
//! params.gamma3 = 0.2
//! initial = 0.07 0.053 0.05
//! grid.t0 = 0
//! grid.tf = 1200
//! grid.dt = 0.001
//! outputs = csv svg
//! ```
//!
//! `#` starts a comment, values are whitespace-trimmed, `initial` holds the
//! state as space-separated numbers. The other key groups are `noise.*`
//! (`sigma1..sigma3`, `seed`; required for the stochastic models),
//! `interaction.*` (`c1`, `c2`, `t1`, `t2`; required for the coupled
//! model), and `scale.*` (`years_per_unit`, `k`, `nonpassionary_factor`;
//! optional conversion to years and head counts). Serializing a scenario
//! and re-loading it yields an equal value.
//!
//! The bundled presets (`fig2` … `fig8`) carry the parameter sets of the
//! standard demonstration runs; [`load_scenario`] accepts either a file
//! path or a preset name.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::interaction::integrate_interacting;
use crate::noise::NoiseSpec;
use crate::ode::{integrate_lotka_volterra, integrate_three_var, integrate_two_var};
use crate::output;
use crate::params::{InteractionSpec, LVParams, RealScale, ThreeVarParams, TwoVarParams};
use crate::sde::{brownian_path, integrate_sde_log};
use crate::trajectory::{scale_to_real, Trajectory};

/// Which dynamical system a scenario runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    LotkaVolterra,
    TwoVar,
    ThreeVar,
    Sde,
    Interaction,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::LotkaVolterra => "lotka_volterra",
            ModelKind::TwoVar => "two_var",
            ModelKind::ThreeVar => "three_var",
            ModelKind::Sde => "sde",
            ModelKind::Interaction => "interaction",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "lotka_volterra" => ModelKind::LotkaVolterra,
            "two_var" => ModelKind::TwoVar,
            "three_var" => ModelKind::ThreeVar,
            "sde" => ModelKind::Sde,
            "interaction" => ModelKind::Interaction,
            _ => return None,
        })
    }
}

/// Parameter record matching the model kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelParams {
    LotkaVolterra(LVParams),
    TwoVar(TwoVarParams),
    ThreeVar(ThreeVarParams),
}

impl ModelParams {
    pub fn three_var(&self) -> Option<&ThreeVarParams> {
        match self {
            ModelParams::ThreeVar(p) => Some(p),
            _ => None,
        }
    }

    pub fn two_var(&self) -> Option<&TwoVarParams> {
        match self {
            ModelParams::TwoVar(p) => Some(p),
            _ => None,
        }
    }
}

/// One requested artifact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputKind {
    /// Trajectory in model units.
    Csv,
    /// Plot of the trajectory.
    Svg,
    /// Trajectory converted to years and head counts.
    RealCsv,
}

impl OutputKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OutputKind::Csv => "csv",
            OutputKind::Svg => "svg",
            OutputKind::RealCsv => "real_csv",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "csv" => OutputKind::Csv,
            "svg" => OutputKind::Svg,
            "real_csv" => OutputKind::RealCsv,
            _ => return None,
        })
    }
}

/// A fully validated run description.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub model: ModelKind,
    pub params: ModelParams,
    pub initial: Vec<f64>,
    pub grid: TimeGrid,
    pub noise: Option<NoiseSpec>,
    pub interaction: Option<InteractionSpec>,
    pub scale: Option<RealScale>,
    pub outputs: Vec<OutputKind>,
}

fn validation(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Validation {
        field: field.into(),
        message: message.into(),
    }
}

/// Build the run grid; the coupled model gets its gate times as knots so
/// they land exactly on grid points for any step size.
fn build_grid(
    t0: f64,
    tf: f64,
    dt: f64,
    interaction: Option<&InteractionSpec>,
) -> Result<TimeGrid> {
    match interaction {
        Some(spec) => TimeGrid::with_knots(t0, tf, dt, &[spec.t1, spec.communication_time()]),
        None => TimeGrid::new(t0, tf, dt),
    }
}

impl Scenario {
    /// Re-validate every invariant (parser and presets both end here).
    pub fn validate(&self) -> Result<()> {
        let arity = match self.model {
            ModelKind::LotkaVolterra | ModelKind::TwoVar => 2,
            _ => 3,
        };
        match (&self.model, &self.params) {
            (ModelKind::LotkaVolterra, ModelParams::LotkaVolterra(p)) => p.validate()?,
            (ModelKind::TwoVar, ModelParams::TwoVar(p)) => p.validate()?,
            (ModelKind::ThreeVar, ModelParams::ThreeVar(p)) => p.validate()?,
            (ModelKind::Sde | ModelKind::Interaction, ModelParams::ThreeVar(p)) => {
                p.validate()?;
                p.validate_noise_signs()?;
            }
            _ => {
                return Err(validation(
                    "params",
                    format!("parameter record does not match model {}", self.model.as_str()),
                ))
            }
        }
        if self.initial.len() != arity {
            return Err(validation(
                "initial",
                format!(
                    "model {} needs {arity} components, got {}",
                    self.model.as_str(),
                    self.initial.len()
                ),
            ));
        }
        if self.initial.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(validation(
                "initial",
                "all components must be positive and finite",
            ));
        }
        match self.model {
            ModelKind::Sde | ModelKind::Interaction => {
                let n = self
                    .noise
                    .as_ref()
                    .ok_or_else(|| validation("noise", "required for the stochastic models"))?;
                n.validate()?;
            }
            _ => {
                if self.noise.is_some() {
                    return Err(validation(
                        "noise",
                        format!("not used by model {}", self.model.as_str()),
                    ));
                }
            }
        }
        if self.model == ModelKind::Interaction {
            self.interaction
                .as_ref()
                .ok_or_else(|| validation("interaction", "required for the coupled model"))?
                .validate()?;
        } else if self.interaction.is_some() {
            return Err(validation(
                "interaction",
                format!("not used by model {}", self.model.as_str()),
            ));
        }
        if let Some(scale) = &self.scale {
            scale.validate()?;
        }
        if self.outputs.is_empty() {
            return Err(validation("outputs", "at least one output is required"));
        }
        Ok(())
    }

    /// Same scenario on a grid with a different step size.
    pub fn with_dt(&self, dt: f64) -> Result<Scenario> {
        let mut s = self.clone();
        s.grid = build_grid(
            self.grid.t0(),
            self.grid.tf(),
            dt,
            self.interaction.as_ref(),
        )?;
        Ok(s)
    }

    /// Same scenario with a different base seed (no-op for deterministic
    /// models).
    pub fn with_seed(&self, seed: u64) -> Scenario {
        let mut s = self.clone();
        if let Some(n) = &mut s.noise {
            n.seed = seed;
        }
        s
    }

    /// Serialize to the flat config format. Numbers use the shortest
    /// round-trip representation, so loading the output reproduces this
    /// scenario exactly.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "model = {}", self.model.as_str());
        match &self.params {
            ModelParams::LotkaVolterra(p) => {
                let _ = writeln!(out, "params.beta1 = {}", p.beta1);
                let _ = writeln!(out, "params.beta2 = {}", p.beta2);
                let _ = writeln!(out, "params.gamma = {}", p.gamma);
            }
            ModelParams::TwoVar(p) => {
                let _ = writeln!(out, "params.alpha = {}", p.alpha);
                let _ = writeln!(out, "params.y0 = {}", p.y0);
                let _ = writeln!(out, "params.beta1 = {}", p.beta1);
                let _ = writeln!(out, "params.beta2 = {}", p.beta2);
                let _ = writeln!(out, "params.gamma = {}", p.gamma);
            }
            ModelParams::ThreeVar(p) => {
                let _ = writeln!(out, "params.alpha1 = {}", p.alpha1);
                let _ = writeln!(out, "params.alpha2 = {}", p.alpha2);
                let _ = writeln!(out, "params.y0 = {}", p.y0);
                let _ = writeln!(out, "params.z0 = {}", p.z0);
                let _ = writeln!(out, "params.beta12 = {}", p.beta12);
                let _ = writeln!(out, "params.beta13 = {}", p.beta13);
                let _ = writeln!(out, "params.beta21 = {}", p.beta21);
                let _ = writeln!(out, "params.beta23 = {}", p.beta23);
                let _ = writeln!(out, "params.beta31 = {}", p.beta31);
                let _ = writeln!(out, "params.beta32 = {}", p.beta32);
                let _ = writeln!(out, "params.gamma1 = {}", p.gamma1);
                let _ = writeln!(out, "params.gamma2 = {}", p.gamma2);
                let _ = writeln!(out, "params.gamma3 = {}", p.gamma3);
            }
        }
        let initial: Vec<String> = self.initial.iter().map(|v| format!("{v}")).collect();
        let _ = writeln!(out, "initial = {}", initial.join(" "));
        let _ = writeln!(out, "grid.t0 = {}", self.grid.t0());
        let _ = writeln!(out, "grid.tf = {}", self.grid.tf());
        let _ = writeln!(out, "grid.dt = {}", self.grid.dt_requested());
        if let Some(n) = &self.noise {
            let s = n.sigmas();
            let _ = writeln!(out, "noise.sigma1 = {}", s[0]);
            let _ = writeln!(out, "noise.sigma2 = {}", s[1]);
            let _ = writeln!(out, "noise.sigma3 = {}", s[2]);
            let _ = writeln!(out, "noise.seed = {}", n.seed);
        }
        if let Some(i) = &self.interaction {
            let _ = writeln!(out, "interaction.c1 = {}", i.c1);
            let _ = writeln!(out, "interaction.c2 = {}", i.c2);
            let _ = writeln!(out, "interaction.t1 = {}", i.t1);
            let _ = writeln!(out, "interaction.t2 = {}", i.t2);
        }
        if let Some(s) = &self.scale {
            let _ = writeln!(out, "scale.years_per_unit = {}", s.years_per_unit);
            let _ = writeln!(out, "scale.k = {}", s.k);
            let _ = writeln!(out, "scale.nonpassionary_factor = {}", s.nonpassionary_factor);
        }
        let outputs: Vec<&str> = self.outputs.iter().map(|o| o.as_str()).collect();
        let _ = writeln!(out, "outputs = {}", outputs.join(" "));
        out
    }
}

/// Key table built from a config text: value and 1-based line number.
struct KeyTable {
    entries: HashMap<String, (String, usize)>,
}

impl KeyTable {
    fn parse(text: &str) -> Result<Self> {
        let mut entries = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("expected 'key = value', got '{line}'"),
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() || value.is_empty() {
                return Err(Error::Parse {
                    line: line_no,
                    message: "empty key or value".into(),
                });
            }
            if let Some((_, first)) = entries.insert(key.clone(), (value, line_no)) {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("duplicate key '{key}' (first set at line {first})"),
                });
            }
        }
        Ok(KeyTable { entries })
    }

    fn take(&mut self, key: &str) -> Option<(String, usize)> {
        self.entries.remove(key)
    }

    fn take_required(&mut self, key: &str) -> Result<(String, usize)> {
        self.take(key)
            .ok_or_else(|| validation(key, "missing required key"))
    }

    fn number(&mut self, key: &str) -> Result<f64> {
        let (value, line) = self.take_required(key)?;
        value.parse::<f64>().map_err(|_| Error::Parse {
            line,
            message: format!("invalid number '{value}' for {key}"),
        })
    }

    fn number_or(&mut self, key: &str, default: f64) -> Result<f64> {
        match self.take(key) {
            Some((value, line)) => value.parse::<f64>().map_err(|_| Error::Parse {
                line,
                message: format!("invalid number '{value}' for {key}"),
            }),
            None => Ok(default),
        }
    }

    fn integer(&mut self, key: &str, default: u64) -> Result<u64> {
        match self.take(key) {
            Some((value, line)) => value.parse::<u64>().map_err(|_| Error::Parse {
                line,
                message: format!("invalid integer '{value}' for {key}"),
            }),
            None => Ok(default),
        }
    }

    fn has_prefix(&self, prefix: &str) -> bool {
        self.entries.keys().any(|k| k.starts_with(prefix))
    }

    fn reject_leftovers(&self) -> Result<()> {
        if let Some((key, (_, line))) = self
            .entries
            .iter()
            .min_by_key(|(_, (_, line))| *line)
        {
            return Err(Error::Parse {
                line: *line,
                message: format!("unknown key '{key}'"),
            });
        }
        Ok(())
    }
}

/// Parse a scenario from config text.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut keys = KeyTable::parse(text)?;
    let (model_str, model_line) = keys.take_required("model")?;
    let model = ModelKind::parse(&model_str).ok_or_else(|| Error::Parse {
        line: model_line,
        message: format!(
            "unknown model '{model_str}' (expected lotka_volterra, two_var, three_var, sde, or interaction)"
        ),
    })?;

    let params = match model {
        ModelKind::LotkaVolterra => ModelParams::LotkaVolterra(LVParams {
            beta1: keys.number("params.beta1")?,
            beta2: keys.number("params.beta2")?,
            gamma: keys.number("params.gamma")?,
        }),
        ModelKind::TwoVar => ModelParams::TwoVar(TwoVarParams {
            alpha: keys.number("params.alpha")?,
            y0: keys.number("params.y0")?,
            beta1: keys.number("params.beta1")?,
            beta2: keys.number("params.beta2")?,
            gamma: keys.number("params.gamma")?,
        }),
        _ => ModelParams::ThreeVar(ThreeVarParams {
            alpha1: keys.number("params.alpha1")?,
            alpha2: keys.number("params.alpha2")?,
            y0: keys.number("params.y0")?,
            z0: keys.number("params.z0")?,
            beta12: keys.number("params.beta12")?,
            beta13: keys.number("params.beta13")?,
            beta21: keys.number("params.beta21")?,
            beta23: keys.number("params.beta23")?,
            beta31: keys.number("params.beta31")?,
            beta32: keys.number("params.beta32")?,
            gamma1: keys.number("params.gamma1")?,
            gamma2: keys.number("params.gamma2")?,
            gamma3: keys.number("params.gamma3")?,
        }),
    };

    let (initial_str, initial_line) = keys.take_required("initial")?;
    let initial = initial_str
        .split_whitespace()
        .map(|tok| {
            tok.parse::<f64>().map_err(|_| Error::Parse {
                line: initial_line,
                message: format!("invalid number '{tok}' in initial state"),
            })
        })
        .collect::<Result<Vec<f64>>>()?;

    let noise = if matches!(model, ModelKind::Sde | ModelKind::Interaction)
        || keys.has_prefix("noise.")
    {
        Some(NoiseSpec {
            sigma1: keys.number("noise.sigma1")?,
            sigma2: keys.number("noise.sigma2")?,
            sigma3: keys.number("noise.sigma3")?,
            seed: keys.integer("noise.seed", 0)?,
        })
    } else {
        None
    };

    let interaction = if model == ModelKind::Interaction || keys.has_prefix("interaction.") {
        Some(InteractionSpec {
            c1: keys.number("interaction.c1")?,
            c2: keys.number("interaction.c2")?,
            t1: keys.number("interaction.t1")?,
            t2: keys.number("interaction.t2")?,
        })
    } else {
        None
    };

    let scale = if keys.has_prefix("scale.") {
        let d = RealScale::default();
        Some(RealScale {
            years_per_unit: keys.number_or("scale.years_per_unit", d.years_per_unit)?,
            k: keys.number_or("scale.k", d.k)?,
            nonpassionary_factor: keys
                .number_or("scale.nonpassionary_factor", d.nonpassionary_factor)?,
        })
    } else {
        None
    };

    let t0 = keys.number_or("grid.t0", 0.0)?;
    let tf = keys.number("grid.tf")?;
    let dt = keys.number_or("grid.dt", 1e-3)?;

    let outputs = match keys.take("outputs") {
        Some((value, line)) => value
            .split_whitespace()
            .map(|tok| {
                OutputKind::parse(tok).ok_or_else(|| Error::Parse {
                    line,
                    message: format!("unknown output '{tok}' (expected csv, svg, or real_csv)"),
                })
            })
            .collect::<Result<Vec<_>>>()?,
        None => vec![OutputKind::Csv],
    };

    keys.reject_leftovers()?;

    let scenario = Scenario {
        model,
        params,
        initial,
        grid: build_grid(t0, tf, dt, interaction.as_ref())?,
        noise,
        interaction,
        scale,
        outputs,
    };
    scenario.validate()?;
    Ok(scenario)
}

fn three_var_excitable() -> ThreeVarParams {
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

/// Names of the bundled presets, in order.
pub const PRESET_NAMES: [&str; 8] = [
    "fig2", "fig3", "fig4", "fig5", "fig6", "fig7a", "fig7b", "fig8",
];

/// A bundled demonstration scenario, or `None` if the name is not one.
pub fn preset(name: &str) -> Option<Scenario> {
    let mut noise = None;
    let mut interaction = None;
    let (params, initial, tf): (ModelParams, Vec<f64>, f64) = match name {
        // Planar excitable run: a single spike of x before decay back.
        "fig2" => (
            ModelParams::TwoVar(TwoVarParams {
                alpha: 0.02,
                y0: 0.05,
                beta1: -1.0 / 3.0,
                beta2: 2.5,
                gamma: 0.1,
            }),
            vec![0.1, 0.05],
            100.0,
        ),
        // Sign-flipped couplings: y collapses during the excursion.
        "fig3" => (
            ModelParams::TwoVar(TwoVarParams {
                alpha: 0.02,
                y0: 1.0,
                beta1: 1.0 / 3.0,
                beta2: -2.5,
                gamma: 0.1,
            }),
            vec![0.1, 1.0],
            100.0,
        ),
        // Reference three-variable excitable run; long horizon so the state
        // settles onto the upper attractor (0, 0.075, 0.22).
        "fig4" => (
            ModelParams::ThreeVar(three_var_excitable()),
            vec![0.07, 0.053, 0.05],
            1200.0,
        ),
        // Same system with z0 = 0: the three x = 0 equilibria merge and the
        // excursion tops out around x = 0.2.
        "fig5" => (
            ModelParams::ThreeVar(ThreeVarParams {
                z0: 0.0,
                ..three_var_excitable()
            }),
            vec![0.07, 0.075, 0.05],
            200.0,
        ),
        // Alternative couplings (y suppressed by z, z suppressed by x).
        "fig6" => (
            ModelParams::ThreeVar(ThreeVarParams {
                alpha1: 0.03,
                alpha2: 0.1,
                y0: 0.075,
                z0: 0.6,
                beta12: -0.06,
                beta13: 0.6,
                beta21: 1.25,
                beta23: -0.075,
                beta31: -0.5,
                beta32: 0.0,
                gamma1: 2.0,
                gamma2: 20.0,
                gamma3: 0.6,
            }),
            vec![0.2, 0.075, 0.6],
            100.0,
        ),
        // Stochastic runs on the reference parameters.
        "fig7a" => {
            noise = Some(NoiseSpec::isotropic(0.05, 2026));
            (
                ModelParams::ThreeVar(three_var_excitable()),
                vec![0.07, 0.053, 0.05],
                200.0,
            )
        }
        "fig7b" => {
            noise = Some(NoiseSpec::isotropic(0.1, 2026));
            (
                ModelParams::ThreeVar(three_var_excitable()),
                vec![0.07, 0.053, 0.05],
                200.0,
            )
        }
        // Two coupled populations: the second is born at t1 = 30 and
        // cross-suppression starts t2 = 5 later.
        "fig8" => {
            noise = Some(NoiseSpec::isotropic(0.05, 2026));
            interaction = Some(InteractionSpec {
                c1: 0.22,
                c2: 0.22,
                t1: 30.0,
                t2: 5.0,
            });
            (
                ModelParams::ThreeVar(three_var_excitable()),
                vec![0.07, 0.053, 0.05],
                150.0,
            )
        }
        _ => return None,
    };
    let model = match (&params, noise.is_some(), interaction.is_some()) {
        (ModelParams::TwoVar(_), _, _) => ModelKind::TwoVar,
        (ModelParams::ThreeVar(_), false, _) => ModelKind::ThreeVar,
        (ModelParams::ThreeVar(_), true, false) => ModelKind::Sde,
        (ModelParams::ThreeVar(_), true, true) => ModelKind::Interaction,
        (ModelParams::LotkaVolterra(_), _, _) => ModelKind::LotkaVolterra,
    };
    let grid = build_grid(0.0, tf, 1e-3, interaction.as_ref())
        .expect("preset grids are well-formed");
    let s = Scenario {
        model,
        params,
        initial,
        grid,
        noise,
        interaction,
        scale: None,
        outputs: vec![OutputKind::Csv],
    };
    debug_assert!(s.validate().is_ok());
    Some(s)
}

/// Load a scenario from a file path or a bundled preset name.
pub fn load_scenario(spec: &str) -> Result<Scenario> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        return parse_scenario(&text);
    }
    if let Some(s) = preset(spec) {
        return Ok(s);
    }
    if spec.contains('/') || spec.contains('.') {
        return Err(Error::Io(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("scenario file '{spec}' not found"),
        )));
    }
    Err(Error::UnknownPreset {
        name: spec.to_string(),
        available: PRESET_NAMES.join(", "),
    })
}

/// Integrate the scenario's model and return the trajectory (six columns
/// for the coupled model).
pub fn integrate_scenario(s: &Scenario) -> Result<Trajectory> {
    s.validate()?;
    match (&s.model, &s.params) {
        (ModelKind::LotkaVolterra, ModelParams::LotkaVolterra(p)) => {
            integrate_lotka_volterra(p, [s.initial[0], s.initial[1]], &s.grid)
        }
        (ModelKind::TwoVar, ModelParams::TwoVar(p)) => {
            integrate_two_var(p, [s.initial[0], s.initial[1]], &s.grid)
        }
        (ModelKind::ThreeVar, ModelParams::ThreeVar(p)) => {
            integrate_three_var(p, [s.initial[0], s.initial[1], s.initial[2]], &s.grid)
        }
        (ModelKind::Sde, ModelParams::ThreeVar(p)) => {
            let n = s.noise.as_ref().unwrap();
            let path = brownian_path(&s.grid, 3, n.seed);
            integrate_sde_log(p, n, [s.initial[0], s.initial[1], s.initial[2]], &s.grid, &path)
        }
        (ModelKind::Interaction, ModelParams::ThreeVar(p)) => {
            let n = s.noise.as_ref().unwrap();
            let ispec = s.interaction.as_ref().unwrap();
            let path = brownian_path(&s.grid, 6, n.seed);
            let dual = integrate_interacting(
                p,
                n,
                ispec,
                [s.initial[0], s.initial[1], s.initial[2]],
                &s.grid,
                &path,
            )?;
            Ok(dual.into_trajectory())
        }
        _ => unreachable!("validate() checked the model/params pairing"),
    }
}

/// Run the scenario and write every requested output into `out_dir`, files
/// named `<stem>.csv`, `<stem>.svg`, `<stem>_real.csv`. Returns the paths
/// written.
pub fn run_scenario(s: &Scenario, out_dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
    let traj = integrate_scenario(s)?;
    let mut written = Vec::new();
    for kind in &s.outputs {
        let path = match kind {
            OutputKind::Csv => {
                let p = out_dir.join(format!("{stem}.csv"));
                output::write_text(&p, &output::trajectory_csv(&traj))?;
                p
            }
            OutputKind::Svg => {
                let p = out_dir.join(format!("{stem}.svg"));
                output::write_text(&p, &output::svg_time_series(&traj, stem))?;
                p
            }
            OutputKind::RealCsv => {
                let scale = s.scale.unwrap_or_default();
                let real = scale_to_real(&traj, &scale);
                let p = out_dir.join(format!("{stem}_real.csv"));
                output::write_text(&p, &output::trajectory_csv(&real))?;
                p
            }
        };
        written.push(path);
    }
    Ok(written)
}
