//! CSV and SVG emission.
//!
//! CSV numbers go through [`format_float`], Rust's shortest round-trip
//! representation: locale-independent, and re-parsing recovers the exact
//! bits, so regression files are stable across platforms. SVG styling is
//! fixed by this artifact: `x`-type variables are drawn in blue `#1f77b4`,
//! `y`-type in red `#d62728`, `z`-type in black, and second-population
//! curves are dashed.

use std::fmt::Write as _;
use std::path::Path;

use crate::equilibria::EquilibriaScan;
use crate::error::Result;
use crate::nullclines::{NullclineVar, Polyline, Window};
use crate::sde::EnsembleSummary;
use crate::trajectory::Trajectory;

/// Shortest decimal representation that parses back to the same `f64`.
pub fn format_float(v: f64) -> String {
    format!("{v}")
}

/// Stroke color for a variable label.
fn color_for(label: &str) -> &'static str {
    match label.chars().next() {
        Some('x') => "#1f77b4",
        Some('y') => "#d62728",
        _ => "#000000",
    }
}

/// Header `t,<labels>` and one row per grid point.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::with_capacity(traj.len() * 24 * (traj.n_vars() + 1));
    out.push('t');
    for l in traj.labels() {
        out.push(',');
        out.push_str(l);
    }
    out.push('\n');
    for (i, t) in traj.times().iter().enumerate() {
        out.push_str(&format_float(*t));
        for v in traj.row(i) {
            out.push(',');
            out.push_str(&format_float(*v));
        }
        out.push('\n');
    }
    out
}

/// Header `t` then `mean_<v>,p10_<v>,p50_<v>,p90_<v>` per variable, one row
/// per band time.
pub fn ensemble_csv(s: &EnsembleSummary) -> String {
    let mut out = String::new();
    out.push('t');
    for l in &s.labels {
        let _ = write!(out, ",mean_{l},p10_{l},p50_{l},p90_{l}");
    }
    out.push('\n');
    for (i, t) in s.band_times.iter().enumerate() {
        out.push_str(&format_float(*t));
        for v in 0..s.labels.len() {
            for series in [&s.mean, &s.p10, &s.p50, &s.p90] {
                out.push(',');
                out.push_str(&format_float(series[v][i]));
            }
        }
        out.push('\n');
    }
    out
}

/// Header `x,y,z,family,stability,re_lambda_max`; the `z` column is empty
/// for planar systems.
pub fn equilibria_csv(scan: &EquilibriaScan) -> String {
    let mut out = String::from("x,y,z,family,stability,re_lambda_max\n");
    for r in &scan.reports {
        out.push_str(&format_float(r.point[0]));
        out.push(',');
        out.push_str(&format_float(r.point[1]));
        out.push(',');
        if let Some(z) = r.point.get(2) {
            out.push_str(&format_float(*z));
        }
        let _ = writeln!(
            out,
            ",{},{},{}",
            r.family,
            r.stability,
            format_float(r.re_lambda_max())
        );
    }
    out
}

/// Header `nullcline,polyline,x,y`: one row per vertex, `nullcline` naming
/// the equation family and `polyline` indexing the curve within it.
pub fn nullclines_csv(sets: &[(NullclineVar, Vec<Polyline>)]) -> String {
    let mut out = String::from("nullcline,polyline,x,y\n");
    for (var, curves) in sets {
        let tag = match var {
            NullclineVar::X => "x",
            NullclineVar::Y => "y",
            NullclineVar::Z => "z",
        };
        for (ci, curve) in curves.iter().enumerate() {
            for p in &curve.points {
                let _ = writeln!(
                    out,
                    "{tag},{ci},{},{}",
                    format_float(p[0]),
                    format_float(p[1])
                );
            }
        }
    }
    out
}

const SVG_W: f64 = 860.0;
const SVG_H: f64 = 500.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 150.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;
/// Plotted curves are thinned to at most this many vertices.
const MAX_PLOT_POINTS: usize = 2000;

/// Short tick label: up to four decimals, trailing zeros trimmed.
fn tick_label(v: f64) -> String {
    let r = (v * 1e4).round() / 1e4;
    format!("{r}")
}

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn sx(&self, x: f64) -> f64 {
        MARGIN_L + (x - self.x_min) / (self.x_max - self.x_min) * (SVG_W - MARGIN_L - MARGIN_R)
    }

    fn sy(&self, y: f64) -> f64 {
        SVG_H - MARGIN_B - (y - self.y_min) / (self.y_max - self.y_min) * (SVG_H - MARGIN_T - MARGIN_B)
    }
}

fn svg_open(title: &str) -> String {
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_W}\" height=\"{SVG_H}\" \
         viewBox=\"0 0 {SVG_W} {SVG_H}\">\n\
         <rect width=\"{SVG_W}\" height=\"{SVG_H}\" fill=\"white\"/>\n"
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" \
         text-anchor=\"middle\">{title}</text>",
        SVG_W / 2.0
    );
    s
}

fn svg_axes(s: &mut String, f: &Frame, x_name: &str, y_name: &str) {
    let (x0, x1) = (MARGIN_L, SVG_W - MARGIN_R);
    let (y0, y1) = (SVG_H - MARGIN_B, MARGIN_T);
    let _ = writeln!(
        s,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"#444\"/>\n\
         <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"#444\"/>"
    );
    for i in 0..=5 {
        let frac = i as f64 / 5.0;
        let xv = f.x_min + frac * (f.x_max - f.x_min);
        let yv = f.y_min + frac * (f.y_max - f.y_min);
        let sx = f.sx(xv);
        let sy = f.sy(yv);
        let _ = writeln!(
            s,
            "<line x1=\"{sx}\" y1=\"{y0}\" x2=\"{sx}\" y2=\"{}\" stroke=\"#444\"/>\n\
             <text x=\"{sx}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"middle\">{}</text>",
            y0 + 5.0,
            y0 + 18.0,
            tick_label(xv)
        );
        let _ = writeln!(
            s,
            "<line x1=\"{}\" y1=\"{sy}\" x2=\"{x0}\" y2=\"{sy}\" stroke=\"#444\"/>\n\
             <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"end\">{}</text>",
            x0 - 5.0,
            x0 - 8.0,
            sy + 4.0,
            tick_label(yv)
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\">{x_name}</text>",
        (x0 + x1) / 2.0,
        SVG_H - 10.0
    );
    let _ = writeln!(
        s,
        "<text x=\"16\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{y_name}</text>",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );
}

fn svg_polyline(
    s: &mut String,
    f: &Frame,
    points: impl Iterator<Item = [f64; 2]>,
    color: &str,
    dashed: bool,
) {
    let dash = if dashed {
        " stroke-dasharray=\"6 3\""
    } else {
        ""
    };
    let _ = write!(
        s,
        "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{dash} points=\""
    );
    for p in points {
        let _ = write!(s, "{:.2},{:.2} ", f.sx(p[0]), f.sy(p[1]));
    }
    s.push_str("\"/>\n");
}

fn thin(len: usize) -> usize {
    len.div_ceil(MAX_PLOT_POINTS).max(1)
}

/// One panel, time on the horizontal axis, every variable as a colored
/// polyline with a legend.
pub fn svg_time_series(traj: &Trajectory, title: &str) -> String {
    let times = traj.times();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for var in 0..traj.n_vars() {
        for i in 0..traj.len() {
            let v = traj.value(i, var);
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if !(hi > lo) {
        hi = lo + 1.0;
    }
    let pad = 0.05 * (hi - lo);
    let f = Frame {
        x_min: times[0],
        x_max: *times.last().unwrap(),
        y_min: (lo - pad).min(0.0),
        y_max: hi + pad,
    };
    let mut s = svg_open(title);
    svg_axes(&mut s, &f, "t", "population fraction");
    let stride = thin(traj.len());
    for (var, label) in traj.labels().iter().enumerate() {
        let pts = (0..traj.len())
            .step_by(stride)
            .chain(std::iter::once(traj.len() - 1))
            .map(|i| [times[i], traj.value(i, var)]);
        svg_polyline(&mut s, &f, pts, color_for(label), label.ends_with('2'));
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" \
             fill=\"{}\">{label}</text>",
            SVG_W - MARGIN_R + 14.0,
            MARGIN_T + 18.0 * (var as f64 + 1.0),
            color_for(label)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Phase-plane panel: nullcline families drawn over the window, colored by
/// equation (x blue, y red, z black).
pub fn svg_phase_plane(
    sets: &[(NullclineVar, Vec<Polyline>)],
    window: &Window,
    title: &str,
) -> String {
    let f = Frame {
        x_min: window.x_min,
        x_max: window.x_max,
        y_min: window.y_min,
        y_max: window.y_max,
    };
    let mut s = svg_open(title);
    svg_axes(&mut s, &f, "x", "y");
    for (var, curves) in sets {
        let (color, label) = match var {
            NullclineVar::X => ("#1f77b4", "x-nullcline"),
            NullclineVar::Y => ("#d62728", "y-nullcline"),
            NullclineVar::Z => ("#000000", "z-nullcline"),
        };
        for curve in curves {
            let stride = thin(curve.len());
            let pts = (0..curve.len())
                .step_by(stride)
                .chain(std::iter::once(curve.len() - 1))
                .map(|i| curve.points[i]);
            svg_polyline(&mut s, &f, pts, color, false);
        }
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" \
             fill=\"{color}\">{label}</text>",
            SVG_W - MARGIN_R + 14.0,
            MARGIN_T + 18.0 * (sets.iter().position(|(v, _)| v == var).unwrap() as f64 + 1.0)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Write a string to `path`, creating parent directories as needed.
pub fn write_text(path: &Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, content)?;
    Ok(())
}
