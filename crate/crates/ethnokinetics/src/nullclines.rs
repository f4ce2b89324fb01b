//! Nullcline tracing for phase-plane output.
//!
//! Every model equation factors as `u̇ = u * bracket(...)`, so its nullcline
//! set splits into the trivial coordinate line `u = 0` and the zero set of
//! the bracket. The bracket curves are extracted with marching squares
//! (16-case table, linear edge interpolation, center-sample resolution of
//! the two ambiguous saddle cases) and chained into ordered polylines;
//! the trivial lines are emitted as explicit two-point segments when they
//! lie inside the requested window.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::models;
use crate::params::{ThreeVarParams, TwoVarParams};

/// Rectangular phase-plane region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Window {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        if !(x_min < x_max) || !(y_min < y_max) {
            return Err(Error::InvalidParam {
                field: "window",
                message: format!("degenerate window [{x_min},{x_max}]x[{y_min},{y_max}]"),
            });
        }
        Ok(Window {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }
}

/// An ordered chain of plane points; closed curves repeat their first point
/// at the end.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<[f64; 2]>,
}

impl Polyline {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.points.len() > 2 && self.points.first() == self.points.last()
    }

    pub fn arc_length(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| ((w[1][0] - w[0][0]).powi(2) + (w[1][1] - w[0][1]).powi(2)).sqrt())
            .sum()
    }
}

/// Which equation's nullcline to trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NullclineVar {
    X,
    Y,
    Z,
}

#[derive(Clone, Copy)]
enum EdgeId {
    Bottom,
    Right,
    Top,
    Left,
}

struct Cell {
    // Corner coordinates.
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    // Corner values: bl, br, tr, tl.
    v: [f64; 4],
}

impl Cell {
    fn crossing(&self, e: EdgeId) -> [f64; 2] {
        // Linear interpolation along the edge between its two corners.
        let lerp = |a: f64, b: f64, va: f64, vb: f64| a + (b - a) * (va / (va - vb));
        match e {
            EdgeId::Bottom => [lerp(self.x0, self.x1, self.v[0], self.v[1]), self.y0],
            EdgeId::Right => [self.x1, lerp(self.y0, self.y1, self.v[1], self.v[2])],
            EdgeId::Top => [lerp(self.x0, self.x1, self.v[3], self.v[2]), self.y1],
            EdgeId::Left => [self.x0, lerp(self.y0, self.y1, self.v[0], self.v[3])],
        }
    }
}

/// Zero-level contour of `f` over the window, sampled on an
/// `nx x ny` cell grid.
pub fn contour_zero(
    f: impl Fn(f64, f64) -> f64,
    window: &Window,
    nx: usize,
    ny: usize,
) -> Vec<Polyline> {
    assert!(nx >= 1 && ny >= 1);
    let dx = (window.x_max - window.x_min) / nx as f64;
    let dy = (window.y_max - window.y_min) / ny as f64;
    let xs: Vec<f64> = (0..=nx).map(|i| window.x_min + i as f64 * dx).collect();
    let ys: Vec<f64> = (0..=ny).map(|j| window.y_min + j as f64 * dy).collect();
    // Sample once per grid node so shared cell edges see bit-identical
    // corner values (the chaining below relies on it).
    let mut values = vec![0.0; (nx + 1) * (ny + 1)];
    for (j, &y) in ys.iter().enumerate() {
        for (i, &x) in xs.iter().enumerate() {
            values[j * (nx + 1) + i] = f(x, y);
        }
    }
    let at = |i: usize, j: usize| values[j * (nx + 1) + i];

    let mut segments: Vec<([f64; 2], [f64; 2])> = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let cell = Cell {
                x0: xs[i],
                x1: xs[i + 1],
                y0: ys[j],
                y1: ys[j + 1],
                v: [at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)],
            };
            let mut case = 0usize;
            for (bit, val) in cell.v.iter().enumerate() {
                if *val > 0.0 {
                    case |= 1 << bit;
                }
            }
            use EdgeId::*;
            let pairs: &[(EdgeId, EdgeId)] = match case {
                0 | 15 => &[],
                1 => &[(Left, Bottom)],
                2 => &[(Bottom, Right)],
                3 => &[(Left, Right)],
                4 => &[(Right, Top)],
                5 => {
                    // Saddle: the center sample decides which pair of
                    // opposite corners is connected.
                    let c = f(0.5 * (cell.x0 + cell.x1), 0.5 * (cell.y0 + cell.y1));
                    if c > 0.0 {
                        &[(Left, Top), (Bottom, Right)]
                    } else {
                        &[(Left, Bottom), (Right, Top)]
                    }
                }
                6 => &[(Bottom, Top)],
                7 => &[(Left, Top)],
                8 => &[(Top, Left)],
                9 => &[(Bottom, Top)],
                10 => {
                    let c = f(0.5 * (cell.x0 + cell.x1), 0.5 * (cell.y0 + cell.y1));
                    if c > 0.0 {
                        &[(Left, Bottom), (Right, Top)]
                    } else {
                        &[(Bottom, Right), (Top, Left)]
                    }
                }
                11 => &[(Right, Top)],
                12 => &[(Right, Left)],
                13 => &[(Bottom, Right)],
                14 => &[(Left, Bottom)],
                _ => unreachable!(),
            };
            for (a, b) in pairs {
                let (pa, pb) = (cell.crossing(*a), cell.crossing(*b));
                // A grid node sitting exactly on the contour collapses both
                // crossings onto the node; drop the zero-length segment (the
                // neighbouring cells still connect through that point).
                if pa != pb {
                    segments.push((pa, pb));
                }
            }
        }
    }
    chain_segments(segments)
}

/// Join raw cell segments into ordered polylines. Endpoints on shared cell
/// edges are bit-identical by construction, so exact matching suffices.
fn chain_segments(segments: Vec<([f64; 2], [f64; 2])>) -> Vec<Polyline> {
    let key = |p: [f64; 2]| (p[0].to_bits(), p[1].to_bits());
    let mut adj: HashMap<(u64, u64), Vec<usize>> = HashMap::new();
    for (idx, (a, b)) in segments.iter().enumerate() {
        adj.entry(key(*a)).or_default().push(idx);
        adj.entry(key(*b)).or_default().push(idx);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a, b) = segments[start];
        let mut chain: std::collections::VecDeque<[f64; 2]> = [a, b].into_iter().collect();
        for forward in [true, false] {
            loop {
                let tip = if forward {
                    *chain.back().unwrap()
                } else {
                    *chain.front().unwrap()
                };
                let Some(next) = adj
                    .get(&key(tip))
                    .and_then(|ids| ids.iter().find(|&&i| !used[i]))
                    .copied()
                else {
                    break;
                };
                used[next] = true;
                let (p, q) = segments[next];
                let other = if key(p) == key(tip) { q } else { p };
                if forward {
                    chain.push_back(other);
                } else {
                    chain.push_front(other);
                }
            }
        }
        out.push(Polyline {
            points: chain.into_iter().collect(),
        });
    }
    out
}

fn axis_line_vertical(x: f64, window: &Window) -> Option<Polyline> {
    (window.x_min..=window.x_max).contains(&x).then(|| Polyline {
        points: vec![[x, window.y_min], [x, window.y_max]],
    })
}

fn axis_line_horizontal(y: f64, window: &Window) -> Option<Polyline> {
    (window.y_min..=window.y_max).contains(&y).then(|| Polyline {
        points: vec![[window.x_min, y], [window.x_max, y]],
    })
}

/// Nullclines of the two-variable model in the `(x, y)` plane. The first
/// polyline is the trivial coordinate line (when inside the window),
/// followed by the bracket contour.
pub fn trace_nullclines_two_var(
    p: &TwoVarParams,
    which: NullclineVar,
    window: &Window,
    nx: usize,
    ny: usize,
) -> Result<Vec<Polyline>> {
    p.validate()?;
    let mut out = Vec::new();
    match which {
        NullclineVar::X => {
            out.extend(axis_line_vertical(0.0, window));
            out.extend(contour_zero(
                |x, y| models::bracket_two_var_x([x, y], p),
                window,
                nx,
                ny,
            ));
        }
        NullclineVar::Y => {
            out.extend(axis_line_horizontal(0.0, window));
            out.extend(contour_zero(
                |x, y| models::bracket_two_var_y([x, y], p),
                window,
                nx,
                ny,
            ));
        }
        NullclineVar::Z => {
            return Err(Error::InvalidParam {
                field: "which",
                message: "two-variable model has no z equation".into(),
            });
        }
    }
    Ok(out)
}

/// Nullclines of the three-variable model restricted to the plane
/// `z = z_slice`, drawn over the `(x, y)` window. The trivial `x = 0` /
/// `y = 0` lines are included for the x and y equations; the z equation's
/// trivial factor (`z = 0`) is a full plane, not a curve, so only the
/// bracket contour is returned for it.
pub fn trace_nullclines_three_var_slice(
    p: &ThreeVarParams,
    which: NullclineVar,
    z_slice: f64,
    window: &Window,
    nx: usize,
    ny: usize,
) -> Result<Vec<Polyline>> {
    p.validate()?;
    let mut out = Vec::new();
    match which {
        NullclineVar::X => {
            out.extend(axis_line_vertical(0.0, window));
            out.extend(contour_zero(
                |x, y| models::bracket_x([x, y, z_slice], p),
                window,
                nx,
                ny,
            ));
        }
        NullclineVar::Y => {
            out.extend(axis_line_horizontal(0.0, window));
            out.extend(contour_zero(
                |x, y| models::bracket_y([x, y, z_slice], p),
                window,
                nx,
                ny,
            ));
        }
        NullclineVar::Z => {
            out.extend(contour_zero(
                |x, y| models::bracket_z([x, y, z_slice], p),
                window,
                nx,
                ny,
            ));
        }
    }
    Ok(out)
}
