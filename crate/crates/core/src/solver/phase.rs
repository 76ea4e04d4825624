//! Direction field, nullclines and equilibria of the (W, Z) system.

use serde::Serialize;

use crate::algebra::{self, GasParams};
use crate::error::{Error, Result};

use super::Field;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Window {
    pub w_min: f64,
    pub w_max: f64,
    pub z_min: f64,
    pub z_max: f64,
}

impl Window {
    pub fn square(half: f64) -> Self {
        Window { w_min: -half, w_max: half, z_min: -half, z_max: half }
    }

    fn contains(&self, w: f64, z: f64) -> bool {
        w >= self.w_min && w <= self.w_max && z >= self.z_min && z <= self.z_max
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Arrow {
    pub w: f64,
    pub z: f64,
    /// Unit direction of (N_W/D_W, N_Z/D_Z); zero at equilibria, NaN on a sonic line.
    pub dw: f64,
    pub dz: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Nullcline {
    pub name: &'static str,
    /// Polylines clipped to the window.
    pub pieces: Vec<Vec<(f64, f64)>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Marker {
    pub name: &'static str,
    pub w: f64,
    pub z: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhasePortrait {
    pub gamma: f64,
    pub r: f64,
    pub window: Window,
    pub arrows: Vec<Arrow>,
    pub nullclines: Vec<Nullcline>,
    pub equilibria: Vec<Marker>,
}

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

/// Splits a sampled curve into polylines inside the window.
fn clip(points: impl Iterator<Item = Option<(f64, f64)>>, win: &Window) -> Vec<Vec<(f64, f64)>> {
    let mut pieces = Vec::new();
    let mut cur = Vec::new();
    for p in points {
        match p {
            Some((w, z)) if win.contains(w, z) => cur.push((w, z)),
            _ => {
                if cur.len() > 1 {
                    pieces.push(std::mem::take(&mut cur));
                } else {
                    cur.clear();
                }
            }
        }
    }
    if cur.len() > 1 {
        pieces.push(cur);
    }
    pieces
}

/// Roots of a Z² + b Z + c = 0, ordered (minus branch, plus branch).
fn quad_roots(a: f64, b: f64, c: f64) -> (Option<f64>, Option<f64>) {
    if a == 0.0 {
        return if b != 0.0 { (Some(-c / b), None) } else { (None, None) };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return (None, None);
    }
    let s = disc.sqrt();
    let (lo, hi) = ((-b - s) / (2.0 * a), (-b + s) / (2.0 * a));
    (Some(lo.min(hi)), Some(lo.max(hi)))
}

/// Line c0 + cw W + cz Z = 0 sampled along its better-conditioned coordinate.
fn line(c0: f64, cw: f64, cz: f64, win: &Window, n: usize) -> Vec<Vec<(f64, f64)>> {
    if cz.abs() >= cw.abs() {
        clip(grid(win.w_min, win.w_max, n).map(|w| Some((w, -(c0 + cw * w) / cz))), win)
    } else {
        clip(grid(win.z_min, win.z_max, n).map(|z| Some((-(c0 + cz * z) / cw, z))), win)
    }
}

pub fn phase_portrait(gamma: f64, r: f64, win: Window, grid_n: usize) -> Result<PhasePortrait> {
    if grid_n < 2 {
        return Err(Error::InvalidArgument(format!("grid needs at least 2 points per side, got {grid_n}")));
    }
    if !(win.w_max > win.w_min && win.z_max > win.z_min) {
        return Err(Error::InvalidArgument("empty window".into()));
    }
    let f = Field::new(gamma, r);
    let a = f.alpha;
    let mut arrows = Vec::with_capacity(grid_n * grid_n);
    for z in grid(win.z_min, win.z_max, grid_n) {
        for w in grid(win.w_min, win.w_max, grid_n) {
            let [u, v] = f.rhs(w, z);
            let norm = u.hypot(v);
            let (dw, dz) = if norm == 0.0 { (0.0, 0.0) } else { (u / norm, v / norm) };
            arrows.push(Arrow { w, z, dw, dz });
        }
    }
    let fine = (grid_n * 8).max(400);
    let mut nullclines = vec![
        Nullcline { name: "D_W=0", pieces: line(1.0, 0.5 * (1.0 + a), 0.5 * (1.0 - a), &win, fine) },
        Nullcline { name: "D_Z=0", pieces: line(1.0, 0.5 * (1.0 - a), 0.5 * (1.0 + a), &win, fine) },
    ];
    // N_W and N_Z are quadratic in Z for fixed W.
    let nw = |w: f64| quad_roots(0.5 * a, -0.5 * (1.0 - a) * w, -(r * w + 0.5 * (1.0 + 2.0 * a) * w * w));
    let nz = |w: f64| quad_roots(-0.5 * (1.0 + 2.0 * a), -(r + 0.5 * (1.0 - a) * w), 0.5 * a * w * w);
    for (name, roots) in [("N_W=0", &nw as &dyn Fn(f64) -> (Option<f64>, Option<f64>)), ("N_Z=0", &nz)] {
        let mut pieces = Vec::new();
        for branch in 0..2 {
            let pts = grid(win.w_min, win.w_max, fine).map(|w| {
                let (m, p) = roots(w);
                (if branch == 0 { m } else { p }).map(|z| (w, z))
            });
            pieces.extend(clip(pts, &win));
        }
        nullclines.push(Nullcline { name, pieces });
    }

    let p = GasParams::from_f64(gamma, r, 128);
    let s = algebra::sonic_point(&p)?;
    let eye = algebra::p_eye(&p)?;
    let equilibria = vec![
        Marker { name: "P_inf", w: 0.0, z: 0.0 },
        Marker { name: "P_diag", w: -r, z: -r },
        Marker { name: "P_eye", w: eye.x0.mid_f64(), z: eye.y0.mid_f64() },
        // Mirror image across W = Z; it lies in W < Z.
        Marker { name: "P_eye_mirror", w: eye.y0.mid_f64(), z: eye.x0.mid_f64() },
        Marker { name: "P_s", w: s.w0.mid_f64(), z: s.z0.mid_f64() },
        Marker { name: "P_s_bar", w: s.wbar0.mid_f64(), z: s.zbar0.mid_f64() },
    ];
    Ok(PhasePortrait { gamma, r, window: win, arrows, nullclines, equilibria })
}
