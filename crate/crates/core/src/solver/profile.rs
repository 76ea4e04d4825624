//! Assembled profiles, the physical ζ-variables and their diagnostics.

use serde::Serialize;

use crate::error::{Error, Result};

use super::shoot::{calibrate_amplitude, ShootOptions};
use super::{integrate_from_ps, Direction, Field, IntegratorInfo, Profile, Stop};

/// Profile on (log ζ_seed, ξ_max]: origin solution up to ζ_m, then the P_s solution.
/// Also returns the mismatch Z* − Z*^o at ζ_m, which vanishes at an admissible r.
pub fn assemble_profile(gamma: f64, r: f64, xi_max: f64, opts: &ShootOptions) -> Result<(Profile, f64)> {
    let field = Field::new(gamma, r);
    let t = crate::series::coeffs_at_ps(
        &crate::algebra::GasParams::from_f64(gamma, r, 128),
        opts.series_order,
        crate::series::Mode::Raw,
    )?;
    let xi_m = opts.zeta_match.ln();
    let right = integrate_from_ps(field, Direction::Right, &t, xi_m, opts.ode_tol)?;
    if right.stop != Stop::Reached {
        return Err(Error::InvalidArgument(format!("rightward solution stops before zeta = {}: {:?}", opts.zeta_match, right.stop)));
    }
    let left = integrate_from_ps(field, Direction::Left, &t, xi_max, opts.ode_tol)?;
    let (_, w_star, z_star) = right.last();
    let (a, origin) = calibrate_amplitude(field, w_star, opts.zeta_match, opts.ode_tol)?;
    let e = z_star - origin.last().2;

    let mut xi = Vec::new();
    let mut w = Vec::new();
    let mut z = Vec::new();
    let mut err = Vec::new();
    let n_o = origin.len() - 1;
    for i in 0..n_o {
        xi.push(origin.xi[i]);
        w.push(origin.w[i]);
        z.push(origin.z[i]);
        err.push(origin.err[i]);
    }
    for i in (0..right.len()).rev() {
        xi.push(right.xi[i]);
        w.push(right.w[i]);
        z.push(right.z[i]);
        err.push(right.err[i]);
    }
    for i in 1..left.len() {
        xi.push(left.xi[i]);
        w.push(left.w[i]);
        z.push(left.z[i]);
        err.push(left.err[i]);
    }
    let steps = origin.integrator.steps + right.integrator.steps + left.integrator.steps;
    Ok((
        Profile {
            gamma,
            r,
            xi,
            w,
            z,
            amplitude: Some(a),
            integrator: IntegratorInfo { method: "dopri5".into(), tol: opts.ode_tol, steps, seed: left.integrator.seed },
            stop: left.stop,
            err,
        },
        e,
    ))
}

/// ζ-variables W̄ = ζW, Z̄ = ζZ, Ū = (W̄ + Z̄)/2, S̄ = (W̄ − Z̄)/2.
#[derive(Clone, Debug, Serialize)]
pub struct Physical {
    pub gamma: f64,
    pub r: f64,
    pub zeta: Vec<f64>,
    pub wbar: Vec<f64>,
    pub zbar: Vec<f64>,
    pub ubar: Vec<f64>,
    pub sbar: Vec<f64>,
}

/// Maps a ξ-profile to ζ = e^ξ. A profile that carries an origin amplitude also gets the ζ = 0 row
/// (W̄, Z̄) = (A, −A) from the origin series.
pub fn to_physical(p: &Profile) -> Physical {
    let mut zeta = Vec::with_capacity(p.len() + 1);
    let mut wbar = Vec::with_capacity(p.len() + 1);
    let mut zbar = Vec::with_capacity(p.len() + 1);
    if let Some(a) = p.amplitude {
        if p.xi.first().is_some_and(|x| x.is_finite()) {
            zeta.push(0.0);
            wbar.push(a);
            zbar.push(-a);
        }
    }
    for i in 0..p.len() {
        let s = p.xi[i].exp();
        zeta.push(s);
        wbar.push(s * p.w[i]);
        zbar.push(s * p.z[i]);
    }
    let ubar = wbar.iter().zip(&zbar).map(|(a, b)| 0.5 * (a + b)).collect();
    let sbar = wbar.iter().zip(&zbar).map(|(a, b)| 0.5 * (a - b)).collect();
    Physical { gamma: p.gamma, r: p.r, zeta, wbar, zbar, ubar, sbar }
}

/// Back to ξ on the samples with ζ > 0.
pub fn from_physical(ph: &Physical) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut xi = Vec::new();
    let mut w = Vec::new();
    let mut z = Vec::new();
    for i in 0..ph.zeta.len() {
        let s = ph.zeta[i];
        if s > 0.0 {
            xi.push(s.ln());
            w.push(ph.wbar[i] / s);
            z.push(ph.zbar[i] / s);
        }
    }
    (xi, w, z)
}

/// Derivative on a nonuniform grid: one-sided at the ends, three-point inside.
pub fn gradient(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut d = vec![0.0; n];
    if n < 2 {
        return d;
    }
    d[0] = (y[1] - y[0]) / (x[1] - x[0]);
    d[n - 1] = (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
    for i in 1..n - 1 {
        let (h0, h1) = (x[i] - x[i - 1], x[i + 1] - x[i]);
        d[i] = (-h1 / (h0 * (h0 + h1))) * y[i - 1] + ((h1 - h0) / (h0 * h1)) * y[i] + (h0 / (h1 * (h0 + h1))) * y[i + 1];
    }
    d
}

#[derive(Clone, Debug, Serialize)]
pub struct Diagnostics {
    /// min over the grid of 1 + ∂ζŪ − α|∂ζS̄|.
    pub damping_min: f64,
    pub damping_argmin: f64,
    pub sbar_min: f64,
    /// Least-squares slope of log|W̄| against log ζ on the last `decay_window` units of log ζ.
    pub decay_exponent: Option<f64>,
    pub decay_expected: f64,
    pub decay_window: f64,
    /// min of ζ·D_Z over samples with ζ > 1.
    pub zeta_dz_min: Option<f64>,
    /// W strictly decreasing in ξ over ξ < 0.
    pub w_decreasing_inside: bool,
}

pub const DECAY_WINDOW: f64 = 4.0;

pub fn diagnostics(ph: &Physical) -> Result<Diagnostics> {
    let n = ph.zeta.len();
    if n < 3 {
        return Err(Error::InvalidArgument("diagnostics need at least three samples".into()));
    }
    let alpha = (ph.gamma - 1.0) / 2.0;
    let du = gradient(&ph.zeta, &ph.ubar);
    let ds = gradient(&ph.zeta, &ph.sbar);
    let (mut dmin, mut arg) = (f64::INFINITY, 0.0);
    for i in 0..n {
        let v = 1.0 + du[i] - alpha * ds[i].abs();
        if v < dmin {
            dmin = v;
            arg = ph.zeta[i];
        }
    }
    let sbar_min = ph.sbar.iter().cloned().fold(f64::INFINITY, f64::min);

    let top = ph.zeta[n - 1].ln();
    let pts: Vec<(f64, f64)> = ph
        .zeta
        .iter()
        .zip(&ph.wbar)
        .filter(|(s, w)| **s > 0.0 && s.ln() >= top - DECAY_WINDOW && **w != 0.0)
        .map(|(s, w)| (s.ln(), w.abs().ln()))
        .collect();
    let decay_exponent = (pts.len() >= 3).then(|| {
        let m = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
        let (mx, my) = (sx / m, sy / m);
        let (num, den) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx).powi(2)));
        num / den
    });

    let field = Field::new(ph.gamma, ph.r);
    let zeta_dz_min = (0..n)
        .filter(|&i| ph.zeta[i] > 1.0)
        .map(|i| {
            let s = ph.zeta[i];
            s * field.dz(ph.wbar[i] / s, ph.zbar[i] / s)
        })
        .reduce(f64::min);

    let inside: Vec<f64> = (0..n).filter(|&i| ph.zeta[i] > 0.0 && ph.zeta[i] < 1.0).map(|i| ph.wbar[i] / ph.zeta[i]).collect();
    let w_decreasing_inside = inside.windows(2).all(|p| p[1] < p[0]);

    Ok(Diagnostics {
        damping_min: dmin,
        damping_argmin: arg,
        sbar_min,
        decay_exponent,
        decay_expected: 1.0 - ph.r,
        decay_window: DECAY_WINDOW,
        zeta_dz_min,
        w_decreasing_inside,
    })
}
