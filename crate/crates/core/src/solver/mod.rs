//! Floating-point integration of the profile ODE, shooting for the admissible r, and profile post-processing.

mod ode;
mod phase;
mod profile;
mod shoot;

use serde::Serialize;

use crate::algebra::{self, GasParams};
use crate::error::{Error, Result};
use crate::series::{self, CoeffTable, Mode, OriginSeries};

pub use ode::{Denominator, Dopri5, Field, Stop, System, Trajectory, XiSystem, ZetaSystem};
pub use shoot::{calibrate_amplitude, classify, mismatch, shoot, Omega, Sample, ShootOptions, ShootResult};
pub use phase::{phase_portrait, Arrow, Marker, Nullcline, PhasePortrait, Window};
pub use profile::{assemble_profile, diagnostics, from_physical, gradient, to_physical, Diagnostics, Physical, DECAY_WINDOW};

/// Side of P_s: `Left` integrates towards ξ > 0 (outer region), `Right` towards ξ < 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegratorInfo {
    pub method: String,
    pub tol: f64,
    pub steps: usize,
    /// Signed offset of the series seed from the start point (ξ for P_s, ζ for the origin).
    pub seed: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Profile {
    pub gamma: f64,
    pub r: f64,
    pub xi: Vec<f64>,
    pub w: Vec<f64>,
    pub z: Vec<f64>,
    /// 𝒲(0) of the origin series, when the profile comes from the origin.
    pub amplitude: Option<f64>,
    pub integrator: IntegratorInfo,
    pub stop: Stop,
    /// Local error estimates per sample.
    pub err: Vec<f64>,
}

impl Profile {
    pub fn u(&self) -> Vec<f64> {
        self.w.iter().zip(&self.z).map(|(w, z)| 0.5 * (w + z)).collect()
    }

    pub fn s(&self) -> Vec<f64> {
        self.w.iter().zip(&self.z).map(|(w, z)| 0.5 * (w - z)).collect()
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    pub fn last(&self) -> (f64, f64, f64) {
        let i = self.len() - 1;
        (self.xi[i], self.w[i], self.z[i])
    }

    /// Linear interpolation of (W, Z) at ξ inside the sampled range.
    pub fn at(&self, xi: f64) -> Option<(f64, f64)> {
        let n = self.len();
        if n == 0 {
            return None;
        }
        let inc = self.xi[n - 1] >= self.xi[0];
        let pos = if inc {
            self.xi.partition_point(|&x| x < xi)
        } else {
            self.xi.partition_point(|&x| x > xi)
        };
        if pos == 0 {
            return (self.xi[0] == xi).then(|| (self.w[0], self.z[0]));
        }
        if pos >= n {
            return None;
        }
        let (x0, x1) = (self.xi[pos - 1], self.xi[pos]);
        let s = (xi - x0) / (x1 - x0);
        Some((self.w[pos - 1] + s * (self.w[pos] - self.w[pos - 1]), self.z[pos - 1] + s * (self.z[pos] - self.z[pos - 1])))
    }
}

/// Sonic-point series at (γ, r) as floating-point Taylor coefficients W_n/n!, Z_n/n!.
pub fn sonic_series(gamma: f64, r: f64, n_max: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let p = GasParams::from_f64(gamma, r, 128);
    let t = series::coeffs_at_ps(&p, n_max, Mode::Raw)?;
    Ok(scaled_f64(&t))
}

fn scaled_f64(t: &CoeffTable) -> (Vec<f64>, Vec<f64>) {
    (t.w_scaled.iter().map(|c| c.mid_f64()).collect(), t.z_scaled.iter().map(|c| c.mid_f64()).collect())
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

/// Root-test radius estimate from the upper half of the coefficients.
pub fn radius_estimate(c: &[f64]) -> f64 {
    let n = c.len() - 1;
    let mut best = f64::INFINITY;
    for (i, a) in c.iter().enumerate().skip((n / 2).max(2)) {
        if *a != 0.0 {
            best = best.min(a.abs().powf(-1.0 / i as f64));
        }
    }
    best
}

const SEED_CAP: f64 = 0.05;
/// Step cap as a fraction of the distance to the nearest sonic line, measured in ξ.
pub const SONIC_SCALE: f64 = 0.1;
const MIN_SEED: f64 = 1e-6;

/// Integrates the smooth solution from P_s. The start is taken from `table` at
/// ξ = ±min(0.05, ρ/4) where ρ is the estimated series radius.
pub fn integrate_from_ps(field: Field, direction: Direction, table: &CoeffTable, xi_end: f64, tol: f64) -> Result<Profile> {
    if table.n_max < 10 {
        return Err(Error::InvalidArgument(format!("series table needs order >= 10, got {}", table.n_max)));
    }
    let (cw, cz) = scaled_f64(table);
    let rho = radius_estimate(&cw).min(radius_estimate(&cz));
    let h = SEED_CAP.min(rho / 4.0);
    if !(h >= MIN_SEED) {
        return Err(Error::SeriesRadiusTooSmall);
    }
    let seed = match direction {
        Direction::Left => h,
        Direction::Right => -h,
    };
    if (xi_end - seed) * seed <= 0.0 {
        return Err(Error::InvalidArgument(format!("xi_end {xi_end} lies on the wrong side of the seed {seed}")));
    }
    let y0 = [horner(&cw, seed), horner(&cz, seed)];
    let mut dp = Dopri5::new(tol);
    dp.sonic_scale = SONIC_SCALE;
    let (tr, stop) = dp.integrate(&XiSystem(field), seed, y0, xi_end);
    let mut xi = vec![0.0];
    let mut w = vec![cw[0]];
    let mut z = vec![cz[0]];
    let mut err = vec![0.0];
    xi.extend(&tr.t);
    w.extend(tr.y.iter().map(|y| y[0]));
    z.extend(tr.y.iter().map(|y| y[1]));
    err.extend(&tr.err);
    Ok(Profile {
        gamma: field.gamma,
        r: field.r,
        xi,
        w,
        z,
        amplitude: None,
        integrator: IntegratorInfo { method: "dopri5".into(), tol, steps: tr.t.len() - 1, seed },
        stop,
        err,
    })
}

/// Number of origin-series terms used for seeding.
pub const ORIGIN_TERMS: usize = 40;

/// Integrates the solution smooth at the origin with 𝒲(0) = `amplitude` outward in ζ up to `zeta_end`.
/// The returned profile is in ξ = log ζ with W = 𝒲(ζ)/ζ, Z = −𝒲(−ζ)/ζ.
pub fn integrate_from_origin(field: Field, amplitude: f64, zeta_end: f64, tol: f64) -> Result<Profile> {
    if !(amplitude > 0.0) {
        return Err(Error::InvalidArgument(format!("origin amplitude must be positive, got {amplitude}")));
    }
    let os = series::coeffs_at_origin(field.gamma, field.r, amplitude, ORIGIN_TERMS)?;
    let rho = os.radius_estimate();
    let z0 = SEED_CAP.min(rho / 4.0);
    if !(z0 >= MIN_SEED) {
        return Err(Error::SeriesRadiusTooSmall);
    }
    if zeta_end <= z0 {
        return Err(Error::InvalidArgument(format!("zeta_end {zeta_end} must exceed the seed {z0}")));
    }
    let y0 = [os.eval(z0), -os.eval(-z0)];
    let mut dp = Dopri5::new(tol);
    dp.h_init = z0 * 1e-2;
    dp.h_max = 0.01;
    let (tr, stop) = dp.integrate(&ZetaSystem(field), z0, y0, zeta_end);
    let stop = match stop {
        Stop::SonicCrossing { t, which, w, z } => Stop::SonicCrossing { t: t.ln(), which, w: w / t, z: z / t },
        Stop::Escaped { t } => Stop::Escaped { t: t.ln() },
        Stop::StepLimit { t } => Stop::StepLimit { t: t.ln() },
        Stop::Reached => Stop::Reached,
    };
    Ok(Profile {
        gamma: field.gamma,
        r: field.r,
        xi: tr.t.iter().map(|t| t.ln()).collect(),
        w: tr.t.iter().zip(&tr.y).map(|(t, y)| y[0] / t).collect(),
        z: tr.t.iter().zip(&tr.y).map(|(t, y)| y[1] / t).collect(),
        amplitude: Some(amplitude),
        integrator: IntegratorInfo { method: "dopri5-zeta".into(), tol, steps: tr.t.len() - 1, seed: z0 },
        stop,
        err: tr.t.iter().zip(&tr.err).map(|(t, e)| e / t).collect(),
    })
}

/// Origin series for the given field and amplitude.
pub fn origin_series(field: Field, amplitude: f64) -> Result<OriginSeries> {
    series::coeffs_at_origin(field.gamma, field.r, amplitude, ORIGIN_TERMS)
}

/// Sonic point (W0, Z0) in floating point.
pub fn sonic_point_f64(gamma: f64, r: f64) -> Result<(f64, f64)> {
    let s = algebra::sonic_point(&GasParams::from_f64(gamma, r, 128))?;
    Ok((s.w0.mid_f64(), s.z0.mid_f64()))
}
