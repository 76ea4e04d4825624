//! Shooting for the admissible r between consecutive resonances r_n < r < r_{n+1}.

use serde::Serialize;

use crate::algebra::{self, GasParams};
use crate::error::{Error, Result};
use crate::rigor::Interval;
use crate::series::{self, Mode};

use super::{integrate_from_origin, integrate_from_ps, Denominator, Direction, Field, Profile, Stop};

/// Exit class of the rightward smooth solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Omega {
    /// Exits through D_Z = 0 to the right of P_s.
    One,
    /// Exits through D_W = 0.
    Two,
    /// No crossing before the classification horizon.
    Undetermined,
}

impl Omega {
    fn sign(self) -> Option<f64> {
        match self {
            Omega::One => Some(1.0),
            Omega::Two => Some(-1.0),
            Omega::Undetermined => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ShootOptions {
    /// Matching point in ζ.
    pub zeta_match: f64,
    /// |e| target.
    pub tol: f64,
    /// Integrator tolerance.
    pub ode_tol: f64,
    /// Sonic series order used for seeding.
    pub series_order: usize,
    /// Bracket inset as a fraction of r_{n+1} − r_n.
    pub inset: f64,
    /// Most negative ξ followed by the classifier.
    pub classify_horizon: f64,
    pub max_iter: usize,
}

impl Default for ShootOptions {
    fn default() -> Self {
        ShootOptions {
            zeta_match: 0.5,
            tol: 1e-9,
            ode_tol: 1e-12,
            series_order: 20,
            inset: 0.02,
            classify_horizon: -30.0,
            max_iter: 200,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Sample {
    pub r: f64,
    pub omega: Omega,
    /// Mismatch Z* − Z*^o, when the rightward solution reaches the matching point.
    pub e: Option<f64>,
    pub amplitude: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShootResult {
    pub gamma: f64,
    pub n: u32,
    /// (r_n, r_{n+1}).
    pub resonances: (f64, f64),
    /// Starting bracket (r_d, r_u).
    pub initial_bracket: (f64, f64),
    pub initial_classes: (Omega, Omega),
    /// Final bracket with e of opposite signs at its ends.
    pub r_n_bracket: (f64, f64),
    pub r_found: f64,
    pub e_found: f64,
    pub amplitude: f64,
    pub matched_at: f64,
    pub e_values: Vec<Sample>,
}

fn table(gamma: f64, r: f64, order: usize) -> Result<series::CoeffTable> {
    series::coeffs_at_ps(&GasParams::from_f64(gamma, r, 128), order, Mode::Raw)
}

/// Exit class of the rightward solution from P_s.
pub fn classify(gamma: f64, r: f64, opts: &ShootOptions) -> Result<Omega> {
    let t = table(gamma, r, opts.series_order)?;
    let p = integrate_from_ps(Field::new(gamma, r), Direction::Right, &t, opts.classify_horizon, opts.ode_tol)?;
    Ok(match p.stop {
        Stop::SonicCrossing { which: Denominator::DZ, .. } => Omega::One,
        Stop::SonicCrossing { which: Denominator::DW, .. } => Omega::Two,
        _ => Omega::Undetermined,
    })
}

/// Amplitude A for which the origin solution has W = `w_target` at ζ = `zeta_m`, by secant in log A.
pub fn calibrate_amplitude(field: Field, w_target: f64, zeta_m: f64, ode_tol: f64) -> Result<(f64, Profile)> {
    // Solutions for different A are ξ-translates: W_A(ξ) = W_1(ξ − log A). Locate W = w_target on W_1.
    let unit = integrate_from_origin(field, 1.0, 1e6, ode_tol)?;
    let hit = (1..unit.len()).find(|&i| (unit.w[i - 1] - w_target) * (unit.w[i] - w_target) <= 0.0);
    let Some(i) = hit else {
        return Err(Error::InvalidArgument(format!("origin orbit never reaches W = {w_target}")));
    };
    let s = (w_target - unit.w[i - 1]) / (unit.w[i] - unit.w[i - 1]);
    let xi_hit = unit.xi[i - 1] + s * (unit.xi[i] - unit.xi[i - 1]);
    let xi_m = zeta_m.ln();
    let mismatch = |la: f64| -> Result<(f64, Profile)> {
        let p = integrate_from_origin(field, la.exp(), zeta_m, ode_tol)?;
        if p.stop != Stop::Reached {
            return Err(Error::InvalidArgument("origin solution stops before the matching point".into()));
        }
        Ok((p.last().1 - w_target, p))
    };
    let mut x0 = xi_m - xi_hit;
    let (mut f0, mut p0) = mismatch(x0)?;
    let mut x1 = x0 + 1e-3;
    for _ in 0..40 {
        if f0.abs() <= ode_tol * 10.0 * (1.0 + w_target.abs()) {
            return Ok((x0.exp(), p0));
        }
        let (f1, p1) = match mismatch(x1) {
            Ok(v) => v,
            Err(_) => {
                x1 = 0.5 * (x0 + x1);
                continue;
            }
        };
        if f1 == f0 {
            return Ok((x1.exp(), p1));
        }
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        x0 = x1;
        f0 = f1;
        p0 = p1;
        x1 = x2;
    }
    Ok((x0.exp(), p0))
}

/// Mismatch e(r) = Z* − Z*^o at ζ_m, with the amplitude it used.
pub fn mismatch(gamma: f64, r: f64, opts: &ShootOptions) -> Result<Option<(f64, f64)>> {
    let field = Field::new(gamma, r);
    let t = table(gamma, r, opts.series_order)?;
    let xi_m = opts.zeta_match.ln();
    let right = integrate_from_ps(field, Direction::Right, &t, xi_m, opts.ode_tol)?;
    if right.stop != Stop::Reached {
        return Ok(None);
    }
    let (_, w_star, z_star) = right.last();
    match calibrate_amplitude(field, w_star, opts.zeta_match, opts.ode_tol) {
        Ok((a, p)) => Ok(Some((z_star - p.last().2, a))),
        Err(_) => Ok(None),
    }
}

fn sample(gamma: f64, r: f64, opts: &ShootOptions) -> Result<Sample> {
    let omega = classify(gamma, r, opts)?;
    let m = mismatch(gamma, r, opts)?;
    Ok(Sample { r, omega, e: m.map(|v| v.0), amplitude: m.map(|v| v.1) })
}

/// Sign used to move the bracket: e when available, the exit class otherwise.
fn side(s: &Sample) -> Option<f64> {
    match s.e {
        Some(e) if e != 0.0 => Some(e.signum()),
        Some(_) => Some(0.0),
        None => s.omega.sign(),
    }
}

/// Finds r^(n) for odd n by bisection on the exit class and the mismatch, then regula falsi on e.
pub fn shoot(gamma: f64, n: u32, opts: &ShootOptions) -> Result<ShootResult> {
    if n % 2 == 0 || n < 3 {
        return Err(Error::InvalidArgument(format!("n must be odd and at least 3, got {n}")));
    }
    let g = Interval::from_f64s(gamma, gamma, 128)?;
    let rn = algebra::invert_k(&g, n as i64, 1e-20)?.mid_f64();
    let rn1 = algebra::invert_k(&g, n as i64 + 1, 1e-20)?.mid_f64();
    let d = opts.inset * (rn1 - rn);
    let (mut lo, mut hi) = (sample(gamma, rn + d, opts)?, sample(gamma, rn1 - d, opts)?);
    let initial_bracket = (lo.r, hi.r);
    let initial_classes = (lo.omega, hi.omega);
    let mut trace = vec![lo.clone(), hi.clone()];
    let slo = match (side(&lo), side(&hi)) {
        (Some(a), Some(b)) if a * b < 0.0 => a,
        _ => {
            return Err(Error::BracketInvalid(format!(
                "endpoints r = {} ({:?}) and r = {} ({:?}) do not separate",
                lo.r, lo.omega, hi.r, hi.omega
            )))
        }
    };
    // Bisection until e is defined with opposite signs at both ends.
    let mut iter = 0;
    while !(lo.e.is_some() && hi.e.is_some()) && iter < opts.max_iter {
        let mid = sample(gamma, 0.5 * (lo.r + hi.r), opts)?;
        trace.push(mid.clone());
        match side(&mid) {
            Some(s) if s == 0.0 => {
                lo = mid.clone();
                hi = mid;
                break;
            }
            Some(s) if s == slo => lo = mid,
            Some(_) => hi = mid,
            None => {
                return Err(Error::BracketInvalid(format!("r = {} has neither an exit class nor a mismatch", mid.r)))
            }
        }
        iter += 1;
    }
    // Illinois regula falsi on e.
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (a.e.unwrap(), b.e.unwrap());
    let mut best = if fa.abs() < fb.abs() { a.clone() } else { b.clone() };
    while best.e.unwrap().abs() > opts.tol && (b.r - a.r).abs() > 4.0 * f64::EPSILON * b.r && iter < opts.max_iter {
        let mut r = (a.r * fb - b.r * fa) / (fb - fa);
        if !(r > a.r.min(b.r) && r < a.r.max(b.r)) {
            r = 0.5 * (a.r + b.r);
        }
        let Some((fc, amp)) = mismatch(gamma, r, opts)? else {
            return Err(Error::BracketInvalid(format!("mismatch undefined at r = {r} inside the bracket")));
        };
        let m = Sample { r, omega: Omega::Undetermined, e: Some(fc), amplitude: Some(amp) };
        trace.push(m.clone());
        if fc.abs() < best.e.unwrap().abs() {
            best = m.clone();
        }
        if fc * fb < 0.0 {
            a = b;
            fa = fb;
        } else {
            fa *= 0.5;
        }
        b = m;
        fb = fc;
        iter += 1;
    }
    Ok(ShootResult {
        gamma,
        n,
        resonances: (rn, rn1),
        initial_bracket,
        initial_classes,
        r_n_bracket: (a.r.min(b.r), a.r.max(b.r)),
        r_found: best.r,
        e_found: best.e.unwrap(),
        amplitude: best.amplitude.unwrap(),
        matched_at: opts.zeta_match,
        e_values: trace,
    })
}
