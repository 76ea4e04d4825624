//! Closed forms in the raw (γ, r) chart: the D/N fields, the sonic point,
//! the eigenvalue ratio k(r), r*(γ) and the off-axis equilibrium.

use rug::Float;

use crate::error::{Error, Result};
use crate::rigor::{Interval, Sign};

#[derive(Clone, Debug)]
pub struct GasParams {
    pub gamma: Interval,
    pub r: Interval,
    pub alpha: Interval,
}

impl GasParams {
    pub fn new(gamma: Interval, r: Interval) -> Self {
        let alpha = (&gamma - 1i64).div_int(2);
        GasParams { gamma, r, alpha }
    }

    pub fn from_f64(gamma: f64, r: f64, prec: u32) -> Self {
        GasParams::new(Interval::point(gamma, prec), Interval::point(r, prec))
    }

    /// γ = num/den enclosed exactly, r as a double.
    pub fn ratio_gamma(num: i64, den: i64, r: f64, prec: u32) -> Self {
        GasParams::new(Interval::ratio(num, den, prec), Interval::point(r, prec))
    }

    pub fn with_r(&self, r: Interval) -> Self {
        GasParams::new(self.gamma.clone(), r)
    }

    pub fn prec(&self) -> u32 {
        self.gamma.prec().max(self.r.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        GasParams::new(self.gamma.with_prec(prec), self.r.with_prec(prec))
    }
}

#[derive(Clone, Debug)]
pub struct FieldValues {
    pub dw: Interval,
    pub dz: Interval,
    pub nw: Interval,
    pub nz: Interval,
}

pub fn d_w(p: &GasParams, w: &Interval, z: &Interval) -> Interval {
    1i64 + (w + z + &p.alpha * (w - z)).div_int(2)
}

pub fn d_z(p: &GasParams, w: &Interval, z: &Interval) -> Interval {
    1i64 + (w + z - &p.alpha * (w - z)).div_int(2)
}

pub fn n_w(p: &GasParams, w: &Interval, z: &Interval) -> Interval {
    let a = &p.alpha;
    let lin = &p.r + ((1i64 + a.mul_int(2)) * w + (1i64 - a) * z).div_int(2);
    -(lin * w) + (a * z.square()).div_int(2)
}

pub fn n_z(p: &GasParams, w: &Interval, z: &Interval) -> Interval {
    let a = &p.alpha;
    let lin = &p.r + ((1i64 - a) * w + (1i64 + a.mul_int(2)) * z).div_int(2);
    -(lin * z) + (a * w.square()).div_int(2)
}

pub fn fields_dn(p: &GasParams, w: &Interval, z: &Interval) -> FieldValues {
    FieldValues {
        dw: d_w(p, w, z),
        dz: d_z(p, w, z),
        nw: n_w(p, w, z),
        nz: n_z(p, w, z),
    }
}

/// Constant gradient of D_W as (∂_W, ∂_Z).
pub fn grad_dw(p: &GasParams) -> (Interval, Interval) {
    ((1i64 + &p.alpha).div_int(2), (1i64 - &p.alpha).div_int(2))
}

pub fn grad_dz(p: &GasParams) -> (Interval, Interval) {
    ((1i64 - &p.alpha).div_int(2), (1i64 + &p.alpha).div_int(2))
}

pub fn grad_nw(p: &GasParams, w: &Interval, z: &Interval) -> (Interval, Interval) {
    let a = &p.alpha;
    let half_1ma = (1i64 - a).div_int(2);
    (
        -&p.r - (1i64 + a.mul_int(2)) * w - &half_1ma * z,
        -(&half_1ma * w) + a * z,
    )
}

pub fn grad_nz(p: &GasParams, w: &Interval, z: &Interval) -> (Interval, Interval) {
    let a = &p.alpha;
    let half_1ma = (1i64 - a).div_int(2);
    (
        a * w - &half_1ma * z,
        -&p.r - &half_1ma * w - (1i64 + a.mul_int(2)) * z,
    )
}

/// Hessian of N_W, row-major [[∂WW, ∂WZ], [∂ZW, ∂ZZ]].
pub fn hess_nw(p: &GasParams) -> [[Interval; 2]; 2] {
    let a = &p.alpha;
    let off = -(1i64 - a).div_int(2);
    [[-(1i64 + a.mul_int(2)), off.clone()], [off, a.clone()]]
}

pub fn hess_nz(p: &GasParams) -> [[Interval; 2]; 2] {
    let a = &p.alpha;
    let off = -(1i64 - a).div_int(2);
    [[a.clone(), off.clone()], [off, -(1i64 + a.mul_int(2))]]
}

#[derive(Clone, Debug)]
pub struct SonicData {
    pub w0: Interval,
    pub z0: Interval,
    pub wbar0: Interval,
    pub zbar0: Interval,
    pub r1: Interval,
    pub r2: Interval,
    pub w1: Interval,
    pub z1: Interval,
    pub z1_check: Interval,
    pub k: Result<Interval>,
    pub dw0: Interval,
    pub dz1: Interval,
    pub dz1_check: Interval,
    /// ∇N_Z at P_s as (∂_W, ∂_Z).
    pub grad_nz0: (Interval, Interval),
}

/// The square root R1; vanishes at r = r*.
pub fn r1(p: &GasParams) -> Result<Interval> {
    r1_squared(p).sqrt()
}

pub fn r1_squared(p: &GasParams) -> Interval {
    let (g, r) = (&p.gamma, &p.r);
    g.square() * (r - 3i64).square() - 2i64 * g * (3i64 * r.square() - 6i64 * r + 7i64)
        + (9i64 * r.square() - 14i64 * r + 9i64)
}

/// Sonic point coordinates (W0, Z0) for a given sign choice of R1.
fn sonic_coords(p: &GasParams, r1: &Interval) -> (Interval, Interval) {
    let (g, r) = (&p.gamma, &p.r);
    let den = 4i64 * (g - 1i64).square();
    let g2 = g.square();
    let w0 = (&g2 * r + (g + 1i64) * r1 - 3i64 * &g2 - 2i64 * g * r + 10i64 * g - 3i64 * r - 3i64) / &den;
    let z0 = (&g2 * r + (g - 3i64) * r1 - 3i64 * &g2 - 6i64 * g * r + 6i64 * g + 9i64 * r - 7i64) / &den;
    (w0, z0)
}

/// R1² − 4(γ−1)² = (r−1)·M.
fn r1_shift_factor(p: &GasParams) -> Interval {
    let (g, r) = (&p.gamma, &p.r);
    g.square() * (r - 5i64) - 6i64 * g * (r - 1i64) + 9i64 * r - 5i64
}

/// Radicand of R2 with the factor (r−1) pulled out, so it vanishes exactly at r = 1.
pub fn r2_radicand(p: &GasParams, r1: &Interval) -> Interval {
    let (g, r) = (&p.gamma, &p.r);
    let g2 = g.square();
    let g3 = &g2 * g;
    let hq = -(3i64 * &g3 * r - 9i64 * &g3 - 20i64 * &g2 * r + 22i64 * &g2 + 31i64 * g * r - 25i64 * g
        - 10i64 * r
        + 8i64);
    let l = 9i64 * (g - 2i64) * g + ((2i64 - 3i64 * g) * g + 5i64) * r + 5i64;
    let m = r1_shift_factor(p);
    let shifted = r1 + 2i64 * (g - 1i64);
    (r - 1i64) * (hq + l * m / shifted)
}

pub fn r2(p: &GasParams, r1: &Interval) -> Result<Interval> {
    r2_radicand(p, r1).sqrt()?.try_div(&(&p.gamma - 1i64))
}

/// E = (1+γ)(r−1)/(γ−1) − 4, the shared part of k's numerator and denominator.
fn k_offset(p: &GasParams) -> Interval {
    let (g, r) = (&p.gamma, &p.r);
    (1i64 + g) * (r - 1i64) / (g - 1i64) - 4i64
}

fn k_from(p: &GasParams, r2: &Interval) -> Result<Interval> {
    let e = k_offset(p);
    let den = &e + r2;
    if den.contains_zero() {
        return Err(Error::AtRStar);
    }
    (e - r2).try_div(&den)
}

pub fn sonic_point(p: &GasParams) -> Result<SonicData> {
    sonic_point_with_r1(p, r1(p)?)
}

/// Sonic data at r = r*(γ) for γ < 5/3, where R1 = 0 exactly. Taking the square root of
/// the R1² enclosure there would cost half the working precision.
pub fn sonic_point_at_r_star(gamma: &Interval) -> Result<SonicData> {
    if !gamma.certainly_lt(&Interval::ratio(5, 3, gamma.prec())) {
        return Err(Error::InvalidArgument("R1 vanishes at r* only for gamma < 5/3".into()));
    }
    let p = GasParams::new(gamma.clone(), r_star(gamma)?);
    sonic_point_with_r1(&p, Interval::zero(gamma.prec()))
}

fn sonic_point_with_r1(p: &GasParams, r1: Interval) -> Result<SonicData> {
    let (g, r) = (&p.gamma, &p.r);
    let (w0, z0) = sonic_coords(p, &r1);
    let (wbar0, zbar0) = sonic_coords(p, &-&r1);
    let r2 = r2(p, &r1)?;
    let gm1 = g - 1i64;
    let w1 = (g * (-3i64 * (&r1 + 6i64) - 3i64 * g * (r - 3i64) + 2i64 * r) + &r1 + 5i64 * r + 5i64)
        / (4i64 * gm1.square());
    let base = 3i64 - 5i64 * g + (1i64 + g) * r;
    let dz1 = -(&base + &gm1 * &r2) / (4i64 * &gm1);
    let dz1_check = -(&base - &gm1 * &r2) / (4i64 * &gm1);
    let (b, a) = grad_dz(p);
    let z1 = (&dz1 - &b * &w1).try_div(&a)?;
    let z1_check = (&dz1_check - &b * &w1).try_div(&a)?;
    let dw0 = d_w(p, &w0, &z0);
    let grad_nz0 = grad_nz(p, &w0, &z0);
    let k = k_from(p, &r2);
    Ok(SonicData {
        w0,
        z0,
        wbar0,
        zbar0,
        r1,
        r2,
        w1,
        z1,
        z1_check,
        k,
        dw0,
        dz1,
        dz1_check,
        grad_nz0,
    })
}

/// k(r) = Ď_{Z,1}/D_{Z,1}; AtRStar when the denominator is not bounded away from 0.
pub fn k_of_r(p: &GasParams) -> Result<Interval> {
    let r1 = r1(p)?;
    let r2 = r2(p, &r1)?;
    k_from(p, &r2)
}

fn r_star_low(g: &Interval) -> Result<Interval> {
    let s = (Interval::int(2, g.prec()).try_div(&(g - 1i64)))?.sqrt()?;
    Ok(1i64 + Interval::int(2, g.prec()) / (s + 1i64).square())
}

fn r_star_high(g: &Interval) -> Result<Interval> {
    let s3 = Interval::int(3, g.prec()).sqrt()?;
    (3i64 * g - 1i64).try_div(&(2i64 + s3 * (g - 1i64)))
}

/// r*(γ), switching formulas at γ = 5/3. A γ-interval straddling 5/3 gets the hull of both pieces.
pub fn r_star(gamma: &Interval) -> Result<Interval> {
    if !(gamma.certainly_gt(&Interval::one(gamma.prec()))) {
        return Err(Error::InvalidArgument("gamma must exceed 1".into()));
    }
    let split = Interval::ratio(5, 3, gamma.prec());
    if gamma.hi() <= split.lo() {
        return r_star_low(gamma);
    }
    if gamma.lo() >= split.hi() {
        return r_star_high(gamma);
    }
    let left = Interval::new(gamma.lo().clone(), split.hi().clone())?;
    let right = Interval::new(split.lo().clone(), gamma.hi().clone())?;
    Ok(r_star_low(&left)?.hull(&r_star_high(&right)?))
}

/// Both branches of r* at one γ; used for the continuity check at 5/3.
pub fn r_star_branches(gamma: &Interval) -> Result<(Interval, Interval)> {
    Ok((r_star_low(gamma)?, r_star_high(gamma)?))
}

fn k_minus_j_sign(gamma: &Interval, r: &Float, j: i64) -> Result<Sign> {
    let p = GasParams::new(gamma.clone(), Interval::point_float(r).with_prec(gamma.prec()));
    Ok((k_of_r(&p)? - j).sign())
}

/// r_j with k(r_j) = j, enclosed by certified bisection on [1, r*).
pub fn invert_k(gamma: &Interval, j: i64, tol: f64) -> Result<Interval> {
    if j < 1 || !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("invert_k needs j >= 1 and tol > 0, got j={j}")));
    }
    let prec = gamma.prec();
    if j == 1 {
        return Ok(Interval::one(prec));
    }
    let rs = r_star(gamma)?;
    // Walk the upper end down from r* until k - j > 0 is certified.
    let mut hi = None;
    let mut delta = 1e-14;
    while delta < 1.0 {
        let cand = Float::with_val(prec, rs.lo() - delta);
        if cand <= 1.0 {
            break;
        }
        if let Ok(Sign::Positive) = k_minus_j_sign(gamma, &cand, j) {
            hi = Some(cand);
            break;
        }
        delta *= 8.0;
    }
    let mut hi = hi.ok_or(Error::BisectionStall(rs.width_f64()))?;
    let mut lo = Float::with_val(prec, 1);
    while Float::with_val(prec, &hi - &lo) > tol {
        let mid = Float::with_val(prec, &lo + &hi) / 2u32;
        match k_minus_j_sign(gamma, &mid, j)? {
            Sign::Positive => hi = mid,
            Sign::Negative => lo = mid,
            Sign::Ambiguous => {
                let q = tol / 8.0;
                let a = Float::with_val(prec, &mid - q);
                let b = Float::with_val(prec, &mid + q);
                if k_minus_j_sign(gamma, &a, j)? == Sign::Negative
                    && k_minus_j_sign(gamma, &b, j)? == Sign::Positive
                {
                    lo = a;
                    hi = b;
                    break;
                }
                return Err(Error::BisectionStall(tol / 4.0));
            }
        }
    }
    Interval::new(lo, hi)
}

/// The equilibrium P_◎ = (X0, Y0) in {W > Z} and an eigendirection (X1, Y1) there.
#[derive(Clone, Debug)]
pub struct EyePoint {
    pub x0: Interval,
    pub y0: Interval,
    pub x1: Interval,
    pub y1: Interval,
}

pub fn p_eye(p: &GasParams) -> Result<EyePoint> {
    let (g, r) = (&p.gamma, &p.r);
    let prec = p.prec();
    let s3 = Interval::int(3, prec).sqrt()?;
    let den = 3i64 * g - 1i64;
    let x0 = (2i64 * (&s3 - 1i64) * r).try_div(&den)?;
    let y0 = -(2i64 * (&s3 + 1i64) * r).try_div(&den)?;
    let g2 = g.square();
    let rad = 2i64 * (53i64 - 3i64 * g * (45i64 * &g2 * g - 110i64 * g + 88i64)) * r
        + (27i64 * &g2 - 30i64 * g + 7i64).square()
        + (3i64 * g * (g * (3i64 * g * (g + 20i64) - 94i64) + 28i64) + 25i64) * r.square();
    let theta = -rad.sqrt()? + 3i64 * &s3 * &g2 * (r - 5i64) + 2i64 * &s3 * g * (r + 7i64) - &s3 * (r + 3i64);
    let x1 = -2i64
        * (3i64 * g + 4i64 * &s3 - 9i64)
        * (3i64 * &g2 * (r.square() - 3i64) - 6i64 * g * (r - 2i64) * r + 6i64 * g - r * (r + 4i64) - 1i64);
    let y1 = &theta
        * (3i64 * (&s3 - 1i64) * g * r - (&s3 - 3i64) * (3i64 * g - 1i64) - (3i64 + &s3) * r);
    Ok(EyePoint { x0, y0, x1, y1 })
}
