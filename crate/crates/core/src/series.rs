//! Taylor coefficients at the sonic point, the expansion at the origin and the
//! long high-precision run at γ = 7/5, r = r*.

use crate::algebra::{self, GasParams, SonicData};
use crate::error::{Error, Result};
use crate::rigor::{IPoly, Interval, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Raw,
    /// W_n = W_n^s/γ̃ + W_n^ns, Z_n likewise, for γ close to 1.
    SingularSplit,
    /// The entry at index j stores Z_j·(k−j), finite at r = r_j.
    Normalized(usize),
}

#[derive(Clone, Debug)]
pub struct SplitParts {
    pub ws: Vec<Interval>,
    pub wns: Vec<Interval>,
    pub zs: Vec<Interval>,
    pub zns: Vec<Interval>,
}

/// Taylor data at P_s. `w`, `z`, `dw`, `dz`, `nw`, `nz` hold derivatives
/// (W(ξ) = Σ W_n ξⁿ/n!); the `*_scaled` vectors hold W_n/n! and friends.
#[derive(Clone, Debug)]
pub struct CoeffTable {
    pub n_max: usize,
    pub mode: Mode,
    pub w: Vec<Interval>,
    pub z: Vec<Interval>,
    pub dw: Vec<Interval>,
    pub dz: Vec<Interval>,
    pub nw: Vec<Interval>,
    pub nz: Vec<Interval>,
    pub w_scaled: Vec<Interval>,
    pub z_scaled: Vec<Interval>,
    pub split: Option<SplitParts>,
    pub k: Option<Interval>,
}

struct Scaled {
    w: Vec<Interval>,
    z: Vec<Interval>,
    dw: Vec<Interval>,
    dz: Vec<Interval>,
    nw: Vec<Interval>,
    nz: Vec<Interval>,
}

fn dot(a: &(Interval, Interval), x: &Interval, y: &Interval) -> Interval {
    &a.0 * x + &a.1 * y
}

fn quad(h: &[[Interval; 2]; 2], x: (&Interval, &Interval), y: (&Interval, &Interval)) -> Interval {
    &h[0][0] * x.0 * y.0 + &h[0][1] * (x.0 * y.1 + x.1 * y.0) + &h[1][1] * x.1 * y.1
}

/// ½ Σ_{j=1}^{n-1} (w_j, z_j)·H·(w_{n-j}, z_{n-j}), summed over each unordered pair once.
fn quad_conv(h: &[[Interval; 2]; 2], w: &[Interval], z: &[Interval], n: usize, prec: u32) -> Interval {
    let mut acc = Interval::zero(prec);
    for j in 1..n {
        let i = n - j;
        if j > i {
            break;
        }
        let q = quad(h, (&w[j], &z[j]), (&w[i], &z[i]));
        acc = if j == i { acc + q.div_int(2) } else { acc + q };
    }
    acc
}

fn scaled_recurrence(p: &GasParams, s: &SonicData, n_max: usize, normalized_at: Option<usize>) -> Result<Scaled> {
    let prec = p.prec();
    if s.dw0.sign() == Sign::Ambiguous {
        return Err(Error::PrecisionExhausted("D_W(P_s) has no certified sign".into()));
    }
    let gdw = algebra::grad_dw(p);
    let gdz = algebra::grad_dz(p);
    let gnw = algebra::grad_nw(p, &s.w0, &s.z0);
    let gnz = s.grad_nz0.clone();
    let hw = algebra::hess_nw(p);
    let hz = algebra::hess_nz(p);
    let (b, _) = gdz.clone();
    let n = n_max.max(1);
    let mut w = Vec::with_capacity(n + 1);
    let mut z = Vec::with_capacity(n + 1);
    w.push(s.w0.clone());
    z.push(s.z0.clone());
    w.push(s.w1.clone());
    z.push(s.z1.clone());
    let mut dw = vec![s.dw0.clone(), dot(&gdw, &s.w1, &s.z1)];
    let mut dz = vec![algebra::d_z(p, &s.w0, &s.z0), s.dz1.clone()];
    let mut nw = vec![algebra::n_w(p, &s.w0, &s.z0), dot(&gnw, &s.w1, &s.z1)];
    let mut nz = vec![algebra::n_z(p, &s.w0, &s.z0), dot(&gnz, &s.w1, &s.z1)];
    for m in 2..=n_max {
        let mut acc = nw[m - 1].clone();
        for j in 0..=m - 2 {
            acc = acc - (&dw[m - 1 - j] * &w[j + 1]).mul_int(j as i64 + 1);
        }
        let wm = acc / (&dw[0] * m as i64);

        let mut rhs = &gnz.0 * &wm - &b * &wm * &z[1] + quad_conv(&hz, &w, &z, m, prec);
        for i in 2..m {
            rhs = rhs - (&dz[i] * &z[m - i + 1]).mul_int((m - i + 1) as i64);
        }
        if normalized_at == Some(m) {
            // z_m (m − k) D_{Z,1} = rhs, so z_m (k − m) = −rhs / D_{Z,1}.
            let zm = -rhs.try_div(&s.dz1).map_err(|_| Error::PrecisionExhausted("D_{Z,1} contains 0".into()))?;
            w.push(wm.clone());
            z.push(zm);
            dw.push(Interval::entire(prec));
            dz.push(Interval::entire(prec));
            nw.push(Interval::entire(prec));
            nz.push(Interval::entire(prec));
            continue;
        }
        let den = &s.dz1 * m as i64 - &s.dz1_check;
        if den.sign() == Sign::Ambiguous {
            return Err(Error::ResonantIndex(m));
        }
        let zm = rhs / den;
        dw.push(dot(&gdw, &wm, &zm));
        dz.push(dot(&gdz, &wm, &zm));
        nw.push(dot(&gnw, &wm, &zm) + quad_conv(&hw, &w, &z, m, prec));
        nz.push(dot(&gnz, &wm, &zm) + quad_conv(&hz, &w, &z, m, prec));
        w.push(wm);
        z.push(zm);
    }
    w.truncate(n_max + 1);
    z.truncate(n_max + 1);
    dw.truncate(n_max + 1);
    dz.truncate(n_max + 1);
    nw.truncate(n_max + 1);
    nz.truncate(n_max + 1);
    Ok(Scaled { w, z, dw, dz, nw, nz })
}

fn factorials(n: usize, prec: u32) -> Vec<Interval> {
    let mut out = Vec::with_capacity(n + 1);
    let mut f = Interval::one(prec);
    out.push(f.clone());
    for i in 1..=n {
        f = f.mul_int(i as i64);
        out.push(f.clone());
    }
    out
}

fn unscale(v: &[Interval], fact: &[Interval]) -> Vec<Interval> {
    v.iter().zip(fact).map(|(x, f)| x * f).collect()
}

/// Taylor coefficients of the smooth solution through P_s.
pub fn coeffs_at_ps(p: &GasParams, n_max: usize, mode: Mode) -> Result<CoeffTable> {
    if let Mode::Normalized(j) = mode {
        if j < 2 || n_max > j {
            return Err(Error::InvalidArgument(format!(
                "normalized mode needs 2 <= j and n_max <= j, got j={j}, n_max={n_max}"
            )));
        }
    }
    coeffs_from_sonic(p, algebra::sonic_point(p)?, n_max, mode)
}

/// As [`coeffs_at_ps`] with precomputed sonic data.
pub fn coeffs_from_sonic(p: &GasParams, s: SonicData, n_max: usize, mode: Mode) -> Result<CoeffTable> {
    let normalized_at = match mode {
        Mode::Normalized(j) => Some(j),
        _ => None,
    };
    let sc = scaled_recurrence(p, &s, n_max, normalized_at)?;
    let fact = factorials(n_max, p.prec());
    let w = unscale(&sc.w, &fact);
    let z = unscale(&sc.z, &fact);
    let split = if mode == Mode::SingularSplit { Some(singular_split(p, &w, &z)?) } else { None };
    Ok(CoeffTable {
        n_max,
        mode,
        dw: unscale(&sc.dw, &fact),
        dz: unscale(&sc.dz, &fact),
        nw: unscale(&sc.nw, &fact),
        nz: unscale(&sc.nz, &fact),
        w,
        z,
        w_scaled: sc.w,
        z_scaled: sc.z,
        split,
        k: s.k.ok(),
    })
}

/// Leading 1/γ̃ behaviour: W_n^s = (−1)ⁿ·2(1 − r̃), Z_n^s = −W_n^s.
/// The non-singular parts are the remainders W_n − W_n^s/γ̃.
fn singular_split(p: &GasParams, w: &[Interval], z: &[Interval]) -> Result<SplitParts> {
    let gt = &p.gamma - 1i64;
    let rt = (&p.r - 1i64).try_div(&gt)?;
    if !(rt.certainly_lt(&Interval::one(p.prec()))) {
        return Err(Error::OutOfChart("singular split needs r̃ < 1".into()));
    }
    let base = 2i64 * (1i64 - &rt);
    let mut ws = Vec::with_capacity(w.len());
    let mut zs = Vec::with_capacity(w.len());
    let mut wns = Vec::with_capacity(w.len());
    let mut zns = Vec::with_capacity(w.len());
    for n in 0..w.len() {
        let s = if n % 2 == 0 { base.clone() } else { -&base };
        wns.push(&w[n] - &s / &gt);
        zns.push(&z[n] + &s / &gt);
        zs.push(-&s);
        ws.push(s);
    }
    Ok(SplitParts { ws, wns, zs, zns })
}

impl CoeffTable {
    /// Rows (n, W, Z) for export.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &Interval, &Interval)> {
        self.w.iter().zip(&self.z).enumerate().map(|(n, (w, z))| (n, w, z))
    }

    /// Truncated series W(ξ), Z(ξ) as polynomials in ξ.
    pub fn series_polys(&self) -> (IPoly, IPoly) {
        (
            IPoly::new(self.w_scaled.clone()).named("xi"),
            IPoly::new(self.z_scaled.clone()).named("xi"),
        )
    }
}

/// D_W·W′ − N_W and D_Z·Z′ − N_Z with the truncated series substituted.
/// Coefficients below index n_max contain 0 when the table is consistent.
pub fn residual_polys(p: &GasParams, t: &CoeffTable) -> (IPoly, IPoly) {
    let (w, z) = t.series_polys();
    let prec = p.prec();
    let one = IPoly::constant(Interval::one(prec));
    let half = Interval::ratio(1, 2, prec);
    let a = &p.alpha;
    let sum = w.add(&z);
    let diff = w.sub(&z);
    let dw = one.add(&sum.add(&diff.scale(a)).scale(&half));
    let dz = one.add(&sum.sub(&diff.scale(a)).scale(&half));
    let lin_w = IPoly::constant(p.r.clone())
        .add(&w.scale(&(1i64 + a.mul_int(2))).add(&z.scale(&(1i64 - a))).scale(&half));
    let lin_z = IPoly::constant(p.r.clone())
        .add(&w.scale(&(1i64 - a)).add(&z.scale(&(1i64 + a.mul_int(2)))).scale(&half));
    let ha = a * &half;
    let nw = lin_w.mul(&w).neg().add(&z.mul(&z).scale(&ha));
    let nz = lin_z.mul(&z).neg().add(&w.mul(&w).scale(&ha));
    (dw.mul(&w.derive()).sub(&nw), dz.mul(&z.derive()).sub(&nz))
}

/// Per-index blow-up order of |Z_m| in 1/|k − n| from two tables on the same side of r_n.
#[derive(Clone, Debug, serde::Serialize)]
pub struct BlowupEntry {
    pub m: usize,
    pub order: f64,
    pub predicted: usize,
    pub flagged: bool,
}

pub fn asymptotic_blowup_exponent(a: &CoeffTable, b: &CoeffTable, n: usize) -> Result<Vec<BlowupEntry>> {
    let (ka, kb) = match (&a.k, &b.k) {
        (Some(x), Some(y)) => (x.mid_f64(), y.mid_f64()),
        _ => return Err(Error::InvalidArgument("tables need k".into())),
    };
    let (da, db) = ((ka - n as f64).abs(), (kb - n as f64).abs());
    if n < 2 || da == 0.0 || db == 0.0 || (da / db).ln().abs() < 1e-3 {
        return Err(Error::InvalidArgument("samples must straddle distinct distances from k = n".into()));
    }
    let top = a.n_max.min(b.n_max);
    Ok((1..=top)
        .map(|m| {
            let za = a.z[m].mid_f64().abs();
            let zb = b.z[m].mid_f64().abs();
            let order = (zb / za).ln() / (da / db).ln();
            let predicted = if m < n { 0 } else { (m - 1) / (n - 1) };
            BlowupEntry { m, order, predicted, flagged: order > predicted as f64 + 0.5 }
        })
        .collect())
}

/// Expansion 𝒲(ζ) = Σ wᵢ ζⁱ at the origin, smooth across ζ = 0.
#[derive(Clone, Debug)]
pub struct OriginSeries {
    pub amplitude: f64,
    pub w: Vec<f64>,
    pub v: Vec<f64>,
    pub g: Vec<f64>,
}

/// Coefficients from V·𝒲′ = G, where V = ζ + ½(𝒲(ζ) − 𝒲(−ζ) + α(𝒲(ζ) + 𝒲(−ζ))) and
/// G = −(r−1)𝒲 − (α/2ζ)(𝒲(ζ)² − 𝒲(−ζ)²).
pub fn coeffs_at_origin(gamma: f64, r: f64, amplitude: f64, n_max: usize) -> Result<OriginSeries> {
    if amplitude == 0.0 {
        return Err(Error::ZeroAmplitude);
    }
    let alpha = (gamma - 1.0) / 2.0;
    let v_of = |i: usize, wi: f64| -> f64 {
        let base = if i % 2 == 0 { alpha * wi } else { wi };
        base + if i == 1 { 1.0 } else { 0.0 }
    };
    let mut w = vec![amplitude];
    let mut v = vec![v_of(0, amplitude)];
    let mut g = Vec::new();
    for n in 0..n_max {
        // ḡ_n: G's coefficient without the w_{n+1} term.
        let mut gb = (1.0 - r) * w[n];
        if n % 2 == 0 {
            let conv: f64 = (1..=n).map(|j| w[j] * w[n + 1 - j]).sum();
            gb -= alpha * conv;
        }
        let mut acc = gb;
        for i in 0..n {
            acc -= (i + 1) as f64 * v[n - i] * w[i + 1];
        }
        let extra = if n % 2 == 0 { 2.0 } else { 0.0 };
        let wn1 = acc / (alpha * amplitude * (n as f64 + 1.0 + extra));
        g.push(gb - if n % 2 == 0 { 2.0 * alpha * amplitude * wn1 } else { 0.0 });
        w.push(wn1);
        v.push(v_of(n + 1, wn1));
    }
    Ok(OriginSeries { amplitude, w, v, g })
}

impl OriginSeries {
    pub fn eval(&self, zeta: f64) -> f64 {
        self.w.iter().rev().fold(0.0, |acc, c| acc * zeta + c)
    }

    pub fn eval_deriv(&self, zeta: f64) -> f64 {
        self.w
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (i, c)| acc * zeta + i as f64 * c)
    }

    /// Root-test estimate of the convergence radius from the upper half of the coefficients.
    pub fn radius_estimate(&self) -> f64 {
        let n = self.w.len() - 1;
        let mut best = f64::INFINITY;
        for i in (n / 2).max(2)..=n {
            let a = self.w[i].abs();
            if a > 0.0 {
                best = best.min(a.powf(-1.0 / i as f64));
            }
        }
        best
    }

    /// Coefficients of e^{jξ}, j = −1, 0, 1, ..., in W(ξ) = e^{−ξ}𝒲(e^ξ) and Z(ξ) = −e^{−ξ}𝒲(−e^ξ).
    pub fn exp_coefficients(&self) -> (Vec<f64>, Vec<f64>) {
        let wo = self.w.clone();
        let zo = self
            .w
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 0 { -c } else { *c })
            .collect();
        (wo, zo)
    }
}

#[derive(Clone, Debug)]
pub struct LongRun {
    pub table: CoeffTable,
    pub w_over_z: Vec<Interval>,
    pub z_ratio: Vec<Interval>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct LongRunChecks {
    pub bits: u32,
    pub n_max: usize,
    /// First i in [1, 160] where |W_i/Z_i| < 2 is not certified.
    pub w_over_z_failure: Option<usize>,
    /// First i in [160, n_max) where the ratio window is not certified.
    pub ratio_failure: Option<usize>,
    /// Z_{10000} + 6·10^46770 within 10^46770, when n_max ≥ 10000.
    pub z10000_ok: Option<bool>,
}

/// C̄* = 0.95·(−29 + 12√5)/726.
pub fn c_bar_star(prec: u32) -> Result<Interval> {
    let s5 = Interval::int(5, prec).sqrt()?;
    Ok((12i64 * s5 - 29i64) * Interval::ratio(95, 72600, prec))
}

/// Coefficients at γ = 7/5 and r = r*, where D_{Z,1} = 0 and k is infinite.
pub fn longrun_z(bits: u32, n_max: usize) -> Result<LongRun> {
    let g = Interval::ratio(7, 5, bits);
    let p = GasParams::new(g.clone(), algebra::r_star(&g)?);
    let table = coeffs_from_sonic(&p, algebra::sonic_point_at_r_star(&g)?, n_max, Mode::Raw)?;
    let w_over_z = (1..=n_max).map(|i| &table.w[i] / &table.z[i]).collect();
    let z_ratio = (1..n_max).map(|i| &table.z[i + 1] / &table.z[i]).collect();
    Ok(LongRun { table, w_over_z, z_ratio })
}

impl LongRun {
    /// |W_i/Z_i| for i ≥ 1.
    pub fn w_over_z(&self, i: usize) -> &Interval {
        &self.w_over_z[i - 1]
    }

    /// Z_{i+1}/Z_i for i ≥ 1.
    pub fn ratio(&self, i: usize) -> &Interval {
        &self.z_ratio[i - 1]
    }

    pub fn checks(&self) -> Result<LongRunChecks> {
        let n = self.table.n_max;
        let prec = self.table.w[0].prec();
        let two = Interval::int(2, prec);
        let w_over_z_failure = (1..=160.min(n)).find(|&i| !self.w_over_z(i).abs().certainly_lt(&two));
        let c = c_bar_star(prec)?.abs();
        let ratio_failure = (160..n).find(|&i| {
            let sq = Interval::int(((i + 1) * (i + 1)) as i64, prec);
            let lo = &c * &sq;
            let hi = lo.mul_int(3);
            let q = self.ratio(i).abs();
            !(lo.certainly_lt(&q) && q.certainly_lt(&hi))
        });
        let z10000_ok = if n >= 10000 {
            let ten = Interval::decimal("1e46770", prec)?;
            let dev = (&self.table.z[10000] + ten.mul_int(6)).abs();
            Some(dev.certainly_lt(&ten) || dev.hi() <= ten.lo())
        } else {
            None
        };
        Ok(LongRunChecks { bits: prec, n_max: n, w_over_z_failure, ratio_failure, z10000_ok })
    }
}
