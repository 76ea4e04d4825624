//! Chart-aware closed forms that stay finite at γ_inv = 0 or γ̃ = 0.

use crate::algebra::GasParams;
use crate::error::{Error, Result};
use crate::rigor::Interval;
use crate::series::{self, Mode};

use super::chart::{Chart, ParamBox};

fn require(b: &ParamBox, chart: Chart) -> Result<()> {
    if b.chart != chart {
        return Err(Error::OutOfChart(format!("wrapper expects {chart:?}, got {:?}", b.chart)));
    }
    Ok(())
}

/// R1/γ on the Inv chart.
fn r1_inv(u: &Interval, r: &Interval) -> Result<Interval> {
    let sq = (r - 3i64).square() - 2i64 * u * (3i64 * r.square() - 6i64 * r + 7i64)
        + u.square() * (9i64 * r.square() - 14i64 * r + 9i64);
    sq.sqrt()
}

/// (W0/γ_inv, Z0/γ_inv) on the Inv chart.
pub fn w0_over_ginv(b: &ParamBox) -> Result<(Interval, Interval)> {
    require(b, Chart::Inv)?;
    let (u, r) = b.inv_r_pair()?;
    let ru = r1_inv(&u, &r)?;
    // (r − 3 + R1/γ)/γ_inv with the cancellation done by hand.
    let c = (-2i64 * (3i64 * r.square() - 6i64 * &r + 7i64) + &u * (9i64 * r.square() - 14i64 * &r + 9i64))
        .try_div(&(&ru + 3i64 - &r))?;
    let den = 4i64 * (1i64 - &u).square();
    let w = (&c + &ru - 2i64 * &r + 10i64 - 3i64 * &u * (&r + 1i64)) / &den;
    let z = (&c - 3i64 * &ru - 6i64 * &r + 6i64 + &u * (9i64 * &r - 7i64)) / &den;
    Ok((w, z))
}

/// N_W(P_s)/γ_inv on the Inv chart.
pub fn nw0_inv_scaled(b: &ParamBox) -> Result<Interval> {
    let (w, z) = w0_over_ginv(b)?;
    let (u, r) = b.inv_r_pair()?;
    let bracket = &r + w.div_int(2) + (3i64 * &u - 1i64) * &z / 4i64;
    Ok(-(bracket * &w) + (1i64 - &u) * z.square() / 4i64)
}

/// D_W(P_s) on the Inv chart. It is already finite at γ_inv = 0 and does not vanish there.
pub fn dw0_inv(b: &ParamBox) -> Result<Interval> {
    let (w, z) = w0_over_ginv(b)?;
    let u = &b.x;
    Ok(1i64 + (u * (&w + &z) + (1i64 - u) * (&w - &z) / 2i64) / 2i64)
}

/// (W0·γ̃, Z0·γ̃, (W0 + Z0)·γ̃/γ̃) on the Tilde chart; the last entry is the
/// combination whose leading terms cancel.
pub fn w0_times_gtilde(b: &ParamBox) -> Result<(Interval, Interval, Interval)> {
    require(b, Chart::Tilde)?;
    let (g, rho) = (&b.x, &b.y);
    let s = g.square() * rho.square() - 4i64 * g * rho.square() - 4i64 * g * rho + 4i64 * rho.square()
        - 8i64 * rho
        + 4i64;
    let sq = s.sqrt()?;
    let w = ((g - 2i64) * (g * rho + 2i64 * rho - 2i64) + (g + 2i64) * &sq) / 4i64;
    let z = (g.square() * rho - 4i64 * g * rho - 2i64 * g + 4i64 * rho - 4i64 + (g - 2i64) * &sq) / 4i64;
    let sum_over_g = (g * rho - 2i64 * rho - 2i64 + &sq) / 2i64;
    Ok((w, z, sum_over_g))
}

/// N_W(P_s)·γ̃ on the Tilde chart.
pub fn nw0_tilde_scaled(b: &ParamBox) -> Result<Interval> {
    let (w, z, sum_over_g) = w0_times_gtilde(b)?;
    let r = 1i64 + &b.x * &b.y;
    let bracket = r + sum_over_g / 2i64 + (&w - z.div_int(2)) / 2i64;
    Ok(-(bracket * &w) + z.square() / 4i64)
}

/// W_k·γ̃ − W_k^s on the Tilde chart (γ̃ > 0), from the singular split of the series.
pub fn split_w_tilde(b: &ParamBox, k: usize) -> Result<Interval> {
    require(b, Chart::Tilde)?;
    if !b.x.is_positive() {
        return Err(Error::OutOfChart("split evaluation needs gamma_tilde > 0".into()));
    }
    let p: GasParams = b.gas()?;
    let t = series::coeffs_at_ps(&p, k.max(1), Mode::SingularSplit)?;
    let split = t.split.expect("split mode fills the parts");
    Ok(&b.x * &split.wns[k])
}
