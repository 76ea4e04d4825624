//! Executable sign conditions, one per lemma item, each with a desk-scale smoke region.

use crate::algebra::{self, GasParams};
use crate::barriers;
use crate::error::{Error, Result};
use crate::rigor::{IPoly, Interval, Sign};
use crate::series::{self, CoeffTable, Mode};

use super::chart::{inv_r, Chart, ParamBox};
use super::desing::{nw0_inv_scaled, nw0_tilde_scaled};
use super::enclosure::{enclosure_r, r34_enclosure, Enclosure};
use super::{all_positive, VerificationTask};

/// γ_inv slice k of N: [(k−1)/N, k/N]·3/5.
pub fn inv_slice(k: u32, n: u32, prec: u32) -> Result<Interval> {
    let lo = Interval::ratio(3 * (k as i64 - 1), 5 * n as i64, prec);
    let hi = Interval::ratio(3 * k as i64, 5 * n as i64, prec);
    Interval::new(lo.lo().clone(), hi.hi().clone())
}

/// γ̃ slice k of N: [(k−1)/N, k/N]·2/3.
pub fn tilde_slice(k: u32, n: u32, prec: u32) -> Result<Interval> {
    let lo = Interval::ratio(2 * (k as i64 - 1), 3 * n as i64, prec);
    let hi = Interval::ratio(2 * k as i64, 3 * n as i64, prec);
    Interval::new(lo.lo().clone(), hi.hi().clone())
}

const PREC: u32 = 128;

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::from_f64s(lo, hi, PREC).expect("ordered literals")
}

/// Smoke slice on the Inv chart: k = 59 of N = 100, β strictly inside (β̄3, β̄4).
fn inv_smoke() -> ParamBox {
    ParamBox::new(Chart::Inv, inv_slice(59, 100, PREC).unwrap(), iv(0.25, 0.45))
}

/// Slice k = 58334 of N = 10⁵ (γ_inv ≈ 0.35) with a β window of width 10⁻⁴. Plain interval
/// evaluation of the barrier chains only certifies on boxes of width about 10⁻⁶.
fn inv_micro() -> ParamBox {
    ParamBox::new(Chart::Inv, inv_slice(58_334, 100_000, PREC).unwrap(), iv(0.35, 0.3501))
}

/// Slice k = 60000 of N = 10⁵ (γ̃ just below 0.4) with an r̃ window of width 10⁻⁶.
fn tilde_micro() -> ParamBox {
    ParamBox::new(Chart::Tilde, tilde_slice(60_000, 100_000, PREC).unwrap(), iv(0.2, 0.200001))
}

fn inv_full() -> ParamBox {
    ParamBox::new(Chart::Inv, iv(0.0, 0.6), iv(0.0737, 0.6763))
}

fn tilde_full() -> ParamBox {
    ParamBox::new(Chart::Tilde, Interval::from_f64s(0.0, 2.0 / 3.0, PREC).unwrap(), iv(0.1515, 0.3334))
}

/// One-dimensional box on a chart's γ axis.
fn gamma_axis(chart: Chart, x: Interval) -> ParamBox {
    ParamBox::new(chart, x, Interval::zero(PREC))
}

fn neg(v: Interval) -> Interval {
    -v
}

fn imax0(v: &Interval) -> Interval {
    let z = rug::Float::with_val(v.prec(), 0);
    let lo = if *v.lo() > 0 { v.lo().clone() } else { z.clone() };
    let hi = if *v.hi() > 0 { v.hi().clone() } else { z };
    Interval::new(lo, hi).expect("ordered")
}

fn table(p: &GasParams, n: usize) -> Result<CoeffTable> {
    series::coeffs_at_ps(p, n, Mode::Raw)
}

fn k_minus(t: &CoeffTable, j: i64) -> Result<Interval> {
    t.k.clone().map(|k| k - j).ok_or(Error::AtRStar)
}

/// Minimum of `poly` over `range`, through a uniform cover.
fn cover_min(poly: &IPoly, range: &Interval, pieces: usize) -> Interval {
    let vals: Vec<Interval> = range.subdivide(pieces).iter().map(|t| poly.eval(t)).collect();
    all_positive(&vals)
}

// ---- k' ----

/// (T1² − T2² R1²)/γ⁸ written in γ_inv, finite at γ_inv = 0.
pub fn k_prime_condition(b: &ParamBox) -> Result<Interval> {
    let (u, r) = b.inv_r_pair()?;
    let t1 = 4i64
        * (1i64 - &u)
        * (3i64 - &u)
        * (&r - 3i64 - 14i64 * &u * &r + 14i64 * &u + 17i64 * u.square() * &r - 15i64 * u.square());
    let t2 = (1i64 + &u).square() * (3i64 - 5i64 * &u) * (&r - 1i64);
    let r1u = (&r - 3i64).square() - 2i64 * &u * (3i64 * r.square() - 6i64 * &r + 7i64)
        + u.square() * (9i64 * r.square() - 14i64 * &r + 9i64);
    Ok(t1.square() - t2.square() * r1u)
}

// ---- far-left barrier ----

/// Q^fl monotonicity scheme; the chart selects the γ ≥ 5/3 or γ ≤ 5/3 variant.
pub fn left_global_condition(b: &ParamBox) -> Result<Interval> {
    let p = b.gas()?;
    let sp = barriers::far_left(&p)?.sign_poly()?;
    let q = sp.quotient;
    let prec = p.prec();
    let one = Interval::one(prec);
    let d1 = q.derive();
    let d2 = d1.derive();
    let mut conds = vec![d2.eval(&one)];
    if b.chart == Chart::Inv {
        conds.push(neg(d2.derive().eval(&Interval::zero(prec))));
    } else {
        conds.push(d2.eval(&Interval::zero(prec)));
    }
    conds.push(q.eval(&one) - imax0(&d1.eval(&one)));
    Ok(all_positive(&conds))
}

/// b^fl_W′(1) + b^fl_Z′(1).
pub fn paella_condition(b: &ParamBox) -> Result<Interval> {
    let p = b.gas()?;
    let fl = barriers::far_left(&p)?;
    let one = Interval::one(p.prec());
    Ok(fl.bw.derive().eval(&one) + fl.bz.derive().eval(&one))
}

// ---- near-left barrier, n = 3 ----

pub const S_MINUS: (i64, i64) = (35, 100);

struct LeftLocal {
    p: GasParams,
    km3: Interval,
    nl: barriers::Barrier,
}

fn left_local(b: &ParamBox) -> Result<LeftLocal> {
    let p = b.gas()?;
    let t = table(&p, 3)?;
    let km3 = k_minus(&t, 3)?;
    let nl = barriers::near_left(&p, &t, 3)?;
    Ok(LeftLocal { p, km3, nl })
}

fn far_left_along_near(l: &LeftLocal) -> Result<IPoly> {
    let imp = barriers::implicit_form(&barriers::far_left(&l.p)?)?;
    Ok(imp.compose(&l.nl.bw, &l.nl.bz))
}

fn s_tilde_range(prec: u32) -> Interval {
    let hi = Interval::ratio(S_MINUS.0, S_MINUS.1, prec);
    Interval::new(Interval::zero(prec).lo().clone(), hi.hi().clone()).expect("ordered")
}

/// Step 1: coefficient of s² in B^fl(b^nl_3(s)), negative.
pub fn left_local_step1(b: &ParamBox) -> Result<Interval> {
    let l = left_local(b)?;
    let f = far_left_along_near(&l)?;
    Ok(f.coeff(2).cloned().unwrap_or_else(|| Interval::zero(l.p.prec())))
}

/// Step 2: B^fl(b^nl_3(s_−(k − 3))), positive.
pub fn left_local_step2(b: &ParamBox) -> Result<Interval> {
    let l = left_local(b)?;
    let f = far_left_along_near(&l)?;
    let s = Interval::ratio(S_MINUS.0, S_MINUS.1, l.p.prec()) * &l.km3;
    Ok(f.eval(&s))
}

/// Step 3: P^nl_3/s⁴ on s = s̃(k − 3), s̃ ∈ [0, s_−], positive.
pub fn left_local_step3(b: &ParamBox) -> Result<Interval> {
    let l = left_local(b)?;
    let q = l.nl.sign_poly()?.quotient.rescale_arg(&l.km3);
    Ok(cover_min(&q, &s_tilde_range(l.p.prec()), 8))
}

/// Step 4: D_W along b^nl_3 on the same range, positive.
pub fn left_local_step4(b: &ParamBox) -> Result<Interval> {
    let l = left_local(b)?;
    let dw = l.nl.d_along().0.rescale_arg(&l.km3);
    Ok(cover_min(&dw, &s_tilde_range(l.p.prec()), 2))
}

/// Step 5: D_Z/s along b^nl_3 on the same range, positive.
pub fn left_local_step5(b: &ParamBox) -> Result<Interval> {
    let l = left_local(b)?;
    let zero = Interval::zero(l.p.prec());
    let dz = l.nl.d_along().1.divide_forced(&zero, 1)?.rescale_arg(&l.km3);
    Ok(cover_min(&dz, &s_tilde_range(l.p.prec()), 2))
}

// ---- conditions at r = r3 (one-dimensional in the chart's γ) ----

fn params_at(b: &ParamBox, which: Enclosure) -> Result<GasParams> {
    let r = enclosure_r(&b.x, which)?;
    let gamma = match b.chart {
        Chart::Inv => b.x.recip()?,
        Chart::Tilde => &b.x + 1i64,
        Chart::Raw => return Err(Error::OutOfChart("enclosures live on the Inv and Tilde charts".into())),
    };
    Ok(GasParams::new(gamma, r))
}

fn r3_of(b: &ParamBox) -> Enclosure {
    if b.chart == Chart::Inv {
        Enclosure::Beta3
    } else {
        Enclosure::RTilde3
    }
}

fn r4_of(b: &ParamBox) -> Enclosure {
    if b.chart == Chart::Inv {
        Enclosure::Beta4
    } else {
        Enclosure::RTilde4
    }
}

/// a2 < 0 and the parabola bound < 0 on Q^fr at r3, as one negative-wanted value.
pub fn right_f_condition(b: &ParamBox) -> Result<Interval> {
    let p = params_at(b, r3_of(b))?;
    let fr = barriers::far_right(&p)?;
    let sp = fr.sign_poly()?;
    let bound = barriers::far_right_parabola_bound(&fr, &sp);
    Ok(neg(all_positive(&[neg(bound.coeffs[2].clone()), neg(bound.bound)])))
}

/// (Z1/2 − W1)/(W1 + Z1) + 1 at r3, non-positive.
pub fn aux_f1_condition(b: &ParamBox) -> Result<Interval> {
    let p = params_at(b, r3_of(b))?;
    let s = algebra::sonic_point(&p)?;
    Ok((s.z1.div_int(2) - &s.w1).try_div(&(&s.w1 + &s.z1))? + 1i64)
}

/// a2^nr from the first two Taylor derivatives and the far-right constants.
pub fn a2nr(p: &GasParams, t: &CoeffTable) -> Result<Interval> {
    let (w1, z1, w2, z2) = (&t.w[1], &t.z[1], &t.w[2], &t.z[2]);
    let f0 = (-4i64 * (&p.r - 1i64)).try_div(&(3i64 * (&p.gamma - 1i64)))?;
    let s_inf = f0 - &t.w[0] - &t.z[0];
    let ratio = (z1.div_int(2) - w1).try_div(&(w1 + z1))?;
    Ok(s_inf.div_int(2) * (-w2 + z2.div_int(2) - (w2 + z2) * ratio) + w1.square() + w1 * z1 / 2i64
        - z1.square() / 2i64)
}

pub fn aux_a2nr_condition(b: &ParamBox) -> Result<Interval> {
    let p = params_at(b, r3_of(b))?;
    a2nr(&p, &table(&p, 2)?)
}

/// Z3(k − 3) at r3 (positive means Z3(3 − k) < 0).
pub fn signs_z3_condition(b: &ParamBox) -> Result<Interval> {
    let p = params_at(b, r3_of(b))?;
    Ok(series::coeffs_at_ps(&p, 3, Mode::Normalized(3))?.z[3].clone())
}

/// Z4(k − 4) at r4 (negative means Z4(4 − k) > 0).
pub fn signs_z4_condition(b: &ParamBox) -> Result<Interval> {
    let p = params_at(b, r4_of(b))?;
    Ok(series::coeffs_at_ps(&p, 4, Mode::Normalized(4))?.z[4].clone())
}

/// (3 − √3)/(2 + √3 γ̃) − r̃4 on the Tilde chart.
pub fn otromas_condition(b: &ParamBox) -> Result<Interval> {
    if b.chart != Chart::Tilde {
        return Err(Error::OutOfChart("aux_otromas lives on the Tilde chart".into()));
    }
    let s3 = Interval::int(3, b.prec()).sqrt()?;
    let bound = (3i64 - &s3) / (2i64 + &s3 * &b.x);
    Ok(bound - r34_enclosure(&b.x, Enclosure::RTilde4)?)
}

/// min(j − k(r_lo), k(r_hi) − j) where r_lo, r_hi are the images of the enclosure's lower and upper curves.
pub fn enclosure_condition(b: &ParamBox, which: Enclosure) -> Result<Interval> {
    let prec = b.prec();
    let slack = Interval::decimal(which.slack(), prec)?;
    let mid = r34_centre(&b.x, which)?;
    let (lo, hi) = (&mid - &slack, &mid + &slack);
    let (gamma, r_lo, r_hi) = if which.on_inv_chart() {
        (b.x.recip()?, inv_r(&b.x, &lo), inv_r(&b.x, &hi))
    } else {
        (&b.x + 1i64, 1i64 + &b.x * &lo, 1i64 + &b.x * &hi)
    };
    let j = which.order();
    let k_lo = algebra::k_of_r(&GasParams::new(gamma.clone(), r_lo))?;
    let k_hi = algebra::k_of_r(&GasParams::new(gamma, r_hi))?;
    Ok(all_positive(&[j - k_lo, k_hi - j]))
}

fn r34_centre(x: &Interval, which: Enclosure) -> Result<Interval> {
    let mut acc = Interval::zero(x.prec());
    for c in which.coefficients() {
        acc = acc * x + Interval::decimal(c, x.prec())?;
    }
    Ok(acc)
}

// ---- aux_34bounds ----

pub fn bounds_dw1(b: &ParamBox) -> Result<Interval> {
    Ok(table(&b.gas()?, 1)?.dw[1].clone())
}

/// N_W(P_s), desingularized on the Inv and Tilde charts.
pub fn bounds_nw0(b: &ParamBox) -> Result<Interval> {
    match b.chart {
        Chart::Inv => nw0_inv_scaled(b),
        Chart::Tilde => nw0_tilde_scaled(b),
        Chart::Raw => {
            let p = b.gas()?;
            let s = algebra::sonic_point(&p)?;
            Ok(algebra::n_w(&p, &s.w0, &s.z0))
        }
    }
}

pub fn bounds_nz1(b: &ParamBox) -> Result<Interval> {
    Ok(table(&b.gas()?, 1)?.nz[1].clone())
}

pub fn bounds_w1(b: &ParamBox) -> Result<Interval> {
    Ok(algebra::sonic_point(&b.gas()?)?.w1)
}

/// Z4 − W4 Z1/W1.
pub fn bounds_z4(b: &ParamBox) -> Result<Interval> {
    let t = table(&b.gas()?, 4)?;
    Ok(&t.z[4] - (&t.w[4] * &t.z[1]).try_div(&t.w[1])?)
}

pub fn bounds_dz_nz(b: &ParamBox) -> Result<Interval> {
    Ok(algebra::sonic_point(&b.gas()?)?.grad_nz0.1)
}

pub fn bounds_dz_eye(b: &ParamBox) -> Result<Interval> {
    let p = b.gas()?;
    let e = algebra::p_eye(&p)?;
    Ok(algebra::d_z(&p, &e.x0, &e.y0))
}

pub fn bounds_eye_sum(b: &ParamBox) -> Result<Interval> {
    let p = b.gas()?;
    let e = algebra::p_eye(&p)?;
    Ok((&e.x0 + &e.y0).div_int(2) + &p.r)
}

// ---- γ = 7/5 at r = r* ----

fn seven_fifths(prec: u32) -> Result<(GasParams, CoeffTable)> {
    let g = Interval::ratio(7, 5, prec);
    let p = GasParams::new(g.clone(), algebra::r_star(&g)?);
    let t = series::coeffs_from_sonic(&p, algebra::sonic_point_at_r_star(&g)?, 3, Mode::Raw)?;
    Ok((p, t))
}

/// a3 = s³ coefficient of B^fl_{7/5}(b^nl(s)), where only W_0..3, Z_0..3 enter.
pub fn biglebowski_condition(b: &ParamBox) -> Result<Interval> {
    let (p, t) = seven_fifths(b.prec())?;
    let fl = barriers::far_left_75(&p, &t)?;
    let nl = barriers::near_left(&p, &t, 3)?;
    let f = barriers::implicit_form(&fl)?.compose(&nl.bw, &nl.bz);
    Ok(f.coeff(3).cloned().unwrap_or_else(|| Interval::zero(p.prec())))
}

/// b^fl_{7/5,Z}(T_W) − Y0, b_W(0.6019) − X0, X0 − b_W(0.6021), all positive: b_W decreases
/// through X0 inside T_W while b_Z stays above Y0.
pub fn peyeout_condition(b: &ParamBox) -> Result<Interval> {
    let prec = b.prec();
    let (p, t) = seven_fifths(prec)?;
    let fl = barriers::far_left_75(&p, &t)?;
    let e = algebra::p_eye(&p)?;
    let t_lo = Interval::decimal("0.6019", prec)?;
    let t_hi = Interval::decimal("0.6021", prec)?;
    let tw = t_lo.hull(&t_hi);
    Ok(all_positive(&[
        fl.bz.eval(&tw) - &e.y0,
        fl.bw.eval(&t_lo) - &e.x0,
        &e.x0 - fl.bw.eval(&t_hi),
    ]))
}

/// 2 − |W_i/Z_i| for 1 ≤ i ≤ 160.
pub fn w_over_z_condition(b: &ParamBox) -> Result<Interval> {
    let run = series::longrun_z(b.prec().max(256), 161)?;
    let two = Interval::int(2, b.prec().max(256));
    let vals: Vec<Interval> = (1..=160).map(|i| &two - run.w_over_z(i).abs()).collect();
    Ok(all_positive(&vals))
}

/// Ratio window C̄*(i+1)² < |Z_{i+1}/Z_i| < 3C̄*(i+1)² for 160 ≤ i < 400.
pub fn ratio_window_condition(b: &ParamBox) -> Result<Interval> {
    let bits = b.prec().max(512);
    let run = series::longrun_z(bits, 400)?;
    let c = series::c_bar_star(bits)?.abs();
    let mut vals = Vec::new();
    for i in 160..400 {
        let sq = Interval::int(((i + 1) * (i + 1)) as i64, bits);
        let lo = &c * &sq;
        let q = run.ratio(i).abs();
        vals.push(&q - &lo);
        vals.push(lo.mul_int(3) - &q);
    }
    Ok(all_positive(&vals))
}

// ---- registry ----

fn seven_fifths_box() -> ParamBox {
    let g = Interval::ratio(7, 5, PREC);
    let r = algebra::r_star(&g).expect("r* at 7/5");
    ParamBox::new(Chart::Raw, g, r)
}

fn narrow(chart: Chart, at: f64) -> ParamBox {
    gamma_axis(chart, iv(at, at + 1e-9))
}

/// All registered tasks, in a fixed order.
pub fn lemma_registry() -> Vec<VerificationTask> {
    use Sign::{Negative, Positive};
    let mut v = Vec::new();
    v.push(
        VerificationTask::new(
            "lemma_k_prime",
            Positive,
            ParamBox::new(Chart::Inv, iv(0.35, 0.36), iv(0.0, 0.7)),
            |b, _| k_prime_condition(b),
        )
        .describe("k'(r) > 0 for gamma >= 5/3: (T1^2 - T2^2 R1^2)/gamma^8 > 0")
        .with_full(ParamBox::new(Chart::Raw, iv(5.0 / 3.0, 1e6), iv(1.0, 2.0))),
    );
    v.push(
        VerificationTask::new("left_global.inv", Positive, inv_micro(), |b, _| left_global_condition(b))
            .describe("Q^fl > 0 on (0,1) via the Q' monotonicity scheme, gamma >= 5/3")
            .with_full(inv_full()),
    );
    v.push(
        VerificationTask::new("left_global.tilde", Positive, tilde_micro(), |b, _| left_global_condition(b))
            .describe("Q^fl > 0 on (0,1) via the Q' monotonicity scheme, gamma <= 5/3")
            .with_full(tilde_full()),
    );
    let steps: [(&str, Sign, fn(&ParamBox) -> Result<Interval>, &str); 5] = [
        ("left_local_3.step1", Negative, left_local_step1, "B^fl(b^nl_3(s)) < 0 for small s"),
        ("left_local_3.step2", Positive, left_local_step2, "B^fl(b^nl_3(0.35(k-3))) > 0"),
        ("left_local_3.step3", Positive, left_local_step3, "P^nl_3 > 0 on (0, 0.35(k-3))"),
        ("left_local_3.step4", Positive, left_local_step4, "D_W(b^nl_3) > 0 on (0, 0.35(k-3))"),
        ("left_local_3.step5", Positive, left_local_step5, "D_Z(b^nl_3)/s > 0 on (0, 0.35(k-3))"),
    ];
    for (id, want, f, text) in steps {
        v.push(VerificationTask::new(id, want, inv_micro(), move |b, _| f(b)).describe(text).with_full(inv_full()));
    }
    v.push(
        VerificationTask::new("right_f", Negative, gamma_axis(Chart::Inv, inv_slice(58_334, 100_000, PREC).unwrap()), |b, _| {
            right_f_condition(b)
        })
        .describe("a2 < 0 and a0 - a1^2/(4 a2) + |a3| s^3 + |a4| s^4 < 0 for Q^fr at r = r3")
        .with_full(gamma_axis(Chart::Inv, iv(0.0, 0.6))),
    );
    v.push(
        VerificationTask::new("biglebowski", Negative, seven_fifths_box(), |b, _| biglebowski_condition(b))
            .describe("a3 < 0 for B^fl_{7/5}(b^nl(s)) at gamma = 7/5, r = r*"),
    );
    v.push(
        VerificationTask::new(
            "aux_otromas",
            Positive,
            gamma_axis(Chart::Tilde, Interval::from_f64s(0.0, 2.0 / 3.0, PREC).unwrap()),
            |b, _| otromas_condition(b),
        )
        .describe("(3 - sqrt 3)/(2 + sqrt 3 gamma~) - r~4 > 0"),
    );
    v.push(
        VerificationTask::new("aux_Peyeout", Positive, seven_fifths_box(), |b, _| peyeout_condition(b))
            .describe("b^fl_{7/5,Z}(T_W) > Y0 and b^fl_{7/5,W} - X0 changes sign on T_W = (0.6019, 0.6021)"),
    );
    v.push(
        VerificationTask::new("paella", Negative, inv_smoke(), |b, _| paella_condition(b))
            .describe("b^fl_W'(1) + b^fl_Z'(1) < 0")
            .with_full(inv_full()),
    );
    let bounds: [(&str, Sign, fn(&ParamBox) -> Result<Interval>, &str, ParamBox); 8] = [
        ("aux_34bounds.DW1", Positive, bounds_dw1, "D_{W,1} > 0", inv_smoke()),
        ("aux_34bounds.NW0", Negative, bounds_nw0, "N_{W,0} < 0 (desingularized per chart)", inv_smoke()),
        ("aux_34bounds.NZ1", Positive, bounds_nz1, "N_{Z,1} > 0", inv_smoke()),
        ("aux_34bounds.W1", Negative, bounds_w1, "W_1 < 0", inv_smoke()),
        ("aux_34bounds.Z4", Positive, bounds_z4, "Z_4 - W_4 Z_1/W_1 > 0", inv_micro()),
        ("aux_34bounds.dZNZ", Positive, bounds_dz_nz, "d_Z N_Z(P_s) > 0", inv_smoke()),
        ("aux_34bounds.DZeye", Positive, bounds_dz_eye, "D_Z(P_eye) > 0", inv_smoke()),
        ("aux_34bounds.eyesum", Positive, bounds_eye_sum, "(X0 + Y0)/2 > -r", inv_smoke()),
    ];
    for (id, want, f, text, region) in bounds {
        v.push(VerificationTask::new(id, want, region, move |b, _| f(b)).describe(text).with_full(inv_full()));
    }
    v.push(
        VerificationTask::new("aux_WioverZi_7o5", Positive, seven_fifths_box(), |b, _| w_over_z_condition(b))
            .describe("|W_i/Z_i| < 2 for 1 <= i <= 160 at gamma = 7/5, r = r* (delegates to the long run)"),
    );
    v.push(
        VerificationTask::new("tenthousand_7o5", Positive, seven_fifths_box(), |b, _| ratio_window_condition(b))
            .describe("C(i+1)^2 < |Z_{i+1}/Z_i| < 3C(i+1)^2 for 160 <= i < 400 (delegates to the long run)"),
    );
    v.push(
        VerificationTask::new("aux_F1", Positive, gamma_axis(Chart::Inv, inv_slice(59, 100, PREC).unwrap()), |b, _| {
            aux_f1_condition(b).map(neg)
        })
        .describe("(Z1/2 - W1)/(W1 + Z1) <= -1 at r = r3")
        .with_full(gamma_axis(Chart::Inv, iv(0.0, 0.6))),
    );
    v.push(
        VerificationTask::new(
            "aux_a2nr",
            Positive,
            gamma_axis(Chart::Inv, inv_slice(59, 100, PREC).unwrap()),
            |b, _| aux_a2nr_condition(b),
        )
        .describe("a2^nr > 0 at r = r3")
        .with_full(gamma_axis(Chart::Inv, iv(0.0, 0.6))),
    );
    v.push(
        VerificationTask::new("aux_signsZ3Z4.Z3", Positive, narrow(Chart::Inv, 0.35), |b, _| signs_z3_condition(b))
            .describe("Z3(3 - k) < 0 at r = r3, via Z3(k - 3) > 0")
            .with_full(gamma_axis(Chart::Inv, iv(0.0, 0.6))),
    );
    v.push(
        VerificationTask::new("aux_signsZ3Z4.Z4", Negative, narrow(Chart::Inv, 0.35), |b, _| signs_z4_condition(b))
            .describe("Z4(4 - k) > 0 at r = r4, via Z4(k - 4) < 0")
            .with_full(gamma_axis(Chart::Inv, iv(0.0, 0.6))),
    );
    let encl = [
        ("enclosure.B1", Enclosure::Beta3, Chart::Inv, 0.35, iv(0.0, 0.6)),
        ("enclosure.B2", Enclosure::Beta4, Chart::Inv, 0.35, iv(0.0, 0.6)),
        ("enclosure.B3", Enclosure::RTilde3, Chart::Tilde, 0.4, Interval::from_f64s(0.0, 2.0 / 3.0, PREC).unwrap()),
        ("enclosure.B4", Enclosure::RTilde4, Chart::Tilde, 0.4, Interval::from_f64s(0.0, 2.0 / 3.0, PREC).unwrap()),
    ];
    for (id, which, chart, at, full) in encl {
        v.push(
            VerificationTask::new(id, Positive, narrow(chart, at), move |b, _| enclosure_condition(b, which))
                .describe("the enclosure's lower and upper curves bracket k = j")
                .with_full(gamma_axis(chart, full)),
        );
    }
    v
}

pub fn find_task(id: &str) -> Result<VerificationTask> {
    lemma_registry().into_iter().find(|t| t.id == id).ok_or_else(|| Error::UnknownTask(id.to_string()))
}
