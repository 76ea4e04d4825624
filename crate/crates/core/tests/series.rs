use proptest::prelude::*;
use rug::Float;
use selfsim::algebra::{self, GasParams};
use selfsim::rigor::{Interval, Sign};
use selfsim::series::*;

const P: u32 = 128;

fn mid_r34(g: &Interval) -> Interval {
    let r3 = algebra::invert_k(g, 3, 1e-14).unwrap();
    let r4 = algebra::invert_k(g, 4, 1e-14).unwrap();
    ((r3 + r4).div_int(2)).mid_point()
}

#[test]
fn first_coefficients_match_sonic_point() {
    let p = GasParams::from_f64(2.0, 1.1, P);
    let s = algebra::sonic_point(&p).unwrap();
    let t = coeffs_at_ps(&p, 1, Mode::Raw).unwrap();
    assert_eq!(t.w.len(), 2);
    assert!(t.w[0].overlaps(&s.w0) && t.z[0].overlaps(&s.z0));
    assert!(t.w[1].overlaps(&s.w1) && t.z[1].overlaps(&s.z1));
}

#[test]
fn dz2_at_r_star_seven_fifths() {
    let g = Interval::ratio(7, 5, P);
    let rs = algebra::r_star(&g).unwrap();
    let expect = (19.0 - 9.0 * 5f64.sqrt()) / 264.0;
    let t = coeffs_at_ps(&GasParams::new(g.clone(), rs.clone()), 2, Mode::Raw).unwrap();
    assert!((t.dz[2].div_int(2).mid_f64() - expect).abs() < 1e-14);
    let near = Interval::point_float(&Float::with_val(P, rs.mid() - 1e-6));
    let t = coeffs_at_ps(&GasParams::new(g, near), 2, Mode::Raw).unwrap();
    assert!((t.dz[2].div_int(2).mid_f64() - expect).abs() < 1e-2);
}

// Oracle: sympy solve of the truncated ODE by undetermined coefficients at r*,
// independent of the recurrence (values are W(ξ) = Σ c_n ξⁿ coefficients).
#[test]
fn cubic_coefficients_at_r_star_seven_fifths() {
    let g = Interval::ratio(7, 5, P);
    let rs = algebra::r_star(&g).unwrap();
    let t = coeffs_at_ps(&GasParams::new(g, rs), 3, Mode::Raw).unwrap();
    let expect = [
        (&t.w_scaled[2], 0.28470065541656151487),
        (&t.w_scaled[3], -0.11870248079541666248),
        (&t.z_scaled[2], -0.19690025889827653559),
        (&t.z_scaled[3], 0.088643803858506360415),
    ];
    for (got, want) in expect {
        assert!((got.mid_f64() - want).abs() < 1e-15, "{got} vs {want}");
    }
    assert!((t.dz[3].div_int(6).mid_f64() - 0.0057052899969371512553).abs() < 1e-15);
}

#[test]
fn series_solves_ode_gamma_two() {
    let g = Interval::int(2, P);
    let p = GasParams::new(g.clone(), mid_r34(&g));
    for n in [10, 20] {
        let t = coeffs_at_ps(&p, n, Mode::Raw).unwrap();
        let (rw, rz) = residual_polys(&p, &t);
        for i in 0..n {
            assert!(rw.coeff(i).map_or(true, |c| c.contains_zero()), "W residual {i}");
            assert!(rz.coeff(i).map_or(true, |c| c.contains_zero()), "Z residual {i}");
        }
    }
}

#[test]
fn resonant_index_is_refused() {
    let g = Interval::ratio(7, 5, P);
    let r3 = algebra::invert_k(&g, 3, 1e-30).unwrap();
    let p = GasParams::new(g, r3);
    assert_eq!(coeffs_at_ps(&p, 3, Mode::Raw).err(), Some(selfsim::Error::ResonantIndex(3)));
    let t = coeffs_at_ps(&p, 3, Mode::Normalized(3)).unwrap();
    assert!(t.z[3].is_finite());
}

#[test]
fn sign_endpoints_normalized() {
    for g in [Interval::ratio(7, 5, P), Interval::int(2, P)] {
        let r3 = algebra::invert_k(&g, 3, 1e-20).unwrap();
        let r4 = algebra::invert_k(&g, 4, 1e-20).unwrap();
        let t3 = coeffs_at_ps(&GasParams::new(g.clone(), r3), 3, Mode::Normalized(3)).unwrap();
        let t4 = coeffs_at_ps(&GasParams::new(g.clone(), r4), 4, Mode::Normalized(4)).unwrap();
        // Stored values are Z_j (k − j).
        assert_eq!((-&t3.z[3]).sign(), Sign::Negative);
        assert_eq!((-&t4.z[4]).sign(), Sign::Positive);
    }
}

#[test]
fn singular_split_parts_stay_bounded() {
    let rt = 0.3;
    let mut prev: Option<f64> = None;
    for gt in [1e-2, 1e-3, 1e-4] {
        let p = GasParams::from_f64(1.0 + gt, 1.0 + gt * rt, 256);
        let t = coeffs_at_ps(&p, 3, Mode::SingularSplit).unwrap();
        let sp = t.split.as_ref().unwrap();
        for n in 0..=3 {
            assert!(sp.zs[n].overlaps(&-&sp.ws[n]));
            let recon = &sp.zs[n] / &(&p.gamma - 1i64) + &sp.zns[n];
            assert!(recon.overlaps(&t.z[n]));
        }
        let wns2 = sp.wns[2].mid_f64().abs();
        if let Some(pv) = prev {
            assert!(wns2 < 3.0 * pv + 1.0, "W_2^ns grows: {wns2} vs {pv}");
        }
        prev = Some(wns2);
    }
}

#[test]
fn origin_first_coefficient() {
    for (g, r, a) in [(1.4, 1.08, 1.0), (2.0, 1.2, 0.3), (3.0, 1.1, -2.0)] {
        let s = coeffs_at_origin(g, r, a, 5).unwrap();
        let expect = -2.0 * (r - 1.0) / (3.0 * (g - 1.0));
        assert!((s.w[1] - expect).abs() < 1e-14);
        assert_eq!(s.v[0], (g - 1.0) / 2.0 * a);
    }
    assert_eq!(coeffs_at_origin(1.4, 1.08, 0.0, 5).err(), Some(selfsim::Error::ZeroAmplitude));
}

#[test]
fn origin_exp_coefficients_parity() {
    let s = coeffs_at_origin(1.4, 1.08, 1.0, 12).unwrap();
    let (wo, zo) = s.exp_coefficients();
    // Index i is the power e^{(i-1)ξ}; with j = i − 1 the relation is W_j = (−1)^j Z_j.
    for i in 0..wo.len() {
        let j = i as i32 - 1;
        assert_eq!(wo[i], (-1f64).powi(j) * zo[i]);
    }
}

// ODE oracle: integrate the pair a(ζ) = 𝒲(ζ), b(ζ) = 𝒲(−ζ) with classical RK4.
fn origin_rhs(gamma: f64, r: f64, zeta: f64, a: f64, b: f64) -> (f64, f64) {
    let al = (gamma - 1.0) / 2.0;
    let va = zeta + 0.5 * (a - b + al * (a + b));
    let da = -((r - 1.0) * a + al / (2.0 * zeta) * (a * a - b * b)) / va;
    let vb = -zeta + 0.5 * (b - a + al * (b + a));
    let wprime_neg = -((r - 1.0) * b + al / (-2.0 * zeta) * (b * b - a * a)) / vb;
    (da, -wprime_neg)
}

#[test]
fn origin_series_matches_ode_integration() {
    let (g, r) = (1.4, 1.08);
    let s = coeffs_at_origin(g, r, 1.0, 30).unwrap();
    let (z0, z1) = (0.01, 0.1);
    let (mut a, mut b) = (s.eval(z0), s.eval(-z0));
    let steps = 2000;
    let h = (z1 - z0) / steps as f64;
    let mut z = z0;
    for _ in 0..steps {
        let k1 = origin_rhs(g, r, z, a, b);
        let k2 = origin_rhs(g, r, z + h / 2.0, a + h / 2.0 * k1.0, b + h / 2.0 * k1.1);
        let k3 = origin_rhs(g, r, z + h / 2.0, a + h / 2.0 * k2.0, b + h / 2.0 * k2.1);
        let k4 = origin_rhs(g, r, z + h, a + h * k3.0, b + h * k3.1);
        a += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        b += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        z += h;
    }
    assert!((a - s.eval(z1)).abs() < 1e-8, "{a} vs {}", s.eval(z1));
    assert!((b - s.eval(-z1)).abs() < 1e-8, "{b} vs {}", s.eval(-z1));
    assert!(s.radius_estimate() > z1);
}

#[test]
fn long_run_short_prefix() {
    let run = longrun_z(512, 200).unwrap();
    let c = run.checks().unwrap();
    assert_eq!(c.w_over_z_failure, None);
    assert_eq!(c.ratio_failure, None);
    let z = &run.table.z[200];
    let rel = Float::with_val(64, z.width() / z.mag());
    assert!(rel < 1e-100, "relative width {rel}");
}

#[test]
fn c_bar_star_window() {
    let c = c_bar_star(P).unwrap().abs();
    assert!(c.lo_f64() > 0.00283 && c.hi_f64() < 0.00284);
}

#[test]
fn blowup_orders_near_r3() {
    let g = Interval::ratio(7, 5, P);
    let r3 = algebra::invert_k(&g, 3, 1e-25).unwrap().mid();
    let at = |eps: f64| {
        let r = Interval::point_float(&Float::with_val(P, &r3 + eps));
        coeffs_at_ps(&GasParams::new(g.clone(), r), 6, Mode::Raw).unwrap()
    };
    let rep = asymptotic_blowup_exponent(&at(1e-4), &at(1e-5), 3).unwrap();
    for e in &rep {
        assert!((e.order - e.predicted as f64).abs() < 0.2, "{e:?}");
        assert!(!e.flagged);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Re-running the D/N definitions on the stored W_n, Z_n reproduces the stored D_n.
    #[test]
    fn derived_fields_consistent(g in 1.2f64..4.0, frac in 0.05f64..0.95) {
        let gi = Interval::point(g, P);
        let r3 = algebra::invert_k(&gi, 3, 1e-12).unwrap().mid_f64();
        let r4 = algebra::invert_k(&gi, 4, 1e-12).unwrap().mid_f64();
        let r = r3 + frac * (r4 - r3);
        let p = GasParams::from_f64(g, r, P);
        let t = coeffs_at_ps(&p, 8, Mode::Raw).unwrap();
        let (a, b) = algebra::grad_dw(&p);
        for n in 1..=8 {
            let d = &a * &t.w[n] + &b * &t.z[n];
            prop_assert!(d.overlaps(&t.dw[n]));
        }
    }

    #[test]
    fn growth_bound(g in 1.2f64..4.0, frac in 0.1f64..0.9) {
        let gi = Interval::point(g, P);
        let r3 = algebra::invert_k(&gi, 3, 1e-12).unwrap().mid_f64();
        let r4 = algebra::invert_k(&gi, 4, 1e-12).unwrap().mid_f64();
        let p = GasParams::from_f64(g, r3 + frac * (r4 - r3), P);
        let t = coeffs_at_ps(&p, 25, Mode::Raw).unwrap();
        // Fit C on the first half and check that a modestly inflated C bounds the rest.
        let c = (1..=12)
            .map(|i| t.w_scaled[i].mag().to_f64().max(t.z_scaled[i].mag().to_f64()).powf(1.0 / (i as f64 + 1.0)))
            .fold(0.0, f64::max);
        prop_assert!(c.is_finite() && c > 0.0);
        let c = 2.0 * c;
        for i in 13..=25 {
            prop_assert!(t.w_scaled[i].mag().to_f64() <= c.powi(i as i32 + 1));
            prop_assert!(t.z_scaled[i].mag().to_f64() <= c.powi(i as i32 + 1));
        }
    }
}

// Oracle: the ordinary recurrence just below r*, where k is finite but huge.
#[test]
fn long_run_matches_the_recurrence_just_below_r_star() {
    let bits = 512;
    let run = longrun_z(bits, 60).unwrap();
    let g = Interval::ratio(7, 5, bits);
    let rs = algebra::r_star(&g).unwrap().mid();
    let r = Interval::point_float(&Float::with_val(bits, rs - Float::with_val(bits, 1e-40)));
    let t = coeffs_at_ps(&GasParams::new(g, r), 60, Mode::Raw).unwrap();
    for m in [2, 3, 5, 10, 30, 60] {
        let a = run.table.z[m].mid_f64();
        let b = t.z[m].mid_f64();
        assert!(((a - b) / a).abs() < 1e-20, "Z_{m}: {a:e} vs {b:e}");
        let a = run.table.w[m].mid_f64();
        let b = t.w[m].mid_f64();
        assert!(((a - b) / a).abs() < 1e-20, "W_{m}: {a:e} vs {b:e}");
    }
}
