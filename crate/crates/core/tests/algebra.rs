use proptest::prelude::*;
use rug::Float;
use selfsim::algebra::*;
use selfsim::rigor::{Interval, Sign};

const P: u32 = 128;

fn sqrt5() -> f64 {
    5f64.sqrt()
}

#[test]
fn k_at_one_is_one() {
    for g in [1.1, 1.4, 5.0 / 3.0, 2.0, 5.0] {
        let p = GasParams::new(Interval::point(g, P), Interval::one(P));
        let k = k_of_r(&p).unwrap();
        assert!(k.contains_f64(1.0), "gamma {g}: {k}");
        assert!(k.width_f64() < 1e-20, "gamma {g}: width {}", k.width_f64());
    }
}

#[test]
fn k_one_minus_one_is_ambiguous() {
    let p = GasParams::new(Interval::ratio(7, 5, P), Interval::one(P));
    let d = k_of_r(&p).unwrap() - 1i64;
    assert_eq!(d.sign(), Sign::Ambiguous);
    assert!(d.width_f64() < 1e-20);
}

#[test]
fn sonic_point_solves_dz_nz() {
    for (g, r) in [(2.0, 1.05), (1.4, 1.08), (3.0, 1.2)] {
        let p = GasParams::from_f64(g, r, 256);
        let s = sonic_point(&p).unwrap();
        assert!(d_z(&p, &s.w0, &s.z0).contains_zero());
        assert!(n_z(&p, &s.w0, &s.z0).contains_zero());
        assert!(d_z(&p, &s.wbar0, &s.zbar0).contains_zero());
        assert!(n_z(&p, &s.wbar0, &s.zbar0).contains_zero());
        let w1 = n_w(&p, &s.w0, &s.z0) / &s.dw0;
        assert!(w1.overlaps(&s.w1));
    }
}

// Independent oracle: solve D_Z = N_Z = 0 by Newton in plain f64 and compare.
#[test]
fn sonic_point_matches_newton_oracle() {
    let (g, r) = (2.0f64, 1.05f64);
    let a = (g - 1.0) / 2.0;
    let f = |w: f64, z: f64| {
        let dz = 1.0 + 0.5 * (w + z - a * (w - z));
        let nz = -(r + 0.5 * ((1.0 - a) * w + (1.0 + 2.0 * a) * z)) * z + 0.5 * a * w * w;
        (dz, nz)
    };
    let (mut w, mut z) = (-0.5, -1.5);
    for _ in 0..60 {
        let (f1, f2) = f(w, z);
        let h = 1e-7;
        let (a1, a2) = f(w + h, z);
        let (b1, b2) = f(w, z + h);
        let j = [[(a1 - f1) / h, (b1 - f1) / h], [(a2 - f2) / h, (b2 - f2) / h]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        w -= (j[1][1] * f1 - j[0][1] * f2) / det;
        z -= (-j[1][0] * f1 + j[0][0] * f2) / det;
    }
    let s = sonic_point(&GasParams::from_f64(g, r, P)).unwrap();
    let hit = (s.w0.mid_f64() - w).abs() < 1e-9 && (s.z0.mid_f64() - z).abs() < 1e-9;
    let hit_bar = (s.wbar0.mid_f64() - w).abs() < 1e-9 && (s.zbar0.mid_f64() - z).abs() < 1e-9;
    assert!(hit || hit_bar, "newton ({w},{z}) vs {} {}", s.w0, s.z0);
}

#[test]
fn eigen_slopes_satisfy_wedge() {
    for (g, r) in [(2.0, 1.05), (1.4, 1.07), (1.2, 1.02)] {
        let p = GasParams::from_f64(g, r, 256);
        let s = sonic_point(&p).unwrap();
        let (gw, gz) = grad_dz(&p);
        let (nz_w, nz_z) = grad_nz(&p, &s.w0, &s.z0);
        for z1 in [&s.z1, &s.z1_check] {
            // Slope condition from differentiating D_Z Z' = N_Z and D_W W' = N_W at P_s.
            let dz = &gw * &s.w1 + &gz * z1;
            let lhs = &dz * z1;
            let rhs = &nz_w * &s.w1 + &nz_z * z1;
            assert!((lhs - rhs).contains_zero());
        }
    }
}

#[test]
fn dz1_labeling_gives_k_at_least_one() {
    let p = GasParams::from_f64(1.4, 1.08, P);
    let s = sonic_point(&p).unwrap();
    let k = s.k.clone().unwrap();
    assert!(k.lo_f64() >= 1.0);
    assert!((&s.dz1_check / &s.dz1).overlaps(&k));
}

// Oracle for k(1.08) at γ=7/5 computed independently in mpmath (40 digits)
// from the quadratic roots at P_s.
#[test]
fn k_regression_seven_fifths() {
    let p = GasParams::new(Interval::ratio(7, 5, 256), Interval::decimal("1.08", 256).unwrap());
    let k = k_of_r(&p).unwrap();
    assert!((k.mid_f64() - K_7_5_AT_108).abs() < 1e-12, "{k}");
}

const K_7_5_AT_108: f64 = 3.345_911_616_936_970_8;

#[test]
fn k_blows_up_near_r_star() {
    let g = Interval::ratio(7, 5, P);
    let rs = r_star(&g).unwrap();
    let r = Interval::point_float(&Float::with_val(P, rs.lo() - 1e-12));
    let k = k_of_r(&GasParams::new(g, r)).unwrap();
    assert!(k.lo_f64() > 1e3);
}

#[test]
fn dz1_vanishes_at_r_star() {
    let g = Interval::ratio(7, 5, P);
    let rs = r_star(&g).unwrap();
    let s = sonic_point(&GasParams::new(g, rs)).unwrap();
    assert!(s.dz1.contains_zero());
    assert!(s.k.is_err());
}

#[test]
fn r_star_branches_agree_at_five_thirds() {
    let (a, b) = r_star_branches(&Interval::ratio(5, 3, P)).unwrap();
    assert!(a.overlaps(&b));
    let r3 = r_star(&Interval::int(3, P)).unwrap();
    assert!((r3.mid_f64() - 8.0 / (2.0 + 2.0 * 3f64.sqrt())).abs() < 1e-15);
}

#[test]
fn r3_r4_bracket_reference_value() {
    let g = Interval::ratio(7, 5, P);
    let r3 = invert_k(&g, 3, 1e-12).unwrap();
    let r4 = invert_k(&g, 4, 1e-12).unwrap();
    assert!(r3.hi_f64() < 1.079404 && 1.079404 < r4.lo_f64(), "{r3} {r4}");
    assert!(invert_k(&g, 1, 1e-12).unwrap().contains_f64(1.0));
    let k = k_of_r(&GasParams::new(g, r3.mid_point())).unwrap();
    assert!((k.mid_f64() - 3.0).abs() < 1e-8);
}

#[test]
fn eye_point_is_equilibrium() {
    for (g, r) in [(2.0, 1.1), (1.4, 1.05), (4.0, 1.3)] {
        let p = GasParams::from_f64(g, r, P);
        let e = p_eye(&p).unwrap();
        assert!(n_w(&p, &e.x0, &e.y0).contains_zero());
        assert!(n_z(&p, &e.x0, &e.y0).contains_zero());
        // (X1, Y1) is an eigenvector of the linearized field at P_eye.
        let f = fields_dn(&p, &e.x0, &e.y0);
        let (a, b) = grad_nw(&p, &e.x0, &e.y0);
        let (c, d) = grad_nz(&p, &e.x0, &e.y0);
        let u = (a * &e.x1 + b * &e.y1) / &f.dw;
        let v = (c * &e.x1 + d * &e.y1) / &f.dz;
        let wedge = &u * &e.y1 - &v * &e.x1;
        let scale = (u.mag().to_f64() + v.mag().to_f64()) * (e.x1.mag().to_f64() + e.y1.mag().to_f64());
        assert!(wedge.mag().to_f64() < 1e-25 * scale.max(1.0), "wedge {wedge}");
    }
}

#[test]
fn seven_fifths_eye_x0() {
    let g = Interval::ratio(7, 5, P);
    let rs = r_star(&g).unwrap();
    let e = p_eye(&GasParams::new(g, rs.clone())).unwrap();
    let expect = 2.0 * (3f64.sqrt() - 1.0) * rs.mid_f64() / 3.2;
    assert!((e.x0.mid_f64() - expect).abs() < 1e-14);
}

// Limits as r -> r* at γ = 7/5.  These are the exact r = r* values.
#[test]
fn limits_at_r_star() {
    let g = Interval::ratio(7, 5, P);
    let rs = r_star(&g).unwrap();
    let s = sonic_point(&GasParams::new(g, rs)).unwrap();
    assert!((s.w1.mid_f64() - (5.0 - 3.0 * sqrt5()) / 4.0).abs() < 1e-14);
    assert!((s.z1.mid_f64() - (3.0 * sqrt5() - 5.0) / 6.0).abs() < 1e-14);
    assert!((s.z0.mid_f64() + sqrt5()).abs() < 1e-14);
    assert!((s.dw0.mid_f64() - (sqrt5() - 1.0) / 2.0).abs() < 1e-14);
    assert!((s.dz1_check.mid_f64() - (3.0 * sqrt5() - 1.0) / 4.0).abs() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dw0_and_dz1_positive(g in 1.05f64..6.0, frac in 0.0f64..0.98) {
        let gi = Interval::point(g, P);
        let rs = r_star(&gi).unwrap().mid_f64();
        let r = 1.0 + frac * (rs - 1.0);
        let s = sonic_point(&GasParams::new(gi, Interval::point(r, P))).unwrap();
        prop_assert_eq!(s.dw0.sign(), Sign::Positive);
        if frac > 0.0 {
            prop_assert_eq!(s.dz1.sign(), Sign::Positive);
        }
    }

    #[test]
    fn r_star_below_connecticut_bound(g in 1.01f64..20.0) {
        let rs = r_star(&Interval::point(g, P)).unwrap();
        prop_assert!(rs.hi_f64() < 2.0 - 1.0 / g);
        prop_assert!(rs.hi_f64() < g);
    }

    #[test]
    fn k_increasing_in_r(g in 1.05f64..6.0, a in 0.01f64..0.9, d in 0.001f64..0.09) {
        let gi = Interval::point(g, P);
        let rs = r_star(&gi).unwrap().mid_f64();
        let r0 = 1.0 + a * (rs - 1.0);
        let r1 = 1.0 + (a + d) * (rs - 1.0);
        let k0 = k_of_r(&GasParams::new(gi.clone(), Interval::point(r0, P))).unwrap();
        let k1 = k_of_r(&GasParams::new(gi, Interval::point(r1, P))).unwrap();
        prop_assert!(k0.certainly_lt(&k1));
    }

    #[test]
    fn minus_r_diagonal_is_equilibrium(g in 1.05f64..6.0, r in 1.0f64..1.3) {
        let p = GasParams::from_f64(g, r, P);
        let m = Interval::point(-r, P);
        prop_assert!(n_w(&p, &m, &m).contains_zero());
        prop_assert!(n_z(&p, &m, &m).contains_zero());
    }
}
