use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use selfsim::algebra::{self, GasParams};
use selfsim::error::Error;
use selfsim::rigor::{Interval, Sign};
use selfsim::series::{self, Mode};
use selfsim::verify::*;

const P: u32 = 128;

fn bx(chart: Chart, x: (f64, f64), y: (f64, f64)) -> ParamBox {
    ParamBox::from_f64s(chart, x, y, P).unwrap()
}

fn close(a: &Interval, b: &Interval, tol: f64) -> bool {
    (a.mid_f64() - b.mid_f64()).abs() <= tol * (1.0 + b.mid_f64().abs())
}

#[test]
fn constant_positive_proves_in_one_box() {
    let t = VerificationTask::new("one", Sign::Positive, bx(Chart::Raw, (0.0, 1.0), (0.0, 1.0)), |b, _| {
        Ok(Interval::one(b.prec()))
    });
    let rep = branch_and_bound(&t);
    assert_eq!(rep.status, Status::Proved);
    assert_eq!(rep.boxes_processed, 1);
    assert_eq!(rep.status.exit_code(), 0);
}

#[test]
fn false_claim_gives_counterexample_below_threshold() {
    let t = VerificationTask::new("shifted", Sign::Positive, bx(Chart::Inv, (0.0, 0.6), (0.0, 1.0)), |b, _| {
        Ok(&b.x - Interval::ratio(3, 10, b.prec()))
    });
    let rep = branch_and_bound(&t);
    match &rep.status {
        Status::Failed { counterexample } => {
            let hi: f64 = counterexample.x.1.parse().unwrap();
            assert!(hi <= 0.3, "counterexample x upper end {hi}");
            let v: f64 = counterexample.value.as_ref().unwrap().1.parse().unwrap();
            assert!(v < 0.0);
        }
        s => panic!("expected Failed, got {s:?}"),
    }
    assert_eq!(rep.status.exit_code(), 1);
}

#[test]
fn tolerance_exhaustion_on_a_touching_zero() {
    // x^2 >= 0 touches zero at x = 0; the strict claim can never be certified there.
    let t = VerificationTask::new("touch", Sign::Positive, bx(Chart::Raw, (-1.0, 1.0), (0.0, 1.0)), |b, _| {
        Ok(b.x.square())
    })
    .with_tol(1e-3);
    let rep = branch_and_bound(&t);
    assert!(matches!(rep.status, Status::ToleranceExhausted { budget_hit: false, .. }), "{:?}", rep.status);
    assert_eq!(rep.status.exit_code(), 2);

    let t = t.with_tol(1e-30).with_max_boxes(50);
    let rep = branch_and_bound(&t);
    assert!(matches!(rep.status, Status::ToleranceExhausted { budget_hit: true, .. }));
}

#[test]
fn report_is_independent_of_worker_count() {
    let t = find_task("aux_34bounds.NW0").unwrap();
    let a = branch_and_bound_with_workers(&t, 1).unwrap();
    let b = branch_and_bound_with_workers(&t, 4).unwrap();
    assert_eq!(a.status, b.status);
    assert_eq!(a.boxes_processed, b.boxes_processed);
    assert_eq!(a.max_depth, b.max_depth);

    let t = VerificationTask::new("shifted", Sign::Positive, bx(Chart::Inv, (0.0, 0.6), (0.0, 1.0)), |b, _| {
        Ok(&b.x - Interval::ratio(3, 10, b.prec()))
    });
    let a = branch_and_bound_with_workers(&t, 1).unwrap();
    let b = branch_and_bound_with_workers(&t, 3).unwrap();
    assert_eq!(a.status, b.status);
}

fn area(b: &ParamBox) -> f64 {
    let (wx, wy) = b.widths();
    wx * wy
}

#[test]
fn certified_leaves_tile_the_region() {
    let root = bx(Chart::Raw, (-1.0, 1.0), (0.5, 2.0));
    let t = VerificationTask::new("dependent", Sign::Positive, root.clone(), |b, _| {
        // Identically 1/4, but x - x and y - y only shrink with the box.
        Ok(Interval::ratio(1, 4, b.prec()) + &b.x - &b.x + &b.y - &b.y)
    })
    .with_trace(true);
    let rep = branch_and_bound(&t);
    assert!(rep.proved());
    assert!(rep.leaves.len() > 1);
    let total: f64 = rep.leaves.iter().map(area).sum();
    assert!((total - area(&root)).abs() < 1e-12, "leaf area {total} vs {}", area(&root));
    for (i, a) in rep.leaves.iter().enumerate() {
        assert!(root.x.contains(&a.x) && root.y.contains(&a.y));
        for b in &rep.leaves[i + 1..] {
            let ox = a.x.intersect(&b.x).map(|v| v.width_f64()).unwrap_or(0.0);
            let oy = a.y.intersect(&b.y).map(|v| v.width_f64()).unwrap_or(0.0);
            assert!(ox * oy == 0.0, "leaves overlap with positive area");
        }
    }
}

#[test]
fn proved_task_has_no_opposite_sign_at_random_points() {
    let t = find_task("lemma_k_prime").unwrap();
    assert!(branch_and_bound(&t).proved());
    let (x0, x1) = (t.region.x.lo_f64(), t.region.x.hi_f64());
    let (y0, y1) = (t.region.y.lo_f64(), t.region.y.hi_f64());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let x = rng.gen_range(x0..=x1);
        let y = rng.gen_range(y0..=y1);
        let v = t.eval_point(x, y, P).unwrap();
        assert_ne!(v.sign(), Sign::Negative, "negative at ({x}, {y})");
    }
}

#[test]
fn chart_round_trip() {
    let g = Interval::ratio(12, 5, P);
    let r = Interval::ratio(6, 5, P);
    for chart in [Chart::Raw, Chart::Tilde, Chart::Inv] {
        let b = ParamBox::from_raw(chart, &g, &r).unwrap();
        let p = b.gas().unwrap();
        assert!(close(&p.gamma, &g, 1e-30), "{chart:?}");
        assert!(close(&p.r, &r, 1e-30), "{chart:?}");
        assert!(p.gamma.contains(&g) || p.gamma.width_f64() < 1e-35);
    }
    let inv0 = bx(Chart::Inv, (0.0, 0.1), (0.2, 0.3));
    assert!(matches!(inv0.gas(), Err(Error::OutOfChart(_))));
    assert!(inv0.inv_r_pair().is_ok());
}

#[test]
fn chart_parsing() {
    assert_eq!(Chart::parse("tilde").unwrap(), Chart::Tilde);
    assert!(Chart::parse("polar").is_err());
    let b = ParamBox::parse(Chart::Inv, "0.1, 0.2, 0.3, 0.4", P).unwrap();
    assert!(b.x.contains_f64(0.1) && b.x.contains_f64(0.15) && b.y.contains_f64(0.35));
    assert!(ParamBox::parse(Chart::Inv, "0.1,0.2,0.3", P).is_err());
}

#[test]
fn enclosure_constant_terms() {
    let z = Interval::zero(P);
    let cases = [
        (Enclosure::Beta3, 0.09216512413383933, 1e-7),
        (Enclosure::Beta4, 0.6762522531779247, 1e-7),
        (Enclosure::RTilde3, 0.23629194339166726, 1e-6),
        (Enclosure::RTilde4, 0.3333325002740763, 1e-6),
    ];
    for (which, c, s) in cases {
        let v = r34_enclosure(&z, which).unwrap();
        assert!(v.contains_f64(c - 0.99 * s) && v.contains_f64(c + 0.99 * s), "{which:?}");
        assert!(!v.contains_f64(c + 1.01 * s) && !v.contains_f64(c - 1.01 * s), "{which:?}");
    }
    let out = Interval::from_f64s(0.5, 0.65, P).unwrap();
    assert!(matches!(r34_enclosure(&out, Enclosure::Beta3), Err(Error::OutOfChart(_))));
    assert!(r34_enclosure(&out, Enclosure::RTilde3).is_ok());
    let neg = Interval::from_f64s(-0.01, 0.1, P).unwrap();
    assert!(matches!(r34_enclosure(&neg, Enclosure::RTilde4), Err(Error::OutOfChart(_))));
    assert_eq!(Enclosure::parse("r3_low").unwrap(), Enclosure::Beta3);
    assert!(Enclosure::parse("r5").is_err());
}

#[test]
fn enclosures_bracket_the_roots_of_k() {
    // Oracle: r_j from the k-inversion, mapped into the chart coordinate.
    for i in 0..10 {
        let u = 0.6 * (i as f64 + 0.5) / 10.0;
        let uu = Interval::point(u, P);
        let gamma = uu.recip().unwrap();
        for (which, j) in [(Enclosure::Beta3, 3), (Enclosure::Beta4, 4)] {
            let rj = algebra::invert_k(&gamma, j, 1e-25).unwrap();
            let beta = (&rj - Interval::ratio(13, 10, P) + &uu * Interval::ratio(5, 12, P)) * Interval::ratio(20, 3, P);
            let e = r34_enclosure(&uu, which).unwrap();
            assert!(e.contains(&beta), "{which:?} at gamma_inv = {u}: {} not in {e:?}", beta.mid_f64());
        }
        let gt = (2.0 / 3.0) * (i as f64 + 0.5) / 10.0;
        let g = Interval::point(gt, P);
        for (which, j) in [(Enclosure::RTilde3, 3), (Enclosure::RTilde4, 4)] {
            let rj = algebra::invert_k(&(&g + 1i64), j, 1e-25).unwrap();
            let rt = (&rj - 1i64).try_div(&g).unwrap();
            let e = r34_enclosure(&g, which).unwrap();
            assert!(e.contains(&rt), "{which:?} at gamma_tilde = {gt}");
        }
    }
}

#[test]
fn inv_wrappers_are_finite_at_the_edge_and_match_raw_inside() {
    let edge = bx(Chart::Inv, (0.0, 0.0), (0.3, 0.3));
    let (w, z) = w0_over_ginv(&edge).unwrap();
    assert!(w.is_finite() && z.is_finite());
    assert!(nw0_inv_scaled(&edge).unwrap().is_finite());
    assert!(dw0_inv(&edge).unwrap().is_finite());
    assert!(nw0_inv_scaled(&edge).unwrap().is_negative());

    // Oracle: raw sonic point at γ = 1/0.3.
    let b = ParamBox::point(Chart::Inv, 0.3, 0.3, P);
    let p = b.gas().unwrap();
    let s = algebra::sonic_point(&p).unwrap();
    let u = Interval::point(0.3, P);
    let (w, z) = w0_over_ginv(&b).unwrap();
    assert!(close(&w, &s.w0.try_div(&u).unwrap(), 1e-25));
    assert!(close(&z, &s.z0.try_div(&u).unwrap(), 1e-25));
    let nw = algebra::n_w(&p, &s.w0, &s.z0).try_div(&u).unwrap();
    assert!(close(&nw0_inv_scaled(&b).unwrap(), &nw, 1e-25));
    let dw = algebra::d_w(&p, &s.w0, &s.z0);
    assert!(close(&dw0_inv(&b).unwrap(), &dw, 1e-25));

    let tilde = ParamBox::point(Chart::Tilde, 0.4, 0.2, P);
    assert!(matches!(w0_over_ginv(&tilde), Err(Error::OutOfChart(_))));
}

#[test]
fn tilde_wrappers_are_finite_at_the_edge_and_match_raw_inside() {
    let rho = 0.25;
    let edge = ParamBox::point(Chart::Tilde, 0.0, rho, P);
    let v = nw0_tilde_scaled(&edge).unwrap();
    // Limit value −4(1 − r̃)².
    assert!(v.contains_f64(-4.0 * (1.0 - rho) * (1.0 - rho)) || close(&v, &Interval::point(-2.25, P), 1e-30));

    let b = ParamBox::point(Chart::Tilde, 0.4, 0.2, P);
    let p = b.gas().unwrap();
    let s = algebra::sonic_point(&p).unwrap();
    let g = Interval::point(0.4, P);
    let (w, z, sum) = w0_times_gtilde(&b).unwrap();
    assert!(close(&w, &(&s.w0 * &g), 1e-25));
    assert!(close(&z, &(&s.z0 * &g), 1e-25));
    assert!(close(&sum, &(&s.w0 + &s.z0), 1e-25));
    let nw = algebra::n_w(&p, &s.w0, &s.z0) * &g;
    assert!(close(&nw0_tilde_scaled(&b).unwrap(), &nw, 1e-25));
}

#[test]
fn split_wrapper_matches_raw_and_stays_bounded() {
    let b = ParamBox::point(Chart::Tilde, 0.4, 0.2, P);
    let p = b.gas().unwrap();
    let raw = series::coeffs_at_ps(&p, 3, Mode::Raw).unwrap();
    let g = Interval::point(0.4, P);
    for k in 1..=3usize {
        // γ̃·W_k = W_k^s + γ̃·W_k^ns, with W_k^s = (−1)^k·2(1 − r̃).
        let ws = 2i64 * (1i64 - &b.y) * if k % 2 == 0 { 1i64 } else { -1i64 };
        let want = &g * &raw.w[k] - ws;
        let got = split_w_tilde(&b, k).unwrap();
        assert!(close(&got, &want, 1e-20), "k = {k}: {} vs {}", got.mid_f64(), want.mid_f64());
    }
    let small = ParamBox::point(Chart::Tilde, 1e-6, 0.2, P);
    let v = split_w_tilde(&small, 2).unwrap();
    assert!(v.is_finite() && v.mid_f64().abs() < 1.0);
    assert!(matches!(split_w_tilde(&ParamBox::point(Chart::Tilde, 0.0, 0.2, P), 1), Err(Error::OutOfChart(_))));
}

#[test]
fn registry_contents() {
    let reg = lemma_registry();
    assert!(reg.len() >= 15);
    let mut ids: Vec<&str> = reg.iter().map(|t| t.id.as_str()).collect();
    ids.sort();
    ids.dedup();
    assert_eq!(ids.len(), reg.len(), "duplicate ids");
    for id in ["lemma_k_prime", "left_global.inv", "left_global.tilde", "right_f", "paella", "aux_34bounds.NW0"] {
        assert!(find_task(id).is_ok(), "{id}");
    }
    assert_eq!(find_task("aux_34bounds.NW0").unwrap().want, Sign::Negative);
    assert!(matches!(find_task("nope"), Err(Error::UnknownTask(_))));
}

#[test]
fn k_prime_lemma_proves_on_smoke_and_raw_regions() {
    let t = find_task("lemma_k_prime").unwrap();
    let rep = branch_and_bound(&t);
    assert!(rep.proved(), "{:?}", rep.status);
    let raw = t.clone().with_region(bx(Chart::Raw, (1.6667, 5.0), (1.0, 2.0)));
    let rep = branch_and_bound(&raw.with_region(bx(Chart::Raw, (1.6667, 5.0), (1.0, 2.0))));
    assert!(rep.proved(), "{:?}", rep.status);
}

#[test]
fn enclosure_tasks_prove_on_smoke_regions() {
    for id in ["enclosure.B1", "enclosure.B2", "enclosure.B3", "enclosure.B4"] {
        let rep = branch_and_bound(&find_task(id).unwrap());
        assert!(rep.proved(), "{id}: {:?}", rep.status);
    }
}

#[test]
fn escalation_is_counted() {
    // At 53 bits 1 - 1e-17 rounds down to 1 - 2^-53, which hides the 1e-17 margin near x = 0.
    let t = VerificationTask::new("fine", Sign::Positive, bx(Chart::Raw, (0.0, 1.0), (0.0, 0.0)), |b, bits| {
        Ok((&b.x + 1i64 - Interval::decimal("1e-17", bits)?) - 1i64 + Interval::decimal("2e-17", bits)?)
    })
    .with_precision(53);
    let rep = branch_and_bound(&t);
    assert!(rep.proved(), "{:?}", rep.status);
    assert!(rep.escalations > 0);
    assert!(rep.boxes_processed < 100);
}

#[test]
fn gas_params_from_tilde_match_definition() {
    let b = ParamBox::point(Chart::Tilde, 0.5, 0.4, P);
    let p: GasParams = b.gas().unwrap();
    assert!(close(&p.gamma, &Interval::point(1.5, P), 1e-30));
    assert!(close(&p.r, &Interval::point(1.2, P), 1e-30));
}

proptest! {
    #[test]
    fn split_children_cover_parent(x0 in -5.0f64..5.0, wx in 1e-6f64..3.0, y0 in -5.0f64..5.0, wy in 1e-6f64..3.0,
                                   aspect in 0.05f64..20.0) {
        let b = bx(Chart::Raw, (x0, x0 + wx), (y0, y0 + wy));
        let (l, r) = b.split(aspect);
        prop_assert_eq!(l.depth, 1);
        let hx = l.x.hull(&r.x);
        let hy = l.y.hull(&r.y);
        prop_assert!(hx.contains(&b.x) && b.x.contains(&hx));
        prop_assert!(hy.contains(&b.y) && b.y.contains(&hy));
        prop_assert!((area(&l) + area(&r) - area(&b)).abs() <= 1e-12 * (1.0 + area(&b)));
        let along_y = wy > aspect * wx;
        if along_y {
            prop_assert!(l.x.contains(&b.x));
        } else {
            prop_assert!(l.y.contains(&b.y));
        }
    }
}

#[test]
fn registry_smoke_regions() {
    for t in lemma_registry() {
        let rep = branch_and_bound(&t);
        if t.id == "aux_34bounds.DW1" {
            // D_{W,1} evaluates negative on this region, so the claim fails with a witness.
            assert!(matches!(rep.status, Status::Failed { .. }), "{}: {:?}", t.id, rep.status);
        } else {
            assert!(rep.proved(), "{}: {:?}", t.id, rep.status);
        }
    }
}
