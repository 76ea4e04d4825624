use proptest::prelude::*;
use selfsim::algebra::GasParams;
use selfsim::error::Error;
use selfsim::rigor::Interval;
use selfsim::series::{self, Mode};
use selfsim::solver::*;

const R_REF: f64 = 1.079404;

fn table(g: f64, r: f64) -> series::CoeffTable {
    series::coeffs_at_ps(&GasParams::from_f64(g, r, 128), 20, Mode::Raw).unwrap()
}

fn r_pair(g: f64) -> (f64, f64) {
    let gi = Interval::point(g, 128);
    (
        selfsim::algebra::invert_k(&gi, 3, 1e-20).unwrap().mid_f64(),
        selfsim::algebra::invert_k(&gi, 4, 1e-20).unwrap().mid_f64(),
    )
}

fn found_7o5() -> ShootResult {
    shoot(1.4, 3, &ShootOptions::default()).unwrap()
}

struct Decay;

impl System for Decay {
    fn rhs(&self, _t: f64, y: [f64; 2]) -> [f64; 2] {
        [-y[0], y[0] - 2.0 * y[1]]
    }
    fn guards(&self, _t: f64, _y: [f64; 2]) -> [f64; 2] {
        [1.0, 1.0]
    }
}

#[test]
fn dopri_matches_closed_form() {
    // y0 = e^{−t}, y1 = e^{−t} − e^{−2t} from y(0) = (1, 0).
    let (tr, stop) = Dopri5::new(1e-12).integrate(&Decay, 0.0, [1.0, 0.0], 3.0);
    assert_eq!(stop, Stop::Reached);
    let y = tr.y.last().unwrap();
    assert!((y[0] - (-3.0f64).exp()).abs() < 1e-10);
    assert!((y[1] - ((-3.0f64).exp() - (-6.0f64).exp())).abs() < 1e-10);
    // Backward direction.
    let (tr, _) = Dopri5::new(1e-12).integrate(&Decay, 0.0, [1.0, 0.0], -1.0);
    assert!((tr.y.last().unwrap()[0] - 1f64.exp()).abs() < 1e-9);
}

#[test]
fn field_equilibria_and_diagonal() {
    let f = Field::new(1.4, 1.08);
    assert_eq!(f.rhs(0.0, 0.0), [0.0, 0.0]);
    let [a, b] = f.rhs(-1.08, -1.08);
    assert!(a.abs() < 1e-13 && b.abs() < 1e-13);
    let s3 = 3f64.sqrt();
    let eye = (2.0 * (s3 - 1.0) * 1.08 / 3.2, -2.0 * (s3 + 1.0) * 1.08 / 3.2);
    assert!(f.nw(eye.0, eye.1).abs() < 1e-14 && f.nz(eye.0, eye.1).abs() < 1e-14);
    for w in [-0.5, 0.3, 2.0] {
        let [u, v] = f.rhs(w, w);
        assert!((u - v).abs() < 1e-14 * u.abs().max(1.0));
    }
}

#[test]
fn left_integration_reaches_origin_of_phase_plane() {
    let f = Field::new(1.4, R_REF);
    let p = integrate_from_ps(f, Direction::Left, &table(1.4, R_REF), 10.0, 1e-11).unwrap();
    assert_eq!(p.stop, Stop::Reached);
    let (xi, w, z) = p.last();
    assert_eq!(xi, 10.0);
    assert!(w.hypot(z) < 1e-3, "|(W,Z)(10)| = {}", w.hypot(z));
}

#[test]
fn profile_starts_at_sonic_point() {
    let (w0, z0) = sonic_point_f64(1.4, R_REF).unwrap();
    for dir in [Direction::Left, Direction::Right] {
        let end = if dir == Direction::Left { 1.0 } else { -0.5 };
        let p = integrate_from_ps(Field::new(1.4, R_REF), dir, &table(1.4, R_REF), end, 1e-11).unwrap();
        assert_eq!(p.xi[0], 0.0);
        assert!((p.w[0] - w0).abs() < 1e-12 && (p.z[0] - z0).abs() < 1e-12);
        assert!(p.w.iter().zip(&p.z).all(|(w, z)| w - z > 0.0));
    }
}

#[test]
fn right_exit_classes_at_the_bracket_ends() {
    let (r3, r4) = r_pair(1.4);
    let opts = ShootOptions::default();
    assert_eq!(classify(1.4, r3 + 1e-3, &opts).unwrap(), Omega::Two);
    assert_eq!(classify(1.4, r4 - 1e-3, &opts).unwrap(), Omega::One);
    let p = integrate_from_ps(Field::new(1.4, r4 - 1e-3), Direction::Right, &table(1.4, r4 - 1e-3), -30.0, 1e-11).unwrap();
    match p.stop {
        Stop::SonicCrossing { which, w, z, .. } => {
            assert_eq!(which, Denominator::DZ);
            assert!(Field::new(1.4, r4 - 1e-3).dz(w, z).abs() < 1e-6);
            // Right half-line: beyond P_s in W.
            assert!(w > sonic_point_f64(1.4, r4 - 1e-3).unwrap().0);
        }
        s => panic!("expected a crossing, got {s:?}"),
    }
}

#[test]
fn short_table_is_rejected() {
    let t = series::coeffs_at_ps(&GasParams::from_f64(1.4, R_REF, 128), 5, Mode::Raw).unwrap();
    assert!(integrate_from_ps(Field::new(1.4, R_REF), Direction::Left, &t, 1.0, 1e-10).is_err());
}

#[test]
fn halving_tolerance_is_self_consistent() {
    let f = Field::new(2.0, 1.15);
    let t = table(2.0, 1.15);
    for (dir, end) in [(Direction::Left, 6.0), (Direction::Right, -0.6)] {
        let a = integrate_from_ps(f, dir, &t, end, 1e-8).unwrap();
        let b = integrate_from_ps(f, dir, &t, end, 5e-9).unwrap();
        let (_, wa, za) = a.last();
        let (_, wb, zb) = b.last();
        assert!((wa - wb).abs().max((za - zb).abs()) < 1e-8 * (1.0 + wa.abs()), "{dir:?}");
    }
}

#[test]
fn step_residual_is_within_local_error() {
    // Oracle: redo every step with a much tighter integrator.
    let f = Field::new(1.4, R_REF);
    let p = integrate_from_ps(f, Direction::Left, &table(1.4, R_REF), 4.0, 1e-9).unwrap();
    let fine = Dopri5::new(1e-14);
    for i in 1..p.len() - 1 {
        let (tr, _) = fine.integrate(&XiSystem(f), p.xi[i], [p.w[i], p.z[i]], p.xi[i + 1]);
        let y = tr.y.last().unwrap();
        let d = (y[0] - p.w[i + 1]).abs().max((y[1] - p.z[i + 1]).abs());
        let scale = 1e-9 * (1.0 + p.w[i + 1].abs().max(p.z[i + 1].abs()));
        assert!(d <= 10.0 * p.err[i + 1].max(1e-3 * scale), "step {i}: defect {d:e}, estimate {:e}", p.err[i + 1]);
    }
}

#[test]
fn origin_integration_agrees_with_its_series() {
    let f = Field::new(2.0, 1.15);
    let a = 1.5;
    let os = origin_series(f, a).unwrap();
    let seed = integrate_from_origin(f, a, 0.2, 1e-12).unwrap().integrator.seed;
    assert!(seed <= 0.05 && seed <= os.radius_estimate() / 4.0);
    // Inside a third of the radius the series itself is an accurate oracle.
    let zeta = 1.3 * seed;
    let p = integrate_from_origin(f, a, zeta, 1e-12).unwrap();
    assert_eq!(p.amplitude, Some(a));
    let (xi, w, z) = p.last();
    assert!((xi - zeta.ln()).abs() < 1e-14);
    let ws = os.eval(zeta) / zeta;
    let zs = -os.eval(-zeta) / zeta;
    assert!((w - ws).abs() < 1e-6 * ws.abs() && (z - zs).abs() < 1e-6 * zs.abs(), "{w} vs {ws}, {z} vs {zs}");
}

#[test]
fn origin_sum_matches_leading_term() {
    for (g, r) in [(1.4, 1.08), (2.0, 1.15), (3.0, 1.2)] {
        let os = origin_series(Field::new(g, r), 0.7).unwrap();
        let zeta = 1e-4;
        let sum = (os.eval(zeta) - os.eval(-zeta)) / zeta;
        let want = -4.0 * (r - 1.0) / (3.0 * (g - 1.0));
        assert!((sum - want).abs() < 1e-6, "gamma {g}: {sum} vs {want}");
    }
    assert!(integrate_from_origin(Field::new(1.4, 1.08), -1.0, 0.5, 1e-10).is_err());
}

#[test]
fn amplitude_calibration_hits_the_target() {
    let f = Field::new(1.4, R_REF);
    let (a, p) = calibrate_amplitude(f, 7.5, 0.5, 1e-12).unwrap();
    assert!(a > 0.0);
    assert!((p.last().0 - 0.5f64.ln()).abs() < 1e-15);
    assert!((p.last().1 - 7.5).abs() < 1e-8);
}

#[test]
fn shooting_recovers_the_reference_value() {
    let t0 = std::time::Instant::now();
    let s = found_7o5();
    assert!((s.r_found - R_REF).abs() < 5e-4, "r_found = {}", s.r_found);
    assert_eq!(s.initial_classes, (Omega::Two, Omega::One));
    assert!(s.e_found.abs() < ShootOptions::default().tol);
    let ends: Vec<f64> = s
        .e_values
        .iter()
        .filter(|x| x.r == s.r_n_bracket.0 || x.r == s.r_n_bracket.1)
        .filter_map(|x| x.e)
        .collect();
    assert!(ends.len() >= 2);
    assert!(ends.iter().any(|e| *e <= 0.0) && ends.iter().any(|e| *e >= 0.0));
    assert!(s.r_n_bracket.0 > s.resonances.0 && s.r_n_bracket.1 < s.resonances.1);
    assert!(t0.elapsed().as_secs() < 60);
}

#[test]
fn shooting_at_five_thirds_is_self_consistent() {
    let opts = ShootOptions::default();
    let s = shoot(5.0 / 3.0, 3, &opts).unwrap();
    let (r3, r4) = r_pair(5.0 / 3.0);
    assert!(s.r_found > r3 && s.r_found < r4);
    assert!(s.e_found.abs() < opts.tol);
    // Regression constant from the first computation (no published value).
    assert!((s.r_found - 1.112816148656).abs() < 1e-8, "{}", s.r_found);
    let (p, e) = assemble_profile(5.0 / 3.0, s.r_found, 10.0, &opts).unwrap();
    assert!(e.abs() < 10.0 * opts.tol);
    let (_, w, z) = p.last();
    assert!(w.hypot(z) < 1e-3);
}

#[test]
fn shooting_rejects_bad_requests() {
    assert!(matches!(shoot(1.4, 4, &ShootOptions::default()), Err(Error::InvalidArgument(_))));
    // Both ends of a bracket squeezed around the middle lie above r^(3).
    let opts = ShootOptions { inset: 0.45, ..ShootOptions::default() };
    assert!(matches!(shoot(1.4, 3, &opts), Err(Error::BracketInvalid(_))));
}

#[test]
fn physical_profile_properties() {
    let s = found_7o5();
    let (p, _) = assemble_profile(1.4, s.r_found, 12.0, &ShootOptions::default()).unwrap();
    assert!(p.w.iter().zip(&p.z).all(|(w, z)| w - z > 0.0));
    let ph = to_physical(&p);
    assert_eq!(ph.zeta[0], 0.0);
    assert_eq!(ph.ubar[0], 0.0);
    assert_eq!(ph.sbar[0], s.amplitude);
    assert!(ph.sbar.iter().all(|v| *v > 0.0));
    let (xi, w, z) = from_physical(&ph);
    assert_eq!(xi.len(), p.len());
    for i in 0..xi.len() {
        assert!((xi[i] - p.xi[i]).abs() < 1e-12);
        assert!((w[i] - p.w[i]).abs() <= 1e-12 * p.w[i].abs().max(1.0));
        assert!((z[i] - p.z[i]).abs() <= 1e-12 * p.z[i].abs().max(1.0));
    }
    let d = diagnostics(&ph).unwrap();
    assert!(d.damping_min > 0.0);
    assert!((d.decay_exponent.unwrap() - (1.0 - s.r_found)).abs() < 0.05);
    assert!(d.zeta_dz_min.unwrap() > 0.0);
    assert!(d.w_decreasing_inside);
}

#[test]
fn flat_profile_has_unit_damping() {
    let n = 50;
    let p = Profile {
        gamma: 1.4,
        r: 1.1,
        xi: (0..n).map(|i| -2.0 + 0.1 * i as f64).collect(),
        w: vec![0.0; n],
        z: vec![0.0; n],
        amplitude: None,
        integrator: IntegratorInfo { method: "none".into(), tol: 0.0, steps: 0, seed: 0.0 },
        stop: Stop::Reached,
        err: vec![0.0; n],
    };
    let ph = to_physical(&p);
    assert_eq!(ph.zeta.len(), n);
    let d = diagnostics(&ph).unwrap();
    assert_eq!(d.damping_min, 1.0);
}

fn dist_to(pieces: &[Vec<(f64, f64)>], w: f64, z: f64) -> f64 {
    pieces.iter().flatten().map(|(a, b)| (a - w).hypot(b - z)).fold(f64::INFINITY, f64::min)
}

#[test]
fn phase_portrait_structure() {
    let (g, r) = (1.4, R_REF);
    let win = Window::square(6.0);
    let pp = phase_portrait(g, r, win, 21).unwrap();
    assert_eq!(pp.arrows.len(), 21 * 21);
    let origin = pp.arrows.iter().find(|a| a.w == 0.0 && a.z == 0.0).unwrap();
    assert_eq!((origin.dw, origin.dz), (0.0, 0.0));
    for a in pp.arrows.iter().filter(|a| a.w == a.z && (a.dw != 0.0 || a.dz != 0.0)) {
        if a.dw.is_finite() {
            assert!((a.dw - a.dz).abs() < 1e-12, "diagonal arrow at {}", a.w);
        }
    }
    let (w0, z0) = sonic_point_f64(g, r).unwrap();
    let spacing = 12.0 / 400.0;
    for name in ["D_Z=0", "N_Z=0"] {
        let nc = pp.nullclines.iter().find(|n| n.name == name).unwrap();
        assert!(dist_to(&nc.pieces, w0, z0) < spacing * 2.0, "{name}");
    }
    let names: Vec<&str> = pp.equilibria.iter().map(|m| m.name).collect();
    for n in ["P_inf", "P_diag", "P_eye", "P_eye_mirror", "P_s", "P_s_bar"] {
        assert!(names.contains(&n));
    }
    let f = Field::new(g, r);
    for m in pp.equilibria.iter().filter(|m| m.name.starts_with("P_eye") || m.name == "P_diag") {
        assert!(f.nw(m.w, m.z).abs() < 1e-12 && f.nz(m.w, m.z).abs() < 1e-12, "{}", m.name);
    }
    assert!(phase_portrait(g, r, win, 1).is_err());
}

proptest! {
    #[test]
    fn gradient_exact_on_quadratics(a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0,
                                    steps in proptest::collection::vec(0.01f64..1.0, 3..20)) {
        let mut x = vec![0.0];
        for h in &steps {
            x.push(x.last().unwrap() + h);
        }
        let y: Vec<f64> = x.iter().map(|t| a * t * t + b * t + c).collect();
        let d = gradient(&x, &y);
        for i in 1..x.len() - 1 {
            prop_assert!((d[i] - (2.0 * a * x[i] + b)).abs() < 1e-8 * (1.0 + x[i].abs()));
        }
    }

    #[test]
    fn dopri_tracks_linear_decay(lambda in 0.1f64..3.0, t_end in 0.1f64..4.0) {
        struct Lin(f64);
        impl System for Lin {
            fn rhs(&self, _t: f64, y: [f64; 2]) -> [f64; 2] { [-self.0 * y[0], self.0 * y[1]] }
            fn guards(&self, _t: f64, _y: [f64; 2]) -> [f64; 2] { [1.0, 1.0] }
        }
        let (tr, _) = Dopri5::new(1e-11).integrate(&Lin(lambda), 0.0, [1.0, 1.0], t_end);
        let y = tr.y.last().unwrap();
        prop_assert!((y[0] - (-lambda * t_end).exp()).abs() < 1e-9);
        prop_assert!((y[1] / (lambda * t_end).exp() - 1.0).abs() < 1e-9);
    }
}
