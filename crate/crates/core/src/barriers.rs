//! Barrier curves in the (W, Z) plane, their transversality polynomials and
//! the implicit (resultant) forms of the far-left curves.
//!
//! Curves are stored as polynomial numerators over a common denominator `den`
//! (the constant 1 except for the far-right barrier).

use serde::Serialize;

use crate::algebra::{self, GasParams, SonicData};
use crate::error::{Error, Result};
use crate::rigor::{block_det, det_laplace, IMatrix, IPoly, Interval, Sign};
use crate::series::CoeffTable;

pub const DEFAULT_BETA: f64 = 100.0;

#[derive(Clone, Debug, PartialEq)]
pub enum BarrierKind {
    FarLeft,
    FarLeft75,
    NearLeft(usize),
    NearRight(usize, f64),
    FarRight,
    Extra,
}

#[derive(Clone, Debug)]
pub enum BarrierAux {
    None,
    FarLeft {
        b1: Interval,
        b2: Interval,
        b3: Interval,
    },
    FarLeft75 {
        /// D_Z along the curve divided by t.
        dz_over_t: IPoly,
        t_in: Option<Interval>,
        t_out: Option<Interval>,
    },
    FarRight {
        w0: Interval,
        z0: Interval,
        f0: Interval,
        f1: Interval,
        f2: Interval,
        s_inf: Interval,
    },
    Extra {
        t_f: Interval,
    },
}

#[derive(Clone, Debug)]
pub struct Barrier {
    pub kind: BarrierKind,
    pub params: GasParams,
    pub bw: IPoly,
    pub bz: IPoly,
    pub den: IPoly,
    pub domain: Interval,
    pub aux: BarrierAux,
}

/// Transversality polynomial with the roots its construction forces.
#[derive(Clone, Debug)]
pub struct SignPoly {
    pub p: IPoly,
    pub forced_zeros: Vec<(Interval, usize)>,
    pub quotient: IPoly,
}

impl SignPoly {
    fn with_forced(p: IPoly, forced: Vec<(Interval, usize)>) -> Result<SignPoly> {
        let mut q = p.clone();
        for (root, m) in &forced {
            q = q.divide_forced(root, *m)?;
        }
        Ok(SignPoly { p, forced_zeros: forced, quotient: q })
    }

    /// Every forced root evaluates to an enclosure of 0 and the quotient times
    /// the root factors overlaps the original coefficients.
    pub fn forced_zeros_certified(&self) -> bool {
        let mut recon = self.quotient.clone();
        for (root, m) in &self.forced_zeros {
            if !self.p.eval(root).contains_zero() {
                return false;
            }
            recon = recon.mul(&IPoly::root_power(root, *m));
        }
        recon.overlaps(&self.p)
    }
}

/// D_W, D_Z, N_W, N_Z along (w/h, z/h), as numerators over h, h, h², h².
pub struct CurveFields {
    pub dw: IPoly,
    pub dz: IPoly,
    pub nw: IPoly,
    pub nz: IPoly,
}

pub fn fields_on_curve(p: &GasParams, w: &IPoly, z: &IPoly, h: &IPoly) -> CurveFields {
    let prec = p.prec();
    let half = Interval::ratio(1, 2, prec);
    let a = &p.alpha;
    let sum = w.add(z);
    let diff = w.sub(z);
    let dw = h.add(&sum.add(&diff.scale(a)).scale(&half));
    let dz = h.add(&sum.sub(&diff.scale(a)).scale(&half));
    let rh = h.scale(&p.r);
    let lin_w = rh.add(&w.scale(&(1i64 + a.mul_int(2))).add(&z.scale(&(1i64 - a))).scale(&half));
    let lin_z = rh.add(&w.scale(&(1i64 - a)).add(&z.scale(&(1i64 + a.mul_int(2)))).scale(&half));
    let ha = a * &half;
    let nw = lin_w.mul(w).neg().add(&z.mul(z).scale(&ha));
    let nz = lin_z.mul(z).neg().add(&w.mul(w).scale(&ha));
    CurveFields { dw, dz, nw, nz }
}

fn iv_poly(c: Vec<Interval>) -> IPoly {
    IPoly::new(c)
}

impl Barrier {
    pub fn prec(&self) -> u32 {
        self.params.prec()
    }

    /// Point on the curve at parameter t.
    pub fn point(&self, t: &Interval) -> (Interval, Interval) {
        let h = self.den.eval(t);
        (&self.bw.eval(t) / &h, &self.bz.eval(t) / &h)
    }

    /// Numerator of b_Z′ N_W D_Z − b_W′ N_Z D_W over den⁵ (den = 1 gives the polynomial itself).
    pub fn wedge_numerator(&self) -> IPoly {
        let f = fields_on_curve(&self.params, &self.bw, &self.bz, &self.den);
        let hd = self.den.derive();
        let dbw = self.bw.derive().mul(&self.den).sub(&self.bw.mul(&hd));
        let dbz = self.bz.derive().mul(&self.den).sub(&self.bz.mul(&hd));
        dbz.mul(&f.nw).mul(&f.dz).sub(&dbw.mul(&f.nz).mul(&f.dw))
    }

    /// D_W and D_Z numerators along the curve.
    pub fn d_along(&self) -> (IPoly, IPoly) {
        let f = fields_on_curve(&self.params, &self.bw, &self.bz, &self.den);
        (f.dw, f.dz)
    }

    pub fn sign_poly(&self) -> Result<SignPoly> {
        let prec = self.prec();
        let zero = Interval::zero(prec);
        let one = Interval::one(prec);
        let p = self.wedge_numerator();
        let forced = match &self.kind {
            BarrierKind::FarLeft => vec![(zero, 2), (one, 2)],
            BarrierKind::FarLeft75 => vec![(zero, 3), (one, 2)],
            BarrierKind::NearLeft(n) | BarrierKind::NearRight(n, _) => vec![(zero, n + 1)],
            BarrierKind::FarRight => match &self.aux {
                BarrierAux::FarRight { s_inf, .. } => vec![(zero, 2), (s_inf.clone(), 2)],
                _ => unreachable!(),
            },
            BarrierKind::Extra => vec![],
        };
        SignPoly::with_forced(p, forced)
    }

    /// Uniform samples (t, W, Z) over the domain, midpoints only.
    pub fn sample(&self, n: usize) -> Vec<(f64, f64, f64)> {
        let (lo, hi) = (self.domain.lo_f64(), self.domain.hi_f64());
        let prec = self.prec();
        (0..=n)
            .map(|i| {
                let t = lo + (hi - lo) * i as f64 / n.max(1) as f64;
                let (w, z) = self.point(&Interval::point(t, prec));
                (t, w.mid_f64(), z.mid_f64())
            })
            .collect()
    }
}

/// Far-left quadratic barrier from P_s to the off-axis equilibrium P_◎.
pub fn far_left(p: &GasParams) -> Result<Barrier> {
    far_left_from(p, &algebra::sonic_point(p)?)
}

pub fn far_left_from(p: &GasParams, s: &SonicData) -> Result<Barrier> {
    let e = algebra::p_eye(p)?;
    let den = &e.x1 * &s.z1 - &s.w1 * &e.y1;
    if den.contains_zero() {
        return Err(Error::DegenerateEigenvector("X1 Z1 - W1 Y1 contains 0".into()));
    }
    let b1 = 2i64 * ((&e.y0 - &s.z0) * &e.x1 - (&e.x0 - &s.w0) * &e.y1) / &den;
    let b2 = 2i64 * (&e.x0 - &s.w0 - &b1 * &s.w1);
    let b3 = 2i64 * (&e.y0 - &s.z0 - &b1 * &s.z1);
    let bw = iv_poly(vec![s.w0.clone(), &b1 * &s.w1, b2.div_int(2)]);
    let bz = iv_poly(vec![s.z0.clone(), &b1 * &s.z1, b3.div_int(2)]);
    let prec = p.prec();
    Ok(Barrier {
        kind: BarrierKind::FarLeft,
        params: p.clone(),
        bw,
        bz,
        den: IPoly::constant(Interval::one(prec)),
        domain: Interval::from_f64s(0.0, 1.0, prec)?,
        aux: BarrierAux::FarLeft { b1, b2, b3 },
    })
}

/// Cubic far-left barrier ending at the origin, built from the first three
/// Taylor coefficients in `table`.
pub fn far_left_75(p: &GasParams, table: &CoeffTable) -> Result<Barrier> {
    if table.n_max < 2 {
        return Err(Error::InvalidArgument("far-left cubic needs coefficients up to order 2".into()));
    }
    let cubic = |c: &[Interval]| {
        let half2 = c[2].div_int(2);
        let lead = -(&c[0] + &c[1] + &half2);
        iv_poly(vec![c[0].clone(), c[1].clone(), half2, lead])
    };
    let bw = cubic(&table.w);
    let bz = cubic(&table.z);
    let prec = p.prec();
    let mut b = Barrier {
        kind: BarrierKind::FarLeft75,
        params: p.clone(),
        bw,
        bz,
        den: IPoly::constant(Interval::one(prec)),
        domain: Interval::from_f64s(0.0, 1.0, prec)?,
        aux: BarrierAux::None,
    };
    let (_, dz) = b.d_along();
    let dz_over_t = dz.deflate(&Interval::zero(prec))?;
    let (t_in, t_out) = quadratic_roots(&dz_over_t);
    b.aux = BarrierAux::FarLeft75 { dz_over_t, t_in, t_out };
    Ok(b)
}

/// Real roots of c0 + c1 t + c2 t², smaller-first for c2 > 0, when the
/// discriminant is certified positive.
fn quadratic_roots(q: &IPoly) -> (Option<Interval>, Option<Interval>) {
    let prec = q.prec();
    let z = Interval::zero(prec);
    let c = |i: usize| q.coeff(i).cloned().unwrap_or_else(|| z.clone());
    let (c0, c1, c2) = (c(0), c(1), c(2));
    if c2.contains_zero() {
        return (None, None);
    }
    let disc = c1.square() - 4i64 * &c0 * &c2;
    if !disc.is_positive() {
        return (None, None);
    }
    let Ok(sq) = disc.sqrt() else { return (None, None) };
    let two_c2 = c2.mul_int(2);
    let minus = (-&c1 - &sq) / &two_c2;
    let plus = (-&c1 + &sq) / &two_c2;
    (Some(minus), Some(plus))
}

/// Truncated Taylor polynomial Σ_{i≤n} W_i s^i / i! (and Z).
pub fn near_left(p: &GasParams, table: &CoeffTable, n: usize) -> Result<Barrier> {
    if table.n_max < n {
        return Err(Error::InvalidArgument(format!("table has order {} < {n}", table.n_max)));
    }
    let prec = p.prec();
    Ok(Barrier {
        kind: BarrierKind::NearLeft(n),
        params: p.clone(),
        bw: iv_poly(table.w_scaled[..=n].to_vec()).named("s"),
        bz: iv_poly(table.z_scaled[..=n].to_vec()).named("s"),
        den: IPoly::constant(Interval::one(prec)),
        domain: Interval::from_f64s(0.0, 1.0, prec)?,
        aux: BarrierAux::None,
    })
}

/// Taylor polynomial in −t with an extra β Z_n (−t)^{n+1}/(n+1)! term on the Z side.
pub fn near_right(p: &GasParams, table: &CoeffTable, n: usize, beta: f64) -> Result<Barrier> {
    if table.n_max < n {
        return Err(Error::InvalidArgument(format!("table has order {} < {n}", table.n_max)));
    }
    if !(beta >= 0.0) {
        return Err(Error::InvalidArgument(format!("beta must be non-negative, got {beta}")));
    }
    let prec = p.prec();
    let flip = |c: &[Interval]| -> Vec<Interval> {
        c.iter().enumerate().map(|(i, x)| if i % 2 == 1 { -x } else { x.clone() }).collect()
    };
    let bw = flip(&table.w_scaled[..=n]);
    let mut bz = flip(&table.z_scaled[..=n]);
    let extra = Interval::point(beta, prec) * &table.z_scaled[n] / Interval::int(n as i64 + 1, prec);
    bz.push(if (n + 1) % 2 == 1 { -extra } else { extra });
    Ok(Barrier {
        kind: BarrierKind::NearRight(n, beta),
        params: p.clone(),
        bw: iv_poly(bw),
        bz: iv_poly(bz),
        den: IPoly::constant(Interval::one(prec)),
        domain: Interval::from_f64s(0.0, 1.0, prec)?,
        aux: BarrierAux::None,
    })
}

/// Far-right barrier: the conic through P_s with asymptote W + Z = F0,
/// parametrized by s = (W − W0) + (Z − Z0) on [0, s∞].
pub fn far_right(p: &GasParams) -> Result<Barrier> {
    far_right_from(p, &algebra::sonic_point(p)?)
}

pub fn far_right_from(p: &GasParams, s: &SonicData) -> Result<Barrier> {
    let prec = p.prec();
    let slope_sum = &s.w1 + &s.z1;
    if slope_sum.contains_zero() {
        return Err(Error::DegenerateSlope);
    }
    let f0 = (-4i64 * (&p.r - 1i64)).try_div(&(3i64 * (&p.gamma - 1i64)))?;
    let f2 = Interval::ratio(1, 2, prec);
    let s_inf = &f0 - &s.w0 - &s.z0;
    let f1 = &s_inf * (&f2 * &s.z1 - &s.w1) / &slope_sum;
    // b = (W0 + (F2 s u + F1 s)/(F2+1)/u, Z0 + (s u − F1 s)/(F2+1)/u) with u = s − s∞.
    let u = iv_poly(vec![-&s_inf, Interval::one(prec)]);
    let sv = IPoly::var(prec);
    let inv = Interval::one(prec) / (&f2 + 1i64);
    let bw = u
        .scale(&s.w0)
        .add(&sv.mul(&u).scale(&f2).add(&sv.scale(&f1)).scale(&inv));
    let bz = u.scale(&s.z0).add(&sv.mul(&u).sub(&sv.scale(&f1)).scale(&inv));
    let domain = Interval::new(Interval::zero(prec).lo().clone(), s_inf.hi().clone())?;
    Ok(Barrier {
        kind: BarrierKind::FarRight,
        params: p.clone(),
        bw: bw.named("s"),
        bz: bz.named("s"),
        den: u.named("s"),
        domain,
        aux: BarrierAux::FarRight { w0: s.w0.clone(), z0: s.z0.clone(), f0, f1, f2, s_inf },
    })
}

/// Implicit far-right form B^fr(W, Z).
pub fn far_right_implicit(b: &Barrier, w: &Interval, z: &Interval) -> Interval {
    let BarrierAux::FarRight { w0, z0, f0, f1, f2, .. } = &b.aux else {
        panic!("not a far-right barrier");
    };
    (w - w0 - f2 * z + f2 * z0) * (w + z - f0) - f1 * (w + z - w0 - z0)
}

/// Quartic Q^fr = P^fr (s − s∞)³ / s² and the parabola bound on (0, s∞).
/// The quadratic part is bounded by its vertex value when a2 < 0 and by its
/// endpoint values when a2 > 0; |a3| s∞³ + |a4| s∞⁴ bounds the rest.
/// A negative bound gives Q^fr < 0, i.e. P^fr > 0.
#[derive(Clone, Debug)]
pub struct FarRightBound {
    pub coeffs: Vec<Interval>,
    pub bound: Interval,
    pub a2_negative: bool,
    pub certified: bool,
}

pub fn far_right_parabola_bound(b: &Barrier, sp: &SignPoly) -> FarRightBound {
    let BarrierAux::FarRight { s_inf, .. } = &b.aux else {
        panic!("not a far-right barrier");
    };
    let prec = b.prec();
    let z = Interval::zero(prec);
    let a: Vec<Interval> = (0..5).map(|i| sp.quotient.coeff(i).cloned().unwrap_or_else(|| z.clone())).collect();
    let a2_negative = a[2].is_negative();
    let tail = a[3].abs() * s_inf.pow_int(3) + a[4].abs() * s_inf.pow_int(4);
    let quad_max = if a2_negative {
        Some(&a[0] - a[1].square() / (4i64 * &a[2]))
    } else if a[2].is_positive() {
        let end = &a[0] + &a[1] * s_inf + &a[2] * s_inf.square();
        Some(a[0].hull(&end))
    } else {
        None
    };
    let (bound, certified) = match quad_max {
        Some(q) => {
            let bound = q + tail;
            let ok = bound.is_negative();
            (bound, ok)
        }
        None => (Interval::entire(prec), false),
    };
    FarRightBound { coeffs: a, bound, a2_negative, certified }
}

/// Straight segment (X0 − t, Y0 + t) from P_◎ to the diagonal.
pub fn extra(p: &GasParams) -> Result<Barrier> {
    let e = algebra::p_eye(p)?;
    let prec = p.prec();
    let one = Interval::one(prec);
    let t_f = (&e.x0 - &e.y0).div_int(2);
    Ok(Barrier {
        kind: BarrierKind::Extra,
        params: p.clone(),
        bw: iv_poly(vec![e.x0.clone(), -&one]),
        bz: iv_poly(vec![e.y0.clone(), one.clone()]),
        den: IPoly::constant(one),
        domain: Interval::new(Interval::zero(prec).lo().clone(), t_f.hi().clone())?,
        aux: BarrierAux::Extra { t_f },
    })
}

/// Resultant of the two parametric components in t, as a function of (W, Z).
/// Rows follow the Sylvester layout with W or Z entering the constant terms.
#[derive(Clone, Debug)]
pub struct ImplicitCurve {
    /// Polynomial coefficients, highest degree first, constant term excluded.
    w_head: Vec<Interval>,
    z_head: Vec<Interval>,
    w0: Interval,
    z0: Interval,
}

pub fn implicit_form(b: &Barrier) -> Result<ImplicitCurve> {
    match b.kind {
        BarrierKind::FarLeft | BarrierKind::FarLeft75 => {}
        _ => return Err(Error::InvalidArgument("implicit form exists for far-left barriers only".into())),
    }
    let deg = if b.kind == BarrierKind::FarLeft { 2 } else { 3 };
    let prec = b.prec();
    let z = Interval::zero(prec);
    let head = |p: &IPoly| (1..=deg).rev().map(|i| p.coeff(i).cloned().unwrap_or_else(|| z.clone())).collect();
    Ok(ImplicitCurve {
        w_head: head(&b.bw),
        z_head: head(&b.bz),
        w0: b.bw.coeff(0).unwrap().clone(),
        z0: b.bz.coeff(0).unwrap().clone(),
    })
}

impl ImplicitCurve {
    pub fn degree(&self) -> usize {
        self.w_head.len()
    }

    fn sylvester<T: Clone>(&self, zero: T, lift: impl Fn(&Interval) -> T, wc: T, zc: T) -> Vec<Vec<T>> {
        let d = self.degree();
        let n = 2 * d;
        let mut rows = Vec::with_capacity(n);
        for (head, c) in [(&self.w_head, &wc), (&self.z_head, &zc)] {
            for shift in 0..d {
                let mut row = vec![zero.clone(); n];
                for (j, h) in head.iter().enumerate() {
                    row[shift + j] = lift(h);
                }
                row[shift + d] = c.clone();
                rows.push(row);
            }
        }
        rows
    }

    /// B(W, Z) at an interval point. The cubic case uses the block formula
    /// with the triangular top-left block.
    pub fn eval(&self, w: &Interval, z: &Interval) -> Result<Interval> {
        let prec = w.prec();
        let rows = self.sylvester(Interval::zero(prec), |x| x.clone(), &self.w0 - w, &self.z0 - z);
        if self.degree() == 2 {
            return Ok(det_laplace(&rows));
        }
        let d = self.degree();
        let block = |r0: usize, c0: usize| {
            IMatrix::from_rows((r0..r0 + d).map(|i| rows[i][c0..c0 + d].to_vec()).collect())
        };
        block_det(&block(0, 0)?, &block(0, d)?, &block(d, 0)?, &block(d, d)?)
    }

    /// B(w(s), z(s)) as a polynomial in s.
    pub fn compose(&self, w: &IPoly, z: &IPoly) -> IPoly {
        let wc = IPoly::constant(self.w0.clone()).sub(w);
        let zc = IPoly::constant(self.z0.clone()).sub(z);
        let rows = self.sylvester(IPoly::new(vec![]), |x| IPoly::constant(x.clone()), wc, zc);
        det_laplace(&rows)
    }
}

/// Serializable coefficient dump of a sign polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct SignPolyReport {
    pub p: Vec<(String, String)>,
    pub quotient: Vec<(String, String)>,
    pub forced_zeros: Vec<(String, usize)>,
    pub certified: bool,
}

impl SignPoly {
    pub fn report(&self, digits: usize) -> SignPolyReport {
        let dump = |q: &IPoly| q.coeffs().iter().map(|c| c.to_decimal_strings(digits)).collect();
        SignPolyReport {
            p: dump(&self.p),
            quotient: dump(&self.quotient),
            forced_zeros: self.forced_zeros.iter().map(|(r, m)| (r.to_string(), *m)).collect(),
            certified: self.forced_zeros_certified(),
        }
    }

    /// Certified sign of the quotient on `range` by adaptive bisection.
    pub fn quotient_sign(&self, range: &Interval, want: Sign, max_depth: u32) -> bool {
        self.quotient.certify_sign(range, want, max_depth).is_some()
    }
}
