use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::{Round, Special};
use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};

pub const DEFAULT_PREC: u32 = 128;
pub const MIN_PREC: u32 = 53;

/// Radicands whose lower endpoint dips below zero by at most this many ulps
/// (relative to max(1, |hi|)) are clamped to zero before taking the root.
pub const SQRT_CLAMP_ULPS_LOG2: i32 = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Sign {
    Positive,
    Negative,
    Ambiguous,
}

/// Closed real interval with MPFR endpoints rounded outward.
#[derive(Clone, Debug)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

fn rnd<T>(prec: u32, val: T, round: Round) -> Float
where
    Float: rug::Assign<T> + rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, val, round).0
}

impl Interval {
    fn raw(mut lo: Float, mut hi: Float) -> Self {
        if lo.is_nan() {
            lo = Float::with_val(hi.prec(), Special::NegInfinity);
        }
        if hi.is_nan() {
            hi = Float::with_val(lo.prec(), Special::Infinity);
        }
        Interval { lo, hi }
    }

    pub fn new(lo: Float, hi: Float) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidEndpoints);
        }
        let p = lo.prec().max(hi.prec());
        if p < MIN_PREC {
            return Err(Error::PrecisionTooLow(p));
        }
        Ok(Interval {
            lo: rnd(p, &lo, Round::Down),
            hi: rnd(p, &hi, Round::Up),
        })
    }

    pub fn from_f64s(lo: f64, hi: f64, prec: u32) -> Result<Self> {
        Self::new(Float::with_val(prec, lo), Float::with_val(prec, hi))
    }

    pub fn point(x: f64, prec: u32) -> Self {
        assert!(x.is_finite(), "non-finite point");
        let f = Float::with_val(prec.max(MIN_PREC), x);
        Interval { lo: f.clone(), hi: f }
    }

    pub fn point_float(x: &Float) -> Self {
        Interval {
            lo: x.clone(),
            hi: x.clone(),
        }
    }

    pub fn int(n: i64, prec: u32) -> Self {
        let p = prec.max(MIN_PREC);
        Interval {
            lo: rnd(p, n, Round::Down),
            hi: rnd(p, n, Round::Up),
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self::int(0, prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::int(1, prec)
    }

    pub fn ratio(num: i64, den: i64, prec: u32) -> Self {
        assert!(den != 0, "zero denominator");
        Self::rational(&Rational::from((num, den)), prec)
    }

    pub fn rational(q: &Rational, prec: u32) -> Self {
        let p = prec.max(MIN_PREC);
        Interval {
            lo: rnd(p, q, Round::Down),
            hi: rnd(p, q, Round::Up),
        }
    }

    /// Exact decimal literal, e.g. "0.09216512413383933" or "1e-8".
    pub fn decimal(s: &str, prec: u32) -> Result<Self> {
        let p = prec.max(MIN_PREC);
        let parsed = Float::parse(s).map_err(|_| Error::Parse(s.to_string()))?;
        let lo = Float::with_val_round(p, parsed, Round::Down).0;
        let parsed = Float::parse(s).map_err(|_| Error::Parse(s.to_string()))?;
        let hi = Float::with_val_round(p, parsed, Round::Up).0;
        Ok(Interval { lo, hi })
    }

    pub fn entire(prec: u32) -> Self {
        let p = prec.max(MIN_PREC);
        Interval {
            lo: Float::with_val(p, Special::NegInfinity),
            hi: Float::with_val(p, Special::Infinity),
        }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    /// Same enclosure re-rounded outward to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        let p = prec.max(MIN_PREC);
        Interval {
            lo: rnd(p, &self.lo, Round::Down),
            hi: rnd(p, &self.hi, Round::Up),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn mid(&self) -> Float {
        let p = self.prec() + 1;
        if !self.is_finite() {
            return Float::with_val(p, 0);
        }
        let mut m = Float::with_val(p, &self.lo + &self.hi);
        m /= 2;
        m
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64_round(Round::Down)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64_round(Round::Up)
    }

    pub fn width(&self) -> Float {
        rnd(self.prec(), &self.hi - &self.lo, Round::Up)
    }

    pub fn width_f64(&self) -> f64 {
        self.width().to_f64_round(Round::Up)
    }

    /// Upper bound of |x| over the interval.
    pub fn mag(&self) -> Float {
        let a = Float::with_val(self.prec(), self.lo.abs_ref());
        let b = Float::with_val(self.prec(), self.hi.abs_ref());
        if a > b {
            a
        } else {
            b
        }
    }

    /// Lower bound of |x| over the interval.
    pub fn mig(&self) -> Float {
        if self.contains_zero() {
            Float::with_val(self.prec(), 0)
        } else {
            let a = Float::with_val(self.prec(), self.lo.abs_ref());
            let b = Float::with_val(self.prec(), self.hi.abs_ref());
            if a < b {
                a
            } else {
                b
            }
        }
    }

    pub fn sign(&self) -> Sign {
        if self.lo > 0 {
            Sign::Positive
        } else if self.hi < 0 {
            Sign::Negative
        } else {
            Sign::Ambiguous
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Sign::Positive
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Sign::Negative
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    pub fn contains_float(&self, x: &Float) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.lo <= x && self.hi >= x
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        self.lo <= *q && self.hi >= *q
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Certified strict ordering self < other.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_gt(&self, other: &Interval) -> bool {
        self.lo > other.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        let p = self.prec().max(other.prec());
        let lo = if self.lo < other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi > other.hi { &self.hi } else { &other.hi };
        Interval {
            lo: rnd(p, lo, Round::Down),
            hi: rnd(p, hi, Round::Up),
        }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let p = self.prec().max(other.prec());
        let lo = if self.lo > other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi < other.hi { &self.hi } else { &other.hi };
        if lo > hi {
            None
        } else {
            Some(Interval {
                lo: rnd(p, lo, Round::Down),
                hi: rnd(p, hi, Round::Up),
            })
        }
    }

    pub fn lower_point(&self) -> Interval {
        Interval::point_float(&self.lo)
    }

    pub fn upper_point(&self) -> Interval {
        Interval::point_float(&self.hi)
    }

    pub fn mid_point(&self) -> Interval {
        Interval::point_float(&self.mid()).with_prec(self.prec())
    }

    /// Split at the midpoint; the halves share the midpoint.
    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.mid();
        (
            Interval {
                lo: self.lo.clone(),
                hi: rnd(self.prec(), &m, Round::Up),
            },
            Interval {
                lo: rnd(self.prec(), &m, Round::Down),
                hi: self.hi.clone(),
            },
        )
    }

    /// Uniform cover by `n` closed pieces.
    pub fn subdivide(&self, n: usize) -> Vec<Interval> {
        assert!(n > 0);
        let p = self.prec();
        let w = Float::with_val(p + 8, &self.hi - &self.lo);
        let cut = |i: usize, round: Round| -> Float {
            if i == 0 {
                return self.lo.clone();
            }
            if i == n {
                return self.hi.clone();
            }
            let mut step = Float::with_val(p + 8, &w * (i as u64));
            step /= n as u64;
            rnd(p, &self.lo + &step, round)
        };
        (0..n)
            .map(|i| Interval {
                lo: cut(i, Round::Down),
                hi: cut(i + 1, Round::Up),
            })
            .collect()
    }

    pub fn abs(&self) -> Interval {
        match self.sign() {
            Sign::Positive => self.clone(),
            Sign::Negative => -self,
            Sign::Ambiguous => Interval {
                lo: Float::with_val(self.prec(), 0),
                hi: self.mag(),
            },
        }
    }

    pub fn square(&self) -> Interval {
        self.pow_int(2)
    }

    pub fn pow_int(&self, n: i32) -> Interval {
        let p = self.prec();
        if n == 0 {
            return Interval::one(p);
        }
        if n < 0 {
            return Interval::one(p) / self.pow_int(-n);
        }
        if n % 2 == 0 {
            let a = self.abs();
            Interval::raw(
                rnd(p, (&a.lo).pow(n), Round::Down),
                rnd(p, (&a.hi).pow(n), Round::Up),
            )
        } else {
            Interval::raw(
                rnd(p, (&self.lo).pow(n), Round::Down),
                rnd(p, (&self.hi).pow(n), Round::Up),
            )
        }
    }

    /// Square root. A lower endpoint below zero by at most the clamp tolerance
    /// is treated as zero; farther below zero is an error.
    pub fn sqrt(&self) -> Result<Interval> {
        let p = self.prec();
        if self.hi < 0 {
            return Err(Error::NegativeSqrt);
        }
        let lo = if self.lo < 0 {
            let scale = if self.hi > 1 { self.hi.clone() } else { Float::with_val(p, 1) };
            let mut tol = Float::with_val(p, 1);
            tol <<= SQRT_CLAMP_ULPS_LOG2 - p as i32;
            tol *= &scale;
            let neg = Float::with_val(p, -&self.lo);
            if neg > tol {
                return Err(Error::RadicandAmbiguous);
            }
            Float::with_val(p, 0)
        } else {
            rnd(p, self.lo.sqrt_ref(), Round::Down)
        };
        Ok(Interval::raw(lo, rnd(p, self.hi.sqrt_ref(), Round::Up)))
    }

    pub fn try_div(&self, other: &Interval) -> Result<Interval> {
        if other.contains_zero() {
            return Err(Error::DivisionByZeroInterval);
        }
        Ok(self.div_nonzero(other))
    }

    pub fn recip(&self) -> Result<Interval> {
        Interval::one(self.prec()).try_div(self)
    }

    fn div_nonzero(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        let dn = |x: &Float, y: &Float| rnd(p, x / y, Round::Down);
        let up = |x: &Float, y: &Float| rnd(p, x / y, Round::Up);
        let (a, b, c, d) = (&self.lo, &self.hi, &o.lo, &o.hi);
        let (lo, hi) = if *c > 0 {
            if *a >= 0 {
                (dn(a, d), up(b, c))
            } else if *b <= 0 {
                (dn(a, c), up(b, d))
            } else {
                (dn(a, c), up(b, c))
            }
        } else if *a >= 0 {
            (dn(b, d), up(a, c))
        } else if *b <= 0 {
            (dn(b, c), up(a, d))
        } else {
            (dn(b, d), up(a, d))
        };
        Interval::raw(lo, hi)
    }

    fn add_i(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        Interval::raw(
            rnd(p, &self.lo + &o.lo, Round::Down),
            rnd(p, &self.hi + &o.hi, Round::Up),
        )
    }

    fn sub_i(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        Interval::raw(
            rnd(p, &self.lo - &o.hi, Round::Down),
            rnd(p, &self.hi - &o.lo, Round::Up),
        )
    }

    fn mul_i(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        let dn = |x: &Float, y: &Float| rnd(p, x * y, Round::Down);
        let up = |x: &Float, y: &Float| rnd(p, x * y, Round::Up);
        let (a, b, c, d) = (&self.lo, &self.hi, &o.lo, &o.hi);
        let (lo, hi) = if *a >= 0 {
            if *c >= 0 {
                (dn(a, c), up(b, d))
            } else if *d <= 0 {
                (dn(b, c), up(a, d))
            } else {
                (dn(b, c), up(b, d))
            }
        } else if *b <= 0 {
            if *c >= 0 {
                (dn(a, d), up(b, c))
            } else if *d <= 0 {
                (dn(b, d), up(a, c))
            } else {
                (dn(a, d), up(a, c))
            }
        } else if *c >= 0 {
            (dn(a, d), up(b, d))
        } else if *d <= 0 {
            (dn(b, c), up(a, c))
        } else {
            let l1 = dn(a, d);
            let l2 = dn(b, c);
            let h1 = up(a, c);
            let h2 = up(b, d);
            (
                if l1 < l2 { l1 } else { l2 },
                if h1 > h2 { h1 } else { h2 },
            )
        };
        Interval::raw(lo, hi)
    }

    fn div_i(&self, o: &Interval) -> Interval {
        if o.contains_zero() {
            Interval::entire(self.prec().max(o.prec()))
        } else {
            self.div_nonzero(o)
        }
    }

    pub fn mul_int(&self, n: i64) -> Interval {
        self.mul_i(&Interval::int(n, self.prec()))
    }

    pub fn div_int(&self, n: i64) -> Interval {
        self.div_i(&Interval::int(n, self.prec()))
    }

    /// Decimal rendering of the endpoints with outward rounding.
    pub fn to_decimal_strings(&self, digits: usize) -> (String, String) {
        (
            self.lo.to_string_radix_round(10, Some(digits), Round::Down),
            self.hi.to_string_radix_round(10, Some(digits), Round::Up),
        )
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(17);
        let (lo, hi) = self.to_decimal_strings(digits);
        write!(f, "[{lo}, {hi}]")
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::raw(-self.hi, -self.lo)
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::raw(-self.hi.clone(), -self.lo.clone())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl $tr<&Interval> for &Interval {
            type Output = Interval;
            fn $m(self, o: &Interval) -> Interval {
                self.$inner(o)
            }
        }
        impl $tr<Interval> for &Interval {
            type Output = Interval;
            fn $m(self, o: Interval) -> Interval {
                self.$inner(&o)
            }
        }
        impl $tr<&Interval> for Interval {
            type Output = Interval;
            fn $m(self, o: &Interval) -> Interval {
                self.$inner(o)
            }
        }
        impl $tr<Interval> for Interval {
            type Output = Interval;
            fn $m(self, o: Interval) -> Interval {
                self.$inner(&o)
            }
        }
        impl $tr<i64> for &Interval {
            type Output = Interval;
            fn $m(self, o: i64) -> Interval {
                self.$inner(&Interval::int(o, self.prec()))
            }
        }
        impl $tr<i64> for Interval {
            type Output = Interval;
            fn $m(self, o: i64) -> Interval {
                self.$inner(&Interval::int(o, self.prec()))
            }
        }
        impl $tr<&Interval> for i64 {
            type Output = Interval;
            fn $m(self, o: &Interval) -> Interval {
                Interval::int(self, o.prec()).$inner(o)
            }
        }
        impl $tr<Interval> for i64 {
            type Output = Interval;
            fn $m(self, o: Interval) -> Interval {
                Interval::int(self, o.prec()).$inner(&o)
            }
        }
    };
}

binop!(Add, add, add_i);
binop!(Sub, sub, sub_i);
binop!(Mul, mul, mul_i);
// Division by an interval containing zero yields the whole line; use
// `try_div` where that must be an error.
binop!(Div, div, div_i);
