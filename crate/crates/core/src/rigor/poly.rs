use crate::error::{Error, Result};
use crate::rigor::interval::{Interval, Sign};

/// Univariate polynomial with interval coefficients, degree ascending.
#[derive(Clone, Debug)]
pub struct IPoly {
    coeffs: Vec<Interval>,
    pub var_name: String,
}

impl IPoly {
    pub fn new(coeffs: Vec<Interval>) -> Self {
        let mut p = IPoly {
            coeffs,
            var_name: "t".to_string(),
        };
        p.trim();
        p
    }

    pub fn named(mut self, var: &str) -> Self {
        self.var_name = var.to_string();
        self
    }

    pub fn constant(c: Interval) -> Self {
        IPoly::new(vec![c])
    }

    /// The identity polynomial t.
    pub fn var(prec: u32) -> Self {
        IPoly::new(vec![Interval::zero(prec), Interval::one(prec)])
    }

    pub fn coeffs(&self) -> &[Interval] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&Interval> {
        self.coeffs.get(i)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn prec(&self) -> u32 {
        self.coeffs.iter().map(|c| c.prec()).max().unwrap_or(crate::rigor::DEFAULT_PREC)
    }

    /// Drop trailing coefficients that are exactly [0, 0].
    pub fn trim(&mut self) {
        while let Some(c) = self.coeffs.last() {
            if c.is_point() && *c.lo() == 0 {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn truncate(&self, max_degree: usize) -> IPoly {
        let mut c = self.coeffs.clone();
        c.truncate(max_degree + 1);
        IPoly::new(c).named(&self.var_name)
    }

    /// Horner evaluation.
    pub fn eval(&self, t: &Interval) -> Interval {
        let mut acc = Interval::zero(self.prec().max(t.prec()));
        for c in self.coeffs.iter().rev() {
            acc = &acc * t + c;
        }
        acc
    }

    pub fn derive(&self) -> IPoly {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul_int(i as i64))
            .collect();
        IPoly::new(c).named(&self.var_name)
    }

    pub fn add(&self, o: &IPoly) -> IPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let p = self.prec().max(o.prec());
        let c = (0..n)
            .map(|i| match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => Interval::zero(p),
            })
            .collect();
        IPoly::new(c).named(&self.var_name)
    }

    pub fn neg(&self) -> IPoly {
        IPoly::new(self.coeffs.iter().map(|c| -c).collect()).named(&self.var_name)
    }

    pub fn sub(&self, o: &IPoly) -> IPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Interval) -> IPoly {
        IPoly::new(self.coeffs.iter().map(|c| c * s).collect()).named(&self.var_name)
    }

    pub fn mul(&self, o: &IPoly) -> IPoly {
        if self.is_zero() || o.is_zero() {
            return IPoly::new(vec![]);
        }
        let p = self.prec().max(o.prec());
        let n = self.coeffs.len() + o.coeffs.len() - 1;
        let mut c = vec![Interval::zero(p); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + a * b;
            }
        }
        IPoly::new(c).named(&self.var_name)
    }

    /// Product truncated to `max_degree`.
    pub fn mul_trunc(&self, o: &IPoly, max_degree: usize) -> IPoly {
        if self.is_zero() || o.is_zero() {
            return IPoly::new(vec![]);
        }
        let p = self.prec().max(o.prec());
        let n = (self.coeffs.len() + o.coeffs.len() - 1).min(max_degree + 1);
        let mut c = vec![Interval::zero(p); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                c[i + j] = &c[i + j] + a * b;
            }
        }
        IPoly::new(c).named(&self.var_name)
    }

    pub fn add_constant(&self, c: &Interval) -> IPoly {
        self.add(&IPoly::constant(c.clone()))
    }

    /// p(q(t)) by Horner over polynomials.
    pub fn compose(&self, q: &IPoly) -> IPoly {
        let mut acc = IPoly::new(vec![]);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add_constant(c);
        }
        acc.named(&q.var_name)
    }

    /// p(s * t) for an interval scalar s.
    pub fn rescale_arg(&self, s: &Interval) -> IPoly {
        let mut pow = Interval::one(self.prec());
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &pow);
            pow = &pow * s;
        }
        IPoly::new(out).named(&self.var_name)
    }

    /// Power (t - root)^m as a polynomial.
    pub fn root_power(root: &Interval, m: usize) -> IPoly {
        let lin = IPoly::new(vec![-root, Interval::one(root.prec())]);
        let mut acc = IPoly::constant(Interval::one(root.prec()));
        for _ in 0..m {
            acc = acc.mul(&lin);
        }
        acc
    }

    /// Divide by (t - root) once; the remainder must contain 0.
    pub fn deflate(&self, root: &Interval) -> Result<IPoly> {
        let n = self.coeffs.len();
        if n < 2 {
            return Err(Error::ForcedZero(root.to_string()));
        }
        let mut q = vec![Interval::zero(self.prec()); n - 1];
        q[n - 2] = self.coeffs[n - 1].clone();
        for i in (1..n - 1).rev() {
            q[i - 1] = &self.coeffs[i] + root * &q[i];
        }
        let rem = &self.coeffs[0] + root * &q[0];
        if !rem.contains_zero() {
            return Err(Error::ForcedZero(root.to_string()));
        }
        Ok(IPoly::new(q).named(&self.var_name))
    }

    /// Divide out (t - root)^mult, certifying each remainder.
    pub fn divide_forced(&self, root: &Interval, mult: usize) -> Result<IPoly> {
        let mut q = self.clone();
        for _ in 0..mult {
            q = q.deflate(root)?;
        }
        Ok(q)
    }

    /// Coefficient-wise overlap test.
    pub fn overlaps(&self, o: &IPoly) -> bool {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = Interval::zero(self.prec());
        (0..n).all(|i| {
            let a = self.coeffs.get(i).unwrap_or(&z);
            let b = o.coeffs.get(i).unwrap_or(&z);
            a.overlaps(b)
        })
    }

    /// Sign certified on every piece of a uniform cover of `range`.
    pub fn sign_on_cover(&self, range: &Interval, pieces: usize) -> Sign {
        let signs: Vec<Sign> = range.subdivide(pieces).iter().map(|t| self.eval(t).sign()).collect();
        if signs.iter().all(|s| *s == Sign::Positive) {
            Sign::Positive
        } else if signs.iter().all(|s| *s == Sign::Negative) {
            Sign::Negative
        } else {
            Sign::Ambiguous
        }
    }

    /// Adaptive bisection certificate of a strict sign on `range`.
    /// Returns the number of leaf pieces used, or None.
    pub fn certify_sign(&self, range: &Interval, want: Sign, max_depth: u32) -> Option<usize> {
        let mut stack = vec![(range.clone(), 0u32)];
        let mut leaves = 0;
        while let Some((t, d)) = stack.pop() {
            let s = self.eval(&t).sign();
            if s == want {
                leaves += 1;
                continue;
            }
            if s != Sign::Ambiguous || d >= max_depth {
                return None;
            }
            let (a, b) = t.bisect();
            stack.push((a, d + 1));
            stack.push((b, d + 1));
        }
        Some(leaves)
    }
}
