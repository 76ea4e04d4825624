use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::rigor::interval::{Interval, Sign};
use crate::rigor::poly::IPoly;

/// Minimal commutative ring interface used by the division-free determinant.
pub trait RingElem: Clone {
    fn zero_like(&self) -> Self;
    fn r_add(&self, o: &Self) -> Self;
    fn r_sub(&self, o: &Self) -> Self;
    fn r_mul(&self, o: &Self) -> Self;
}

impl RingElem for Interval {
    fn zero_like(&self) -> Self {
        Interval::zero(self.prec())
    }
    fn r_add(&self, o: &Self) -> Self {
        self + o
    }
    fn r_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn r_mul(&self, o: &Self) -> Self {
        self * o
    }
}

impl RingElem for IPoly {
    fn zero_like(&self) -> Self {
        IPoly::new(vec![])
    }
    fn r_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn r_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn r_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
}

/// Determinant by Laplace expansion along rows, memoized on column subsets.
pub fn det_laplace<T: RingElem>(m: &[Vec<T>]) -> T {
    let n = m.len();
    assert!(n > 0 && n <= 20 && m.iter().all(|r| r.len() == n));
    let mut memo: HashMap<u32, T> = HashMap::new();
    fn rec<T: RingElem>(m: &[Vec<T>], row: usize, used: u32, memo: &mut HashMap<u32, T>) -> T {
        let n = m.len();
        if row == n {
            unreachable!()
        }
        if let Some(v) = memo.get(&used) {
            return v.clone();
        }
        let mut acc: Option<T> = None;
        let mut sign_pos = true;
        for c in 0..n {
            if used & (1 << c) != 0 {
                continue;
            }
            let term = if row + 1 == n {
                m[row][c].clone()
            } else {
                m[row][c].r_mul(&rec(m, row + 1, used | (1 << c), memo))
            };
            acc = Some(match acc {
                None => {
                    if sign_pos {
                        term
                    } else {
                        term.zero_like().r_sub(&term)
                    }
                }
                Some(a) => {
                    if sign_pos {
                        a.r_add(&term)
                    } else {
                        a.r_sub(&term)
                    }
                }
            });
            sign_pos = !sign_pos;
        }
        let v = acc.expect("nonempty row");
        memo.insert(used, v.clone());
        v
    }
    rec(m, 0, 0, &mut memo)
}

/// Dense interval matrix.
#[derive(Clone, Debug)]
pub struct IMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Interval>,
}

impl IMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Interval>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::InvalidArgument("matrix shape".into()));
        }
        Ok(IMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Interval>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::InvalidArgument("ragged rows".into()));
        }
        IMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn identity(n: usize, prec: u32) -> Self {
        let mut e = vec![Interval::zero(prec); n * n];
        for i in 0..n {
            e[i * n + i] = Interval::one(prec);
        }
        IMatrix { rows: n, cols: n, entries: e }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Interval {
        &self.entries[i * self.cols + j]
    }

    fn to_rows(&self) -> Vec<Vec<Interval>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    pub fn mul(&self, o: &IMatrix) -> Result<IMatrix> {
        if self.cols != o.rows {
            return Err(Error::InvalidArgument("shape mismatch".into()));
        }
        let prec = self.entries[0].prec();
        let mut e = Vec::with_capacity(self.rows * o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = Interval::zero(prec);
                for k in 0..self.cols {
                    acc = acc + self.get(i, k) * o.get(k, j);
                }
                e.push(acc);
            }
        }
        IMatrix::new(self.rows, o.cols, e)
    }

    pub fn sub(&self, o: &IMatrix) -> Result<IMatrix> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::InvalidArgument("shape mismatch".into()));
        }
        let e = self.entries.iter().zip(&o.entries).map(|(a, b)| a - b).collect();
        IMatrix::new(self.rows, self.cols, e)
    }

    pub fn det(&self) -> Result<Interval> {
        if self.rows != self.cols {
            return Err(Error::NotSquare);
        }
        Ok(det_laplace(&self.to_rows()))
    }

    /// Gauss-Jordan inverse with largest-mignitude pivoting.
    pub fn inverse(&self) -> Result<IMatrix> {
        if self.rows != self.cols {
            return Err(Error::NotSquare);
        }
        let n = self.rows;
        let prec = self.entries[0].prec();
        let mut a = self.to_rows();
        let mut inv = IMatrix::identity(n, prec).to_rows();
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&i, &j| a[i][col].mig().partial_cmp(&a[j][col].mig()).unwrap())
                .unwrap();
            if a[piv][col].contains_zero() {
                return Err(Error::SingularBlock);
            }
            a.swap(col, piv);
            inv.swap(col, piv);
            let p = a[col][col].clone();
            for j in 0..n {
                a[col][j] = &a[col][j] / &p;
                inv[col][j] = &inv[col][j] / &p;
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let f = a[i][col].clone();
                for j in 0..n {
                    a[i][j] = &a[i][j] - &f * &a[col][j];
                    inv[i][j] = &inv[i][j] - &f * &inv[col][j];
                }
            }
        }
        IMatrix::from_rows(inv)
    }
}

/// det [[A, B], [C, D]] = det(A) det(D - C A^{-1} B), requiring a certified sign of det A.
pub fn block_det(a: &IMatrix, b: &IMatrix, c: &IMatrix, d: &IMatrix) -> Result<Interval> {
    let da = a.det()?;
    if da.sign() == Sign::Ambiguous {
        return Err(Error::SingularBlock);
    }
    let schur = d.sub(&c.mul(&a.inverse()?)?.mul(b)?)?;
    Ok(da * schur.det()?)
}
