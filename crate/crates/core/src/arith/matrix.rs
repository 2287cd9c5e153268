use std::fmt;
use std::sync::Arc;

use super::fq::{FqElem, FqField};
use super::primes::factor_u64;
use super::ring::Ring;
use crate::error::{Error, Result};

/// Square matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixFq {
    field: Arc<FqField>,
    dim: usize,
    entries: Vec<FqElem>,
}

impl MatrixFq {
    pub fn from_rows(field: &Arc<FqField>, rows: Vec<Vec<FqElem>>) -> MatrixFq {
        let dim = rows.len();
        assert!(dim >= 1, "matrix dimension must be positive");
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        MatrixFq { field: field.clone(), dim, entries: rows.into_iter().flatten().collect() }
    }

    pub fn from_ints(field: &Arc<FqField>, rows: &[&[i64]]) -> MatrixFq {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| FqElem::from_i64(field, x)).collect())
            .collect();
        MatrixFq::from_rows(field, rows)
    }

    pub fn identity(field: &Arc<FqField>, dim: usize) -> MatrixFq {
        let mut m = MatrixFq {
            field: field.clone(),
            dim,
            entries: vec![FqElem::zero(field); dim * dim],
        };
        for i in 0..dim {
            m.entries[i * dim + i] = FqElem::one(field);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &FqElem {
        &self.entries[i * self.dim + j]
    }

    pub fn mul(&self, rhs: &MatrixFq) -> MatrixFq {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = FqElem::zero(&self.field);
                for k in 0..n {
                    acc = acc.add_ref(&self.get(i, k).mul_ref(rhs.get(k, j)));
                }
                entries.push(acc);
            }
        }
        MatrixFq { field: self.field.clone(), dim: n, entries }
    }

    pub fn sub(&self, rhs: &MatrixFq) -> MatrixFq {
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a.sub_ref(b)).collect();
        MatrixFq { field: self.field.clone(), dim: self.dim, entries }
    }

    pub fn pow(&self, mut e: u128) -> MatrixFq {
        let mut acc = MatrixFq::identity(&self.field, self.dim);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let x = self.get(i, j);
                if i == j {
                    x.is_one()
                } else {
                    x.is_zero()
                }
            })
        })
    }

    pub fn det(&self) -> FqElem {
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut det = FqElem::one(&self.field);
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return FqElem::zero(&self.field);
            };
            if piv != col {
                for k in 0..n {
                    a.swap(piv * n + k, col * n + k);
                }
                det = det.neg_ref();
            }
            let pv = a[col * n + col].clone();
            det = det.mul_ref(&pv);
            let pinv = pv.inv().expect("nonzero pivot");
            for r in col + 1..n {
                let f = a[r * n + col].mul_ref(&pinv);
                if f.is_zero() {
                    continue;
                }
                for k in col..n {
                    let t = f.mul_ref(&a[col * n + k]);
                    a[r * n + k] = a[r * n + k].sub_ref(&t);
                }
            }
        }
        det
    }
}

impl fmt::Debug for MatrixFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MatrixFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.dim)
            .map(|i| {
                let r: Vec<String> = (0..self.dim).map(|j| self.get(i, j).to_string()).collect();
                format!("[{}]", r.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// `|GL_d(F_q)| = q^{d(d-1)/2} * prod_{i=1..d} (q^i - 1)`, factored.
fn gl_order_factored(q: u64, p: u64, d: usize) -> Result<(u128, Vec<u64>)> {
    let mut order: u128 = 1;
    let mut primes = vec![p];
    let qq = q as u128;
    for i in 1..=d as u32 {
        let qi = qq.checked_pow(i).ok_or(Error::Overflow("|GL_d(F_q)|"))?;
        let factor = qi - 1;
        order = order.checked_mul(factor).ok_or(Error::Overflow("|GL_d(F_q)|"))?;
        let f = u64::try_from(factor).map_err(|_| Error::Overflow("q^d - 1"))?;
        primes.extend(factor_u64(f).into_keys());
    }
    let ppart = qq.checked_pow((d * (d - 1) / 2) as u32).ok_or(Error::Overflow("|GL_d(F_q)|"))?;
    order = order.checked_mul(ppart).ok_or(Error::Overflow("|GL_d(F_q)|"))?;
    primes.sort_unstable();
    primes.dedup();
    Ok((order, primes))
}

/// Order of the finite group `GL_d(F_q)`.
pub fn gl_order(q: u64, d: usize) -> Result<u128> {
    let p = *factor_u64(q).keys().next().expect("q > 1");
    Ok(gl_order_factored(q, p, d)?.0)
}

/// Least `t >= 1` with `M^t = I`.
///
/// Starts from `|GL_d(F_q)|`, which every element order divides, and strips
/// prime factors while the power stays the identity.
pub fn matrix_order(m: &MatrixFq) -> Result<u128> {
    if m.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    let (mut t, primes) = gl_order_factored(m.field.size(), m.field.characteristic(), m.dim)?;
    for l in primes {
        let l = l as u128;
        while t % l == 0 && m.pow(t / l).is_identity() {
            t /= l;
        }
    }
    Ok(t)
}
