//! Changes of coordinates in `PGL_{N+1}(Z_(p))`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::morphism::Morphism;
use super::point::{normalize, reduce_point, ProjPointQ};
use super::poly::{HomogPoly, Poly};
use crate::arith::{det_field, val_p, FqField, Rational, Valuation};
use crate::error::{Error, Result};

/// Square matrix with p-integral rational entries and unit determinant,
/// acting on column vectors of homogeneous coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct PGLMatrix {
    p: u64,
    rows: Vec<Vec<Rational>>,
}

impl PGLMatrix {
    pub fn new(rows: Vec<Vec<Rational>>, p: u64) -> Result<Self> {
        crate::arith::primes::require_prime(p)?;
        let n = rows.len();
        if n < 2 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotIntegralInvertible("matrix must be square of size at least 2".into()));
        }
        if rows.iter().flatten().any(|a| matches!(val_p(a, p), Valuation::Finite(v) if v < 0)) {
            return Err(Error::NotIntegralInvertible(format!("an entry is not {p}-integral")));
        }
        let det = det_field(&rows, &Rational::zero());
        if val_p(&det, p) != Valuation::Finite(0) {
            return Err(Error::NotIntegralInvertible(format!("determinant {det} is not a {p}-unit")));
        }
        Ok(PGLMatrix { p, rows })
    }

    pub fn from_ints(rows: &[&[i64]], p: u64) -> Result<Self> {
        PGLMatrix::new(
            rows.iter().map(|r| r.iter().map(|&a| Rational::from_integer(a.into())).collect()).collect(),
            p,
        )
    }

    pub fn identity(size: usize, p: u64) -> Result<Self> {
        let rows = (0..size)
            .map(|i| (0..size).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        PGLMatrix::new(rows, p)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Exact inverse over Q, by Gauss-Jordan elimination.
    pub fn inverse_rows(&self) -> Vec<Vec<Rational>> {
        let n = self.size();
        let mut a: Vec<Vec<Rational>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("invertible matrix");
            a.swap(piv, col);
            let inv = a[col][col].recip();
            for x in a[col].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for k in 0..2 * n {
                    let t = &f * &a[col][k];
                    a[r][k] = &a[r][k] - t;
                }
            }
        }
        a.into_iter().map(|r| r[n..].to_vec()).collect()
    }

    /// `g · P`.
    pub fn apply(&self, point: &ProjPointQ) -> ProjPointQ {
        apply_rows(&self.rows, point)
    }

    /// `g^{-1} · P`.
    pub fn apply_inverse(&self, point: &ProjPointQ) -> ProjPointQ {
        apply_rows(&self.inverse_rows(), point)
    }
}

fn apply_rows(rows: &[Vec<Rational>], point: &ProjPointQ) -> ProjPointQ {
    let c = point.coords();
    let out = rows
        .iter()
        .map(|r| r.iter().zip(c).fold(Rational::zero(), |acc, (a, x)| acc + a * x))
        .collect();
    ProjPointQ::new(out).expect("an invertible matrix maps nonzero vectors to nonzero vectors")
}

/// `φ^g = g^{-1} ∘ φ ∘ g`, expanded exactly.
pub fn conjugate(phi: &Morphism, g: &PGLMatrix) -> Result<Morphism> {
    let n1 = phi.dim() + 1;
    if g.size() != n1 {
        return Err(Error::InvalidMorphism(format!("matrix of size {} acting on P^{}", g.size(), n1 - 1)));
    }
    let linear: Vec<HomogPoly<Rational>> = g
        .rows
        .iter()
        .map(|r| {
            let poly = Poly::from_terms(
                n1,
                r.iter().enumerate().map(|(j, a)| {
                    let mut e = vec![0; n1];
                    e[j] = 1;
                    (e, a.clone())
                }),
            );
            HomogPoly::new(1, poly).expect("linear form")
        })
        .collect();
    let inner: Vec<HomogPoly<Rational>> = phi.components().iter().map(|c| c.compose(&linear)).collect();
    let inv = g.inverse_rows();
    let comps = inv
        .iter()
        .map(|r| {
            r.iter()
                .zip(&inner)
                .fold(HomogPoly::zero(n1, phi.degree()), |acc, (a, f)| acc.add(&f.scale(a)))
        })
        .collect();
    Morphism::new_unchecked(comps)
}

/// A `g ∈ PGL_{N+1}(Z_(p))` with `g^{-1}(points[0]) = [1:0:...:0]` such that
/// every point with the same reduction lands in the chart `x_0 ≠ 0 mod p`.
///
/// The first column of `g` is the primitive integer vector of `points[0]`;
/// the other columns are the standard basis vectors except the one at a
/// coordinate where that vector is a p-unit. The first row of `g^{-1}` is
/// then a linear form that is a unit at every point reducing to the same
/// point of `P^N(F_p)`.
pub fn move_to_chart(points: &[ProjPointQ], p: u64) -> Result<PGLMatrix> {
    let first = points.first().ok_or_else(|| Error::InvalidPoint("no points given".into()))?;
    let n1 = first.coords().len();
    if points.iter().any(|q| q.coords().len() != n1) {
        return Err(Error::InvalidPoint("points live in different dimensions".into()));
    }
    let field = FqField::prime(p)?;
    let target = reduce_point(first, &field);
    if points.iter().any(|q| reduce_point(q, &field) != target) {
        return Err(Error::InconsistentReductions);
    }
    let base = first.primitive_integers();
    let pb = BigInt::from(p);
    let unit = base.iter().position(|c| !(c % &pb).is_zero()).expect("primitive vector has a unit entry");
    let mut rows = vec![vec![Rational::zero(); n1]; n1];
    for (i, row) in rows.iter_mut().enumerate() {
        row[0] = Rational::from_integer(base[i].clone());
    }
    let mut col = 1;
    for j in (0..n1).filter(|&j| j != unit) {
        rows[j][col] = Rational::one();
        col += 1;
    }
    PGLMatrix::new(rows, p)
}

/// The machine-checkable postcondition of [`move_to_chart`].
pub fn check_move_to_chart(points: &[ProjPointQ], g: &PGLMatrix) -> bool {
    let Some(first) = points.first() else { return false };
    let p = g.prime();
    let mut origin = vec![Rational::zero(); first.coords().len()];
    origin[0] = Rational::one();
    if g.apply_inverse(first) != ProjPointQ::new(origin).expect("nonzero") {
        return false;
    }
    points.iter().all(|q| {
        let moved = normalize(&g.apply_inverse(q), p);
        val_p(&moved.coords()[0], p) == Valuation::Finite(0)
    })
}

/// Number of hyperplanes of `P^N(F_q)`: `q^N + ... + q + 1`.
pub fn count_hyperplanes(q: u64, n: usize) -> u128 {
    (0..=n as u32).map(|i| (q as u128).pow(i)).sum()
}

/// Number of hyperplanes through a fixed point: `q^{N-1} + ... + 1`.
pub fn count_hyperplanes_through_point(q: u64, n: usize) -> u128 {
    (0..n as u32).map(|i| (q as u128).pow(i)).sum()
}
