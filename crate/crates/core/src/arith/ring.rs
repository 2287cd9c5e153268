use std::fmt::Debug;

use num_traits::{One, Zero};

use super::Rational;

/// Commutative ring with a runtime context.
///
/// Finite-field and p-adic elements carry their field/precision with them, so
/// constants are produced from an existing element rather than statically.
pub trait Ring: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Image of the integer `n` in the ring of `self`.
    fn from_u64_like(&self, n: u64) -> Self;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn pow_u64(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }
}

impl Ring for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_u64_like(&self, n: u64) -> Self {
        Rational::from_integer(n.into())
    }
}

/// A [`Ring`] in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv_field(&self) -> Option<Self>;
}

impl Field for Rational {
    fn inv_field(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

/// Determinant of a square matrix over a field, by Gaussian elimination.
pub fn det_field<C: Field>(rows: &[Vec<C>], zero: &C) -> C {
    let n = rows.len();
    let mut a: Vec<Vec<C>> = rows.to_vec();
    let mut det = zero.one_like();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return zero.zero_like();
        };
        if piv != col {
            a.swap(piv, col);
            det = det.neg_ref();
        }
        det = det.mul_ref(&a[col][col]);
        let pinv = a[col][col].inv_field().expect("nonzero pivot");
        for r in col + 1..n {
            let f = a[r][col].mul_ref(&pinv);
            if f.is_zero() {
                continue;
            }
            for k in col..n {
                let t = f.mul_ref(&a[col][k]);
                a[r][k] = a[r][k].sub_ref(&t);
            }
        }
    }
    det
}
