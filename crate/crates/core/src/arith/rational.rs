use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Shorthand for `num/den` as a [`Rational`]. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// p-adic valuation of a rational number; zero has infinite valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Exponent of `p` in a nonzero integer; `u64::MAX` never occurs because the
/// caller handles zero.
pub(crate) fn int_val(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Valuation of an integer (zero maps to `Infinite`).
pub fn val_p_int(n: &BigInt, p: u64) -> Valuation {
    if n.is_zero() {
        Valuation::Infinite
    } else {
        Valuation::Finite(int_val(n, p) as i64)
    }
}

/// `v_p(x)`: exponent of `p` in the numerator minus exponent in the denominator.
pub fn val_p(x: &Rational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::Finite(int_val(x.numer(), p) as i64 - int_val(x.denom(), p) as i64)
}

/// `p^e` as a rational, `e` of either sign.
pub fn p_power(p: u64, e: i64) -> Rational {
    let pe = num_traits::pow(BigInt::from(p), e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(pe)
    } else {
        Rational::new(1.into(), pe)
    }
}

/// Reduce a p-integral rational modulo `modulus` (which must be a power of p).
pub(crate) fn residue_mod(x: &Rational, modulus: &BigInt) -> Option<BigInt> {
    let den = x.denom().mod_floor(modulus);
    let inv = mod_inverse(&den, modulus)?;
    Some((x.numer().mod_floor(modulus) * inv).mod_floor(modulus))
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if g.gcd.abs() != BigInt::from(1) {
        return None;
    }
    Some(g.x.mod_floor(m))
}

pub(crate) fn fmt_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(val_p(&rat(9, 2), 3), Valuation::Finite(2));
        assert_eq!(val_p(&int(0), 5), Valuation::Infinite);
        assert_eq!(val_p(&rat(5, 8), 2), Valuation::Finite(-3));
    }

    #[test]
    fn valuation_order_puts_infinity_last() {
        assert!(Valuation::Finite(1_000) < Valuation::Infinite);
        assert_eq!(Valuation::Finite(2) + Valuation::Finite(-5), Valuation::Finite(-3));
        assert_eq!(Valuation::Finite(2) + Valuation::Infinite, Valuation::Infinite);
    }

    #[test]
    fn residues() {
        let m = BigInt::from(49);
        assert_eq!(residue_mod(&rat(1, 2), &m), Some(BigInt::from(25)));
        assert_eq!(residue_mod(&rat(1, 7), &m), None);
        assert_eq!(residue_mod(&rat(-3, 1), &m), Some(BigInt::from(46)));
    }
}
