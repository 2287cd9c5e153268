//! Projective points over Q and over finite fields.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{fmt_rational, p_power, val_p, FqElem, FqField, Rational, Ring, Valuation};
use crate::error::{Error, Result};

/// Point of `P^N(Q)` given by `N+1` rational coordinates, not all zero.
///
/// Coordinates are kept as supplied. Equality and hashing are projective.
#[derive(Clone, Debug)]
pub struct ProjPointQ {
    coords: Vec<Rational>,
}

impl ProjPointQ {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidPoint("need at least two coordinates".into()));
        }
        if coords.iter().all(Zero::is_zero) {
            return Err(Error::InvalidPoint("all coordinates are zero".into()));
        }
        Ok(ProjPointQ { coords })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        ProjPointQ::new(coords.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn from_bigints(coords: Vec<BigInt>) -> Result<Self> {
        ProjPointQ::new(coords.into_iter().map(Rational::from_integer).collect())
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// `N`, the dimension of the ambient projective space.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Coprime integer representative with first nonzero coordinate positive.
    pub fn primitive_integers(&self) -> Vec<BigInt> {
        let lcm = self.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coords.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        primitive(ints)
    }

    /// Maximum absolute value of the primitive integer coordinates.
    pub fn naive_height(&self) -> BigInt {
        self.primitive_integers().iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Representative scaled so the first nonzero coordinate is 1.
    pub fn affine_normalized(&self) -> Vec<Rational> {
        let lead = self.coords.iter().find(|c| !Zero::is_zero(*c)).expect("nonzero point").clone();
        self.coords.iter().map(|c| c / &lead).collect()
    }
}

/// Divide by the gcd and fix the sign of the first nonzero entry.
pub(crate) fn primitive(mut ints: Vec<BigInt>) -> Vec<BigInt> {
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return ints;
    }
    let negative = ints.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
    for c in ints.iter_mut() {
        *c = &*c / &g;
        if negative {
            *c = -&*c;
        }
    }
    ints
}

impl PartialEq for ProjPointQ {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (&self.coords, &other.coords);
        if a.len() != b.len() {
            return false;
        }
        (0..a.len()).all(|i| (i + 1..a.len()).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
    }
}

impl Eq for ProjPointQ {}

impl Hash for ProjPointQ {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.primitive_integers().hash(state);
    }
}

impl fmt::Display for ProjPointQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(fmt_rational).collect();
        write!(f, "[{}]", parts.join(":"))
    }
}

/// Scale `P` by a power of `p` so every coordinate is p-integral and at
/// least one is a p-unit.
pub fn normalize(point: &ProjPointQ, p: u64) -> ProjPointQ {
    let min = point
        .coords
        .iter()
        .filter_map(|c| match val_p(c, p) {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        })
        .min()
        .expect("nonzero point");
    let s = p_power(p, -min);
    ProjPointQ { coords: point.coords.iter().map(|c| c * &s).collect() }
}

/// Reduction of a rational point into `P^N(F)`, `F` a field of characteristic `p`.
pub fn reduce_point(point: &ProjPointQ, field: &Arc<FqField>) -> ProjPointFq {
    let p = field.characteristic();
    let normalized = normalize(point, p);
    let coords = normalized
        .coords
        .iter()
        .map(|c| reduce_rational(c, field).expect("normalized coordinates are p-integral"))
        .collect();
    ProjPointFq::new(coords).expect("a normalized point has a unit coordinate")
}

/// Image of a p-integral rational in `field`; `None` if the denominator is divisible by p.
pub(crate) fn reduce_rational(x: &Rational, field: &Arc<FqField>) -> Option<FqElem> {
    let p = BigInt::from(field.characteristic());
    let num = x.numer().mod_floor(&p);
    let den = x.denom().mod_floor(&p);
    if den.is_zero() {
        return None;
    }
    let to_elem = |n: &BigInt| FqElem::from_i64(field, i64::try_from(n).expect("residue below p"));
    Some(to_elem(&num).mul_ref(&to_elem(&den).inv().ok()?))
}

/// Point of `P^N(F_q)`, stored with its first nonzero coordinate equal to 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPointFq {
    coords: Vec<FqElem>,
}

impl ProjPointFq {
    /// Canonicalizes; fails on the zero tuple.
    pub fn new(coords: Vec<FqElem>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidPoint("need at least two coordinates".into()));
        }
        let lead = coords
            .iter()
            .find(|c| !c.is_zero())
            .ok_or_else(|| Error::InvalidPoint("all coordinates are zero".into()))?;
        let inv = lead.inv()?;
        Ok(ProjPointFq { coords: coords.iter().map(|c| c.mul_ref(&inv)).collect() })
    }

    pub fn from_ints(field: &Arc<FqField>, coords: &[i64]) -> Result<Self> {
        ProjPointFq::new(coords.iter().map(|&c| FqElem::from_i64(field, c)).collect())
    }

    pub fn coords(&self) -> &[FqElem] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn field(&self) -> &Arc<FqField> {
        self.coords[0].field()
    }

    /// The `index`-th point of `P^N(F_q)` in a fixed enumeration order:
    /// points are grouped by the position of their leading 1, earliest first,
    /// and within a group the trailing coordinates count up in base `q`.
    pub fn from_index(field: &Arc<FqField>, n: usize, mut index: u128) -> ProjPointFq {
        let q = field.size() as u128;
        for lead in 0..=n {
            let block = q.pow((n - lead) as u32);
            if index < block {
                let mut coords = vec![FqElem::zero(field); n + 1];
                coords[lead] = FqElem::one(field);
                for c in coords[lead + 1..].iter_mut().rev() {
                    *c = FqElem::from_index(field, (index % q) as u64);
                    index /= q;
                }
                return ProjPointFq { coords };
            }
            index -= block;
        }
        panic!("point index out of range");
    }

    /// Position of this point in the order used by [`ProjPointFq::from_index`].
    pub fn index(&self) -> u128 {
        let q = self.field().size() as u128;
        let n = self.dim();
        let lead = self.coords.iter().position(|c| !c.is_zero()).expect("nonzero point");
        let offset: u128 = (0..lead).map(|i| q.pow((n - i) as u32)).sum();
        let tail = self.coords[lead + 1..].iter().fold(0u128, |acc, c| acc * q + c.index() as u128);
        offset + tail
    }

    /// All points of `P^N(F_q)` in index order.
    pub fn all(field: &Arc<FqField>, n: usize) -> impl Iterator<Item = ProjPointFq> + '_ {
        let total = count_projective_points(field.size(), n).expect("point count fits in u128");
        (0..total).map(move |i| ProjPointFq::from_index(field, n, i))
    }
}

/// `|P^N(F_q)| = q^N + ... + q + 1`.
pub fn count_projective_points(q: u64, n: usize) -> Option<u128> {
    let mut total: u128 = 0;
    for i in 0..=n as u32 {
        total = total.checked_add((q as u128).checked_pow(i)?)?;
    }
    Some(total)
}

impl fmt::Debug for ProjPointFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ProjPointFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(":"))
    }
}
