//! Finite fields `F_{p^j}` in a polynomial basis.
//!
//! The modulus is the lexicographically least monic irreducible of degree `j`
//! (coefficients compared from degree `j-1` down to the constant term), so a
//! given `(p, j)` always produces the same field.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::primes::{factor_u64, require_prime};
use super::ring::{Field, Ring};
use crate::error::{Error, Result};

/// Dense polynomials over `F_p`, lowest degree first, no trailing zeros.
mod fp_poly {
    pub type Poly = Vec<u64>;

    pub fn trim(mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
            }
        }
        trim(out)
    }

    fn inv(a: u64, p: u64) -> u64 {
        let mut acc = 1u64;
        let (mut b, mut e) = (a % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                acc = ((acc as u128 * b as u128) % p as u128) as u64;
            }
            b = ((b as u128 * b as u128) % p as u128) as u64;
            e >>= 1;
        }
        acc
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Poly {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv(m[dm], p);
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let c = ((*r.last().unwrap() as u128 * lead_inv as u128) % p as u128) as u64;
            for (i, &mi) in m.iter().enumerate() {
                let t = ((c as u128 * mi as u128) % p as u128) as u64;
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// `x^(p^k) mod m`.
    pub fn frobenius_power(k: u32, m: &[u64], p: u64) -> Poly {
        let mut x = rem(&[0, 1], m, p);
        for _ in 0..k {
            x = pow_mod(&x, p, m, p);
        }
        x
    }

    fn pow_mod(b: &[u64], mut e: u64, m: &[u64], p: u64) -> Poly {
        let mut acc = rem(&[1], m, p);
        let mut b = b.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            e >>= 1;
        }
        acc
    }
}

/// Rabin's test: `f` monic of degree `j` is irreducible over `F_p` iff
/// `x^(p^j) = x mod f` and `gcd(x^(p^(j/l)) - x, f) = 1` for each prime `l | j`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let j = (f.len() - 1) as u32;
    if j == 1 {
        return true;
    }
    let x = fp_poly::rem(&[0, 1], f, p);
    if fp_poly::frobenius_power(j, f, p) != x {
        return false;
    }
    factor_u64(j as u64).keys().all(|&l| {
        let h = fp_poly::frobenius_power(j / l as u32, f, p);
        fp_poly::gcd(&fp_poly::sub(&h, &x, p), f, p).len() == 1
    })
}

/// Least monic irreducible polynomial of degree `j` over `F_p`, as
/// coefficients `c_0, ..., c_{j-1}, 1`.
pub fn find_irreducible(p: u64, j: u32) -> Result<Vec<u64>> {
    require_prime(p)?;
    assert!(j >= 1, "extension degree must be positive");
    let count = p.checked_pow(j).ok_or(Error::Overflow("p^j"))?;
    for code in 0..count {
        let mut f: Vec<u64> = Vec::with_capacity(j as usize + 1);
        let mut c = code;
        for _ in 0..j {
            f.push(c % p);
            c /= p;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return Ok(f);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// The field `F_{p^j} = F_p[a] / (m(a))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FqField {
    p: u64,
    j: u32,
    q: u64,
    modulus: Vec<u64>,
}

impl FqField {
    pub fn new(p: u64, j: u32) -> Result<Arc<FqField>> {
        let modulus = find_irreducible(p, j)?;
        let q = p.checked_pow(j).filter(|q| *q < 1 << 62).ok_or(Error::Overflow("field size"))?;
        Ok(Arc::new(FqField { p, j, q, modulus }))
    }

    pub fn prime(p: u64) -> Result<Arc<FqField>> {
        FqField::new(p, 1)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.j
    }

    pub fn size(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
}

/// Element of a finite field. Coordinates are in the basis `1, a, ..., a^{j-1}`.
#[derive(Clone)]
pub struct FqElem {
    field: Arc<FqField>,
    coords: Vec<u64>,
}

impl FqElem {
    pub fn zero(field: &Arc<FqField>) -> FqElem {
        FqElem { field: field.clone(), coords: vec![0; field.j as usize] }
    }

    pub fn one(field: &Arc<FqField>) -> FqElem {
        FqElem::from_i64(field, 1)
    }

    pub fn from_i64(field: &Arc<FqField>, n: i64) -> FqElem {
        let mut coords = vec![0; field.j as usize];
        coords[0] = n.rem_euclid(field.p as i64) as u64;
        FqElem { field: field.clone(), coords }
    }

    pub fn from_coords(field: &Arc<FqField>, coords: &[u64]) -> FqElem {
        assert_eq!(coords.len(), field.j as usize, "coordinate count");
        FqElem { field: field.clone(), coords: coords.iter().map(|c| c % field.p).collect() }
    }

    /// Element whose base-`p` digits (constant coordinate first) spell `index`.
    pub fn from_index(field: &Arc<FqField>, mut index: u64) -> FqElem {
        let mut coords = vec![0; field.j as usize];
        for c in coords.iter_mut() {
            *c = index % field.p;
            index /= field.p;
        }
        FqElem { field: field.clone(), coords }
    }

    pub fn index(&self) -> u64 {
        self.coords.iter().rev().fold(0, |acc, &c| acc * self.field.p + c)
    }

    /// All `q` elements in index order.
    pub fn all(field: &Arc<FqField>) -> impl Iterator<Item = FqElem> + '_ {
        (0..field.q).map(move |i| FqElem::from_index(field, i))
    }

    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    /// Value of a prime-field element as an integer in `[0, p)`.
    pub fn as_prime_field(&self) -> Option<u64> {
        self.coords[1..].iter().all(|&c| c == 0).then_some(self.coords[0])
    }

    pub fn inv(&self) -> Result<FqElem> {
        if Ring::is_zero(self) {
            return Err(Error::ZeroElement);
        }
        Ok(self.pow_u64(self.field.q - 2))
    }

    pub fn div(&self, rhs: &FqElem) -> Result<FqElem> {
        Ok(self.mul_ref(&rhs.inv()?))
    }

    /// Image of this element in another field of the same characteristic.
    /// Only prime-field elements can move between fields.
    pub fn embed(&self, target: &Arc<FqField>) -> Result<FqElem> {
        if target.p != self.field.p {
            return Err(Error::RingMismatch);
        }
        let v = self.as_prime_field().ok_or(Error::RingMismatch)?;
        Ok(FqElem::from_i64(target, v as i64))
    }

    fn check(&self, rhs: &FqElem) {
        assert!(
            Arc::ptr_eq(&self.field, &rhs.field) || self.field == rhs.field,
            "finite-field operands from different fields"
        );
    }
}

impl PartialEq for FqElem {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
    }
}

impl Eq for FqElem {}

impl Hash for FqElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.as_prime_field() {
            return write!(f, "{v}");
        }
        let terms: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "a".to_string(),
                (1, c) => format!("{c}*a"),
                (i, 1) => format!("a^{i}"),
                (i, c) => format!("{c}*a^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}

impl Ring for FqElem {
    fn zero_like(&self) -> Self {
        FqElem::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        FqElem::one(&self.field)
    }
    fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let p = self.field.p;
        let coords = self.coords.iter().zip(&rhs.coords).map(|(a, b)| (a + b) % p).collect();
        FqElem { field: self.field.clone(), coords }
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let p = self.field.p;
        let coords = self.coords.iter().zip(&rhs.coords).map(|(a, b)| (a + p - b) % p).collect();
        FqElem { field: self.field.clone(), coords }
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let p = self.field.p;
        let coords = if self.field.j == 1 {
            vec![((self.coords[0] as u128 * rhs.coords[0] as u128) % p as u128) as u64]
        } else {
            let prod = fp_poly::mul(&self.coords, &rhs.coords, p);
            let mut r = fp_poly::rem(&prod, &self.field.modulus, p);
            r.resize(self.field.j as usize, 0);
            r
        };
        FqElem { field: self.field.clone(), coords }
    }
    fn neg_ref(&self) -> Self {
        let p = self.field.p;
        FqElem { field: self.field.clone(), coords: self.coords.iter().map(|c| (p - c) % p).collect() }
    }
    fn from_u64_like(&self, n: u64) -> Self {
        FqElem::from_i64(&self.field, (n % self.field.p) as i64)
    }
}

impl Field for FqElem {
    fn inv_field(&self) -> Option<Self> {
        self.inv().ok()
    }
}

/// Multiplicative order of a nonzero element; divides `q - 1`.
pub fn fq_order(a: &FqElem) -> Result<u64> {
    if Ring::is_zero(a) {
        return Err(Error::ZeroElement);
    }
    let mut t = a.field.q - 1;
    for (l, _) in factor_u64(t) {
        while t % l == 0 && a.pow_u64(t / l).is_one() {
            t /= l;
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_irreducible(f: &[u64], p: u64) -> bool {
        // No monic factor of degree 1..=deg/2.
        let j = f.len() - 1;
        for d in 1..=j / 2 {
            for code in 0..p.pow(d as u32) {
                let mut g: Vec<u64> = (0..d).map(|i| code / p.pow(i as u32) % p).collect();
                g.push(1);
                if fp_poly::rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn irreducible_examples() {
        assert_eq!(find_irreducible(2, 1).unwrap(), vec![0, 1]);
        assert_eq!(find_irreducible(2, 2).unwrap(), vec![1, 1, 1]);
        assert_eq!(find_irreducible(3, 2).unwrap(), vec![1, 0, 1]);
    }

    #[test]
    fn rabin_agrees_with_trial_division() {
        for p in [2u64, 3, 5] {
            for j in 1..=4u32 {
                for code in 0..p.pow(j) {
                    let mut f: Vec<u64> = (0..j).map(|i| code / p.pow(i) % p).collect();
                    f.push(1);
                    assert_eq!(is_irreducible(&f, p), brute_irreducible(&f, p), "{f:?} over F_{p}");
                }
            }
        }
    }

    #[test]
    fn order_examples() {
        let f7 = FqField::prime(7).unwrap();
        assert_eq!(fq_order(&FqElem::from_i64(&f7, 4)).unwrap(), 3);
        assert_eq!(fq_order(&FqElem::from_i64(&f7, 3)).unwrap(), 6);
        assert_eq!(fq_order(&FqElem::one(&f7)).unwrap(), 1);
        assert_eq!(fq_order(&FqElem::zero(&f7)), Err(Error::ZeroElement));
    }

    #[test]
    fn order_matches_brute_force() {
        for (p, j) in [(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1), (5, 2)] {
            let field = FqField::new(p, j).unwrap();
            for a in FqElem::all(&field).skip(1) {
                let mut x = a.clone();
                let mut t = 1;
                while !x.is_one() {
                    x = x.mul_ref(&a);
                    t += 1;
                }
                assert_eq!(fq_order(&a).unwrap(), t);
                assert_eq!((field.size() - 1) % t, 0);
            }
        }
    }

    #[test]
    fn extension_field_is_a_field() {
        let f9 = FqField::new(3, 2).unwrap();
        for a in FqElem::all(&f9).skip(1) {
            assert!(a.mul_ref(&a.inv().unwrap()).is_one());
        }
        // a^2 = -1 in F_3[a]/(a^2+1)
        let a = FqElem::from_coords(&f9, &[0, 1]);
        assert_eq!(a.mul_ref(&a), FqElem::from_i64(&f9, -1));
        assert_eq!(a.to_string(), "a");
        assert_eq!(FqElem::from_coords(&f9, &[2, 1]).index(), 5);
    }
}
