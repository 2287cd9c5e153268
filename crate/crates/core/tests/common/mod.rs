#![allow(dead_code)]

use goodred::arith::{Rational, FqField};
use goodred::geom::{HomogPoly, Morphism, Poly, ProjPointQ};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

/// `[a0 x^2 + a1 x y + a2 y^2, b0 x^2 + b1 x y + b2 y^2]`, if it is a morphism.
pub fn quad(a: [i64; 3], b: [i64; 3]) -> Option<Morphism> {
    let mono = [[2u32, 0], [1, 1], [0, 2]];
    let comp = |c: [i64; 3]| -> Vec<(i64, &[u32])> {
        c.iter().zip(&mono).filter(|(x, _)| **x != 0).map(|(x, m)| (*x, &m[..])).collect()
    };
    let (fa, fb) = (comp(a), comp(b));
    if fa.is_empty() || fb.is_empty() {
        return None;
    }
    Morphism::from_int_terms(&[&fa, &fb]).ok()
}

/// `z^2 + c` with `c = num/den`.
pub fn z2_plus_c(num: i64, den: i64) -> Morphism {
    quad([den, 0, num], [0, 0, den]).expect("polynomial maps are morphisms")
}

pub fn pt(coords: &[i64]) -> ProjPointQ {
    ProjPointQ::from_ints(coords).unwrap()
}

pub fn quad_strategy(bound: i64) -> impl Strategy<Value = Morphism> {
    (prop::array::uniform3(-bound..=bound), prop::array::uniform3(-bound..=bound))
        .prop_filter_map("not a morphism", |(a, b)| quad(a, b))
}

/// Random morphism of `P^n` of degree `d` with small integer coefficients;
/// `x_i^d` terms on the diagonal keep it a morphism most of the time.
pub fn random_morphism(rng: &mut impl rand::Rng, n: usize, d: u32, bound: i64) -> Morphism {
    loop {
        let comps: Vec<HomogPoly<Rational>> = (0..=n)
            .map(|i| {
                let mut terms = Vec::new();
                for mono in monomials(n + 1, d) {
                    let c = if mono[i] == d { rng.gen_range(1..=bound) } else { rng.gen_range(-bound..=bound) };
                    if c != 0 && (mono[i] == d || rng.gen_bool(0.4)) {
                        terms.push((mono, Rational::from_integer(c.into())));
                    }
                }
                HomogPoly::new(d, Poly::from_terms(n + 1, terms)).unwrap()
            })
            .collect();
        if let Ok(phi) = Morphism::new(comps) {
            return phi;
        }
    }
}

pub fn monomials(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    if nvars == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for e in (0..=d).rev() {
        for mut rest in monomials(nvars - 1, d - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

/// Independent evaluation of a map on integer coordinates, directly from
/// its terms.
pub fn eval_terms(phi: &Morphism, x: &[BigInt]) -> Vec<BigInt> {
    let lcm = phi
        .components()
        .iter()
        .flat_map(|c| c.poly().terms().map(|(_, a)| a.denom().clone()).collect::<Vec<_>>())
        .fold(BigInt::from(1), |acc, d| acc.lcm(&d));
    phi.components()
        .iter()
        .map(|c| {
            c.poly().terms().fold(BigInt::zero(), |acc, (m, a)| {
                let coef = a.numer() * (&lcm / a.denom());
                let mono = m.iter().zip(x).fold(BigInt::from(1), |t, (e, xi)| t * num_traits::pow(xi.clone(), *e as usize));
                acc + coef * mono
            })
        })
        .collect()
}

pub fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let neg = v.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
    for c in v.iter_mut() {
        *c = &*c / &g;
        if neg {
            *c = -&*c;
        }
    }
    v
}

/// Least `n <= n_max` with `φ^n(P) = P`, by naive iteration.
pub fn brute_period(phi: &Morphism, point: &[i64], n_max: u64) -> Option<u64> {
    let start = primitive(point.iter().map(|&c| BigInt::from(c)).collect());
    let mut x = start.clone();
    for n in 1..=n_max {
        x = primitive(eval_terms(phi, &x));
        if x == start {
            return Some(n);
        }
        if x.iter().any(|c| c.bits() > 200) {
            return None;
        }
    }
    None
}

/// Canonical representative in `F_p` with the first nonzero entry 1.
pub fn canon_mod(v: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let r: Vec<u64> = v.iter().map(|c| u64::try_from(c.mod_floor(&pb)).unwrap()).collect();
    let lead = *r.iter().find(|&&c| c != 0).expect("unit coordinate");
    let inv = (1..p).find(|i| i * lead % p == 1).unwrap();
    r.iter().map(|c| c * inv % p).collect()
}

/// Period of the reduction of `P` under the reduction of `φ`, by iterating
/// integer representatives and comparing residues. Requires the map to
/// have integer coefficients and good reduction at `p`.
pub fn brute_period_mod_p(phi: &Morphism, point: &[BigInt], p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let start = canon_mod(&primitive(point.to_vec()), p);
    let mut x: Vec<BigInt> = start.iter().map(|&c| BigInt::from(c)).collect();
    for n in 1..=10_000u64 {
        let y: Vec<BigInt> = eval_terms(phi, &x).iter().map(|c| c.mod_floor(&pb)).collect();
        let c = canon_mod(&y, p);
        if c == start {
            return Some(n);
        }
        x = c.iter().map(|&v| BigInt::from(v)).collect();
    }
    None
}

pub fn rational_periodic_corpus() -> Vec<(Morphism, Vec<i64>)> {
    let mut out = Vec::new();
    // z^2 - 29/16: the 3-cycle -1/4 -> -7/4 -> 5/4
    let m = z2_plus_c(-29, 16);
    for x in [-1, -7, 5] {
        out.push((m.clone(), vec![x, 4]));
    }
    // z^2 - 3/4: fixed points 3/2 and -1/2
    let m = z2_plus_c(-3, 4);
    for (a, b) in [(3, 2), (-1, 2), (1, 0)] {
        out.push((m.clone(), vec![a, b]));
    }
    let m = z2_plus_c(-1, 1);
    for (a, b) in [(0, 1), (-1, 1), (1, 0)] {
        out.push((m.clone(), vec![a, b]));
    }
    out
}

pub fn prime_field(p: u64) -> std::sync::Arc<FqField> {
    FqField::prime(p).unwrap()
}

pub fn random_quad(rng: &mut impl rand::Rng, bound: i64) -> Morphism {
    loop {
        let mut c = || rng.gen_range(-bound..=bound);
        let (a, b) = ([c(), c(), c()], [c(), c(), c()]);
        if let Some(phi) = quad(a, b) {
            return phi;
        }
    }
}

/// Primes up to `bound` at which the map certainly has good reduction.
pub fn good_primes_up_to(phi: &Morphism, bound: u64) -> Vec<u64> {
    goodred::reduction::good_primes(phi, bound).unwrap().good
}

/// Maps of `P^1` paired with their rational periodic points of height at
/// most `h`, found by naive iteration.
pub fn brute_periodic_points(phi: &Morphism, h: i64, n_max: u64) -> Vec<(Vec<i64>, u64)> {
    let mut out = Vec::new();
    for a in -h..=h {
        for b in 0..=h {
            if num_integer::gcd(a, b) != 1 || (b == 0 && a != 1) {
                continue;
            }
            if let Some(n) = brute_period(phi, &[a, b], n_max) {
                out.push((vec![a, b], n));
            }
        }
    }
    out
}
