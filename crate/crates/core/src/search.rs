//! Candidate period sets from good primes and exhaustive search for rational
//! periodic points of bounded height.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::arith::primes::factor_u64;
use crate::arith::FqField;
use crate::error::{Error, Result};
use crate::geom::{reduce_morphism, Morphism, ProjPointQ};
use crate::orbits::{certify_period, cycle_census, PeriodCertificate};
use crate::periods::e_bound;
use crate::reduction::has_good_reduction;

/// Periods allowed for rational points by each prime, and their intersection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidatePeriods {
    pub per_prime: BTreeMap<u64, BTreeSet<u64>>,
    pub global: BTreeSet<u64>,
    pub primes: Vec<u64>,
}

impl CandidatePeriods {
    /// Largest candidate, the iteration bound used when certifying.
    pub fn n_max(&self) -> Option<u64> {
        self.global.last().copied()
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factor_u64(n) {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut pk = 1;
            for _ in 0..=e {
                next.push(d * pk);
                pk *= p;
            }
        }
        out = next;
    }
    out.sort_unstable();
    out
}

/// Periods `m r' p^e` allowed at `p` for each reduced cycle: `m` the cycle
/// length, `r'` a prime-to-`p` divisor of the multiplier order `t`, and
/// `e <= e_bound(p, 1) + v_p(t)`. A singular multiplier allows only `m`.
pub fn allowed_periods(phi: &Morphism, p: u64) -> Result<BTreeSet<u64>> {
    has_good_reduction(phi, p)?.ensure_good()?;
    let field = FqField::prime(p)?;
    let census = cycle_census(&reduce_morphism(phi, &field))?;
    let mut allowed = BTreeSet::new();
    for cycle in &census.cycles {
        let m = cycle.length as u64;
        let Some(t) = cycle.multiplier_order else {
            allowed.insert(m);
            continue;
        };
        let t = u64::try_from(t).map_err(|_| Error::Overflow("multiplier order"))?;
        let (mut t_free, mut v) = (t, 0);
        while t_free % p == 0 {
            t_free /= p;
            v += 1;
        }
        for r in divisors(t_free) {
            let mut n = m.checked_mul(r).ok_or(Error::Overflow("candidate period"))?;
            for _ in 0..=e_bound(p, 1) + v {
                allowed.insert(n);
                n = n.checked_mul(p).ok_or(Error::Overflow("candidate period"))?;
            }
        }
    }
    Ok(allowed)
}

pub fn candidate_periods(phi: &Morphism, primes: &[u64]) -> Result<CandidatePeriods> {
    let mut per_prime = BTreeMap::new();
    for &p in primes {
        per_prime.insert(p, allowed_periods(phi, p)?);
    }
    let mut sets = per_prime.values();
    let global = match sets.next() {
        Some(first) => sets.fold(first.clone(), |acc, s| acc.intersection(s).copied().collect()),
        None => BTreeSet::new(),
    };
    Ok(CandidatePeriods { per_prime, global, primes: primes.to_vec() })
}

/// Coprime integer tuples in `[-H, H]^{N+1}` whose first nonzero entry is positive.
pub fn points_of_height(dim: usize, h: u64) -> Vec<Vec<BigInt>> {
    let h = h as i64;
    let width = (2 * h + 1) as usize;
    let total = width.pow(dim as u32 + 1);
    (0..total)
        .filter_map(|mut idx| {
            let mut v = Vec::with_capacity(dim + 1);
            for _ in 0..=dim {
                v.push(BigInt::from((idx % width) as i64 - h));
                idx /= width;
            }
            v.reverse();
            let lead = v.iter().find(|c| !c.is_zero())?;
            if lead.is_negative() {
                return None;
            }
            let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
            (g == BigInt::from(1)).then_some(v)
        })
        .collect()
}

/// Every rational point of naive height at most `H` that is periodic, with
/// its exact period, sorted by height and then lexicographically.
///
/// Periods are certified up to the largest candidate allowed by `primes`;
/// a certified period outside the candidate set is a [`Error::TheoremViolation`].
pub fn search_periodic(phi: &Morphism, height: u64, primes: &[u64], parallel: bool) -> Result<Vec<(ProjPointQ, u64)>> {
    if height == 0 {
        return Err(Error::InvalidPoint("height bound must be at least 1".into()));
    }
    if primes.is_empty() {
        return Err(Error::InvalidPoint("at least one good prime is required".into()));
    }
    let candidates = candidate_periods(phi, primes)?;
    let Some(n_max) = candidates.n_max() else { return Ok(Vec::new()) };
    let points = points_of_height(phi.dim(), height);
    let check = |v: &Vec<BigInt>| -> Result<Option<(Vec<BigInt>, u64)>> {
        let pt = ProjPointQ::from_bigints(v.clone())?;
        match certify_period(phi, &pt, n_max)? {
            PeriodCertificate::Periodic(n) if candidates.global.contains(&n) => Ok(Some((v.clone(), n))),
            PeriodCertificate::Periodic(n) => Err(Error::TheoremViolation(format!(
                "{pt} has period {n}, outside the candidate set {:?}",
                candidates.global
            ))),
            PeriodCertificate::NotPeriodic { .. } => Ok(None),
        }
    };
    let found: Vec<Option<(Vec<BigInt>, u64)>> = if parallel {
        points.par_iter().map(check).collect::<Result<_>>()?
    } else {
        points.iter().map(check).collect::<Result<_>>()?
    };
    let mut found: Vec<(Vec<BigInt>, u64)> = found.into_iter().flatten().collect();
    found.sort_by(|(a, _), (b, _)| {
        let ha = a.iter().map(|c| c.abs()).max();
        let hb = b.iter().map(|c| c.abs()).max();
        ha.cmp(&hb).then_with(|| a.cmp(b))
    });
    found
        .into_iter()
        .map(|(v, n)| Ok((ProjPointQ::from_bigints(v)?, n)))
        .collect()
}
