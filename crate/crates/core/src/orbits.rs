//! Orbits over finite fields and exact periodicity over Q.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::arith::{matrix_order, FqField};
use crate::error::{Error, Result};
use crate::geom::{
    count_projective_points, jacobian_at, primitive, reduce_morphism, reduce_point, Morphism, ProjPointFq, ProjPointQ,
    ReducedMorphism,
};
use crate::reduction::has_good_reduction;

/// Forward orbit of a point of `P^N(F_q)`: `points[t + m]` would equal `points[t]`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitSummary {
    pub tail: usize,
    pub cycle: usize,
    /// The `t + m` distinct points visited before the walk closes up.
    pub points: Vec<ProjPointFq>,
}

pub fn orbit_fq(red: &ReducedMorphism, start: &ProjPointFq) -> Result<OrbitSummary> {
    let mut seen: HashMap<ProjPointFq, usize> = HashMap::new();
    let mut points = Vec::new();
    let mut x = start.clone();
    loop {
        if let Some(&t) = seen.get(&x) {
            return Ok(OrbitSummary { tail: t, cycle: points.len() - t, points });
        }
        seen.insert(x.clone(), points.len());
        points.push(x.clone());
        x = red.eval(&x)?;
    }
}

/// Primitive period of the reduction of `P` under the reduction of `φ`.
pub fn period_mod_p(phi: &Morphism, point: &ProjPointQ, p: u64) -> Result<u64> {
    has_good_reduction(phi, p)?.ensure_good()?;
    let field = FqField::prime(p)?;
    reduced_period(&reduce_morphism(phi, &field), &reduce_point(point, &field))
}

/// Period of a reduced point that must lie on a cycle.
pub fn reduced_period(red: &ReducedMorphism, point: &ProjPointFq) -> Result<u64> {
    let orbit = orbit_fq(red, point)?;
    if orbit.tail > 0 {
        return Err(Error::NotPeriodicModP { tail: orbit.tail });
    }
    Ok(orbit.cycle as u64)
}

/// Order of the cycle multiplier, or `None` when it is singular.
pub type MultiplierOrder = Option<u128>;

#[derive(Clone, Debug, PartialEq)]
pub struct CycleInfo {
    pub length: usize,
    /// Cycle points starting from the one earliest in enumeration order.
    pub points: Vec<ProjPointFq>,
    pub multiplier_order: MultiplierOrder,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CensusReport {
    pub q: u64,
    pub dim: usize,
    pub map: String,
    pub cycles: Vec<CycleInfo>,
    /// Points that are not periodic.
    pub tail_points: u128,
}

impl CensusReport {
    /// Cycle lengths in ascending order, one entry per cycle.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.cycles.iter().map(|c| c.length).collect();
        v.sort_unstable();
        v
    }

    pub fn periodic_points(&self) -> u128 {
        self.cycles.iter().map(|c| c.length as u128).sum()
    }
}

impl fmt::Display for CensusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "census of {} on P^{}(F_{})", self.map, self.dim, self.q)?;
        for c in &self.cycles {
            let pts: Vec<String> = c.points.iter().map(|p| p.to_string()).collect();
            let order = c.multiplier_order.map_or("singular".to_string(), |t| t.to_string());
            writeln!(f, "  cycle of length {}: {} (multiplier order {order})", c.length, pts.join(" -> "))?;
        }
        write!(f, "  {} periodic points, {} tail points", self.periodic_points(), self.tail_points)
    }
}

/// Largest space that [`cycle_census`] will enumerate.
pub const CENSUS_LIMIT: u128 = 5_000_000;

/// Classify every point of `P^N(F_q)` as periodic or not, listing each cycle
/// once together with the order of its multiplier matrix.
pub fn cycle_census(red: &ReducedMorphism) -> Result<CensusReport> {
    let field = red.field();
    let n = red.dim();
    let total = count_projective_points(field.size(), n)
        .filter(|&t| t <= CENSUS_LIMIT)
        .ok_or(Error::SearchBudgetExceeded { p: field.characteristic(), degree: field.degree() })?;
    let next: Vec<usize> = (0..total as usize)
        .into_par_iter()
        .map(|i| red.eval(&ProjPointFq::from_index(field, n, i as u128)).map(|y| y.index() as usize))
        .collect::<Result<_>>()?;
    // 0 = unvisited, 1 = on the current walk, 2 = finished
    let mut state = vec![0u8; next.len()];
    let mut on_cycle = vec![false; next.len()];
    let mut cycles = Vec::new();
    for start in 0..next.len() {
        if state[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut x = start;
        while state[x] == 0 {
            state[x] = 1;
            path.push(x);
            x = next[x];
        }
        if state[x] == 1 {
            let pos = path.iter().position(|&y| y == x).expect("x lies on the current path");
            let members = &path[pos..];
            let first = *members.iter().min().expect("nonempty cycle");
            let mut idx = Vec::with_capacity(members.len());
            let mut y = first;
            loop {
                idx.push(y);
                on_cycle[y] = true;
                y = next[y];
                if y == first {
                    break;
                }
            }
            cycles.push(idx);
        }
        for &y in &path {
            state[y] = 2;
        }
    }
    cycles.sort_by_key(|c| c[0]);
    let infos = cycles
        .into_iter()
        .map(|idx| {
            let points: Vec<ProjPointFq> = idx.iter().map(|&i| ProjPointFq::from_index(field, n, i as u128)).collect();
            let jac = jacobian_at(red, &points[0], idx.len() as u64)?;
            let multiplier_order = match matrix_order(&jac) {
                Ok(t) => Some(t),
                Err(Error::SingularMatrix) => None,
                Err(e) => return Err(e),
            };
            Ok(CycleInfo { length: idx.len(), points, multiplier_order })
        })
        .collect::<Result<Vec<_>>>()?;
    let tail_points = on_cycle.iter().filter(|&&c| !c).count() as u128;
    Ok(CensusReport { q: field.size(), dim: n, map: red.to_string(), cycles: infos, tail_points })
}

/// Naive height above which an orbit is declared to escape.
pub fn height_cap() -> BigInt {
    num_traits::pow(BigInt::from(10), 40)
}

#[derive(Clone, Debug, PartialEq)]
pub enum PeriodCertificate {
    /// Least `n` with `φ^n(P) = P`.
    Periodic(u64),
    NotPeriodic {
        /// `P, φ(P), ...` as far as the iteration went.
        orbit: Vec<ProjPointQ>,
        height_exceeded: bool,
    },
}

impl PeriodCertificate {
    pub fn period(&self) -> Option<u64> {
        match self {
            PeriodCertificate::Periodic(n) => Some(*n),
            PeriodCertificate::NotPeriodic { .. } => None,
        }
    }
}

/// Exact iteration up to `n_max` steps, abandoning orbits whose naive
/// height passes `10^40`.
pub fn certify_period(phi: &Morphism, point: &ProjPointQ, n_max: u64) -> Result<PeriodCertificate> {
    if point.coords().len() != phi.dim() + 1 {
        return Err(Error::InvalidPoint("point dimension does not match the map".into()));
    }
    let cap = height_cap();
    let start = point.primitive_integers();
    let mut orbit = vec![ProjPointQ::from_bigints(start.clone())?];
    let mut x = start.clone();
    for s in 1..=n_max {
        let y = phi.eval_integers(&x);
        if y.iter().all(Zero::is_zero) {
            return Err(Error::BaseLocusHit);
        }
        x = primitive(y);
        if x == start {
            return Ok(PeriodCertificate::Periodic(s));
        }
        orbit.push(ProjPointQ::from_bigints(x.clone())?);
        if x.iter().any(|c| c.abs() > cap) {
            return Ok(PeriodCertificate::NotPeriodic { orbit, height_exceeded: true });
        }
    }
    Ok(PeriodCertificate::NotPeriodic { orbit, height_exceeded: false })
}
