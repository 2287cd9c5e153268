//! Morphisms of projective space over Q and their reductions modulo p.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::point::{primitive, reduce_rational, ProjPointFq, ProjPointQ};
use super::poly::{default_var_names, HomogPoly, Monomial, Poly};
use crate::arith::{p_power, val_p, FqElem, FqField, Rational, Valuation};
use crate::error::{Error, Result};

/// Default cap on the degree of symbolically iterated maps.
pub const DEFAULT_DEGREE_CAP: u64 = 4096;

/// A morphism `P^N -> P^N` given by `N+1` forms of a common degree `D >= 1`
/// with no common zero over an algebraic closure of Q.
#[derive(Clone, Debug)]
pub struct Morphism {
    degree: u32,
    comps: Vec<HomogPoly<Rational>>,
    // Components times a common denominator, for fast projective evaluation.
    int_comps: Vec<Vec<(Monomial, BigInt)>>,
}

impl PartialEq for Morphism {
    fn eq(&self, other: &Self) -> bool {
        self.comps == other.comps
    }
}

impl Morphism {
    /// Validates shape and homogeneity, then certifies that the components
    /// have no common zero.
    pub fn new(comps: Vec<HomogPoly<Rational>>) -> Result<Self> {
        let m = Morphism::new_unchecked(comps)?;
        crate::reduction::certify_no_common_zero(&m)?;
        Ok(m)
    }

    /// Shape checks only; the caller guarantees the absence of common zeros.
    pub(crate) fn new_unchecked(comps: Vec<HomogPoly<Rational>>) -> Result<Self> {
        let n1 = comps.len();
        if n1 < 2 {
            return Err(Error::InvalidMorphism("need at least two components".into()));
        }
        if let Some(c) = comps.iter().find(|c| c.nvars() != n1) {
            return Err(Error::InvalidMorphism(format!(
                "component in {} variables, expected {n1}",
                c.nvars()
            )));
        }
        let degree = comps[0].degree();
        if comps.iter().any(|c| c.degree() != degree) {
            return Err(Error::InvalidMorphism("components have different degrees".into()));
        }
        if degree == 0 {
            return Err(Error::InvalidMorphism("degree must be at least 1".into()));
        }
        if comps.iter().all(HomogPoly::is_zero) {
            return Err(Error::InvalidMorphism("all components are zero".into()));
        }
        let lcm = comps
            .iter()
            .flat_map(|c| c.poly().terms().map(|(_, a)| a.denom().clone()))
            .fold(BigInt::one(), |acc, d| acc.lcm(&d));
        let int_comps = comps
            .iter()
            .map(|c| c.poly().terms().map(|(m, a)| (m.clone(), a.numer() * (&lcm / a.denom()))).collect())
            .collect();
        Ok(Morphism { degree, comps, int_comps })
    }

    /// Convenience constructor from integer terms `(coefficient, exponents)`.
    pub fn from_int_terms(comps: &[&[(i64, &[u32])]]) -> Result<Self> {
        let n1 = comps.len();
        let forms = comps
            .iter()
            .map(|terms| {
                let poly = Poly::from_terms(
                    n1,
                    terms.iter().map(|(c, m)| (m.to_vec(), Rational::from_integer((*c).into()))),
                );
                let d = terms.first().map_or(0, |(_, m)| m.iter().sum());
                HomogPoly::new(d, poly)
            })
            .collect::<Result<Vec<_>>>()?;
        let d = forms.iter().map(HomogPoly::degree).max().unwrap_or(0);
        let forms = forms
            .into_iter()
            .map(|f| if f.is_zero() { HomogPoly::zero(n1, d) } else { f })
            .collect();
        Morphism::new(forms)
    }

    /// The dimension `N`.
    pub fn dim(&self) -> usize {
        self.comps.len() - 1
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn components(&self) -> &[HomogPoly<Rational>] {
        &self.comps
    }

    /// Values of the integer-scaled components at an integer vector.
    pub fn eval_integers(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut powers: Vec<Vec<BigInt>> = x.iter().map(|v| vec![BigInt::one(), v.clone()]).collect();
        self.int_comps
            .iter()
            .map(|terms| {
                let mut acc = BigInt::zero();
                for (m, c) in terms {
                    let mut t = c.clone();
                    for (i, &e) in m.iter().enumerate() {
                        if e == 0 {
                            continue;
                        }
                        let table = &mut powers[i];
                        while table.len() <= e as usize {
                            let next = table.last().unwrap() * &x[i];
                            table.push(next);
                        }
                        t *= &table[e as usize];
                    }
                    acc += t;
                }
                acc
            })
            .collect()
    }

    pub fn eval(&self, point: &ProjPointQ) -> Result<ProjPointQ> {
        if point.coords().len() != self.comps.len() {
            return Err(Error::InvalidPoint(format!(
                "point has {} coordinates, map expects {}",
                point.coords().len(),
                self.comps.len()
            )));
        }
        let out = self.eval_integers(&point.primitive_integers());
        if out.iter().all(Zero::is_zero) {
            return Err(Error::BaseLocusHit);
        }
        ProjPointQ::from_bigints(primitive(out))
    }

    /// `φ^s(P)`; `s = 0` returns `P`.
    pub fn iterate(&self, point: &ProjPointQ, s: u64) -> Result<ProjPointQ> {
        let mut x = point.clone();
        for _ in 0..s {
            x = self.eval(&x)?;
        }
        Ok(x)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Morphism) -> Morphism {
        assert_eq!(self.dim(), inner.dim(), "composing maps of different dimensions");
        let comps = self.comps.iter().map(|c| c.compose(&inner.comps)).collect();
        Morphism::new_unchecked(comps).expect("a composition of morphisms is a morphism")
    }

    /// `φ^m` as an explicit morphism; fails if `D^m` exceeds `degree_cap`.
    pub fn iterate_map(&self, m: u64, degree_cap: u64) -> Result<Morphism> {
        check_degree(self.degree, m, degree_cap)?;
        let mut acc = self.clone();
        for _ in 1..m {
            acc = self.compose(&acc);
        }
        Ok(acc)
    }

    /// Components scaled by a power of `p` so all coefficients are p-integral
    /// and at least one is a p-unit.
    pub fn integral_components(&self, p: u64) -> Vec<HomogPoly<Rational>> {
        let min = self
            .comps
            .iter()
            .flat_map(|c| c.poly().terms().map(|(_, a)| val_p(a, p)))
            .filter_map(Valuation::finite)
            .min()
            .expect("some nonzero coefficient");
        let s = p_power(p, -min);
        self.comps.iter().map(|c| c.scale(&s)).collect()
    }

    /// The affine map `z ↦ (Φ_j/Φ_chart)_{j ≠ chart}` on the chart `x_chart = 1`.
    pub fn dehomogenize(&self, chart: usize) -> AffineMap {
        assert!(chart < self.comps.len(), "chart index out of range");
        let one = Rational::one();
        let spec: Vec<Poly<Rational>> = self.comps.iter().map(|c| c.poly().specialize(chart, &one)).collect();
        let denominator = spec[chart].clone();
        let numerators = spec.into_iter().enumerate().filter(|(j, _)| *j != chart).map(|(_, p)| p).collect();
        AffineMap { chart, numerators, denominator }
    }

    pub fn var_names(&self) -> Vec<String> {
        default_var_names(self.comps.len())
    }
}

pub(crate) fn check_degree(d: u32, m: u64, cap: u64) -> Result<()> {
    let degree = (d as u64).checked_pow(u32::try_from(m).unwrap_or(u32::MAX));
    match degree {
        Some(deg) if deg <= cap => Ok(()),
        _ => Err(Error::DegreeCapExceeded { degree: degree.unwrap_or(u64::MAX), cap }),
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.var_names();
        let parts: Vec<String> = self.comps.iter().map(|c| c.poly().format_with(&names)).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Dehomogenized map on an affine chart: `N` numerators over one denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    pub chart: usize,
    pub numerators: Vec<Poly<Rational>>,
    pub denominator: Poly<Rational>,
}

impl AffineMap {
    /// Value at an affine point; `None` where the denominator vanishes.
    pub fn eval(&self, z: &[Rational]) -> Option<Vec<Rational>> {
        let den = self.denominator.eval(z);
        if Zero::is_zero(&den) {
            return None;
        }
        Some(self.numerators.iter().map(|n| n.eval(z) / &den).collect())
    }
}

/// A morphism with coefficients in a finite field.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedMorphism {
    field: Arc<FqField>,
    degree: u32,
    comps: Vec<HomogPoly<FqElem>>,
}

impl ReducedMorphism {
    /// Forms over `field` of a common degree; they may share zeros.
    pub fn new(field: &Arc<FqField>, comps: Vec<HomogPoly<FqElem>>) -> Result<Self> {
        let n1 = comps.len();
        if n1 < 2 || comps.iter().any(|c| c.nvars() != n1) {
            return Err(Error::InvalidMorphism("need N+1 forms in N+1 variables".into()));
        }
        let degree = comps[0].degree();
        if comps.iter().any(|c| c.degree() != degree) {
            return Err(Error::InvalidMorphism("components have different degrees".into()));
        }
        Ok(ReducedMorphism { field: field.clone(), degree, comps })
    }

    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.comps.len() - 1
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn components(&self) -> &[HomogPoly<FqElem>] {
        &self.comps
    }

    pub fn eval_coords(&self, x: &[FqElem]) -> Vec<FqElem> {
        self.comps.iter().map(|c| c.eval(x)).collect()
    }

    pub fn eval(&self, point: &ProjPointFq) -> Result<ProjPointFq> {
        let out = self.eval_coords(point.coords());
        ProjPointFq::new(out).map_err(|_| Error::BaseLocusHit)
    }

    pub fn iterate(&self, point: &ProjPointFq, s: u64) -> Result<ProjPointFq> {
        let mut x = point.clone();
        for _ in 0..s {
            x = self.eval(&x)?;
        }
        Ok(x)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &ReducedMorphism) -> ReducedMorphism {
        let comps = self.comps.iter().map(|c| c.compose(&inner.comps)).collect();
        ReducedMorphism { field: self.field.clone(), degree: self.degree * inner.degree, comps }
    }

    pub fn iterate_map(&self, m: u64, degree_cap: u64) -> Result<ReducedMorphism> {
        check_degree(self.degree, m, degree_cap)?;
        let mut acc = self.clone();
        for _ in 1..m {
            acc = self.compose(&acc);
        }
        Ok(acc)
    }

    /// The same forms read over another field of the same characteristic.
    /// Coefficients must lie in the prime field.
    pub fn over_field(&self, target: &Arc<FqField>) -> Result<ReducedMorphism> {
        let comps = self
            .comps
            .iter()
            .map(|c| c.try_map_coeffs(|a| a.embed(target)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ReducedMorphism { field: target.clone(), degree: self.degree, comps })
    }

    /// Matrix of partial derivatives `∂Φ_i/∂x_j` at the coordinate vector `x`.
    pub fn homogeneous_jacobian(&self, x: &[FqElem]) -> Vec<Vec<FqElem>> {
        let n1 = self.comps.len();
        self.comps
            .iter()
            .map(|c| (0..n1).map(|j| c.poly().derivative(j).eval(x)).collect())
            .collect()
    }
}

impl fmt::Display for ReducedMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_var_names(self.comps.len());
        let parts: Vec<String> = self.comps.iter().map(|c| c.poly().format_with(&names)).collect();
        write!(f, "[{}] over F_{}", parts.join(", "), self.field.size())
    }
}

/// Reduce the content-normalized components of `φ` modulo `p`.
pub fn reduce_morphism(phi: &Morphism, field: &Arc<FqField>) -> ReducedMorphism {
    let comps = phi
        .integral_components(field.characteristic())
        .iter()
        .map(|c| c.map_coeffs(|a| reduce_rational(a, field).expect("p-integral coefficient")))
        .collect();
    ReducedMorphism { field: field.clone(), degree: phi.degree, comps }
}
