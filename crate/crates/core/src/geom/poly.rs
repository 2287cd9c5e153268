//! Sparse multivariate polynomials over any [`Ring`].

use std::collections::BTreeMap;
use std::fmt::Display;

use crate::arith::Ring;
use crate::error::{Error, Result};

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

#[derive(Clone, PartialEq, Debug)]
pub struct Poly<C> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Ring> Poly<C> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Poly::from_terms(nvars, [(vec![0; nvars], c)])
    }

    /// The variable `x_i`; `one` fixes the coefficient ring.
    pub fn var(nvars: usize, i: usize, one: &C) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::from_terms(nvars, [(e, one.one_like())])
    }

    /// Sum of the given terms; repeated monomials are combined, zeros dropped.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut out = Poly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.len(), nvars, "monomial has the wrong number of variables");
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing = existing.add_ref(&c);
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &[u32]) -> Option<&C> {
        self.terms.get(m)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// `Some(d)` when every term has total degree `d`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| m.iter().sum::<u32>());
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref())).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, s: &C) -> Self {
        Poly::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), c.mul_ref(s))))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.mul_truncated(rhs, u32::MAX)
    }

    /// Product with every term of total degree above `order` discarded.
    pub fn mul_truncated(&self, rhs: &Self, order: u32) -> Self {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            let da: u32 = ma.iter().sum();
            for (mb, cb) in &rhs.terms {
                if da.saturating_add(mb.iter().sum()) > order {
                    continue;
                }
                let m = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca.mul_ref(cb));
            }
        }
        out
    }

    pub fn truncate(&self, order: u32) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.iter().sum::<u32>() <= order)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32, one: &C) -> Self {
        let mut acc = Poly::constant(self.nvars, one.one_like());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Value at `point`. Panics on a dimension mismatch.
    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars, "evaluation point has the wrong dimension");
        let zero = point[0].zero_like();
        let mut powers: Vec<Vec<C>> = point.iter().map(|x| vec![x.one_like(), x.clone()]).collect();
        let mut acc = zero;
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[i];
                while table.len() <= e as usize {
                    let next = table.last().unwrap().mul_ref(&point[i]);
                    table.push(next);
                }
                t = t.mul_ref(&table[e as usize]);
            }
            acc = acc.add_ref(&t);
        }
        acc
    }

    /// Substitute `subs[i]` for the i-th variable.
    pub fn substitute(&self, subs: &[Poly<C>]) -> Poly<C> {
        self.substitute_truncated(subs, u32::MAX)
    }

    pub fn substitute_truncated(&self, subs: &[Poly<C>], order: u32) -> Poly<C> {
        assert_eq!(subs.len(), self.nvars, "substitution needs one polynomial per variable");
        let target = subs.first().map_or(0, |s| s.nvars);
        let mut powers: Vec<Vec<Poly<C>>> = vec![Vec::new(); self.nvars];
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[i];
                if table.is_empty() {
                    table.push(Poly::constant(target, c.one_like()));
                }
                while table.len() <= e as usize {
                    let next = table.last().unwrap().mul_truncated(&subs[i], order);
                    table.push(next);
                }
                t = t.mul_truncated(&table[e as usize], order);
            }
            out = out.add(&t);
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m[var] > 0).map(|(m, c)| {
            let mut m2 = m.clone();
            m2[var] -= 1;
            (m2, c.mul_ref(&c.from_u64_like(m[var] as u64)))
        });
        Poly::from_terms(self.nvars, terms)
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn try_map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> Result<D>) -> Result<Poly<D>> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| Ok((m.clone(), f(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_terms(self.nvars, terms))
    }

    /// Set variable `var` to `value` and remove it from the variable list.
    pub fn specialize(&self, var: usize, value: &C) -> Poly<C> {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut m2 = m.clone();
            let e = m2.remove(var);
            (m2, c.mul_ref(&value.pow_u64(e as u64)))
        });
        Poly::from_terms(self.nvars - 1, terms)
    }
}

impl<C: Ring + Display> Poly<C> {
    /// Human-readable form using the given variable names.
    pub fn format_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
                .collect();
            let mut cs = c.to_string();
            let negative = cs.starts_with('-');
            if negative {
                cs.remove(0);
            }
            let body = match (mono.is_empty(), cs.as_str()) {
                (true, _) => cs.clone(),
                (false, "1") => mono.join("*"),
                (false, _) => format!("{}*{}", cs, mono.join("*")),
            };
            if out.is_empty() {
                out = if negative { format!("-{body}") } else { body };
            } else {
                out.push_str(if negative { " - " } else { " + " });
                out.push_str(&body);
            }
        }
        out
    }
}

/// Default variable names for `n` homogeneous coordinates.
pub fn default_var_names(n: usize) -> Vec<String> {
    match n {
        1 => vec!["z".into()],
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        4 => vec!["x".into(), "y".into(), "z".into(), "w".into()],
        _ => (0..n).map(|i| format!("x{i}")).collect(),
    }
}

/// Homogeneous polynomial of a fixed total degree.
#[derive(Clone, PartialEq, Debug)]
pub struct HomogPoly<C> {
    degree: u32,
    poly: Poly<C>,
}

impl<C: Ring> HomogPoly<C> {
    pub fn new(degree: u32, poly: Poly<C>) -> Result<Self> {
        if let Some((m, _)) = poly.terms().find(|(m, _)| m.iter().sum::<u32>() != degree) {
            return Err(Error::InvalidPolynomial(format!(
                "monomial {m:?} does not have total degree {degree}"
            )));
        }
        Ok(HomogPoly { degree, poly })
    }

    pub fn zero(nvars: usize, degree: u32) -> Self {
        HomogPoly { degree, poly: Poly::zero(nvars) }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn poly(&self) -> &Poly<C> {
        &self.poly
    }

    pub fn into_poly(self) -> Poly<C> {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn eval(&self, point: &[C]) -> C {
        self.poly.eval(point)
    }

    pub fn derivative(&self, var: usize) -> HomogPoly<C> {
        HomogPoly { degree: self.degree.saturating_sub(1), poly: self.poly.derivative(var) }
    }

    /// Composition with homogeneous forms of a common degree `e`; the result
    /// has degree `self.degree * e`.
    pub fn compose(&self, subs: &[HomogPoly<C>]) -> HomogPoly<C> {
        let e = subs.first().map_or(0, |s| s.degree);
        assert!(subs.iter().all(|s| s.degree == e), "substituted forms must share a degree");
        let polys: Vec<Poly<C>> = subs.iter().map(|s| s.poly.clone()).collect();
        HomogPoly { degree: self.degree * e, poly: self.poly.substitute(&polys) }
    }

    pub fn scale(&self, s: &C) -> HomogPoly<C> {
        HomogPoly { degree: self.degree, poly: self.poly.scale(s) }
    }

    pub fn add(&self, rhs: &HomogPoly<C>) -> HomogPoly<C> {
        assert_eq!(self.degree, rhs.degree);
        HomogPoly { degree: self.degree, poly: self.poly.add(&rhs.poly) }
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> HomogPoly<D> {
        HomogPoly { degree: self.degree, poly: self.poly.map_coeffs(f) }
    }

    pub fn try_map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> Result<D>) -> Result<HomogPoly<D>> {
        Ok(HomogPoly { degree: self.degree, poly: self.poly.try_map_coeffs(f)? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, Rational};

    fn p(terms: &[(i64, &[u32])]) -> Poly<Rational> {
        let n = terms[0].1.len();
        Poly::from_terms(n, terms.iter().map(|(c, m)| (m.to_vec(), int(*c))))
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let a = p(&[(1, &[2, 0]), (-1, &[0, 2])]);
        let b = p(&[(1, &[0, 2])]);
        assert_eq!(a.add(&b), p(&[(1, &[2, 0])]));
        assert!(a.sub(&a).is_zero());
        let sq = a.mul(&a);
        assert_eq!(sq.coeff(&[2, 2]), Some(&int(-2)));
        assert_eq!(sq.homogeneous_degree(), Some(4));
    }

    #[test]
    fn evaluation_and_substitution() {
        // z^2 - 1 composed with itself: z^4 - 2 z^2
        let f = Poly::from_terms(1, [(vec![2], int(1)), (vec![0], int(-1))]);
        let ff = f.substitute(&[f.clone()]);
        assert_eq!(ff, Poly::from_terms(1, [(vec![4], int(1)), (vec![2], int(-2))]));
        assert_eq!(ff.eval(&[int(3)]), int(63));
        assert_eq!(f.eval(&[rat(1, 2)]), rat(-3, 4));
    }

    #[test]
    fn derivative_and_specialization() {
        let f = p(&[(3, &[2, 1]), (1, &[0, 3])]);
        assert_eq!(f.derivative(0), p(&[(6, &[1, 1])]));
        let g = f.specialize(1, &int(1));
        assert_eq!(g, Poly::from_terms(1, [(vec![2], int(3)), (vec![0], int(1))]));
    }

    #[test]
    fn truncated_products() {
        let f = Poly::from_terms(1, [(vec![0], int(1)), (vec![1], int(1))]);
        let sq = f.mul_truncated(&f, 1);
        assert_eq!(sq, Poly::from_terms(1, [(vec![0], int(1)), (vec![1], int(2))]));
    }

    #[test]
    fn homogeneity_is_checked() {
        assert!(HomogPoly::new(2, p(&[(1, &[2, 0]), (1, &[0, 1])])).is_err());
        let h = HomogPoly::new(2, p(&[(1, &[1, 1])])).unwrap();
        let sub = [h.clone(), h.clone()];
        assert_eq!(h.compose(&sub).degree(), 4);
    }

    #[test]
    fn formatting() {
        let f = Poly::from_terms(2, [(vec![2, 0], rat(1, 2)), (vec![0, 2], int(-1)), (vec![1, 1], int(3))]);
        assert_eq!(f.format_with(&default_var_names(2)), "1/2*x^2 + 3*x*y - y^2");
    }
}
