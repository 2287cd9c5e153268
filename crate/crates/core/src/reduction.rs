//! Good reduction of morphisms of `P^N` at a prime.
//!
//! For `N = 1` the verdict comes from the Sylvester resultant of the reduced
//! binary forms. For `N >= 2` the reduced forms are searched for a common
//! zero over `P^N(F_{p^j})` for `j = 1..=D^N`: a nonempty common zero locus
//! of forms of degree `D` has a closed point of degree at most `D^N`.
//!
//! Constructing a [`Morphism`] only needs the components to have no common
//! zero over `Q`. For `N >= 2` that is checked by a full-rank test on the
//! Macaulay matrix in degree `(N+1)(D-1)+1`, first modulo small primes and
//! then exactly.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::arith::primes::{primes_up_to, require_prime};
use crate::arith::{det_field, Field, FqElem, FqField, Rational, Ring};
use crate::error::{Error, Result};
use crate::geom::{count_projective_points, reduce_morphism, HomogPoly, Morphism, ProjPointFq, ReducedMorphism};

/// Default cap on `|P^{N-1}(F_{p^j})|`, the size of one extension-field search level.
pub const DEFAULT_SEARCH_BUDGET: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: u128,
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: DEFAULT_SEARCH_BUDGET, parallel: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Good,
    Bad,
    /// The search budget ran out before a decision.
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Good => "good",
            Verdict::Bad => "bad",
            Verdict::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    /// Nonzero resultant of the reduced binary forms, as a residue mod p.
    Resultant(u64),
    /// No common zero over `F_{p^j}` for every `j <= max_degree`.
    ExhaustiveSearch { max_degree: u32 },
    /// A common zero of the reduced forms over `F_{p^degree}`.
    Witness { degree: u32, point: ProjPointFq },
    /// The resultant vanishes but the witness search ran out of budget.
    ZeroResultant { searched_degree: u32 },
    /// Search abandoned at this extension degree.
    BudgetExceeded { degree: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct GoodReductionReport {
    pub p: u64,
    pub verdict: Verdict,
    pub certificate: Certificate,
}

impl GoodReductionReport {
    pub fn is_good(&self) -> bool {
        self.verdict == Verdict::Good
    }

    pub fn witness(&self) -> Option<(u32, &ProjPointFq)> {
        match &self.certificate {
            Certificate::Witness { degree, point } => Some((*degree, point)),
            _ => None,
        }
    }

    /// `Ok` only on a good verdict.
    pub fn ensure_good(&self) -> Result<()> {
        match (&self.verdict, &self.certificate) {
            (Verdict::Good, _) => Ok(()),
            (Verdict::Bad, _) => Err(Error::BadReductionPrime(self.p)),
            (Verdict::Unknown, Certificate::BudgetExceeded { degree }) => {
                Err(Error::SearchBudgetExceeded { p: self.p, degree: *degree })
            }
            (Verdict::Unknown, _) => Err(Error::SearchBudgetExceeded { p: self.p, degree: 0 }),
        }
    }
}

/// Sylvester resultant of two binary forms of formal degree `degree`.
pub fn binary_resultant<C: Field>(f: &HomogPoly<C>, g: &HomogPoly<C>, zero: &C) -> C {
    let d = f.degree() as usize;
    assert_eq!(f.nvars(), 2);
    assert_eq!(g.degree() as usize, d);
    // coefficient of x^i y^(d-i), highest power of x first
    let coeffs = |h: &HomogPoly<C>| -> Vec<C> {
        (0..=d)
            .rev()
            .map(|i| h.poly().coeff(&[i as u32, (d - i) as u32]).cloned().unwrap_or_else(|| zero.zero_like()))
            .collect()
    };
    let (a, b) = (coeffs(f), coeffs(g));
    let size = 2 * d;
    let mut rows = vec![vec![zero.zero_like(); size]; size];
    for r in 0..d {
        for (k, c) in a.iter().enumerate() {
            rows[r][r + k] = c.clone();
        }
        for (k, c) in b.iter().enumerate() {
            rows[d + r][r + k] = c.clone();
        }
    }
    det_field(&rows, zero)
}

/// Search `P^N(F_{p^j})` for a common zero of the reduced forms, `j = 1..=max_degree`.
///
/// Each level runs over the points `a` of `P^{N-1}(F_{p^j})` for the first
/// `N` coordinates and asks whether the forms restricted to `(a, t)` share a
/// root `t` in `F_{p^j}`, so one level costs about `p^{j(N-1)}` univariate
/// gcds rather than `p^{jN}` evaluations.
pub fn search_common_zero(red: &ReducedMorphism, max_degree: u32, opts: &SearchOptions) -> Result<Certificate> {
    let p = red.field().characteristic();
    let n = red.dim();
    for j in 1..=max_degree {
        let size = (p as u128).checked_pow(j).and_then(|q| count_projective_points(q as u64, n - 1));
        if size.is_none_or(|s| s > opts.budget) {
            return Ok(Certificate::BudgetExceeded { degree: j });
        }
        let field = FqField::new(p, j)?;
        let lifted = red.over_field(&field)?;
        if let Some(point) = find_zero(&lifted, &field, opts.parallel) {
            return Ok(Certificate::Witness { degree: j, point });
        }
    }
    Ok(Certificate::ExhaustiveSearch { max_degree })
}

fn find_zero(red: &ReducedMorphism, field: &Arc<FqField>, parallel: bool) -> Option<ProjPointFq> {
    let n = red.dim();
    let zero = FqElem::zero(field);
    let mut apex = vec![zero.clone(); n + 1];
    apex[n] = FqElem::one(field);
    if red.eval_coords(&apex).iter().all(Ring::is_zero) {
        return ProjPointFq::new(apex).ok();
    }
    let total = count_projective_points(field.size(), n - 1).expect("within budget") as usize;
    let test = |i: usize| {
        let head = ProjPointFq::from_index(field, n - 1, i as u128).coords().to_vec();
        let t = common_root(red, &head, field)?;
        let mut coords = head;
        coords.push(t);
        ProjPointFq::new(coords).ok()
    };
    if parallel {
        (0..total).into_par_iter().find_map_first(test)
    } else {
        (0..total).find_map(test)
    }
}

/// A root in `field` shared by every `F_i(head, t)`.
fn common_root(red: &ReducedMorphism, head: &[FqElem], field: &Arc<FqField>) -> Option<FqElem> {
    let zero = FqElem::zero(field);
    let g = red
        .components()
        .iter()
        .map(|c| restrict_last(c, head, &zero))
        .fold(Vec::new(), |acc, f| upoly::gcd(acc, f, &zero));
    if g.is_empty() {
        return Some(zero);
    }
    if g.len() == 1 {
        return None;
    }
    // roots of g inside F_q are the roots of gcd(g, t^q - t)
    let mut frob = upoly::pow_t(field.size(), &g, &zero);
    frob.resize(frob.len().max(2), zero.clone());
    frob[1] = frob[1].sub_ref(&FqElem::one(field));
    let h = upoly::gcd(g, upoly::trim(frob), &zero);
    if h.len() < 2 {
        return None;
    }
    FqElem::all(field).find(|t| upoly::eval(&h, t, &zero).is_zero())
}

/// `F(head, t)` as a dense polynomial in `t`, lowest degree first.
fn restrict_last(form: &HomogPoly<FqElem>, head: &[FqElem], zero: &FqElem) -> Vec<FqElem> {
    let n = head.len();
    let mut out = vec![zero.clone(); form.degree() as usize + 1];
    for (m, c) in form.poly().terms() {
        let v = m[..n].iter().zip(head).fold(c.clone(), |acc, (&e, x)| acc.mul_ref(&x.pow_u64(e as u64)));
        let slot = &mut out[m[n] as usize];
        *slot = slot.add_ref(&v);
    }
    upoly::trim(out)
}

/// Dense univariate polynomials over a field, lowest degree first, with no
/// trailing zeros; the zero polynomial is empty.
mod upoly {
    use crate::arith::Field;

    pub fn trim<C: Field>(mut a: Vec<C>) -> Vec<C> {
        while a.last().is_some_and(|c| c.is_zero()) {
            a.pop();
        }
        a
    }

    pub fn rem<C: Field>(mut a: Vec<C>, b: &[C]) -> Vec<C> {
        let lead_inv = b.last().expect("nonzero divisor").inv_field().expect("nonzero leading coefficient");
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let f = a.last().expect("nonempty").mul_ref(&lead_inv);
            for (k, c) in b.iter().enumerate() {
                a[shift + k] = a[shift + k].sub_ref(&f.mul_ref(c));
            }
            a = trim(a);
        }
        a
    }

    pub fn gcd<C: Field>(mut a: Vec<C>, mut b: Vec<C>, _zero: &C) -> Vec<C> {
        while !b.is_empty() {
            let r = rem(a, &b);
            a = b;
            b = r;
        }
        a
    }

    fn mul_mod<C: Field>(a: &[C], b: &[C], m: &[C], zero: &C) -> Vec<C> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![zero.clone(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&x.mul_ref(y));
            }
        }
        rem(trim(out), m)
    }

    /// `t^e mod m`.
    pub fn pow_t<C: Field>(e: u64, m: &[C], zero: &C) -> Vec<C> {
        let one = zero.one_like();
        let mut acc = rem(vec![one.clone()], m);
        let mut base = rem(vec![zero.clone(), one], m);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, m, zero);
            }
            e >>= 1;
            if e > 0 {
                base = mul_mod(&base, &base, m, zero);
            }
        }
        acc
    }

    pub fn eval<C: Field>(a: &[C], t: &C, zero: &C) -> C {
        a.iter().rev().fold(zero.clone(), |acc, c| acc.mul_ref(t).add_ref(c))
    }
}

/// Decide good reduction at `p` with default search options.
pub fn has_good_reduction(phi: &Morphism, p: u64) -> Result<GoodReductionReport> {
    has_good_reduction_with(phi, p, &SearchOptions::default())
}

pub fn has_good_reduction_with(phi: &Morphism, p: u64, opts: &SearchOptions) -> Result<GoodReductionReport> {
    require_prime(p)?;
    let field = FqField::prime(p)?;
    let red = reduce_morphism(phi, &field);
    let d = phi.degree();
    if phi.dim() == 1 {
        let zero = FqElem::zero(&field);
        let res = binary_resultant(&red.components()[0], &red.components()[1], &zero);
        if !res.is_zero() {
            let value = res.as_prime_field().expect("prime field");
            return Ok(GoodReductionReport { p, verdict: Verdict::Good, certificate: Certificate::Resultant(value) });
        }
        let certificate = match search_common_zero(&red, d, opts)? {
            Certificate::BudgetExceeded { degree } => Certificate::ZeroResultant { searched_degree: degree - 1 },
            Certificate::ExhaustiveSearch { .. } => unreachable!("a zero resultant forces a common zero of degree <= D"),
            c => c,
        };
        return Ok(GoodReductionReport { p, verdict: Verdict::Bad, certificate });
    }
    let max_degree = d.checked_pow(phi.dim() as u32).ok_or(Error::Overflow("Bezout degree D^N"))?;
    let certificate = search_common_zero(&red, max_degree, opts)?;
    let verdict = match certificate {
        Certificate::Witness { .. } => Verdict::Bad,
        Certificate::ExhaustiveSearch { .. } => Verdict::Good,
        _ => Verdict::Unknown,
    };
    Ok(GoodReductionReport { p, verdict, certificate })
}

/// Primes up to a bound split by verdict.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GoodPrimes {
    pub good: Vec<u64>,
    /// Primes whose verdict could not be decided within the search budget.
    pub unknown: Vec<u64>,
}

pub fn good_primes(phi: &Morphism, p_max: u64) -> Result<GoodPrimes> {
    good_primes_with(phi, p_max, &SearchOptions::default())
}

pub fn good_primes_with(phi: &Morphism, p_max: u64, opts: &SearchOptions) -> Result<GoodPrimes> {
    let mut out = GoodPrimes::default();
    for p in primes_up_to(p_max) {
        match has_good_reduction_with(phi, p, opts)?.verdict {
            Verdict::Good => out.good.push(p),
            Verdict::Unknown => out.unknown.push(p),
            Verdict::Bad => {}
        }
    }
    Ok(out)
}

/// Verdicts for `φ`, `ψ` and `φ ∘ ψ` at one prime.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositionExperiment {
    pub outer: GoodReductionReport,
    pub inner: GoodReductionReport,
    pub composite: GoodReductionReport,
    /// Whether the reduction of `φ ∘ ψ` equals `φ̄ ∘ ψ̄` up to a common scalar.
    pub reductions_commute: bool,
}

impl CompositionExperiment {
    /// Both factors good and the composite not good.
    pub fn is_counterexample(&self) -> bool {
        self.outer.is_good() && self.inner.is_good() && self.composite.verdict != Verdict::Good
    }
}

/// Does good reduction of `φ` and `ψ` at `p` carry over to `φ ∘ ψ`?
pub fn composition_experiment(phi: &Morphism, psi: &Morphism, p: u64, opts: &SearchOptions) -> Result<CompositionExperiment> {
    if phi.dim() != psi.dim() {
        return Err(Error::InvalidMorphism("composing maps of different dimensions".into()));
    }
    let composite = phi.compose(psi);
    let field = FqField::prime(p)?;
    let reduced = reduce_morphism(&composite, &field);
    let composed = reduce_morphism(phi, &field).compose(&reduce_morphism(psi, &field));
    Ok(CompositionExperiment {
        outer: has_good_reduction_with(phi, p, opts)?,
        inner: has_good_reduction_with(psi, p, opts)?,
        composite: has_good_reduction_with(&composite, p, opts)?,
        reductions_commute: proportional(reduced.components(), composed.components()),
    })
}

fn proportional(a: &[HomogPoly<FqElem>], b: &[HomogPoly<FqElem>]) -> bool {
    let pivot = a.iter().zip(b).find_map(|(x, y)| {
        let (m, c) = x.poly().terms().next()?;
        Some(y.poly().coeff(m).map(|d| (d.clone(), c.clone())))
    });
    let Some(Some((num, den))) = pivot else { return false };
    let scale = num.mul_ref(&den.inv_field().expect("stored coefficients are nonzero"));
    a.iter().zip(b).all(|(x, y)| x.poly().scale(&scale) == *y.poly())
}

/// Primes tried when certifying a map of `P^N`, `N >= 2`, at construction.
const CERTIFY_PRIME_BOUND: u64 = 50;

/// Proof that the components of `φ` have no common zero over the algebraic
/// closure of Q: a nonzero resultant for `N = 1`, otherwise a Macaulay
/// matrix of full rank, tried modulo small primes before exactly over Q.
pub(crate) fn certify_no_common_zero(phi: &Morphism) -> Result<()> {
    let comps = phi.components();
    if phi.dim() == 1 {
        let zero = Rational::default();
        if binary_resultant(&comps[0], &comps[1], &zero).is_zero() {
            return Err(Error::InvalidMorphism("the components have a common zero".into()));
        }
        return Ok(());
    }
    for p in primes_up_to(CERTIFY_PRIME_BOUND) {
        if macaulay_full_rank_mod_p(&reduce_morphism(phi, &FqField::prime(p)?)) {
            return Ok(());
        }
    }
    let (rows, cols) = macaulay_rows(comps, &Rational::default());
    if rank(rows) == cols {
        Ok(())
    } else {
        Err(Error::InvalidMorphism("the components have a common zero".into()))
    }
}

/// Monomials of total degree `d` in `n` variables.
fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for e in (0..=d).rev() {
        for mut rest in monomials(n - 1, d - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

/// Rows `μ F_i` for every monomial `μ` of degree `t - D`, in degree
/// `t = (N+1)(D-1) + 1`, as coefficient vectors over the degree-`t` monomials.
///
/// N+1 forms have no common projective zero over an algebraic closure
/// exactly when they generate every form of degree `t`, that is when these
/// rows have full rank.
fn macaulay_rows<C: Ring>(comps: &[HomogPoly<C>], zero: &C) -> (Vec<Vec<C>>, usize) {
    let n = comps.len();
    let d = comps[0].degree();
    let t = n as u32 * (d - 1) + 1;
    let columns: std::collections::HashMap<Vec<u32>, usize> =
        monomials(n, t).into_iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::new();
    for f in comps {
        for mu in monomials(n, t - d) {
            let mut row = vec![zero.clone(); columns.len()];
            for (m, c) in f.poly().terms() {
                let prod: Vec<u32> = m.iter().zip(&mu).map(|(a, b)| a + b).collect();
                row[columns[&prod]] = c.clone();
            }
            rows.push(row);
        }
    }
    (rows, columns.len())
}

/// Rank by Gaussian elimination.
fn rank<C: Field>(mut rows: Vec<Vec<C>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, pivot);
        let inv = rows[r][c].inv_field().expect("nonzero pivot");
        let pivot_row: Vec<C> = rows[r].iter().map(|x| x.mul_ref(&inv)).collect();
        for row in rows.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x = x.sub_ref(&factor.mul_ref(y));
            }
        }
        r += 1;
    }
    r
}

/// Full-rank test of the reduced Macaulay matrix with word-sized arithmetic.
fn macaulay_full_rank_mod_p(red: &ReducedMorphism) -> bool {
    let p = red.field().characteristic();
    let (rows, cols) = macaulay_rows(red.components(), &FqElem::zero(red.field()));
    let mut rows: Vec<Vec<u64>> =
        rows.iter().map(|row| row.iter().map(|x| x.as_prime_field().expect("prime field")).collect()).collect();
    let inv = |a: u64| {
        let (mut result, mut base, mut e) = (1u64, a, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        result
    };
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, pivot);
        let scale = inv(rows[r][c]);
        let pivot_row: Vec<u64> = rows[r].iter().map(|x| x * scale % p).collect();
        for row in rows.iter_mut().skip(r + 1) {
            let factor = row[c];
            if factor == 0 {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x = (*x + p - factor * y % p) % p;
            }
        }
        r += 1;
    }
    r == cols
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, FqElem};
    use crate::geom::Poly;

    fn form(terms: &[(i64, [u32; 2])]) -> HomogPoly<Rational> {
        let d = terms[0].1.iter().sum();
        HomogPoly::new(d, Poly::from_terms(2, terms.iter().map(|(c, m)| (m.to_vec(), int(*c))))).unwrap()
    }

    #[test]
    fn examples() {
        let phi = Morphism::from_int_terms(&[&[(1, &[2, 0]), (-1, &[0, 2])], &[(1, &[0, 2])]]).unwrap();
        assert!(has_good_reduction(&phi, 2).unwrap().is_good());

        let bad = Morphism::from_int_terms(&[&[(3, &[2, 0]), (1, &[0, 2])], &[(3, &[1, 1])]]).unwrap();
        let report = has_good_reduction(&bad, 3).unwrap();
        assert_eq!(report.verdict, Verdict::Bad);
        let f3 = FqField::prime(3).unwrap();
        assert_eq!(report.witness(), Some((1, &ProjPointFq::from_ints(&f3, &[1, 0]).unwrap())));
        assert_eq!(report.ensure_good(), Err(Error::BadReductionPrime(3)));

        let sq = Morphism::from_int_terms(&[&[(1, &[2, 0])], &[(1, &[0, 2])]]).unwrap();
        for p in primes_up_to(13) {
            assert!(has_good_reduction(&sq, p).unwrap().is_good());
        }
    }

    #[test]
    fn good_primes_examples() {
        let phi = Morphism::from_int_terms(&[&[(1, &[2, 0]), (-1, &[0, 2])], &[(1, &[0, 2])]]).unwrap();
        assert_eq!(good_primes(&phi, 10).unwrap().good, vec![2, 3, 5, 7]);
        let m = Morphism::from_int_terms(&[&[(3, &[2, 0])], &[(1, &[0, 2])]]).unwrap();
        assert_eq!(good_primes(&m, 5).unwrap().good, vec![2, 5]);
        let sq = Morphism::from_int_terms(&[&[(1, &[2, 0])], &[(1, &[0, 2])]]).unwrap();
        assert_eq!(good_primes(&sq, 3).unwrap().good, vec![2, 3]);
    }

    #[test]
    fn resultant_of_known_pair() {
        // Res(x - 2y, x - 3y) = -1 in the Sylvester convention used here
        let r = binary_resultant(&form(&[(1, [1, 0]), (-2, [0, 1])]), &form(&[(1, [1, 0]), (-3, [0, 1])]), &int(0));
        assert_eq!(r.clone() * r, int(1));
        assert!(binary_resultant(&form(&[(1, [1, 1])]), &form(&[(1, [0, 2])]), &int(0)).is_zero());
    }

    #[test]
    fn witness_needs_an_extension() {
        // x^2 + y^2 and x*y + y^2 ... over F_3: x^2+1 has no root in F_3
        let f3 = FqField::prime(3).unwrap();
        let e = |c: i64| FqElem::from_i64(&f3, c);
        let f = HomogPoly::new(2, Poly::from_terms(2, [(vec![2, 0], e(1)), (vec![0, 2], e(1))])).unwrap();
        let g = f.scale(&e(2));
        let red = ReducedMorphism::new(&f3, vec![f, g]).unwrap();
        let cert = search_common_zero(&red, 2, &SearchOptions::default()).unwrap();
        let Certificate::Witness { degree, point } = cert else { panic!("expected a witness") };
        assert_eq!(degree, 2);
        let lifted = red.over_field(point.field()).unwrap();
        assert!(lifted.eval_coords(point.coords()).iter().all(Ring::is_zero));
    }

    #[test]
    fn budget_is_reported_not_guessed() {
        let phi = Morphism::from_int_terms(&[&[(1, &[2, 0, 0])], &[(1, &[0, 2, 0])], &[(1, &[0, 0, 2])]]).unwrap();
        let opts = SearchOptions { budget: 100, parallel: false };
        let report = has_good_reduction_with(&phi, 5, &opts).unwrap();
        assert_eq!(report.verdict, Verdict::Unknown);
        assert_eq!(report.ensure_good(), Err(Error::SearchBudgetExceeded { p: 5, degree: 3 }));
    }

    #[test]
    fn macaulay_rank_matches_the_search_on_the_plane() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut bad = 0;
        for case in 0..200 {
            let p = [2u64, 3][case % 2];
            let field = FqField::prime(p).unwrap();
            let d = 1 + (case % 3) as u32 / 2;
            let comps: Vec<HomogPoly<FqElem>> = (0..3)
                .map(|_| {
                    let terms = monomials(3, d)
                        .into_iter()
                        .map(|m| (m, FqElem::from_i64(&field, rng.gen_range(0..p as i64))));
                    HomogPoly::new(d, Poly::from_terms(3, terms.collect::<Vec<_>>())).unwrap()
                })
                .collect();
            if comps.iter().any(|c| c.is_zero()) {
                continue;
            }
            let red = ReducedMorphism::new(&field, comps).unwrap();
            let cert = search_common_zero(&red, d * d, &SearchOptions::default()).unwrap();
            let has_zero = matches!(cert, Certificate::Witness { .. });
            assert_eq!(macaulay_full_rank_mod_p(&red), !has_zero, "{red}");
            bad += has_zero as usize;
        }
        assert!(bad > 20);
    }

    #[test]
    fn cubic_maps_of_p3_are_certified_quickly() {
        let cube = |i: usize| {
            let mut m = vec![0u32; 4];
            m[i] = 3;
            m
        };
        let comps: Vec<HomogPoly<Rational>> = (0..4)
            .map(|i| {
                let terms = vec![(cube(i), int(1)), (vec![1, 1, 1, 0], int(i as i64 - 2))];
                HomogPoly::new(3, Poly::from_terms(4, terms)).unwrap()
            })
            .collect();
        assert!(Morphism::new(comps).is_ok());
        let shared: Vec<HomogPoly<Rational>> = (0..4)
            .map(|i| HomogPoly::new(3, Poly::from_terms(4, vec![(cube(i), int(1)), (cube((i + 1) % 4), int(-1))])).unwrap())
            .collect();
        assert!(matches!(Morphism::new(shared), Err(Error::InvalidMorphism(_))));
    }
}
