//! Period decomposition `n = m r' p^e`, the period bounds, valuation traces
//! of local power series, and primes where the reduced period drops.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::arith::primes::{prime_divisors, primes_up_to, require_prime};
use crate::arith::{matrix_order, FqField, PadicApprox, PadicValuation, PrimeContext, Ring};
use crate::error::{Error, Result};
use crate::geom::{jacobian_at, reduce_morphism, reduce_point, Morphism, ProjPointQ, TruncatedSeries};
use crate::orbits::{certify_period, reduced_period, PeriodCertificate};
use crate::reduction::{has_good_reduction, Verdict};

/// Order of the multiplier matrix of the reduced cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JacobianOrder {
    Order(u128),
    Singular,
}

impl fmt::Display for JacobianOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JacobianOrder::Order(t) => write!(f, "{t}"),
            JacobianOrder::Singular => f.write_str("singular"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodDecomposition {
    pub n: u64,
    pub m: u64,
    pub r_prime: u64,
    pub e: u32,
    pub p: u64,
    pub r_full: JacobianOrder,
}

/// Split `n/m` into its prime-to-`p` part `r'` and `p^e`, and check `r'`
/// against the multiplier order. A singular multiplier forces `n = m`.
pub fn decompose(n: u64, m: u64, r_full: JacobianOrder, p: u64) -> Result<PeriodDecomposition> {
    require_prime(p)?;
    if m == 0 || n == 0 || n % m != 0 {
        return Err(Error::DivisibilityViolation { n, m });
    }
    let mut r_prime = n / m;
    let mut e = 0;
    while r_prime % p == 0 {
        r_prime /= p;
        e += 1;
    }
    match r_full {
        JacobianOrder::Singular if n != m => {
            return Err(Error::TheoremViolation(format!(
                "n = {n} differs from m = {m} although the multiplier at p = {p} is singular"
            )));
        }
        JacobianOrder::Order(t) if t % r_prime as u128 != 0 => {
            return Err(Error::TheoremViolation(format!(
                "r' = {r_prime} does not divide the multiplier order {t} at p = {p} (n = {n}, m = {m})"
            )));
        }
        _ => {}
    }
    Ok(PeriodDecomposition { n, m, r_prime, e, p, r_full })
}

/// Order of the multiplier of the reduced cycle through the reduction of `P`.
pub fn multiplier_order(phi: &Morphism, point: &ProjPointQ, p: u64) -> Result<(u64, JacobianOrder)> {
    has_good_reduction(phi, p)?.ensure_good()?;
    let field = FqField::prime(p)?;
    let red = reduce_morphism(phi, &field);
    let bar = reduce_point(point, &field);
    let m = reduced_period(&red, &bar)?;
    let order = match matrix_order(&jacobian_at(&red, &bar, m)?) {
        Ok(t) => JacobianOrder::Order(t),
        Err(Error::SingularMatrix) => JacobianOrder::Singular,
        Err(e) => return Err(e),
    };
    Ok((m, order))
}

/// The full pipeline for a rational point: certify `n`, reduce, and decompose.
pub fn decompose_point(phi: &Morphism, point: &ProjPointQ, p: u64, n_max: u64) -> Result<PeriodDecomposition> {
    let n = match certify_period(phi, point, n_max)? {
        PeriodCertificate::Periodic(n) => n,
        PeriodCertificate::NotPeriodic { .. } => return Err(Error::NotPeriodic(n_max)),
    };
    let (m, order) = multiplier_order(phi, point, p)?;
    decompose(n, m, order, p)
}

/// `G_k`: `G_0 = 0`, `G_1 = 1`, `G_k = G_{k-1} + G_{k-2}`. Exact for `k <= 186`.
pub fn fibonacci(k: u32) -> u128 {
    assert!(k <= 186, "G_k overflows u128 beyond k = 186");
    let (mut a, mut b) = (0u128, 1u128);
    for _ in 0..k {
        (a, b) = (b, a + b);
    }
    a
}

/// Largest admissible exponent `e` of `p` in `n/m` given `v(p)`.
///
/// For odd `p` this is the largest `e` with `2^{e-1} <= v(p)`; for `p = 2`
/// the largest `e` with `G_{e-1} <= v(2)`.
pub fn e_bound(p: u64, v_p: u64) -> u32 {
    assert!(v_p >= 1, "v(p) must be positive");
    if p != 2 {
        return 64 - v_p.leading_zeros();
    }
    let mut e = 1;
    while fibonacci(e) <= v_p as u128 {
        e += 1;
    }
    e
}

/// `q^{d'} - 1`, the largest order of an element of `GL_{d'}(F_q)`.
pub fn r_bound(q: u64, d_prime: u32) -> Result<u128> {
    (q as u128).checked_pow(d_prime).map(|x| x - 1).ok_or(Error::Overflow("q^d' - 1"))
}

/// Bound on primitive periods of rational points with good reduction at `p`
/// on `P^d`: `p^{d+1}(p^d - 1)`, or `2^{d+3}(2^d - 1)` for `p = 2`.
pub fn n_max_q(p: u64, d: u32) -> Result<u128> {
    let pp = p as u128;
    let overflow = Error::Overflow("period bound");
    let (head, tail) = if p == 2 {
        (2u128.checked_pow(d + 3), 2u128.checked_pow(d))
    } else {
        (pp.checked_pow(d + 1), pp.checked_pow(d))
    };
    let (head, tail) = (head.ok_or(overflow.clone())?, tail.ok_or(overflow.clone())?);
    head.checked_mul(tail - 1).ok_or(overflow)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub p: u64,
    pub v_p: u64,
    pub dim: u32,
    pub e_max: u32,
    pub r_max: u128,
    /// Only meaningful over Q, where `v(p) = 1`.
    pub n_max: Option<u128>,
}

pub fn bound_report(p: u64, v_p: u64, dim: u32) -> Result<BoundReport> {
    require_prime(p)?;
    if v_p == 0 || dim == 0 {
        return Err(Error::InvalidPoint("v(p) and the dimension must be positive".into()));
    }
    let n_max = if v_p == 1 { Some(n_max_q(p, dim)?) } else { None };
    Ok(BoundReport { p, v_p, dim, e_max: e_bound(p, v_p), r_max: r_bound(p, dim)?, n_max })
}

/// Valuations along the `p`-power iterates of a local series `f`:
/// `x_k = f^{p^k}(0)`, `b_k = min_i v(x_k,i)` and `df^{p^k}_0 = I + p^{c_k} A_k`.
///
/// Index `k` runs from `start`; computed traces start at 0 with `x_0 = f(0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ValuationTrace {
    pub p: u64,
    pub precision: u32,
    pub start: u32,
    pub b: Vec<PadicValuation>,
    pub c: Vec<PadicValuation>,
    /// Position of an entry of `A_k` of least valuation, when `c_k < K`.
    pub witnesses: Vec<Option<(usize, usize)>>,
}

impl ValuationTrace {
    /// A trace given by hand, for checking the inequalities on their own.
    pub fn from_values(p: u64, precision: u32, start: u32, b: Vec<PadicValuation>, c: Vec<PadicValuation>) -> Self {
        assert_eq!(b.len(), c.len(), "b and c must have equal length");
        let witnesses = vec![None; b.len()];
        ValuationTrace { p, precision, start, b, c, witnesses }
    }
}

impl fmt::Display for ValuationTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} K={}", self.p, self.precision)?;
        for (i, (b, c)) in self.b.iter().zip(&self.c).enumerate() {
            write!(f, "\n  k={}: b={b} c={c}", self.start as usize + i)?;
        }
        Ok(())
    }
}

fn min_valuation(values: impl Iterator<Item = PadicApprox>, k: u32) -> PadicValuation {
    values.fold(PadicValuation::AtLeast(k), |acc, x| acc.min(x.valuation()))
}

/// Iterate `f` at precision `ctx` and record `b_k`, `c_k` for `k = 0..=steps`.
///
/// The series must have identity linear part modulo `p`. A context finer
/// than the series' own precision cannot be honoured.
pub fn valuation_trace(f: &TruncatedSeries, ctx: &PrimeContext, steps: u32) -> Result<ValuationTrace> {
    let own = f.context();
    if ctx.p() != own.p() {
        return Err(Error::RingMismatch);
    }
    if ctx.precision() > own.precision() {
        return Err(Error::PrecisionExhausted(format!(
            "the series is known modulo {}^{}, not {}^{}",
            own.p(),
            own.precision(),
            ctx.p(),
            ctx.precision()
        )));
    }
    let k_prec = ctx.precision();
    let series = if k_prec == own.precision() {
        f.clone()
    } else {
        let comps = f
            .components()
            .iter()
            .map(|c| c.try_map_coeffs(|a| a.truncate(k_prec)))
            .collect::<Result<Vec<_>>>()?;
        TruncatedSeries::new(*ctx, f.order(), comps)?
    };
    let d = series.dim();
    let lin = series.linear_part();
    for (i, row) in lin.iter().enumerate() {
        for (j, a) in row.iter().enumerate() {
            let target = if i == j { ctx.one() } else { ctx.zero() };
            if a.sub_ref(&target).is_unit() {
                return Err(Error::InvalidPolynomial("the linear part is not the identity modulo p".into()));
            }
        }
    }
    let p = ctx.p();
    let total = p.checked_pow(steps).filter(|t| *t <= 50_000_000).ok_or(Error::Overflow("p^steps iterations"))?;
    let identity: Vec<Vec<PadicApprox>> =
        (0..d).map(|i| (0..d).map(|j| if i == j { ctx.one() } else { ctx.zero() }).collect()).collect();
    let mut y = vec![ctx.zero(); d];
    let mut jac = identity.clone();
    let mut next_record = 1u64;
    let mut trace = ValuationTrace { p, precision: k_prec, start: 0, b: Vec::new(), c: Vec::new(), witnesses: Vec::new() };
    for i in 1..=total {
        let local = series.jacobian(&y);
        jac = (0..d)
            .map(|r| {
                (0..d)
                    .map(|s| (0..d).fold(ctx.zero(), |acc, t| acc.add_ref(&local[r][t].mul_ref(&jac[t][s]))))
                    .collect()
            })
            .collect();
        y = series.eval(&y);
        if i == next_record {
            trace.b.push(min_valuation(y.iter().copied(), k_prec));
            let diff: Vec<(usize, usize, PadicApprox)> = (0..d)
                .flat_map(|r| (0..d).map(move |s| (r, s)))
                .map(|(r, s)| (r, s, jac[r][s].sub_ref(&identity[r][s])))
                .collect();
            let c = min_valuation(diff.iter().map(|t| t.2), k_prec);
            trace.c.push(c);
            trace.witnesses.push(match c {
                PadicValuation::Exact(v) => diff.iter().find(|t| t.2.valuation() == PadicValuation::Exact(v)).map(|t| (t.0, t.1)),
                PadicValuation::AtLeast(_) => None,
            });
            next_record *= p;
        }
    }
    Ok(trace)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inequality {
    /// `b_{k+1} >= min(2 b_k, b_k + (p-1) c_k, b_k + v(p))`
    BRecurrence,
    /// `c_{k+1} >= min(b_k, c_k + v(p), p c_k)`
    CRecurrence,
    /// `b_k >= 2^k` (odd `p`) or `b_k >= G_{k+1}` (`p = 2`)
    BClosedForm,
    /// `c_k >= 2^{k-1}` (odd `p`) or `c_k >= G_k` (`p = 2`)
    CClosedForm,
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Inequality::BRecurrence => "b_{k+1} >= min(2*b_k, b_k + (p-1)*c_k, b_k + v(p))",
            Inequality::CRecurrence => "c_{k+1} >= min(b_k, c_k + v(p), p*c_k)",
            Inequality::BClosedForm => "b_k >= closed-form lower bound",
            Inequality::CClosedForm => "c_k >= closed-form lower bound",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub inequality: Inequality,
    pub k: u32,
    pub value: PadicValuation,
    pub bound: u64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at k={}: value {} < bound {}", self.inequality, self.k, self.value, self.bound)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaCheck {
    pub violation: Option<Violation>,
    /// Closed-form bounds above the precision that could not be tested.
    pub untestable: Vec<(Inequality, u32, u64)>,
}

impl LemmaCheck {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

fn lower(v: PadicValuation) -> u64 {
    v.lower_bound() as u64
}

/// Check the step inequalities for every consecutive pair, then the closed
/// forms at every index reached while all earlier `b_j <= v(p)`.
///
/// Values censored at `K` satisfy any bound up to `K`. A recurrence whose
/// right side exceeds `K` only asks for `>= K`, which is all arithmetic
/// modulo `p^K` can show; a closed-form bound above `K` on a censored
/// value is reported as untestable.
pub fn check_lemma_recurrences(trace: &ValuationTrace, p: u64, v_p: u64) -> LemmaCheck {
    let k_prec = trace.precision as u64;
    let len = trace.b.len();
    let mut check = LemmaCheck { violation: None, untestable: Vec::new() };
    for i in 0..len.saturating_sub(1) {
        let k = trace.start + i as u32;
        let (b, c) = (lower(trace.b[i]), lower(trace.c[i]));
        let rhs_b = (2 * b).min(b + (p - 1) * c).min(b + v_p).min(k_prec);
        if lower(trace.b[i + 1]) < rhs_b {
            check.violation = Some(Violation { inequality: Inequality::BRecurrence, k, value: trace.b[i + 1], bound: rhs_b });
            return check;
        }
        let rhs_c = b.min(c + v_p).min(p * c).min(k_prec);
        if lower(trace.c[i + 1]) < rhs_c {
            check.violation = Some(Violation { inequality: Inequality::CRecurrence, k, value: trace.c[i + 1], bound: rhs_c });
            return check;
        }
    }
    for i in 0..len {
        let k = trace.start + i as u32;
        let in_regime = trace.b[..i].iter().all(|b| b.exact().is_some_and(|v| v as u64 <= v_p));
        if !in_regime {
            break;
        }
        let (b_bound, c_bound) = if p == 2 {
            (fibonacci(k + 1) as u64, fibonacci(k) as u64)
        } else {
            (1u64 << k, if k == 0 { 1 } else { 1u64 << (k - 1) })
        };
        for (ineq, value, bound) in [(Inequality::BClosedForm, trace.b[i], b_bound), (Inequality::CClosedForm, trace.c[i], c_bound)] {
            match value.at_least(bound) {
                Some(true) => {}
                Some(false) => {
                    check.violation = Some(Violation { inequality: ineq, k, value, bound });
                    return check;
                }
                None => check.untestable.push((ineq, k, bound)),
            }
        }
    }
    check
}

/// Primes at which the reduced period of `P` may be a proper divisor of its
/// exact period `n`, together with the primes up to `bound` without a
/// certified good reduction.
///
/// For a proper divisor `s` of `n`, the reductions of `φ^s(P)` and `P`
/// coincide exactly at the primes dividing every 2×2 minor of their
/// primitive integer coordinates.
pub fn exceptional_primes(phi: &Morphism, point: &ProjPointQ, n: u64, bound: u64) -> Result<BTreeSet<u64>> {
    if n == 0 || phi.iterate(point, n)? != *point {
        return Err(Error::NotPeriodic(n));
    }
    let base = point.primitive_integers();
    let mut out = BTreeSet::new();
    for s in (1..n).filter(|s| n % s == 0) {
        let image = phi.iterate(point, s)?;
        if image == *point {
            return Err(Error::NotPeriodic(n));
        }
        let a = image.primitive_integers();
        let mut g = BigInt::zero();
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                g = g.gcd(&(&a[i] * &base[j] - &a[j] * &base[i]));
            }
        }
        out.extend(prime_divisors(&g)?);
    }
    for p in primes_up_to(bound) {
        if has_good_reduction(phi, p)?.verdict != Verdict::Good {
            out.insert(p);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Poly;

    #[test]
    fn decompose_examples() {
        let d = decompose(2, 1, JacobianOrder::Order(1), 2).unwrap();
        assert_eq!((d.m, d.r_prime, d.e), (1, 1, 1));
        let d = decompose(2, 2, JacobianOrder::Singular, 3).unwrap();
        assert_eq!((d.r_prime, d.e), (1, 0));
        let d = decompose(6, 2, JacobianOrder::Order(3), 5).unwrap();
        assert_eq!((d.r_prime, d.e), (3, 0));
        assert_eq!(decompose(5, 2, JacobianOrder::Order(1), 3), Err(Error::DivisibilityViolation { n: 5, m: 2 }));
        assert!(matches!(decompose(4, 2, JacobianOrder::Singular, 3), Err(Error::TheoremViolation(_))));
        assert!(matches!(decompose(10, 2, JacobianOrder::Order(4), 3), Err(Error::TheoremViolation(_))));
    }

    #[test]
    fn bounds() {
        assert_eq!(e_bound(3, 1), 1);
        assert_eq!(e_bound(2, 1), 3);
        assert_eq!(e_bound(3, 9), 4);
        for p in primes_up_to(100).into_iter().filter(|&p| p != 2) {
            assert_eq!(e_bound(p, 1), 1);
        }
        assert_eq!(r_bound(7, 1).unwrap(), 6);
        assert_eq!(r_bound(2, 3).unwrap(), 7);
        assert_eq!(r_bound(3, 2).unwrap(), 8);
        assert_eq!(n_max_q(3, 1).unwrap(), 18);
        assert_eq!(n_max_q(2, 1).unwrap(), 16);
        assert_eq!(n_max_q(5, 2).unwrap(), 3000);
    }

    #[test]
    fn e_bound_matches_definition() {
        for v in 1..200u64 {
            let e = e_bound(3, v);
            assert!(1u64 << (e - 1) <= v && 1u64 << e > v);
            let e2 = e_bound(2, v);
            assert!(fibonacci(e2 - 1) <= v as u128 && fibonacci(e2) > v as u128);
        }
    }

    #[test]
    fn fibonacci_values() {
        assert_eq!(fibonacci(1), 1);
        assert_eq!(fibonacci(10), 55);
        let alpha = (1.0 + 5f64.sqrt()) / 2.0;
        for k in 0..=40 {
            let binet = (alpha.powi(k as i32) - (-1.0 / alpha).powi(k as i32)) / 5f64.sqrt();
            assert_eq!(fibonacci(k), binet.round() as u128);
        }
        assert_eq!(fibonacci(12), 144);
        for k in 2..150 {
            assert!(fibonacci(k + 1) <= 2 * fibonacci(k));
        }
    }

    fn series(ctx: PrimeContext, terms: &[(i64, u32)]) -> TruncatedSeries {
        let poly = Poly::from_terms(1, terms.iter().map(|&(c, e)| (vec![e], ctx.from_i64(c))));
        TruncatedSeries::new(ctx, 2, vec![poly]).unwrap()
    }

    #[test]
    fn trace_examples() {
        let ctx = PrimeContext::new(2, 8).unwrap();
        let t = valuation_trace(&series(ctx, &[(2, 0), (1, 1)]), &ctx, 3).unwrap();
        assert_eq!(t.b[1], PadicValuation::Exact(2));
        assert!(t.c.iter().all(|c| *c == PadicValuation::AtLeast(8)));
        assert!(check_lemma_recurrences(&t, 2, 1).passed());

        let t = valuation_trace(&series(ctx, &[(0, 0), (1, 1)]), &ctx, 3).unwrap();
        assert!(t.b.iter().all(|b| *b == PadicValuation::AtLeast(8)));
        assert!(check_lemma_recurrences(&t, 2, 1).passed());

        let ctx3 = PrimeContext::new(3, 4).unwrap();
        let bad = series(ctx3, &[(3, 0), (2, 1)]);
        assert!(matches!(valuation_trace(&bad, &ctx3, 1), Err(Error::InvalidPolynomial(_))));
        let fine = PrimeContext::new(3, 6).unwrap();
        assert!(matches!(valuation_trace(&bad, &fine, 1), Err(Error::PrecisionExhausted(_))));
    }

    #[test]
    fn involution_trace() {
        let ctx = PrimeContext::new(2, 6).unwrap();
        let t = valuation_trace(&series(ctx, &[(-2, 0), (-1, 1)]), &ctx, 2).unwrap();
        assert_eq!(t.b[0], PadicValuation::Exact(1));
        assert_eq!(t.b[1], PadicValuation::AtLeast(6));
        assert_eq!(t.c[0], PadicValuation::Exact(1));
        assert!(check_lemma_recurrences(&t, 2, 1).passed());
    }

    #[test]
    fn synthetic_violation() {
        let e = PadicValuation::Exact;
        let t = ValuationTrace::from_values(3, 6, 1, vec![e(1), e(1)], vec![e(1), PadicValuation::AtLeast(6)]);
        let check = check_lemma_recurrences(&t, 3, 1);
        let v = check.violation.unwrap();
        assert_eq!((v.inequality, v.k, v.bound), (Inequality::BRecurrence, 1, 2));
    }

    #[test]
    fn exceptional_examples() {
        let z2m1 = Morphism::from_int_terms(&[&[(1, &[2, 0]), (-1, &[0, 2])], &[(1, &[0, 2])]]).unwrap();
        let neg = Morphism::from_int_terms(&[&[(-1, &[1, 0])], &[(1, &[0, 1])]]).unwrap();
        let sq = Morphism::from_int_terms(&[&[(1, &[2, 0])], &[(1, &[0, 2])]]).unwrap();
        let pt = |a, b| ProjPointQ::from_ints(&[a, b]).unwrap();
        assert!(exceptional_primes(&z2m1, &pt(0, 1), 2, 50).unwrap().is_empty());
        assert_eq!(exceptional_primes(&neg, &pt(1, 1), 2, 50).unwrap(), BTreeSet::from([2]));
        assert!(exceptional_primes(&sq, &pt(1, 0), 1, 50).unwrap().is_empty());
        assert_eq!(exceptional_primes(&z2m1, &pt(0, 1), 4, 50), Err(Error::NotPeriodic(4)));
    }
}
