//! Multivariate Hensel lifting over `Z/p^K` and p-adic lifts of reduced
//! periodic points.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{
    det_field, residue_mod, to_padic, val_p, MatrixFq, PadicApprox, PrimeContext, Rational, Ring, Valuation,
};
use crate::error::{Error, Result};
use crate::geom::{
    chart_of, jacobian_at, normalize, reduce_morphism, Morphism, Poly, ProjPointFq, ProjPointQ, DEFAULT_DEGREE_CAP,
};

/// Square system `F_1, ..., F_d` in `d` variables with rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySystem {
    polys: Vec<Poly<Rational>>,
}

impl PolySystem {
    pub fn new(polys: Vec<Poly<Rational>>) -> Result<Self> {
        let d = polys.len();
        if d == 0 || polys.iter().any(|f| f.nvars() != d) {
            return Err(Error::InvalidPolynomial(format!("need a square system, got {d} equations")));
        }
        Ok(PolySystem { polys })
    }

    pub fn dim(&self) -> usize {
        self.polys.len()
    }

    pub fn polys(&self) -> &[Poly<Rational>] {
        &self.polys
    }

    pub fn eval(&self, x: &[Rational]) -> Vec<Rational> {
        self.polys.iter().map(|f| f.eval(x)).collect()
    }

    pub fn jacobian(&self, x: &[Rational]) -> Vec<Vec<Rational>> {
        self.polys.iter().map(|f| (0..self.dim()).map(|j| f.derivative(j).eval(x)).collect()).collect()
    }

    fn check_integral(&self, p: u64) -> Result<()> {
        let bad = self
            .polys
            .iter()
            .flat_map(|f| f.terms().map(|(_, c)| c))
            .any(|c| matches!(val_p(c, p), Valuation::Finite(v) if v < 0));
        if bad {
            return Err(Error::InvalidPolynomial(format!("a coefficient is not {p}-integral")));
        }
        Ok(())
    }
}

/// `min(v_p(x), cap)`.
fn capped_valuation(x: &Rational, p: u64, cap: u64) -> u64 {
    match val_p(x, p) {
        Valuation::Finite(v) => (v.max(0) as u64).min(cap),
        Valuation::Infinite => cap,
    }
}

/// Solve `A x = b` over Q; `None` if `A` is singular.
fn solve_exact(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !Zero::is_zero(&a[r][col]))?;
        a.swap(piv, col);
        b.swap(piv, col);
        let inv = a[col][col].recip();
        for r in col + 1..n {
            if Zero::is_zero(&a[r][col]) {
                continue;
            }
            let f = &a[r][col] * &inv;
            for k in col..n {
                let t = &f * &a[col][k];
                a[r][k] = &a[r][k] - t;
            }
            let t = &f * &b[col];
            b[r] = &b[r] - t;
        }
    }
    let mut x = vec![Rational::zero(); n];
    for r in (0..n).rev() {
        let s = (r + 1..n).fold(b[r].clone(), |acc, k| acc - &a[r][k] * &x[k]);
        x[r] = s / &a[r][r];
    }
    Some(x)
}

/// Newton's method from `a` to a root of `F` modulo `p^K`.
///
/// With `δ = v(det J_F(a))`, requires `v(F_i(a)) > 2δ`. Iterates at
/// precision `p^{K+2δ+1}` until `v(F(b)) >= K + δ`, which pins down the
/// root in the Hensel ball modulo `p^K`.
pub fn hensel_solve(system: &PolySystem, a: &[PadicApprox], ctx: &PrimeContext) -> Result<Vec<PadicApprox>> {
    let d = system.dim();
    if a.len() != d {
        return Err(Error::InvalidPoint(format!("start has {} coordinates, system has {d}", a.len())));
    }
    if a.iter().any(|x| x.context() != *ctx) {
        return Err(Error::RingMismatch);
    }
    let p = ctx.p();
    system.check_integral(p)?;
    let k = ctx.precision() as u64;
    let mut x: Vec<Rational> = a.iter().map(|c| Rational::from_integer(c.to_bigint())).collect();

    let det = det_field(&system.jacobian(&x), &Rational::zero());
    let delta = capped_valuation(&det, p, k);
    if delta >= k {
        return Err(Error::SingularJacobian);
    }
    let residual = system.eval(&x).iter().map(|f| capped_valuation(f, p, k)).min().expect("nonempty system");
    if residual <= 2 * delta {
        let shown = if residual >= k { format!(">={k}") } else { residual.to_string() };
        return Err(Error::PreconditionFailed { residual: shown, twice_det: (2 * delta).to_string() });
    }

    let w = k + 2 * delta + 1;
    let modulus = num_traits::pow(BigInt::from(p), w as usize);
    let max_iter = (64 - (k.max(1) - 1).leading_zeros()) as usize + 2;
    for _ in 0..=max_iter {
        let fx = system.eval(&x);
        let r = fx.iter().map(|f| capped_valuation(f, p, w)).min().expect("nonempty system");
        if r >= k + delta {
            return x.iter().map(|c| to_padic(c, ctx)).collect();
        }
        let step = solve_exact(system.jacobian(&x), fx).ok_or(Error::SingularJacobian)?;
        x = x
            .iter()
            .zip(&step)
            .map(|(xi, si)| {
                let next = residue_mod(&(xi - si), &modulus).ok_or(Error::SingularJacobian)?;
                Ok(Rational::from_integer(next))
            })
            .collect::<Result<_>>()?;
    }
    Err(Error::NoConvergence(max_iter))
}

/// A p-adic approximation to a periodic point, in affine coordinates on the
/// chart `x_chart = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicLift {
    pub chart: usize,
    pub coords: Vec<PadicApprox>,
}

/// Lift a point `P̄` of exact period dividing `m` to a solution of
/// `φ^m(x) = x` modulo `p^K`, on the chart of `P̄`'s last nonzero coordinate.
pub fn lift_periodic(phi: &Morphism, point: &ProjPointFq, m: u64, ctx: &PrimeContext) -> Result<PeriodicLift> {
    let field = point.field();
    if field.characteristic() != ctx.p() || field.degree() != 1 || point.dim() != phi.dim() {
        return Err(Error::RingMismatch);
    }
    let red = reduce_morphism(phi, field);
    let jac = jacobian_at(&red, point, m)?;
    let identity = MatrixFq::identity(field, jac.dim());
    if jac.sub(&identity).det().is_zero() {
        return Err(Error::DegenerateMultiplier);
    }
    let chart = chart_of(point);
    let iterate = phi.iterate_map(m, DEFAULT_DEGREE_CAP)?;
    let integral = Morphism::new_unchecked(iterate.integral_components(ctx.p()))?;
    let affine = integral.dehomogenize(chart);
    let n = phi.dim();
    let one = Rational::one();
    let system = PolySystem::new(
        affine
            .numerators
            .iter()
            .enumerate()
            .map(|(j, num)| num.sub(&Poly::var(n, j, &one).mul(&affine.denominator)))
            .collect(),
    )?;
    let inv = point.coords()[chart].inv()?;
    let start: Vec<PadicApprox> = point
        .coords()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != chart)
        .map(|(_, c)| {
            let r = c.mul_ref(&inv).as_prime_field().expect("prime field element");
            ctx.from_i64(r as i64)
        })
        .collect();
    let coords = hensel_solve(&system, &start, ctx)?;
    Ok(PeriodicLift { chart, coords })
}

/// Affine coordinates of a rational point in `Z/p^K` on a given chart.
pub fn chart_residues(point: &ProjPointQ, chart: usize, ctx: &PrimeContext) -> Result<Vec<PadicApprox>> {
    let normalized = normalize(point, ctx.p());
    let coords = normalized.coords();
    let pivot = &coords[chart];
    if capped_valuation(pivot, ctx.p(), 1) != 0 {
        return Err(Error::InvalidPoint("chart coordinate is not a unit".into()));
    }
    coords
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != chart)
        .map(|(_, c)| to_padic(&(c / pivot), ctx))
        .collect()
}
