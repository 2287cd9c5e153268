//! Local data at a point: chart Jacobians over F_q and truncated p-adic
//! Taylor expansions.

use super::morphism::{Morphism, ReducedMorphism};
use super::point::{normalize, ProjPointFq, ProjPointQ};
use super::poly::Poly;
use crate::arith::{to_padic, val_p, FqElem, MatrixFq, PadicApprox, PadicValuation, PrimeContext, Rational, Ring, Valuation};
use crate::error::{Error, Result};

/// Chart used for a reduced point: its last nonzero coordinate.
pub fn chart_of(point: &ProjPointFq) -> usize {
    point.coords().iter().rposition(|c| !c.is_zero()).expect("nonzero point")
}

/// Affine coordinates of `point` scaled so the chart coordinate is 1.
fn chart_coords(point: &ProjPointFq, chart: usize) -> Vec<FqElem> {
    let inv = point.coords()[chart].inv().expect("chart coordinate is nonzero");
    point.coords().iter().map(|c| c.mul_ref(&inv)).collect()
}

/// Chart Jacobian from the homogeneous derivative `m_hom` of an iterate `F`
/// at `x` (with `x_chart = 1`) and `λ = F_chart(x)`, given `F(x) = λ x`.
fn chart_jacobian(m_hom: &[Vec<FqElem>], x: &[FqElem], chart: usize, lambda: &FqElem) -> MatrixFq {
    let field = lambda.field().clone();
    let inv = lambda.inv().expect("F(x) is a nonzero multiple of x");
    let idx: Vec<usize> = (0..x.len()).filter(|&j| j != chart).collect();
    let rows = idx
        .iter()
        .map(|&j| {
            idx.iter()
                .map(|&k| m_hom[j][k].sub_ref(&x[j].mul_ref(&m_hom[chart][k])).mul_ref(&inv))
                .collect()
        })
        .collect();
    MatrixFq::from_rows(&field, rows)
}

fn mat_mul(a: &[Vec<FqElem>], b: &[Vec<FqElem>]) -> Vec<Vec<FqElem>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(a[i][0].zero_like(), |acc, k| acc.add_ref(&a[i][k].mul_ref(&b[k][j]))))
                .collect()
        })
        .collect()
}

/// Jacobian of the dehomogenized `φ̄^m` at a point of `P^N(F_q)` fixed by
/// `φ̄^m`, in the chart of the point's last nonzero coordinate. Computed by
/// the chain rule along the orbit.
pub fn jacobian_at(red: &ReducedMorphism, point: &ProjPointFq, m: u64) -> Result<MatrixFq> {
    if m == 0 || red.iterate(point, m)? != *point {
        return Err(Error::NotPeriodic(m));
    }
    let chart = chart_of(point);
    let x = chart_coords(point, chart);
    let n1 = x.len();
    let field = red.field();
    let mut acc: Vec<Vec<FqElem>> = (0..n1)
        .map(|i| (0..n1).map(|j| FqElem::from_i64(field, (i == j) as i64)).collect())
        .collect();
    let mut z = x.clone();
    for _ in 0..m {
        acc = mat_mul(&red.homogeneous_jacobian(&z), &acc);
        z = red.eval_coords(&z);
        if z.iter().all(Ring::is_zero) {
            return Err(Error::BaseLocusHit);
        }
    }
    Ok(chart_jacobian(&acc, &x, chart, &z[chart]))
}

/// The same Jacobian obtained by composing `φ̄` symbolically `m` times and
/// differentiating; fails above `degree_cap`.
pub fn jacobian_by_composition(red: &ReducedMorphism, point: &ProjPointFq, m: u64, degree_cap: u64) -> Result<MatrixFq> {
    let iterate = red.iterate_map(m, degree_cap)?;
    if m == 0 || iterate.eval(point)? != *point {
        return Err(Error::NotPeriodic(m));
    }
    let chart = chart_of(point);
    let x = chart_coords(point, chart);
    let lambda = iterate.components()[chart].eval(&x);
    Ok(chart_jacobian(&iterate.homogeneous_jacobian(&x), &x, chart, &lambda))
}

/// `d` power series in `d` variables over `Z/p^K`, truncated at total degree
/// `order`, with every constant term in the maximal ideal.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    ctx: PrimeContext,
    order: u32,
    comps: Vec<Poly<PadicApprox>>,
}

impl TruncatedSeries {
    pub fn new(ctx: PrimeContext, order: u32, comps: Vec<Poly<PadicApprox>>) -> Result<Self> {
        let d = comps.len();
        if d == 0 || comps.iter().any(|c| c.nvars() != d) {
            return Err(Error::InvalidPolynomial("a series needs d components in d variables".into()));
        }
        if comps.iter().any(|c| c.total_degree().is_some_and(|t| t > order)) {
            return Err(Error::InvalidPolynomial(format!("a term exceeds the truncation order {order}")));
        }
        if comps.iter().flat_map(|c| c.terms()).any(|(_, a)| a.context() != ctx) {
            return Err(Error::RingMismatch);
        }
        let series = TruncatedSeries { ctx, order, comps };
        if series.constant_term().iter().any(|c| c.is_unit()) {
            return Err(Error::NotFixedModP);
        }
        Ok(series)
    }

    pub fn context(&self) -> PrimeContext {
        self.ctx
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[Poly<PadicApprox>] {
        &self.comps
    }

    /// `ω`, the value at the origin.
    pub fn constant_term(&self) -> Vec<PadicApprox> {
        let zero = vec![0; self.dim()];
        self.comps.iter().map(|c| c.coeff(&zero).copied().unwrap_or(self.ctx.zero())).collect()
    }

    /// The linear part `df_0`, row `j` holding the coefficients of component `j`.
    pub fn linear_part(&self) -> Vec<Vec<PadicApprox>> {
        let d = self.dim();
        self.comps
            .iter()
            .map(|c| {
                (0..d)
                    .map(|k| {
                        let mut e = vec![0; d];
                        e[k] = 1;
                        c.coeff(&e).copied().unwrap_or(self.ctx.zero())
                    })
                    .collect()
            })
            .collect()
    }

    pub fn eval(&self, t: &[PadicApprox]) -> Vec<PadicApprox> {
        self.comps.iter().map(|c| c.eval(t)).collect()
    }

    /// Matrix of partial derivatives at `t`.
    pub fn jacobian(&self, t: &[PadicApprox]) -> Vec<Vec<PadicApprox>> {
        let d = self.dim();
        self.comps.iter().map(|c| (0..d).map(|k| c.derivative(k).eval(t)).collect()).collect()
    }
}

/// Expansion of `T ↦ f(P + T) − P`, where `f` is `φ` dehomogenized in
/// `chart`, at precision `ctx` up to total degree `order`.
pub fn taylor_expand(phi: &Morphism, point: &ProjPointQ, chart: usize, ctx: &PrimeContext, order: u32) -> Result<TruncatedSeries> {
    let p = ctx.p();
    let n1 = phi.dim() + 1;
    if point.coords().len() != n1 || chart >= n1 {
        return Err(Error::InvalidPoint("point or chart does not match the map".into()));
    }
    let np = normalize(point, p);
    if val_p(&np.coords()[chart], p) != Valuation::Finite(0) {
        return Err(Error::InvalidPoint(format!("coordinate {chart} of the reduced point is zero")));
    }
    let lead = np.coords()[chart].clone();
    let affine: Vec<PadicApprox> = (0..n1)
        .filter(|&j| j != chart)
        .map(|j| to_padic(&(&np.coords()[j] / &lead), ctx))
        .collect::<Result<_>>()?;
    let d = n1 - 1;
    let one = ctx.one();
    let mut subs = Vec::with_capacity(n1);
    let mut k = 0;
    for j in 0..n1 {
        if j == chart {
            subs.push(Poly::constant(d, one));
        } else {
            subs.push(Poly::constant(d, affine[k]).add(&Poly::var(d, k, &one)));
            k += 1;
        }
    }
    let comps: Vec<Poly<PadicApprox>> = phi
        .integral_components(p)
        .iter()
        .map(|c| c.poly().try_map_coeffs(|a: &Rational| to_padic(a, ctx)))
        .collect::<Result<_>>()?;
    let expanded: Vec<Poly<PadicApprox>> = comps.iter().map(|c| c.substitute_truncated(&subs, order)).collect();
    let den = &expanded[chart];
    let c0 = den.coeff(&vec![0; d]).copied().unwrap_or(ctx.zero());
    if !c0.is_unit() {
        let v = match c0.valuation() {
            PadicValuation::Exact(v) | PadicValuation::AtLeast(v) => v,
        };
        return Err(Error::NonUnitDenominator(v as i64));
    }
    let c0_inv = c0.inv()?;
    // 1/(c0 + h) = c0^{-1} Σ (−c0^{-1} h)^k, h without constant term
    let h = den.sub(&Poly::constant(d, c0));
    let ratio = h.scale(&c0_inv.neg_ref());
    let mut inverse = Poly::constant(d, one);
    let mut power = Poly::constant(d, one);
    for _ in 0..order {
        power = power.mul_truncated(&ratio, order);
        inverse = inverse.add(&power);
    }
    let inverse = inverse.scale(&c0_inv);
    let mut out = Vec::with_capacity(d);
    let mut k = 0;
    for (j, num) in expanded.iter().enumerate() {
        if j == chart {
            continue;
        }
        let f = num.mul_truncated(&inverse, order).sub(&Poly::constant(d, affine[k]));
        out.push(f);
        k += 1;
    }
    TruncatedSeries::new(*ctx, order, out)
}
