use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Variants are grouped roughly by the module that raises them; callers that
/// only care about a few cases match on those and forward the rest.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // arithmetic
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision p^K = {p}^{k} does not fit the 63-bit residue representation")]
    PrecisionTooLarge { p: u64, k: u32 },
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("value has negative valuation {0} and does not embed in Z_p")]
    NegativeValuation(i64),
    #[error("element is not a unit")]
    NotAUnit,
    #[error("zero has no multiplicative order")]
    ZeroElement,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("arithmetic overflow: {0}")]
    Overflow(&'static str),

    // geometry
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("all coordinates vanish: the point lies in the base locus")]
    BaseLocusHit,
    #[error("denominator has positive valuation {0} at the expansion point")]
    NonUnitDenominator(i64),
    #[error("the reduction of the expansion point is not fixed (constant term is a unit)")]
    NotFixedModP,
    #[error("point is not periodic with period {0} under the reduced map")]
    NotPeriodic(u64),
    #[error("iterated degree {degree} exceeds the cap {cap}")]
    DegreeCapExceeded { degree: u64, cap: u64 },
    #[error("points do not share a common reduction")]
    InconsistentReductions,
    #[error("matrix is not invertible over Z_(p): {0}")]
    NotIntegralInvertible(String),

    // reduction
    #[error("extension-field search at p = {p} needs degree {degree}, exceeding the point budget")]
    SearchBudgetExceeded { p: u64, degree: u32 },
    #[error("map has bad reduction at {0}")]
    BadReductionPrime(u64),

    // orbits
    #[error("reduced point has a tail of length {tail} before entering its cycle")]
    NotPeriodicModP { tail: usize },

    // periods
    #[error("reduced period {m} does not divide {n}")]
    DivisibilityViolation { n: u64, m: u64 },
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    // lifting
    #[error("Hensel precondition fails: v(F(a)) = {residual} is not greater than 2 v(det J) = {twice_det}")]
    PreconditionFailed { residual: String, twice_det: String },
    #[error("Jacobian determinant vanishes modulo p^K")]
    SingularJacobian,
    #[error("1 is an eigenvalue of the reduced multiplier; Newton lifting does not apply")]
    DegenerateMultiplier,
    #[error("Newton iteration did not reach the target precision in {0} steps")]
    NoConvergence(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
