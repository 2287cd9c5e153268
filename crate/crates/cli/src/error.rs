use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CliError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("line {line}: component f{component} is not homogeneous")]
    NotHomogeneous { component: usize, line: usize },
    #[error("line {line}: component f{component} has degree {found}, expected {expected}")]
    DegreeMismatch { component: usize, line: usize, found: u32, expected: u32 },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Math(#[from] goodred::Error),
}

impl CliError {
    /// 1 for a mathematical negative, 3 for a violated theorem, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        use goodred::Error as E;
        match self {
            CliError::Math(e) => match e {
                E::TheoremViolation(_) | E::DivisibilityViolation { .. } => 3,
                E::NotPeriodic(_)
                | E::NotPeriodicModP { .. }
                | E::NotFixedModP
                | E::BadReductionPrime(_)
                | E::SearchBudgetExceeded { .. }
                | E::BaseLocusHit
                | E::DegenerateMultiplier
                | E::SingularJacobian
                | E::SingularMatrix
                | E::PreconditionFailed { .. }
                | E::NoConvergence(_)
                | E::PrecisionExhausted(_)
                | E::InconsistentReductions
                | E::NotIntegralInvertible(_)
                | E::NonUnitDenominator(_)
                | E::NotAUnit
                | E::ZeroElement => 1,
                _ => 2,
            },
            _ => 2,
        }
    }
}
