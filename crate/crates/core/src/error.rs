use thiserror::Error;

/// Errors produced by the numerical kernels and pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument must be positive, got {0}")]
    NonPositiveArgument(f64),
    #[error("result overflows or underflows f64; use the log-scaled variant")]
    Overflow,
    #[error("elliptic modulus {0} outside [0, 1)")]
    ModulusOutOfRange(f64),
    #[error("amplitude {0} outside (-pi/2, pi/2)")]
    PhiOutOfRange(f64),
    #[error("connection identity check failed: relative defect {0:e}")]
    ConnectionCheckFailed(f64),

    #[error("jets have different base points ({0} vs {1}) or orders")]
    BasePointMismatch(f64, f64),
    #[error("division by a jet with zero constant term")]
    DivisionBySingularJet,
    #[error("elementary function is singular at the jet's constant term {0}")]
    SingularComposition(f64),
    #[error("derivative of an order-0 jet")]
    ZeroOrder,
    #[error("requested order {requested} exceeds the maximum {max}")]
    OrderTooHigh { requested: usize, max: usize },

    #[error("series evaluated at singular point {0}")]
    EvaluationAtSingularPoint(f64),

    #[error("seed point {x0} too small: q(x0) = {q} below threshold {threshold}")]
    SeedPointTooSmall { x0: f64, q: f64, threshold: f64 },
    #[error("step size underflow at x = {0}")]
    StepSizeUnderflow(f64),
    #[error("point {0} is not on the solution grid")]
    OffGrid(f64),
    #[error("quadrature failed to converge (estimate {estimate:e}, error {error:e})")]
    QuadratureFailure { estimate: f64, error: f64 },

    #[error("reference value lambda_ref = {0} is at (or numerically on) an eigenvalue")]
    ReferenceAtEigenvalue(f64),
    #[error("no sign change found for eigenvalue #{0}")]
    BracketNotFound(usize),
    #[error("not enough eigenvalues: {0}")]
    InsufficientEigenvalues(String),

    #[error("ill-conditioned fit: Gram condition number {0:e}")]
    IllConditionedFit(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
