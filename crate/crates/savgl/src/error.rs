use thiserror::Error;

/// Errors raised across the crate.
///
/// Validation failures (bad parameters, bad configuration) are separated from
/// numerical aborts during a run; see [`Error::is_runtime`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate parameters: {0}")]
    DegenerateParams(String),

    #[error("leading coefficient of the characteristic polynomial vanishes")]
    DegenerateLeadingCoefficient,

    #[error("identity discriminant is negative ({0:e})")]
    DiscriminantNegative(f64),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("closed-form bound not available for this case")]
    UnsupportedCase,

    #[error("grid must have an even positive size, got {0}")]
    InvalidGrid(usize),

    #[error("domain length must be positive and finite, got {0}")]
    InvalidLength(f64),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("coefficients are not conjugate symmetric (defect {defect:e}, scale {scale:e})")]
    NotConjugateSymmetric { defect: f64, scale: f64 },

    #[error("grid of size {0} is too large for the brute-force convolution (limit 16)")]
    GridTooLarge(usize),

    #[error("epsilon {0} is outside the admissible range for this model")]
    BadEpsilon(f64),

    #[error("energy shift {0} is not admissible")]
    BadShift(f64),

    #[error("SAV radicand E1 + C0 is not positive ({0:e})")]
    NonpositiveRadicand(f64),

    #[error("shifted energy is not positive ({0:e})")]
    NonpositiveShiftedEnergy(f64),

    #[error("linear solve is singular or ill-posed ({0})")]
    SingularSolve(String),

    #[error("state became non-finite at step {0}")]
    NonFiniteState(usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for numerical failures that can only appear while time stepping.
    pub fn is_runtime(&self) -> bool {
        matches!(
            self,
            Error::NonpositiveRadicand(_)
                | Error::NonpositiveShiftedEnergy(_)
                | Error::SingularSolve(_)
                | Error::NotConjugateSymmetric { .. }
                | Error::NonFiniteState(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
