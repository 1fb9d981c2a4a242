use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not an isometry of the given form")]
    NotAnIsometry,

    #[error("hyperbolic splitting stalled after {attempts} attempts; this signals a search limit of the single-hyperbolic fallback, not a mathematical impossibility")]
    SplitStalled { attempts: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("monodromies are not blockwise scalar +/-1; general simultaneous diagonalization is out of scope")]
    UnrecognizedBlockShape,

    #[error("sign pattern must have at least one line or a positive trivial rank")]
    EmptySignPattern,

    #[error("descriptor is not spin: {0}")]
    NotSpin(String),

    #[error("signature {0} cannot be realized by an even indefinite presentation p*H + q*E8(-1)")]
    IncompatibleSignature(i64),

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("{0}")]
    CheckFailed(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("spin lift reconstruction residual {0:e} exceeds tolerance")]
    LiftResidual(f64),

    #[error("loop lift endpoint is near neither (1,1) nor (-1,-1); increase the sample count")]
    LiftEndpoint,

    #[error("path sampling too coarse: consecutive step {0} exceeds the continuity bound")]
    StepBound(f64),

    #[error("search space of {candidates} candidates exceeds the cap {cap}")]
    SearchCap { candidates: u64, cap: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
