use thiserror::Error;

/// Errors raised by the Fock-space engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mode list is empty")]
    EmptyModeList,
    #[error("{roles} roles but {cutoffs} cutoffs")]
    LengthMismatch { roles: usize, cutoffs: usize },
    #[error("more than one mode carries the pump role")]
    DuplicatePumpRole,
    #[error("no mode carries the pump role")]
    MissingPumpRole,
    #[error("cutoff of mode {mode} must be at least 1")]
    ZeroCutoff { mode: usize },
    #[error("basis dimension {dim} exceeds budget {budget}")]
    DimensionBudgetExceeded { dim: usize, budget: usize },
    #[error("mode index {mode} out of range for a {modes}-mode space")]
    InvalidModeIndex { mode: usize, modes: usize },
    #[error("operands live on different mode spaces")]
    SpaceMismatch,
    #[error("amplitude vector has length {got}, space dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("state norm squared {norm_sq} deviates from 1")]
    NotNormalized { norm_sq: f64 },
    #[error("coherent pump truncated with leakage {leakage:e} above threshold {threshold:e}")]
    InsufficientCutoff { leakage: f64, threshold: f64 },
    #[error("variance requested for an operator not flagged hermitian")]
    NonHermitianVariance,
    #[error("operator deviates from its adjoint by {deviation:e}")]
    NotHermitian { deviation: f64 },
    #[error("variance {value:e} is negative beyond rounding")]
    NegativeVariance { value: f64 },
    #[error("mode roles {found:?} do not match the {process} layout")]
    RoleMismatch { process: &'static str, found: Vec<crate::fock::ModeRole> },
    #[error("evolution generator is not hermitian")]
    NonHermitianGenerator,
    #[error("leakage {leakage:e} exceeds threshold {threshold:e}; raise the cutoffs")]
    LeakageExceeded { leakage: f64, threshold: f64 },
    #[error("evolution needs {needed} steps, limit is {limit}")]
    StepLimitExceeded { needed: usize, limit: usize },
    #[error("norm drift {drift:e} exceeds accuracy target {target:e}")]
    AccuracyNotMet { drift: f64, target: f64 },
    #[error("negative time {0}")]
    NegativeTime(f64),
    #[error("expansion order {0} exceeds the supported maximum of 4")]
    OrderTooHigh(usize),
    #[error("negative mean photon number {0}")]
    NegativeMeanPhoton(f64),
    #[error("imaginary residue {residue:e} in <{quantity}>")]
    ImaginaryResidue { quantity: &'static str, residue: f64 },
    #[error("compared results come from different process specs")]
    SpecMismatch,
    #[error("slope fit needs at least 3 points, got {0}")]
    InsufficientPoints(usize),
    #[error("error value {0:e} is below the numerical floor")]
    ErrorBelowFloor(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
