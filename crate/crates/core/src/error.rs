use thiserror::Error;

/// Errors raised by the state, measurement and correlation routines.
///
/// Numeric payloads are reported as `f64` regardless of the scalar type the
/// computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: expected {expected}, found {found}")]
    InvalidDimension { expected: &'static str, found: usize },

    #[error("matrix is not Hermitian (max |m - m†| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    Trace { trace: f64 },

    #[error("parameter {name} = {value} outside [{min}, {max}]")]
    ParameterRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("parameters do not describe a physical state: {0}")]
    UnphysicalState(Box<Error>),

    #[error("measurement outcome has vanishing probability {probability:e}")]
    DegenerateOutcome { probability: f64 },

    #[error("optimizer did not converge after {evaluations} evaluations (best value {best})")]
    NoConvergence { best: f64, evaluations: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
