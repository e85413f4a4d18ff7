use thiserror::Error;

/// Errors from special functions and quadrature.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MathError {
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },
    #[error("quadrature did not converge: estimate {value:e} with error {error:e} after {subdivisions} subdivisions")]
    NoConvergence {
        value: f64,
        error: f64,
        subdivisions: usize,
    },
}

impl MathError {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        MathError::Domain {
            func,
            detail: detail.into(),
        }
    }
}

/// Errors from basis construction and input parsing.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BasisError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: invalid basis function: {message}")]
    Invalid { line: usize, message: String },
    #[error("invalid basis function: {0}")]
    Quantum(String),
    #[error("molecule has no basis functions")]
    EmptyBasis,
    #[error("molecule has no centers")]
    NoCenters,
    #[error(transparent)]
    Math(#[from] MathError),
}

/// Errors from integral engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegralError {
    #[error("unsupported basis kind for this integral: {0}")]
    UnsupportedKind(String),
    #[error("wrong route: {0}")]
    WrongRoute(String),
    #[error("unsupported angular momentum: {0}")]
    Unsupported(String),
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error("quadrature for term {term} is not stable: {coarse:e} vs {fine:e}")]
    UnstableTerm { term: usize, coarse: f64, fine: f64 },
    #[error(transparent)]
    Math(#[from] MathError),
}

/// Errors from the SCF driver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScfError {
    #[error("odd electron count {0}; closed-shell RHF needs an even number")]
    OddElectrons(i64),
    #[error("overlap matrix is near singular: smallest eigenvalue {0:e}")]
    Conditioning(f64),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Integral(#[from] IntegralError),
}
