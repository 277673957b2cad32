use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |A - A^H| entry deviation {deviation:e} exceeds {tol:e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("trace is not one: |tr - 1| = {deviation:e} exceeds {tol:e}")]
    NotUnitTrace { deviation: f64, tol: f64 },

    #[error("matrix is not positive semidefinite: minimum eigenvalue {min_eigenvalue:e} below -{tol:e}")]
    NotPositive { min_eigenvalue: f64, tol: f64 },

    #[error("negative eigenvalue {0:e} in logarithm argument")]
    NegativeEigenvalue(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("measure {measure} cannot be evaluated on {state}")]
    IncompatibleMeasure { measure: String, state: String },

    #[error("epsilon {epsilon} outside the admissible interval (0, {max})")]
    EpsilonTooLarge { epsilon: f64, max: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
