use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point {0} is not in the open unit disk")]
    Domain(Complex64),
    #[error("branch cut hit at {0}")]
    Branch(Complex64),
    #[error("cannot parse symbol `{0}`")]
    Parse(String),
    #[error("not a self-map of the disk: {0}")]
    NotSelfMap(String),
    #[error("symbol does not fix the origin (|phi(0)| = {0:e})")]
    NotOriginFixing(f64),
    #[error("rho^M underflows for rho = {rho}, M = {degree}")]
    DegreeOverflow { rho: f64, degree: usize },
    #[error("two-radius check failed: discrepancy {discrepancy:e} above tolerance {tolerance:e}")]
    Aliasing { discrepancy: f64, tolerance: f64 },
    #[error("tail extrapolation inconclusive: {0}")]
    Extrapolation(String),
    #[error("matrix decomposition failed")]
    Decomposition,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("insufficient data: {0}")]
    Insufficient(String),
    #[error("degenerate least-squares fit")]
    DegenerateFit,
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("tail fit of M(t) does not decay (alpha = {0:.3})")]
    DivergentTail(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
