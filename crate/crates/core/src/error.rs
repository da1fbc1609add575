use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("Jacobi eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("problem too large: {0}")]
    TooLarge(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("bad element count: {0}")]
    BadCount(String),

    #[error("argument outside domain: {0}")]
    DomainError(String),

    #[error("weighted set is not a 1-design (residual {0:.3e})")]
    NotOneDesign(f64),

    #[error("POVM element {0} is not rank 1")]
    NotRank1(usize),

    #[error("degenerate moments: second moment is zero")]
    DegenerateMoments,

    #[error("qubit compatibility criterion needs unbiased inputs (alpha = {0}, beta = {1})")]
    BiasedInput(f64, f64),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
