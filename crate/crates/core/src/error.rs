use thiserror::Error;

use crate::hyperbolic::LengthSpectrum;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function} has a pole at {at}")]
    Pole { function: &'static str, at: String },

    /// G(z) vanishes at z = 0, -1, -2, ...; its logarithm does not exist there.
    #[error("Barnes G vanishes at the nonpositive integer {0}")]
    ZeroOfBarnesG(i64),

    #[error("{function}: argument outside the covered domain ({detail})")]
    Domain { function: &'static str, detail: String },

    #[error("invalid eigenvalue sequence: {0}")]
    InvalidSequence(String),

    #[error("tail multiplicities differ: {0} vs {1}")]
    MultiplicityMismatch(u32, u32),

    #[error("element is not hyperbolic (|trace| = {trace})")]
    NotHyperbolic { trace: f64 },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("group presentation rejected: {0}")]
    NotConvexCocompact(String),

    #[error("enumeration budget of {budget} words exhausted; partial spectrum complete up to {}", partial.complete_up_to)]
    EnumerationBudget { budget: usize, partial: Box<LengthSpectrum> },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("Re(lambda) = {re} is not above the convergence abscissa {abscissa}")]
    ConvergenceRegion { re: f64, abscissa: f64 },

    #[error("spectrum entry of length {0} carries no reflection count")]
    MissingReflections(f64),

    #[error("spectrum is not cyclic: {0}")]
    NotCyclic(String),

    #[error("Euler characteristic {chi} not admissible: {detail}")]
    Topology { chi: i64, detail: String },

    #[error("chi < 0 needs the limit of (2 pi lambda)^(chi-1) R(lambda) at 0 supplied by the caller")]
    UnsupportedContinuation,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("truncation too coarse: {0}")]
    Truncation(String),

    #[error("fit failed: {0}")]
    Fit(String),
}
