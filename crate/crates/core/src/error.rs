use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} out of range for {n} particles")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("particle count {n} exceeds the supported maximum {max}")]
    TooManyParticles { n: usize, max: usize },

    #[error("particle counts differ: {left} vs {right}")]
    ParticleCountMismatch { left: usize, right: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("expression is neither symmetric nor antisymmetric under particle exchange")]
    NotSymmetric,

    #[error("expression is not divisible by the difference {family}_{i} - {family}_{j}")]
    NotDivisible { family: char, i: usize, j: usize },

    #[error("coincident coordinates x_{i} = x_{j} hit a denominator singularity")]
    Singular { i: usize, j: usize },

    #[error("coupling {0} must be a non-negative integer on the symbolic path")]
    NonIntegerCoupling(String),

    #[error("term budget exceeded: {terms} terms > {budget}")]
    BudgetExceeded { terms: usize, budget: usize },

    #[error("product leaves the expression ring: {0}")]
    OutsideRing(String),

    #[error("bessel evaluation did not converge: {0}")]
    NonConvergence(String),

    #[error("quadrature failure: {0}")]
    Quadrature(String),

    #[error("parse error: {0}")]
    Parse(String),
}
