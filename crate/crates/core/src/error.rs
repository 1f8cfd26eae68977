use std::fmt;

use thiserror::Error;

/// A single failed density-matrix invariant together with its measured size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityViolation {
    /// Largest |ρ_ij − conj(ρ_ji)|.
    NotHermitian { deviation: f64 },
    /// |Tr ρ − 1|.
    NotUnitTrace { deviation: f64 },
    /// Magnitude of the most negative eigenvalue.
    NotPositive { deviation: f64 },
}

impl fmt::Display for DensityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotHermitian { deviation } => write!(f, "not Hermitian (deviation {deviation:e})"),
            Self::NotUnitTrace { deviation } => write!(f, "trace differs from 1 by {deviation:e}"),
            Self::NotPositive { deviation } => {
                write!(f, "not positive (minimum eigenvalue -{deviation:e})")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid density matrix: {}", join(.0))]
    InvalidDensity(Vec<DensityViolation>),

    #[error("state is not normalized (|norm^2 - 1| = {deviation:e})")]
    NotNormalized { deviation: f64 },

    #[error("state is not pure (|Tr rho^2 - 1| = {deviation:e})")]
    NotPure { deviation: f64 },

    #[error("invalid probabilities: {0}")]
    InvalidProbabilities(String),

    #[error("eigenvalue {0:e} is below the negativity tolerance")]
    NegativeEigenvalue(f64),

    #[error("Kraus operators are incomplete (max |sum K^dag K - I| = {deviation:e})")]
    IncompleteKraus { deviation: f64 },

    #[error("matrix is not unitary (max |U^dag U - I| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("{count} Kraus operators exceed the dilation bound d^2 = {bound}")]
    TooManyKraus { count: usize, bound: usize },

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("factorization premise fails (fidelities {fidelity_phi}, {fidelity_psi})")]
    PremiseNotSatisfied { fidelity_phi: f64, fidelity_psi: f64 },

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn join(v: &[DensityViolation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
