use thiserror::Error;

/// Errors raised by matrix, state, channel and measure operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix must be at least 1x1")]
    EmptyMatrix,

    #[error("entry count {found} does not form a square matrix")]
    NotSquare { found: usize },

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (distance to adjoint {distance:.3e})")]
    NotHermitian { distance: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPositive { eigenvalue: f64 },

    #[error("density matrix trace is {trace}, expected 1")]
    BadTrace { trace: f64 },

    #[error("exponent {0} outside [0, 1]")]
    BadExponent(f64),

    #[error("Bloch vector norm {norm} exceeds 1")]
    BlochOutOfBall { norm: f64 },

    #[error("invalid skew parameters alpha={alpha}, beta={beta}: {reason}")]
    InvalidParams {
        alpha: f64,
        beta: f64,
        reason: &'static str,
    },

    #[error("invalid probabilities: {0}")]
    InvalidProbabilities(String),

    #[error("channel parameter {name}={value} outside {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("channel has no Kraus operators")]
    EmptyChannel,

    #[error("channel is not trace-nonincreasing (largest eigenvalue of sum K^dag K is {0})")]
    TraceIncreasing(f64),

    #[error("operator {index} is not unitary (residual {residual:.3e})")]
    NotUnitary { index: usize, residual: f64 },

    #[error("remixing matrix is not an isometry (residual {residual:.3e})")]
    NotIsometry { residual: f64 },

    #[error("remixing matrix has {found} columns but the channel has {expected} Kraus operators")]
    RemixShape { expected: usize, found: usize },

    #[error("cannot factor dimension {dim} as {dim_a} x {dim_b}")]
    Factorization {
        dim: usize,
        dim_a: usize,
        dim_b: usize,
    },

    #[error("{quantity} has imaginary residue {imag:.3e}")]
    ComplexResidue { quantity: &'static str, imag: f64 },

    #[error("{quantity} evaluated to {value:.3e}, below the negativity tolerance")]
    NegativeMeasure { quantity: &'static str, value: f64 },

    #[error("operation requires a qubit (dimension 2), found dimension {0}")]
    NotQubit(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
