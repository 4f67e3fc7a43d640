use alloc::string::String;

/// Errors raised by graph construction and the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("empty vertex set")]
    EmptySet,
    #[error("zero function")]
    ZeroFunction,
    #[error("signature group mismatch: expected {expected}, found {found}")]
    GroupMismatch { expected: String, found: String },
    #[error("operation requires {0}")]
    Unsupported(String),
    #[error("enumeration cap exceeded: {required} assignments > cap {cap}")]
    CapExceeded { required: f64, cap: u64 },
    #[error("eigensolver did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("decomposition failed after {retries} retries (mass fractions {best_min_fraction:.4} < {target:.4})")]
    DecomposeFailed {
        retries: usize,
        best_min_fraction: f64,
        target: f64,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
