use thiserror::Error;

/// Library-wide error type. Every fallible operation reports which
/// precondition or invariant failed by name.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("sublattice is not contained in the ambient lattice")]
    NotContained,

    #[error("entries must be weakly decreasing: {0}")]
    NotWeaklyDecreasing(String),

    #[error("invalid flag: {0}")]
    InvalidFlag(String),

    #[error("map is not filtration-compatible: {0}")]
    NotFiltered(String),

    #[error("map does not carry lattices into lattices (side {side})")]
    NotLatticeMorphism { side: u8 },

    #[error("sequence is not strict exact: {0}")]
    NotStrictExact(String),

    #[error("matrix is not block upper triangular for the given shape")]
    NotBlockTriangular,

    #[error("matrix is not unipotent: {0}")]
    NotUnipotent(String),

    #[error("invalid block shape: {0}")]
    InvalidShape(String),

    #[error("slope multiset violates integrality: slope {slope} has multiplicity {multiplicity}, need a multiple of {required}")]
    SlopeIntegrality {
        slope: String,
        multiplicity: usize,
        required: usize,
    },

    #[error("exterior power index {k} out of range 1..={n}")]
    ExteriorRange { k: usize, n: usize },

    #[error("unknown suite: {0}")]
    UnknownSuite(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("generator failed to produce a valid sample after {0} attempts")]
    GenerationFailed(u32),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
