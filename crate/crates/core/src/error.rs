use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("residue {value} out of range for modulus {modulus}")]
    ResidueOutOfRange { value: usize, modulus: usize },

    #[error("modulus must be at least 1")]
    ZeroModulus,

    #[error("modulus mismatch: expected {expected}, got {found}")]
    ModulusMismatch { expected: usize, found: usize },

    #[error("iterated sumset needs at least one summand")]
    ZeroSummands,

    #[error("invalid search parameters: {0}")]
    InvalidSearch(String),

    #[error("vertex {vertex} out of range for digraph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("domination query on an empty vertex set")]
    EmptyVertexSet,

    #[error("subset size {size} exceeds the {available} available vertices")]
    SubsetTooLarge { size: usize, available: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("minimum out-degree is zero at vertices {0:?}")]
    ZeroOutDegree(Vec<usize>),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid mixed strategy: {0}")]
    InvalidStrategy(String),

    #[error("negative epsilon")]
    NegativeEpsilon,

    #[error("not a construction input: {0}")]
    InvalidWitness(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("certificate schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
