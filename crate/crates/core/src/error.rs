use thiserror::Error;

/// Failures while reading polynomials or JSON documents.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable x{index} at position {pos} exceeds dimension {dim}")]
    VariableOutOfRange { index: usize, dim: usize, pos: usize },
    #[error("negative exponent at position {pos}")]
    NegativeExponent { pos: usize },
    #[error("not a rational number: {0:?}")]
    NotRational(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid JSON: {0}")]
    Json(String),
}

/// Domain and precondition failures of the exact and numeric pipelines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("weight coordinates must be strictly positive")]
    NonPositiveWeight,
    #[error("support function is only finite on the nonpositive orthant")]
    PositiveDirection,
    #[error("scaling factor must be strictly positive")]
    NonPositiveScale,
    #[error("weight is not maximal: {0}")]
    WeightNotMaximal(String),
    #[error("empty polyhedron: {0}")]
    EmptyPolyhedron(&'static str),
    #[error("covolume is infinite (no vertex on axis {axis})")]
    InfiniteCovolume { axis: usize },
    #[error("expected {expected} polyhedra, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("component {component} is not a single monomial")]
    NotMonomial { component: usize },
    #[error("operation requires dimension {expected}, got {found}")]
    UnsupportedDimension { expected: usize, found: usize },
    #[error("coefficients are required for numeric evaluation")]
    MissingCoefficients,
    #[error("invalid sampling input: {0}")]
    InvalidSampling(String),
    #[error("every sampled value of f vanished")]
    DegenerateSample,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
