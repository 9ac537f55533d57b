//! Crate-wide error type.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid group spec: {0}")]
    InvalidGroupSpec(String),
    #[error("group element does not match spec: {0}")]
    GroupMismatch(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("basis is not full column rank")]
    DegenerateBasis,
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(String),
    #[error("{0} and {1} are not coprime")]
    NotCoprime(String, String),
    #[error("sublattice has infinite index; pass a prefix bound to enumerate cosets")]
    InfiniteIndex,
    #[error("duplicate coset representatives: {0} and {1} lie in the same coset")]
    DuplicateCoset(String, String),
    #[error("table lookup miss at {0} and no default value")]
    TableMiss(String),
    #[error("no value supplied at pole {0}")]
    MissingPoleValue(String),
    #[error("precision cap exceeded while determining the floor at {0}")]
    PrecisionCap(String),
    #[error("function arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("set is not representable in the variant algebra: {0}")]
    NotRepresentable(String),
    #[error("search radius cannot be certified: {0}")]
    NotCertifiable(String),
    #[error("unknown catalog id: {0}")]
    UnknownCatalogId(String),
    #[error("finite group too large: order {0} exceeds the cap of {1}")]
    GroupTooLarge(u64, u64),
    #[error("scenario schema violation: {0}")]
    Schema(String),
    #[error("render error: {0}")]
    Render(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
