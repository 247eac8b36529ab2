use thiserror::Error;

/// Errors raised by the algebraic kernels.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("extension is not CM: {0}")]
    NotCm(String),

    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),

    #[error("{0} is not a unit modulo {1}")]
    NonUnit(i64, u64),

    #[error("valuation of zero is undefined")]
    ZeroValuation,

    #[error("generators do not span a full-rank lattice (rank {rank} < {expected})")]
    RankDeficient { rank: usize, expected: usize },

    #[error("character values are not Galois-equivariant: coefficient at {element} is irrational")]
    NotEquivariant { element: String },

    #[error("places {0:?} lie in both S and T")]
    OverlappingPlaces(Vec<u64>),

    #[error("place {0} is ramified")]
    Ramified(u64),

    #[error("presentation has infinite cokernel")]
    InfiniteCokernel,

    #[error("presentation is not square ({rows} relations, {cols} generators)")]
    NotSquare { rows: usize, cols: usize },

    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    #[error("non-admissible local datum: {0}")]
    NonAdmissible(String),

    #[error("the value at {0} vanishes; the leading term is not supported")]
    VanishingValue(String),

    #[error("provider gap: {0}")]
    ProviderGap(String),

    #[error("fixture error: {0}")]
    Fixture(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
