use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;

/// Errors produced by the core engines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("minors oracle is limited to {limit}x{limit} matrices, got {rows}x{cols}")]
    DimensionGuard {
        rows: usize,
        cols: usize,
        limit: usize,
    },

    #[error("sublattice is not contained in the ambient lattice (column {column})")]
    NotContained { column: usize },

    #[error("invalid G-module: {0}")]
    InvalidModule(String),

    #[error("module is infinite; the Herbrand check needs a finite module")]
    InfiniteModule,

    /// A candidate divisor is not in the kernel of chi. `residue` is chi applied to it.
    #[error("candidate column {column} is not a unit divisor: chi(column) = {residue:?}")]
    NotUnitDivisor { column: usize, residue: Vec<BigInt> },

    #[error("boundary subgroup is inconsistent with the prime-cover dichotomy: {0}")]
    Dichotomy(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("search guard exceeded: {candidates} candidates > limit {limit}")]
    SearchGuard { candidates: u128, limit: u128 },

    #[error("operation cancelled")]
    Cancelled,

    /// An internal consistency check failed. Never caused by valid input.
    #[error("internal arithmetic check failed: {0}")]
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;
