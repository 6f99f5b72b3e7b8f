//! Mod-2 embeddability of join complexes and graphs into surfaces and
//! higher even-dimensional manifolds.
//!
//! The library decides whether a complex admits a mod-2 embedding into a
//! manifold with a prescribed intersection form, by searching for a symmetric
//! GF(2) matrix that is independent, additive and non-trivial, and realizing
//! it as a Gram matrix `Y^T Ω Y`. Supporting machinery: bit-packed GF(2)
//! linear algebra, combinatorial deleted products and their symmetric cycle
//! spaces, constructive cycle decompositions, and van Kampen numbers computed
//! from explicit straight-simplex drawings in exact rational arithmetic.

pub mod chains;
pub mod complexes;
pub mod conditions;
pub mod criterion;
pub mod delprod;
pub mod gf2;
pub mod gram;
pub mod search;
pub mod vankampen;

pub use gf2::{FormType, Gf2Matrix, Gf2Vector};

/// Library-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("chain is not a cycle")]
    NotCycle,
    #[error("set is not a rook cycle")]
    NotRookCycle,
    #[error("not realizable over the given form")]
    NotRealizable,
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("could not find a generic drawing after {0} attempts")]
    RetriesExhausted(u32),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
