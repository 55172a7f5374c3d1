//! Bipartite entanglement measures and the irreversibility gap between
//! entanglement cost and PPT distillable entanglement.

pub mod cli;
pub mod measures;
pub mod qlinalg;
pub mod states;
pub mod thermo;

use thiserror::Error;

/// Crate-wide error type. The short slug at the start of each message is the
/// stable machine-readable code the CLI prints.
#[derive(Debug, Error)]
pub enum Error {
    #[error("bad-dims: {0}")]
    BadDims(String),

    #[error("not-hermitian: max deviation {0:.3e}")]
    NotHermitian(f64),

    #[error("not-a-state: {0}")]
    NotAState(String),

    #[error("not-normalized: |norm - 1| = {0:.3e}")]
    NotNormalized(f64),

    #[error("bad-parameter: {0}")]
    BadParameter(String),

    #[error("bad-rank: rank {rank} exceeds dimension {dim}")]
    BadRank { rank: usize, dim: usize },

    #[error("too-large: dimension {dim} exceeds the cap of {cap}")]
    TooLarge { dim: usize, cap: usize },

    #[error("ensemble-too-small: k = {k} is below rank {rank}")]
    EnsembleTooSmall { k: usize, rank: usize },

    #[error("not-mc: off-pattern entry at ({row},{col}) with modulus {modulus:.3e}")]
    NotMc { row: usize, col: usize, modulus: f64 },

    #[error("not-square-cut: dims ({da},{db}) need dA = dB")]
    NotSquareCut { da: usize, db: usize },

    #[error("parse-error: {0}")]
    Parse(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
