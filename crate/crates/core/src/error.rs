use thiserror::Error;

use crate::format::ParseError;
use crate::tower::TowerDefect;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("compound order {k} out of range for a {rows}x{cols} matrix")]
    OrderOutOfRange { k: usize, rows: usize, cols: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid tower: {}", crate::tower::describe_defects(.0))]
    InvalidTower(Vec<TowerDefect>),
    #[error("cannot push a stage {from} element back to stage {to}")]
    StageBackwards { from: usize, to: usize },
    #[error("the zero element has no characteristic")]
    ZeroElement,
    #[error("expected a rank {expected} group, got rank {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime factor {0} does not fit in 64 bits")]
    PrimeTooLarge(String),
    #[error("witness map is singular")]
    SingularWitness,
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("missing configuration: {0}")]
    MissingConfiguration(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
