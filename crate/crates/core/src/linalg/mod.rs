//! Exact linear algebra over `Q(i)`: elimination, Jordan–Chevalley
//! decomposition and the (confluent) Vandermonde systems used for extraction.

mod chevalley;
mod matrix;
pub mod roots;
mod vandermonde;

pub use chevalley::{jordan_chevalley, nilpotency_index, ChevalleyPair};
pub use matrix::ExactMatrix;
pub use vandermonde::{binomial, confluent_vandermonde_matrix, homogeneous_eigenvalues, vandermonde_matrix};

use crate::field::FieldError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is singular (rank {rank})")]
    Singular { rank: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("nodes {first} and {second} coincide")]
    RepeatedNode { first: usize, second: usize },
    #[error("a confluent system needs at least one block")]
    EmptySystem,
    #[error(
        "characteristic polynomial does not split over Q(i) (unresolved factor of degree {residual_degree}); \
         supply the eigenvalues in symbolic mode"
    )]
    UnsupportedSpectrum { residual_degree: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}
