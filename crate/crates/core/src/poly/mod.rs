//! Sparse truncated power series, Lie calculus on formal vector fields and
//! weight decomposition with respect to a diagonal semisimple part.

mod lie;
mod monomial;
mod series;
mod vector_field;
mod weights;

pub use lie::{lie_bracket, lie_derivative, lie_derivative_iter, linear_field};
pub use monomial::{Monomial, TermOrder};
pub use series::Series;
pub use vector_field::VectorField;
pub use weights::{
    is_weight_homogeneous, semisimple_lie_derivative, weight, weight_decompose, WeightDecomposition,
};

use crate::field::FieldError;
use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("series live in {found} variables, expected {expected}")]
    VariableMismatch { expected: usize, found: usize },
    #[error("expected {expected} components, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("component {index} of the substitution has a nonzero constant term")]
    NonzeroConstantTerm { index: usize },
    #[error("degree {degree} is not determined modulo <x>^{order}")]
    BeyondTruncation { degree: u32, order: u32 },
    #[error("the weight basis has no concrete embedding")]
    NoEmbedding,
    #[error("invalid linear part: {0}")]
    InvalidLinearPart(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
