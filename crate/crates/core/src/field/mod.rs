//! Exact coefficient arithmetic over the Gaussian rationals `Q(i)` and exact
//! weight arithmetic in `Q^d`.

mod scalar;
mod weight;

pub use scalar::{parse_rational, Scalar};
pub use weight::{Spectrum, Weight};

pub(crate) use scalar::fmt_rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("malformed number `{0}`")]
    Malformed(String),
}
