//! Ideals modulo `⟨x⟩^N`: Gröbner bases, invariance under vector fields and
//! extraction of semi-invariant generators with exact certificates.

mod extract;
mod groebner;
mod ideal;
mod resonance;

pub use extract::{extract_semiinvariants, lf_extract_semiinvariants, Extraction, ExtractionCertificate};
pub use groebner::{leading_term, GroebnerBasis};
pub use ideal::{is_invariant, is_semiinvariant, IdealHandle, InvarianceCheck};
pub use resonance::{single_resonance_primes, SingleResonance};

use crate::linalg::LinalgError;
use crate::normalform::NormalFormError;
use crate::poly::{PolyError, Series};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IdealError {
    #[error("ideal is not invariant: the derivative of a generator reduces to a nonzero normal form")]
    NotInvariant { generator: Series, image: Series },
    #[error("element is not a member of the ideal")]
    NotMember { element: Series },
    #[error("field is not in Poincaré–Dulac normal form")]
    NotPdnf { residual: Vec<Series> },
    #[error("the semisimple part is not diagonal in these coordinates; normalize first")]
    NotDiagonal,
    #[error("the weight basis has no concrete embedding")]
    NoEmbedding,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("certificate check failed: {0}")]
    CertificateFailure(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl From<NormalFormError> for IdealError {
    fn from(e: NormalFormError) -> Self {
        match e {
            NormalFormError::NotPdnf { residual, .. } => IdealError::NotPdnf { residual },
            NormalFormError::BoundExceeded { bound } => {
                IdealError::CertificateFailure(format!("L_g iteration exceeded the bound {bound}"))
            }
            NormalFormError::Poly(p) => IdealError::Poly(p),
        }
    }
}
