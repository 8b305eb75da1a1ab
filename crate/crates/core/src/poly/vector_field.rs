use num_traits::Zero;

use super::{linear_field, Monomial, PolyError, Series};
use crate::field::{Scalar, Spectrum, Weight};
use crate::linalg::{jordan_chevalley, nilpotency_index, ChevalleyPair, ExactMatrix};

/// A formal vector field `f = B_s·x + g` vanishing at the origin, together
/// with its linear data.
///
/// Concrete fields carry exact components and the Jordan–Chevalley pair of
/// their linearization. Symbolic fields carry a diagonal semisimple part
/// given only by weights and the perturbation `g`; their full components
/// exist only when the weight basis has an embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    nvars: usize,
    components: Option<Vec<Series>>,
    perturbation: Vec<Series>,
    linear: Option<ExactMatrix>,
    chevalley: Option<ChevalleyPair>,
    nilpotent: ExactMatrix,
    spectrum: Spectrum,
    diagonal: bool,
}

fn check_components(components: &[Series]) -> Result<usize, PolyError> {
    let n = components.len();
    for (index, c) in components.iter().enumerate() {
        if c.nvars() != n {
            return Err(PolyError::VariableMismatch {
                expected: n,
                found: c.nvars(),
            });
        }
        if !c.constant_term().is_zero() {
            return Err(PolyError::NonzeroConstantTerm { index });
        }
    }
    Ok(n)
}

fn linear_part(components: &[Series]) -> ExactMatrix {
    let n = components.len();
    let mut b = ExactMatrix::zeros(n, n);
    for (i, c) in components.iter().enumerate() {
        for j in 0..n {
            b.set(i, j, c.coeff(&Monomial::var(n, j)));
        }
    }
    b
}

impl VectorField {
    /// A concrete field; the linear part must have its spectrum in `Q(i)`.
    pub fn new(components: Vec<Series>) -> Result<Self, PolyError> {
        let n = check_components(&components)?;
        let b = linear_part(&components);
        let pair = jordan_chevalley(&b)?;
        let diagonal = pair.semisimple.is_diagonal();
        let spectrum = Spectrum::concrete(&pair.eigenvalues);
        let bs_field = linear_field(&pair.semisimple);
        let perturbation = components
            .iter()
            .zip(&bs_field)
            .map(|(c, l)| c - l)
            .collect();
        Ok(VectorField {
            nvars: n,
            components: Some(components),
            perturbation,
            linear: Some(b),
            nilpotent: pair.nilpotent.clone(),
            chevalley: Some(pair),
            spectrum,
            diagonal,
        })
    }

    /// `f = diag(λ)·x + g` with `λ` given as weights.
    ///
    /// The linear part of `g` must be nilpotent and commute with `diag(λ)`.
    pub fn symbolic(spectrum: Spectrum, perturbation: Vec<Series>) -> Result<Self, PolyError> {
        let n = check_components(&perturbation)?;
        if spectrum.len() != n {
            return Err(PolyError::LengthMismatch {
                expected: n,
                found: spectrum.len(),
            });
        }
        let nil = linear_part(&perturbation);
        let lambda = spectrum.eigenvalues();
        for i in 0..n {
            for j in 0..n {
                if !nil.get(i, j).is_zero() && lambda[i] != lambda[j] {
                    return Err(PolyError::InvalidLinearPart(format!(
                        "entry ({}, {}) of the linear perturbation does not commute with the semisimple part",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        if nilpotency_index(&nil).is_none() {
            return Err(PolyError::InvalidLinearPart(
                "linear part of the perturbation is not nilpotent".into(),
            ));
        }
        let components = spectrum.values().map(|values| {
            let bs = linear_field(&ExactMatrix::diagonal(&values));
            bs.iter().zip(&perturbation).map(|(l, g)| l + g).collect()
        });
        let linear = components.as_ref().map(|c: &Vec<Series>| linear_part(c));
        Ok(VectorField {
            nvars: n,
            components,
            perturbation,
            linear,
            chevalley: None,
            nilpotent: nil,
            spectrum,
            diagonal: true,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Full components of `f`.
    pub fn components(&self) -> Result<&[Series], PolyError> {
        self.components.as_deref().ok_or(PolyError::NoEmbedding)
    }

    /// `g = f − B_s·x`.
    pub fn perturbation(&self) -> &[Series] {
        &self.perturbation
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// Eigenvalues of `B_s` as weights, in the order of the diagonalizing basis.
    pub fn eigenvalues(&self) -> &[Weight] {
        self.spectrum.eigenvalues()
    }

    pub fn is_symbolic(&self) -> bool {
        self.chevalley.is_none()
    }

    /// Whether `B_s` is diagonal in the current coordinates, so that weights
    /// describe `L_{B_s}` directly.
    pub fn has_diagonal_semisimple(&self) -> bool {
        self.diagonal
    }

    /// The linearization `B`, when concrete.
    pub fn linear_part(&self) -> Option<&ExactMatrix> {
        self.linear.as_ref()
    }

    pub fn chevalley(&self) -> Option<&ChevalleyPair> {
        self.chevalley.as_ref()
    }

    /// `B_s` as a concrete matrix.
    pub fn semisimple(&self) -> Result<ExactMatrix, PolyError> {
        match &self.chevalley {
            Some(pair) => Ok(pair.semisimple.clone()),
            None => {
                let values = self.spectrum.values().ok_or(PolyError::NoEmbedding)?;
                Ok(ExactMatrix::diagonal(&values))
            }
        }
    }

    pub fn nilpotent(&self) -> &ExactMatrix {
        &self.nilpotent
    }

    /// Nilpotency index of `B_n`.
    pub fn nilpotent_index(&self) -> u32 {
        nilpotency_index(&self.nilpotent).expect("B_n is nilpotent by construction")
    }

    /// The linear field `B_s·x`.
    pub fn semisimple_field(&self) -> Result<Vec<Series>, PolyError> {
        Ok(linear_field(&self.semisimple()?))
    }

    /// Same field with every component truncated at `order`.
    pub fn truncated(&self, order: u32) -> VectorField {
        let cut = |v: &[Series]| v.iter().map(|s| s.truncated(order)).collect::<Vec<_>>();
        VectorField {
            components: self.components.as_deref().map(cut),
            perturbation: cut(&self.perturbation),
            ..self.clone()
        }
    }

    /// Eigenvalues as concrete scalars, when the weight basis is embedded.
    pub fn eigenvalue_values(&self) -> Option<Vec<Scalar>> {
        self.spectrum.values()
    }
}
