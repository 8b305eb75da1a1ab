//! Weights of monomials with respect to a diagonal semisimple part and the
//! splitting of a series into weight-homogeneous components.

use std::collections::BTreeMap;

use super::{Monomial, PolyError, Series};
use crate::field::{Spectrum, Weight};

/// `w(x^α) = Σ α_j λ_j`.
pub fn weight(m: &Monomial, eigenvalues: &[Weight]) -> Result<Weight, PolyError> {
    if m.nvars() != eigenvalues.len() {
        return Err(PolyError::LengthMismatch {
            expected: m.nvars(),
            found: eigenvalues.len(),
        });
    }
    let dim = eigenvalues.first().map_or(0, Weight::dim);
    let mut acc = Weight::zero(dim);
    for (&a, lam) in m.exponents().iter().zip(eigenvalues) {
        if lam.dim() != dim {
            return Err(PolyError::LengthMismatch {
                expected: dim,
                found: lam.dim(),
            });
        }
        if a > 0 {
            acc = &acc + &lam.scale_int(u64::from(a));
        }
    }
    Ok(acc)
}

/// A series split by weight: `φ = Σ_v φ_v` with every `φ_v` weight-homogeneous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDecomposition {
    components: BTreeMap<Weight, Series>,
}

impl WeightDecomposition {
    pub fn components(&self) -> &BTreeMap<Weight, Series> {
        &self.components
    }

    pub fn into_components(self) -> BTreeMap<Weight, Series> {
        self.components
    }

    /// The distinct weights `W(φ)` in ascending order.
    pub fn weights(&self) -> Vec<Weight> {
        self.components.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn get(&self, w: &Weight) -> Option<&Series> {
        self.components.get(w)
    }

    /// Sum of all components.
    pub fn recombine(&self, nvars: usize) -> Series {
        self.components
            .values()
            .fold(Series::zero(nvars), |acc, s| &acc + s)
    }
}

pub fn weight_decompose(phi: &Series, eigenvalues: &[Weight]) -> Result<WeightDecomposition, PolyError> {
    let mut components: BTreeMap<Weight, Series> = BTreeMap::new();
    for (m, c) in phi.terms() {
        let w = weight(m, eigenvalues)?;
        components
            .entry(w)
            .or_insert_with(|| match phi.trunc_order() {
                Some(n) => Series::zero_truncated(phi.nvars(), n),
                None => Series::zero(phi.nvars()),
            })
            .add_term(m.clone(), c.clone());
    }
    Ok(WeightDecomposition { components })
}

pub fn is_weight_homogeneous(phi: &Series, eigenvalues: &[Weight]) -> Result<bool, PolyError> {
    Ok(weight_decompose(phi, eigenvalues)?.len() <= 1)
}

/// `L_{B_s}(φ)` for diagonal `B_s`, computed as `Σ w(α)·c_α x^α`.
///
/// Requires concrete values for the weight basis.
pub fn semisimple_lie_derivative(spectrum: &Spectrum, phi: &Series) -> Result<Series, PolyError> {
    let basis = spectrum.embedding().ok_or(PolyError::NoEmbedding)?;
    let mut out = phi.filter_terms(|_| false);
    for (m, c) in phi.terms() {
        let value = weight(m, spectrum.eigenvalues())?.embed(basis)?;
        out.add_term(m.clone(), c * &value);
    }
    Ok(out)
}
