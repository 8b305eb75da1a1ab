//! Extraction of semi-invariant generators of `L_{B_s}`- and `L_f`-invariant
//! ideals through (confluent) Vandermonde systems.

use serde::Serialize;

use super::{is_invariant, IdealError, IdealHandle};
use crate::field::{Scalar, Spectrum, Weight};
use crate::linalg::{confluent_vandermonde_matrix, ExactMatrix};
use crate::normalform::{is_pdnf, lg_nilpotency_index};
use crate::poly::{lie_derivative, semisimple_lie_derivative, weight_decompose, PolyError, Series, VectorField};

/// The exact linear system behind one extracted generator set.
///
/// `matrix · solution = rhs`; the first `weights.len()` entries of `solution`
/// are the weight components of `source`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtractionCertificate {
    #[serde(skip)]
    pub source: Series,
    pub matrix: ExactMatrix,
    #[serde(skip)]
    pub rhs: Vec<Series>,
    #[serde(skip)]
    pub solution: Vec<Series>,
    pub weights: Vec<Weight>,
    pub nodes: Vec<Scalar>,
    pub blocks: usize,
    pub trunc_order: u32,
    pub determinant: Scalar,
}

impl ExtractionCertificate {
    /// Re-checks the certificate from scratch against `ideal`.
    pub fn verify(&self, ideal: &IdealHandle) -> Result<(), String> {
        let product = self
            .matrix
            .mul_series(&self.solution)
            .map_err(|e| e.to_string())?;
        if product.len() != self.rhs.len() {
            return Err("matrix and right-hand side sizes differ".into());
        }
        for (l, (lhs, rhs)) in product.iter().zip(&self.rhs).enumerate() {
            if lhs.truncated(self.trunc_order) != rhs.truncated(self.trunc_order) {
                return Err(format!("row {l} of matrix · solution differs from the right-hand side"));
            }
        }
        if let Some(l) = self.rhs.iter().position(|r| !ideal.member(r)) {
            return Err(format!("right-hand side entry {l} is not a member"));
        }
        if let Some(k) = self.solution[..self.weights.len()].iter().position(|s| !ideal.member(s)) {
            return Err(format!("extracted component {k} is not a member"));
        }
        let sum = self.solution[..self.weights.len()]
            .iter()
            .fold(Series::zero(self.source.nvars()), |acc, s| &acc + s);
        if sum.truncated(self.trunc_order) != self.source.truncated(self.trunc_order) {
            return Err("extracted components do not add up to the source".into());
        }
        Ok(())
    }
}

/// Extracted semi-invariant generators, monic and without repetitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extraction {
    pub generators: Vec<Series>,
    /// Weight of each generator.
    pub weights: Vec<Weight>,
    /// One certificate per source generator; empty in symbolic mode.
    pub certificates: Vec<ExtractionCertificate>,
    pub trunc_order: u32,
}

impl Extraction {
    fn new(trunc_order: u32) -> Self {
        Extraction {
            generators: Vec::new(),
            weights: Vec::new(),
            certificates: Vec::new(),
            trunc_order,
        }
    }

    fn push(&mut self, component: &Series, w: &Weight) {
        let g = component.monic();
        if !self.generators.contains(&g) {
            self.generators.push(g);
            self.weights.push(w.clone());
        }
    }
}

fn embedded_nodes(spectrum: &Spectrum, weights: &[Weight]) -> Result<Vec<Scalar>, IdealError> {
    weights
        .iter()
        .map(|w| spectrum.embed(w).ok_or(IdealError::NoEmbedding))
        .collect()
}

fn solve_certified(
    ideal: &IdealHandle,
    source: &Series,
    weights: Vec<Weight>,
    nodes: Vec<Scalar>,
    blocks: usize,
    rhs: Vec<Series>,
) -> Result<ExtractionCertificate, IdealError> {
    let n = ideal.trunc_order();
    let matrix = confluent_vandermonde_matrix(&nodes, blocks)?;
    let determinant = matrix.determinant()?;
    let solution: Vec<Series> = matrix.solve(&rhs)?.into_iter().map(|s| s.truncated(n)).collect();
    let cert = ExtractionCertificate {
        source: source.clone(),
        matrix,
        rhs,
        solution,
        weights,
        nodes,
        blocks,
        trunc_order: n,
        determinant,
    };
    cert.verify(ideal).map_err(IdealError::CertificateFailure)?;
    Ok(cert)
}

/// Splits the generators of an `L_{B_s}`-invariant ideal into weight
/// components, each verified to be a member.
///
/// With an embedded spectrum every split is certified by the Vandermonde
/// system `V·Φ = (L_{B_s}^ℓ φ)_ℓ`; without one, invariance is equivalent to
/// the membership of every weight component, which is checked directly.
pub fn extract_semiinvariants(ideal: &IdealHandle, spectrum: &Spectrum) -> Result<Extraction, IdealError> {
    let n = ideal.trunc_order();
    if spectrum.len() != ideal.nvars() {
        return Err(PolyError::LengthMismatch {
            expected: ideal.nvars(),
            found: spectrum.len(),
        }
        .into());
    }
    let concrete = spectrum.has_embedding();
    let mut out = Extraction::new(n);

    if concrete {
        for g in ideal.generators() {
            let image = semisimple_lie_derivative(spectrum, g)?.truncated(n);
            let r = ideal.normal_form(&image);
            if !r.is_zero() {
                return Err(IdealError::NotInvariant {
                    generator: g.clone(),
                    image: r,
                });
            }
        }
    }

    for g in ideal.generators() {
        let parts = weight_decompose(&g.truncated(n), spectrum.eigenvalues())?;
        if parts.is_empty() {
            continue;
        }
        if concrete {
            let weights = parts.weights();
            let nodes = embedded_nodes(spectrum, &weights)?;
            let mut rhs = vec![g.truncated(n)];
            for _ in 1..weights.len() {
                let next = semisimple_lie_derivative(spectrum, rhs.last().expect("nonempty"))?;
                rhs.push(next);
            }
            let cert = solve_certified(ideal, g, weights, nodes, 1, rhs)?;
            for (k, w) in cert.weights.iter().enumerate() {
                if cert.solution[k] != *parts.get(w).expect("weight present") {
                    return Err(IdealError::CertificateFailure(format!(
                        "solution entry {k} differs from the weight component"
                    )));
                }
            }
            out.certificates.push(cert);
        } else if let Some((_, c)) = parts.components().iter().find(|(_, c)| !ideal.member(c)) {
            return Err(IdealError::NotInvariant {
                generator: g.clone(),
                image: ideal.normal_form(c),
            });
        }
        for (w, c) in parts.components() {
            out.push(c, w);
        }
    }
    Ok(out)
}

/// Extraction for an `L_f`-invariant ideal of a field in PDNF.
///
/// For each generator `φ` with `m = ` index of `L_g` on `φ` and `q` distinct
/// weights, the `q·m` iterates `L_f^ℓ(φ)` are members and satisfy
/// `W·Φ = (L_f^ℓ φ)_ℓ` with `W` the confluent Vandermonde matrix; the first
/// block of `Φ` is the weight splitting of `φ`.
pub fn lf_extract_semiinvariants(ideal: &IdealHandle, f: &VectorField) -> Result<Extraction, IdealError> {
    let n = ideal.trunc_order();
    if !f.has_diagonal_semisimple() {
        return Err(IdealError::NotDiagonal);
    }
    let check = is_pdnf(f, n.saturating_sub(1))?;
    if !check.pdnf {
        return Err(IdealError::NotPdnf {
            residual: check.residual,
        });
    }
    let field: Vec<Series> = match f.components() {
        Ok(c) => c.iter().map(|s| s.truncated(n)).collect(),
        Err(PolyError::NoEmbedding) => return Err(IdealError::NoEmbedding),
        Err(e) => return Err(e.into()),
    };
    let inv = is_invariant(ideal, &field)?;
    if let Some((generator, image)) = inv.witness {
        return Err(IdealError::NotInvariant { generator, image });
    }

    let mut out = Extraction::new(n);
    for g in ideal.generators() {
        let phi = g.truncated(n);
        let m = lg_nilpotency_index(f, &phi, n)? as usize;
        if m == 0 {
            continue;
        }
        let parts = weight_decompose(&phi, f.eigenvalues())?;
        let weights = parts.weights();
        let nodes = embedded_nodes(f.spectrum(), &weights)?;
        let size = weights.len() * m;
        let mut rhs = vec![phi.clone()];
        while rhs.len() < size {
            let next = lie_derivative(&field, rhs.last().expect("nonempty"))?.truncated(n);
            rhs.push(next);
        }
        let cert = solve_certified(ideal, &phi, weights, nodes, m, rhs)?;
        for (k, w) in cert.weights.iter().enumerate() {
            if cert.solution[k] != *parts.get(w).expect("weight present") {
                return Err(IdealError::CertificateFailure(format!(
                    "solution entry {k} differs from the weight component"
                )));
            }
        }
        for (w, c) in parts.components() {
            out.push(c, w);
        }
        out.certificates.push(cert);
    }
    Ok(out)
}
