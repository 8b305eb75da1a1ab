//! Poincaré–Dulac normalization at a truncation order, PDNF checks and the
//! nilpotency index of `L_g` for the perturbation `g = f − B_s·x`.

use num_traits::Zero;
use serde::Serialize;

use crate::field::{Scalar, Weight};
use crate::linalg::ExactMatrix;
use crate::poly::{
    lie_bracket, lie_derivative, linear_field, weight, Monomial, PolyError, Series, VectorField,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NormalFormError {
    #[error("field is not in Poincaré–Dulac normal form modulo <x>^{order}")]
    NotPdnf { residual: Vec<Series>, order: u32 },
    #[error("L_g iteration did not terminate within the bound {bound}")]
    BoundExceeded { bound: u64 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `x^α` in component `i` is resonant when `w(α) = λ_i`.
pub fn is_resonant(alpha: &Monomial, i: usize, eigenvalues: &[Weight]) -> Result<bool, PolyError> {
    let lambda = eigenvalues.get(i).ok_or(PolyError::LengthMismatch {
        expected: eigenvalues.len(),
        found: i + 1,
    })?;
    Ok(weight(alpha, eigenvalues)?.weight_eq(lambda)?)
}

/// Outcome of a PDNF check at order `N`: `[f, B_s·x]` modulo `⟨x⟩^{N+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdnfCheck {
    pub pdnf: bool,
    pub residual: Vec<Series>,
    pub trunc_order: u32,
}

/// Checks `[f, B_s·x] ≡ 0 mod ⟨x⟩^{N+1}`.
///
/// Symbolic fields without an embedding report the non-resonant terms of the
/// perturbation as residual; these vanish exactly when the bracket does.
pub fn is_pdnf(f: &VectorField, n: u32) -> Result<PdnfCheck, PolyError> {
    let order = n + 1;
    let residual: Vec<Series> = match f.components() {
        Ok(components) => {
            let cut: Vec<Series> = components.iter().map(|c| c.truncated(order)).collect();
            lie_bracket(&cut, &f.semisimple_field()?)?
                .into_iter()
                .map(|r| r.truncated(order))
                .collect()
        }
        Err(PolyError::NoEmbedding) => {
            let lambda = f.eigenvalues();
            let mut out = Vec::with_capacity(f.nvars());
            for (i, g) in f.perturbation().iter().enumerate() {
                let mut r = Series::zero_truncated(f.nvars(), order);
                for (m, c) in g.truncated(order).terms() {
                    if !is_resonant(m, i, lambda)? {
                        r.add_term(m.clone(), c.clone());
                    }
                }
                out.push(r);
            }
            out
        }
        Err(e) => return Err(e),
    };
    Ok(PdnfCheck {
        pdnf: residual.iter().all(Series::is_zero),
        residual,
        trunc_order: n,
    })
}

/// Provenance recorded with every normalization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalFormMetadata {
    /// The homological equation is solved on the non-resonant eigenspaces
    /// only; resonant terms are kept as they are.
    pub representative: &'static str,
    /// Number of nonzero terms of the generating maps `h_j`.
    pub generator_terms: usize,
    /// Whether a linear change of coordinates was needed to diagonalize `B_s`.
    pub diagonalized: bool,
}

/// A near-identity transformation `y = H(z)` conjugating `f̃` to a field in
/// PDNF, where `f̃(y) = P⁻¹·f(P·y)` is `f` in a basis diagonalizing `B_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormResult {
    /// `f*`, expressed in the diagonalizing basis.
    pub normalized: VectorField,
    /// `H`, with identity linear part and no constant term.
    pub transformation: Vec<Series>,
    /// `P`; the identity when `B_s` is already diagonal.
    pub linear_change: ExactMatrix,
    pub linear_change_inverse: ExactMatrix,
    /// `f̃`, truncated at `N + 1`.
    pub diagonal_input: Vec<Series>,
    pub trunc_order: u32,
    pub metadata: NormalFormMetadata,
}

fn substitute_linear(components: &[Series], p: &ExactMatrix, p_inv: &ExactMatrix) -> Result<Vec<Series>, PolyError> {
    let sub = linear_field(p);
    let composed = components
        .iter()
        .map(|c| c.compose(&sub))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(p_inv.mul_series(&composed)?)
}

impl NormalFormResult {
    /// `DH·f* − f̃∘H` modulo `⟨x⟩^{N+1}`; zero for a correct result.
    pub fn conjugacy_residual(&self) -> Result<Vec<Series>, PolyError> {
        conjugacy_residual(
            &self.diagonal_input,
            self.normalized.components()?,
            &self.transformation,
            self.trunc_order + 1,
        )
    }

    /// `(f*, H)` mapped back to the original coordinates: the pair
    /// `(P·f*(P⁻¹·u), P·H(P⁻¹·u))`, which conjugates `f` itself.
    pub fn in_original_basis(&self) -> Result<(Vec<Series>, Vec<Series>), PolyError> {
        if !self.metadata.diagonalized {
            return Ok((self.normalized.components()?.to_vec(), self.transformation.clone()));
        }
        let p = &self.linear_change;
        let p_inv = &self.linear_change_inverse;
        Ok((
            substitute_linear(self.normalized.components()?, p_inv, p)?,
            substitute_linear(&self.transformation, p_inv, p)?,
        ))
    }
}

/// `DH·g − f∘H` modulo `⟨x⟩^order`.
pub fn conjugacy_residual(
    f: &[Series],
    g: &[Series],
    h: &[Series],
    order: u32,
) -> Result<Vec<Series>, PolyError> {
    let g: Vec<Series> = g.iter().map(|c| c.truncated(order)).collect();
    h.iter()
        .zip(f)
        .map(|(hi, fi)| {
            let lhs = lie_derivative(&g, &hi.truncated(order))?;
            let rhs = fi.truncated(order).compose(h)?;
            Ok((&lhs - &rhs).truncated(order))
        })
        .collect()
}

/// `Nil(h) = Dh·Ñy − Ñ·h` on a homogeneous vector field `h`.
fn nil_action(nil: &ExactMatrix, nil_field: &[Series], h: &[Series]) -> Result<Vec<Series>, PolyError> {
    let transport = nil.mul_series(h)?;
    h.iter()
        .zip(&transport)
        .map(|(hi, ti)| Ok(&lie_derivative(nil_field, hi)? - ti))
        .collect()
}

/// Poincaré–Dulac normalization up to degree `N`.
///
/// For each degree `j = 2..=N` the degree-`j` part of the current field is
/// split into eigenspaces of `ad` of the diagonal part; on every eigenspace
/// with eigenvalue `μ ≠ 0` the homological equation is solved by the finite
/// series `μ⁻¹ Σ (−Nil/μ)^k`, and the field is transformed by `y + h_j`.
pub fn normalize(f: &VectorField, n: u32) -> Result<NormalFormResult, PolyError> {
    let order = n + 1;
    let nvars = f.nvars();
    let lambda = f.eigenvalue_values().ok_or(PolyError::NoEmbedding)?;
    let components: Vec<Series> = f.components()?.iter().map(|c| c.truncated(order)).collect();

    let diagonalized = !f.has_diagonal_semisimple();
    let (p, p_inv) = match f.chevalley() {
        Some(pair) if diagonalized => (pair.diagonalizer.clone(), pair.diagonalizer_inverse.clone()),
        _ => (ExactMatrix::identity(nvars), ExactMatrix::identity(nvars)),
    };
    let diagonal_input: Vec<Series> = if diagonalized {
        substitute_linear(&components, &p, &p_inv)?
            .into_iter()
            .map(|c| c.truncated(order))
            .collect()
    } else {
        components
    };
    let nil = &(&p_inv * f.nilpotent()) * &p;
    let nil_field = linear_field(&nil);

    let mut field = diagonal_input.clone();
    let mut transformation: Vec<Series> = (0..nvars).map(|i| Series::var(nvars, i).truncated(order)).collect();
    let mut generator_terms = 0;

    for j in 2..=n {
        // eigenspaces of ad_D on the degree-j part, keyed by μ = w(α) − λ_i
        let mut spaces: Vec<(Scalar, Vec<Series>)> = Vec::new();
        for (i, c) in field.iter().enumerate() {
            for (m, coeff) in c.terms() {
                if m.degree() != j {
                    continue;
                }
                let w: Scalar = m
                    .exponents()
                    .iter()
                    .zip(&lambda)
                    .map(|(&e, l)| l * &Scalar::from_int(e as i64))
                    .sum();
                let mu = &w - &lambda[i];
                if mu.is_zero() {
                    continue;
                }
                let idx = match spaces.iter().position(|(k, _)| k == &mu) {
                    Some(idx) => idx,
                    None => {
                        spaces.push((mu, vec![Series::zero(nvars); nvars]));
                        spaces.len() - 1
                    }
                };
                spaces[idx].1[i].add_term(m.clone(), coeff.clone());
            }
        }
        if spaces.is_empty() {
            continue;
        }

        let mut h = vec![Series::zero(nvars); nvars];
        for (mu, rhs) in spaces {
            let mu_inv = mu.inv().expect("μ is nonzero");
            let mut term: Vec<Series> = rhs.iter().map(|s| s.scale(&mu_inv)).collect();
            let neg_mu_inv = -&mu_inv;
            // Nil is nilpotent on the finite-dimensional degree-j space
            let cap = nvars * (j as usize) + 2;
            let mut steps = 0;
            while term.iter().any(|t| !t.is_zero()) {
                assert!(steps <= cap, "nilpotent correction failed to terminate");
                for (hi, ti) in h.iter_mut().zip(&term) {
                    *hi = &*hi + ti;
                }
                term = nil_action(&nil, &nil_field, &term)?
                    .iter()
                    .map(|s| s.scale(&neg_mu_inv))
                    .collect();
                steps += 1;
            }
        }
        generator_terms += h.iter().map(Series::len).sum::<usize>();

        let sub: Vec<Series> = h
            .iter()
            .enumerate()
            .map(|(i, hi)| (&Series::var(nvars, i) + hi).truncated(order))
            .collect();
        let shifted: Vec<Series> = field
            .iter()
            .map(|c| c.compose(&sub))
            .collect::<Result<_, _>>()?;
        // (I + Dh)·w = shifted, solved by fixed-point iteration
        let mut w = shifted.clone();
        loop {
            let next: Vec<Series> = shifted
                .iter()
                .zip(&h)
                .map(|(s, hi)| Ok((s - &lie_derivative(&w, hi)?).truncated(order)))
                .collect::<Result<_, PolyError>>()?;
            if next == w {
                break;
            }
            w = next;
        }
        field = w;
        transformation = transformation
            .iter()
            .map(|t| t.compose(&sub))
            .collect::<Result<_, _>>()?;
    }

    let normalized = if f.is_symbolic() {
        let bs = linear_field(&ExactMatrix::diagonal(&lambda));
        let g = field.iter().zip(&bs).map(|(c, l)| c - l).collect();
        VectorField::symbolic(f.spectrum().clone(), g)?
    } else {
        VectorField::new(field)?
    };
    Ok(NormalFormResult {
        normalized,
        transformation,
        linear_change: p,
        linear_change_inverse: p_inv,
        diagonal_input,
        trunc_order: n,
        metadata: NormalFormMetadata {
            representative: "zero projection onto the non-resonant complement",
            generator_terms,
            diagonalized,
        },
    })
}

/// Terms of degree `≥ 2` that are not resonant, as `(component, monomial)`.
pub fn nonresonant_terms(f: &VectorField) -> Result<Vec<(usize, Monomial)>, PolyError> {
    let mut out = Vec::new();
    for (i, g) in f.perturbation().iter().enumerate() {
        for (m, _) in g.terms() {
            if m.degree() >= 2 && !is_resonant(m, i, f.eigenvalues())? {
                out.push((i, m.clone()));
            }
        }
    }
    Ok(out)
}

/// `Σ_{k = mindeg(φ)}^{N−1} (k(s−1) + 1)` with `s` the nilpotency index of
/// `B_n`: on degree-`k` polynomials `L_{B_n}` vanishes after `k(s−1) + 1`
/// steps and the nonlinear part of `g` raises the degree.
pub fn lg_nilpotency_bound(f: &VectorField, phi: &Series, n: u32) -> u64 {
    let Some(low) = phi.truncated(n).min_degree() else {
        return 0;
    };
    let s = u64::from(f.nilpotent_index());
    (u64::from(low)..u64::from(n)).map(|k| k * (s.saturating_sub(1)) + 1).sum()
}

/// Smallest `ℓ` with `L_g^ℓ(φ) ≡ 0 mod ⟨x⟩^N`, where `g = f − B_s·x`.
pub fn lg_nilpotency_index(f: &VectorField, phi: &Series, n: u32) -> Result<u32, NormalFormError> {
    let check = is_pdnf(f, n.saturating_sub(1))?;
    if !check.pdnf {
        return Err(NormalFormError::NotPdnf {
            residual: check.residual,
            order: n,
        });
    }
    let g: Vec<Series> = f.perturbation().iter().map(|c| c.truncated(n)).collect();
    let bound = lg_nilpotency_bound(f, phi, n);
    let mut current = phi.truncated(n);
    let mut ell = 0u32;
    while !current.is_zero() {
        if u64::from(ell) >= bound {
            return Err(NormalFormError::BoundExceeded { bound });
        }
        current = lie_derivative(&g, &current)?.truncated(n);
        ell += 1;
    }
    Ok(ell)
}

/// The identity map truncated at `order`.
pub fn identity_map(nvars: usize, order: u32) -> Vec<Series> {
    (0..nvars).map(|i| Series::var(nvars, i).truncated(order)).collect()
}
