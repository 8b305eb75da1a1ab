use super::roots::{characteristic_polynomial, gaussian_rational_roots};
use super::{ExactMatrix, LinalgError};
use crate::field::Scalar;

/// Jordan–Chevalley decomposition `B = B_s + B_n` together with a basis that
/// diagonalizes the semisimple part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChevalleyPair {
    pub semisimple: ExactMatrix,
    pub nilpotent: ExactMatrix,
    /// Eigenvalues with multiplicity, in the column order of `diagonalizer`.
    pub eigenvalues: Vec<Scalar>,
    /// `P` with `P⁻¹·B_s·P = diag(eigenvalues)`.
    pub diagonalizer: ExactMatrix,
    pub diagonalizer_inverse: ExactMatrix,
}

/// Decomposes `B` whose characteristic polynomial splits over `Q(i)`.
///
/// The semisimple part acts as `μ` on each generalized eigenspace
/// `ker (B − μI)^k`; stacking bases of those spaces gives the diagonalizer.
pub fn jordan_chevalley(b: &ExactMatrix) -> Result<ChevalleyPair, LinalgError> {
    if !b.is_square() {
        return Err(LinalgError::NotSquare {
            rows: b.rows(),
            cols: b.cols(),
        });
    }
    let n = b.rows();
    if b.is_diagonal() {
        return Ok(ChevalleyPair {
            semisimple: b.clone(),
            nilpotent: ExactMatrix::zeros(n, n),
            eigenvalues: b.diagonal_entries(),
            diagonalizer: ExactMatrix::identity(n),
            diagonalizer_inverse: ExactMatrix::identity(n),
        });
    }
    let chi = characteristic_polynomial(b);
    let (roots, rest) = gaussian_rational_roots(&chi);
    if rest.degree().unwrap_or(0) > 0 {
        return Err(LinalgError::UnsupportedSpectrum {
            residual_degree: rest.degree().unwrap_or(0),
        });
    }

    // (free-variable index, eigenvalue, basis vector)
    let mut columns: Vec<(usize, Scalar, Vec<Scalar>)> = Vec::with_capacity(n);
    for (mu, mult) in &roots {
        let shifted = b - &ExactMatrix::identity(n).scale(mu);
        let kernel = shifted.pow(*mult as u32).nullspace();
        if kernel.len() != *mult {
            return Err(LinalgError::UnsupportedSpectrum { residual_degree: 0 });
        }
        columns.extend(kernel.into_iter().map(|(free, v)| (free, mu.clone(), v)));
    }
    // keeps already-triangular inputs close to the identity basis
    columns.sort_by_key(|(free, _, _)| *free);

    let vectors: Vec<Vec<Scalar>> = columns.iter().map(|(_, _, v)| v.clone()).collect();
    let eigenvalues: Vec<Scalar> = columns.iter().map(|(_, mu, _)| mu.clone()).collect();
    let p = ExactMatrix::from_columns(&vectors);
    let p_inv = p.inverse()?;
    let semisimple = &(&p * &ExactMatrix::diagonal(&eigenvalues)) * &p_inv;
    let nilpotent = b - &semisimple;

    if semisimple.is_diagonal() {
        return Ok(ChevalleyPair {
            eigenvalues: semisimple.diagonal_entries(),
            semisimple,
            nilpotent,
            diagonalizer: ExactMatrix::identity(n),
            diagonalizer_inverse: ExactMatrix::identity(n),
        });
    }
    Ok(ChevalleyPair {
        semisimple,
        nilpotent,
        eigenvalues,
        diagonalizer: p,
        diagonalizer_inverse: p_inv,
    })
}

/// Smallest `s` with `N^s = 0`, or `None` if `N` is not nilpotent.
pub fn nilpotency_index(nil: &ExactMatrix) -> Option<u32> {
    let n = nil.rows() as u32;
    let mut power = ExactMatrix::identity(nil.rows());
    for s in 0..=n {
        if power.is_zero() {
            return Some(s);
        }
        power = &power * nil;
    }
    None
}
