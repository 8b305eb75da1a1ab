use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ExactMatrix, LinalgError};
use crate::field::{Scalar, Weight};
use crate::poly::{weight, Monomial};

fn check_distinct(nodes: &[Scalar]) -> Result<(), LinalgError> {
    for (j, b) in nodes.iter().enumerate() {
        if let Some(i) = nodes[..j].iter().position(|a| a == b) {
            return Err(LinalgError::RepeatedNode { first: i, second: j });
        }
    }
    Ok(())
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `V[ℓ][k] = nodes[k]^ℓ` for `ℓ = 0..q-1`.
pub fn vandermonde_matrix(nodes: &[Scalar]) -> Result<ExactMatrix, LinalgError> {
    confluent_vandermonde_matrix(nodes, 1)
}

/// The `q·m × q·m` confluent Vandermonde matrix `[W_1 | ... | W_m]`.
///
/// Entry in row `ℓ`, block `p` (1-based), column `k` is
/// `C(ℓ, p-1)·nodes[k]^(ℓ-p+1)`, and zero when `ℓ < p-1`. Row `ℓ` expresses
/// `L_f^ℓ = Σ_j C(ℓ, j) L_{B_s}^(ℓ-j) L_g^j` on weight components.
pub fn confluent_vandermonde_matrix(nodes: &[Scalar], blocks: usize) -> Result<ExactMatrix, LinalgError> {
    if blocks == 0 {
        return Err(LinalgError::EmptySystem);
    }
    check_distinct(nodes)?;
    let q = nodes.len();
    let size = q * blocks;
    let mut w = ExactMatrix::zeros(size, size);
    for row in 0..size {
        for p in 0..blocks {
            if row < p {
                continue;
            }
            let c = Scalar::from_rational(BigRational::from_integer(binomial(row as u64, p as u64)));
            for (k, node) in nodes.iter().enumerate() {
                w.set(row, p * q + k, &c * &node.pow((row - p) as u32));
            }
        }
    }
    Ok(w)
}

/// Eigenvalues of `L_A` on homogeneous polynomials of degree `k`:
/// `{Σ m_i λ_i : |m| = k}`.
pub fn homogeneous_eigenvalues(eigenvalues: &[Weight], k: u32) -> BTreeSet<Weight> {
    Monomial::all_of_degree(eigenvalues.len(), k)
        .iter()
        .map(|m| weight(m, eigenvalues).expect("lengths agree by construction"))
        .collect()
}
