use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use super::IdealError;
use crate::field::{Scalar, Weight};
use crate::linalg::ExactMatrix;

/// Candidate `L_f`-invariant primes in the single resonance case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingleResonance {
    pub nvars: usize,
    /// `λ_n = Σ α_i λ_i`.
    pub resonant_eigenvalue: Weight,
    /// Human-readable record of the verified hypotheses.
    pub hypotheses: Vec<String>,
    /// Variable index sets `{i_1, …, i_r}` of the primes `⟨x_{i_1}, …, x_{i_r}⟩`.
    pub candidates: Vec<Vec<usize>>,
}

/// Lists the monomial primes `⟨x_{i_1}, …, x_{i_r}⟩` when `λ_1…λ_{n−1}` are
/// `Q`-independent and `λ_n = Σ α_i λ_i` with every `α_i ≤ 0`.
///
/// `eigenvalues` holds either `λ_1…λ_{n−1}` or all `n` values; in the latter
/// case the last one is checked against the resonance.
pub fn single_resonance_primes(
    eigenvalues: &[Weight],
    alpha: &[BigRational],
) -> Result<SingleResonance, IdealError> {
    let n = alpha.len() + 1;
    if eigenvalues.len() != n - 1 && eigenvalues.len() != n {
        return Err(IdealError::Hypothesis(format!(
            "expected {} or {} eigenvalues for {} resonance coefficients, found {}",
            n - 1,
            n,
            alpha.len(),
            eigenvalues.len()
        )));
    }
    let mut hypotheses = Vec::new();

    if let Some((i, a)) = alpha.iter().enumerate().find(|(_, a)| a.is_positive()) {
        return Err(IdealError::Hypothesis(format!(
            "resonance coefficient alpha_{} = {} is positive",
            i + 1,
            a
        )));
    }
    hypotheses.push("all resonance coefficients are nonpositive".to_string());

    let free = &eigenvalues[..n - 1];
    let dim = eigenvalues.first().map_or(1, Weight::dim);
    if let Some(w) = eigenvalues.iter().find(|w| w.dim() != dim) {
        return Err(IdealError::Hypothesis(format!(
            "eigenvalue {w} does not live in the {dim}-dimensional weight space"
        )));
    }
    if !free.is_empty() {
        let rows: Vec<Vec<Scalar>> = free
            .iter()
            .map(|w| w.coords().iter().cloned().map(Scalar::from_rational).collect())
            .collect();
        let rank = ExactMatrix::from_rows(rows)?.rank();
        if rank != free.len() {
            return Err(IdealError::Hypothesis(format!(
                "the first {} eigenvalues are linearly dependent over Q (rank {rank})",
                free.len()
            )));
        }
    }
    hypotheses.push(format!("lambda_1..lambda_{} are linearly independent over Q", n - 1));

    let resonant = free
        .iter()
        .zip(alpha)
        .fold(Weight::zero(dim), |acc, (w, a)| &acc + &w.scale(a));
    if let Some(given) = eigenvalues.get(n - 1) {
        if *given != resonant {
            return Err(IdealError::Hypothesis(format!(
                "lambda_{n} = {given} differs from the resonant combination {resonant}"
            )));
        }
        hypotheses.push(format!("lambda_{n} = {resonant} satisfies the resonance"));
    } else {
        hypotheses.push(format!("lambda_{n} := {resonant}"));
    }

    let mut candidates: Vec<Vec<usize>> = (1u64..(1u64 << n))
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect();
    candidates.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(SingleResonance {
        nvars: n,
        resonant_eigenvalue: resonant,
        hypotheses,
        candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn two_variables() {
        let out = single_resonance_primes(&[Weight::from_ints(&[1, 0])], &[q(-1)]).unwrap();
        assert_eq!(out.candidates, vec![vec![0], vec![1], vec![0, 1]]);
        assert_eq!(out.resonant_eigenvalue, Weight::from_ints(&[-1, 0]));
    }

    #[test]
    fn one_variable() {
        let out = single_resonance_primes(&[], &[]).unwrap();
        assert_eq!(out.candidates, vec![vec![0]]);
    }

    #[test]
    fn positive_coefficient_is_rejected() {
        let err = single_resonance_primes(&[Weight::from_ints(&[1])], &[q(1)]).unwrap_err();
        assert!(matches!(err, IdealError::Hypothesis(_)));
    }

    #[test]
    fn dependence_is_rejected() {
        let l = [Weight::from_ints(&[1, 0]), Weight::from_ints(&[2, 0])];
        assert!(single_resonance_primes(&l, &[q(-1), q(0)]).is_err());
    }

    #[test]
    fn full_spectrum_must_match() {
        let l = [Weight::from_ints(&[1, 0]), Weight::from_ints(&[0, 1]), Weight::from_ints(&[-1, -2])];
        let out = single_resonance_primes(&l, &[q(-1), q(-2)]).unwrap();
        assert_eq!(out.candidates.len(), 7);
        let wrong = [Weight::from_ints(&[1, 0]), Weight::from_ints(&[0, 1]), Weight::from_ints(&[-1, -1])];
        assert!(single_resonance_primes(&wrong, &[q(-1), q(-2)]).is_err());
    }
}
