//! Lie derivative and Lie bracket of (truncated) formal vector fields.

use num_traits::Zero;

use super::series::min_trunc;
use super::{PolyError, Series};
use crate::field::Scalar;

fn check_field(field: &[Series], psi: &Series) -> Result<(), PolyError> {
    if field.len() != psi.nvars() {
        return Err(PolyError::LengthMismatch {
            expected: psi.nvars(),
            found: field.len(),
        });
    }
    for f in field {
        if f.nvars() != psi.nvars() {
            return Err(PolyError::VariableMismatch {
                expected: psi.nvars(),
                found: f.nvars(),
            });
        }
    }
    Ok(())
}

/// `L_f(ψ) = Dψ·f`.
///
/// When every component of `f` vanishes at the origin the result is exact
/// modulo the smaller of the truncation orders of `ψ` and `f`; otherwise one
/// order of precision is lost to differentiation.
pub fn lie_derivative(field: &[Series], psi: &Series) -> Result<Series, PolyError> {
    check_field(field, psi)?;
    let mut trunc = psi.trunc_order();
    let vanishes = field.iter().all(|f| f.constant_term().is_zero());
    if !vanishes {
        trunc = trunc.map(|n| n.saturating_sub(1));
    }
    for f in field {
        trunc = min_trunc(trunc, f.trunc_order());
    }
    let mut out = match trunc {
        Some(n) => Series::zero_truncated(psi.nvars(), n),
        None => Series::zero(psi.nvars()),
    };
    for (m, c) in psi.terms() {
        for (j, fj) in field.iter().enumerate() {
            let Some((e, lowered)) = m.derivative(j) else {
                continue;
            };
            let factor = c * &Scalar::from_int(i64::from(e));
            for (b, d) in fj.terms() {
                out.add_term(lowered.mul(b), &factor * d);
            }
        }
    }
    Ok(out)
}

/// `ℓ`-fold iterate `L_f ∘ ... ∘ L_f (ψ)`; `ℓ = 0` returns `ψ`.
pub fn lie_derivative_iter(field: &[Series], psi: &Series, times: usize) -> Result<Series, PolyError> {
    check_field(field, psi)?;
    let mut cur = psi.clone();
    for _ in 0..times {
        if cur.is_zero() {
            break;
        }
        cur = lie_derivative(field, &cur)?;
    }
    Ok(cur)
}

/// `[f, g] = Dg·f − Df·g`, componentwise `L_f(g_i) − L_g(f_i)`.
pub fn lie_bracket(f: &[Series], g: &[Series]) -> Result<Vec<Series>, PolyError> {
    if f.len() != g.len() {
        return Err(PolyError::LengthMismatch {
            expected: f.len(),
            found: g.len(),
        });
    }
    f.iter()
        .zip(g)
        .map(|(fi, gi)| Ok(&lie_derivative(f, gi)? - &lie_derivative(g, fi)?))
        .collect()
}

/// The linear vector field `x ↦ A·x` as series components.
pub fn linear_field(matrix: &crate::linalg::ExactMatrix) -> Vec<Series> {
    let n = matrix.cols();
    (0..matrix.rows())
        .map(|i| {
            let mut s = Series::zero(n);
            for j in 0..n {
                s.add_term(super::Monomial::var(n, j), matrix.get(i, j).clone());
            }
            s
        })
        .collect()
}
