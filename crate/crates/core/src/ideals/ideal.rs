use num_traits::Zero;

use super::{GroebnerBasis, IdealError};
use crate::field::Scalar;
use crate::linalg::ExactMatrix;
use crate::poly::{lie_derivative, Monomial, PolyError, Series, TermOrder};

/// An ideal `I + ⟨x⟩^N` given by generators, with its reduced Gröbner basis
/// computed on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealHandle {
    nvars: usize,
    generators: Vec<Series>,
    trunc_order: u32,
    basis: GroebnerBasis,
}

fn check_vars(nvars: usize, s: &Series) -> Result<(), PolyError> {
    if s.nvars() != nvars {
        return Err(PolyError::VariableMismatch {
            expected: nvars,
            found: s.nvars(),
        });
    }
    Ok(())
}

/// Fails when `s` is not known modulo `⟨x⟩^n`.
fn check_known(s: &Series, n: u32) -> Result<(), PolyError> {
    match s.trunc_order() {
        Some(order) if order < n => Err(PolyError::BeyondTruncation {
            degree: n - 1,
            order,
        }),
        _ => Ok(()),
    }
}

impl IdealHandle {
    pub fn new(nvars: usize, generators: Vec<Series>, trunc_order: u32) -> Result<Self, IdealError> {
        Self::with_order(nvars, generators, trunc_order, TermOrder::default())
    }

    pub fn with_order(
        nvars: usize,
        generators: Vec<Series>,
        trunc_order: u32,
        order: TermOrder,
    ) -> Result<Self, IdealError> {
        for g in &generators {
            check_vars(nvars, g)?;
        }
        let generators: Vec<Series> = generators.iter().map(|g| g.truncated(trunc_order)).collect();
        let basis = GroebnerBasis::compute(nvars, &generators, trunc_order, order);
        Ok(IdealHandle {
            nvars,
            generators,
            trunc_order,
            basis,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Series] {
        &self.generators
    }

    pub fn trunc_order(&self) -> u32 {
        self.trunc_order
    }

    pub fn basis(&self) -> &GroebnerBasis {
        &self.basis
    }

    /// Membership in `I + ⟨x⟩^N`.
    pub fn member(&self, psi: &Series) -> bool {
        self.basis.contains(psi)
    }

    pub fn normal_form(&self, psi: &Series) -> Series {
        self.basis.reduce(psi)
    }

    /// The same ideal with a different list of generators to work from; each
    /// must already be a member.
    pub fn with_generators(&self, generators: Vec<Series>) -> Result<IdealHandle, IdealError> {
        for g in &generators {
            check_vars(self.nvars, g)?;
            if !self.member(g) {
                return Err(IdealError::NotMember { element: g.clone() });
            }
        }
        Ok(IdealHandle {
            generators: generators.iter().map(|g| g.truncated(self.trunc_order)).collect(),
            ..self.clone()
        })
    }

    /// Two-sided check that `gens` generate the same ideal modulo `⟨x⟩^N`.
    pub fn same_as(&self, gens: &[Series]) -> Result<bool, IdealError> {
        let other = IdealHandle::with_order(self.nvars, gens.to_vec(), self.trunc_order, self.basis.order())?;
        Ok(self.generators.iter().all(|g| other.member(g)) && gens.iter().all(|g| self.member(g)))
    }

    /// The smallest `L_f`-invariant ideal containing `I`, modulo `⟨x⟩^N`:
    /// reduced Lie derivatives are adjoined until every one reduces to zero.
    pub fn invariant_closure(&self, field: &[Series]) -> Result<IdealHandle, IdealError> {
        let n = self.trunc_order;
        check_field(self.nvars, field, n)?;
        let mut closure = self.clone();
        let mut next = 0;
        while next < closure.generators.len() {
            let image = lie_derivative(field, &closure.generators[next])?.truncated(n);
            let r = closure.normal_form(&image);
            if r.is_zero() {
                next += 1;
                continue;
            }
            let mut gens = closure.generators.clone();
            gens.push(r.monic().truncated(n));
            closure = IdealHandle::with_order(self.nvars, gens, n, self.basis.order())?;
        }
        Ok(closure)
    }
}

fn check_field(nvars: usize, field: &[Series], n: u32) -> Result<(), PolyError> {
    if field.len() != nvars {
        return Err(PolyError::LengthMismatch {
            expected: nvars,
            found: field.len(),
        });
    }
    for c in field {
        check_vars(nvars, c)?;
        check_known(c, n)?;
    }
    Ok(())
}

/// Result of an invariance check; `witness` is the first generator whose Lie
/// derivative is not a member, with that derivative's normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceCheck {
    pub invariant: bool,
    pub witness: Option<(Series, Series)>,
    pub trunc_order: u32,
}

/// `L_f(I) ⊆ I` modulo `⟨x⟩^N`, checked on generators.
pub fn is_invariant(ideal: &IdealHandle, field: &[Series]) -> Result<InvarianceCheck, IdealError> {
    let n = ideal.trunc_order();
    check_field(ideal.nvars(), field, n)?;
    for g in ideal.generators() {
        let image = lie_derivative(field, g)?.truncated(n);
        let r = ideal.normal_form(&image);
        if !r.is_zero() {
            return Ok(InvarianceCheck {
                invariant: false,
                witness: Some((g.clone(), r)),
                trunc_order: n,
            });
        }
    }
    Ok(InvarianceCheck {
        invariant: true,
        witness: None,
        trunc_order: n,
    })
}

/// A cofactor `λ` with `L_f(ψ) ≡ λ·ψ mod ⟨x⟩^N`, if one exists.
///
/// Only `λ mod ⟨x⟩^{N − mindeg ψ}` is determined; the representative with
/// all free coefficients zero is returned.
pub fn is_semiinvariant(psi: &Series, field: &[Series], n: u32) -> Result<Option<Series>, IdealError> {
    let nvars = psi.nvars();
    check_field(nvars, field, n)?;
    check_known(psi, n)?;
    let psi = psi.truncated(n);
    let Some(low) = psi.min_degree() else {
        return Ok(None);
    };
    let image = lie_derivative(field, &psi)?.truncated(n);
    let unknowns = Monomial::all_below(nvars, n - low);
    let equations = Monomial::all_below(nvars, n);
    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(equations.len());
    for m in &equations {
        let mut row: Vec<Scalar> = unknowns
            .iter()
            .map(|u| match u.quotient_of(m) {
                Some(rest) => psi.coeff(&rest),
                None => Scalar::zero(),
            })
            .collect();
        row.push(image.coeff(m));
        rows.push(row);
    }
    let (rref, pivots) = ExactMatrix::from_rows(rows)?.rref();
    if pivots.contains(&unknowns.len()) {
        return Ok(None);
    }
    let mut cofactor = Series::zero_truncated(nvars, n - low);
    for (r, &col) in pivots.iter().enumerate() {
        cofactor.add_term(unknowns[col].clone(), rref.get(r, unknowns.len()).clone());
    }
    Ok(Some(cofactor))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(terms: &[(i64, &[u32])]) -> Series {
        Series::from_int_terms(2, terms)
    }

    fn example_field(beta: i64) -> Vec<Series> {
        vec![Series::var(2, 0), s(&[(3, &[0, 1]), (beta, &[3, 0])])]
    }

    fn example_ideal() -> IdealHandle {
        IdealHandle::new(2, vec![s(&[(1, &[3, 0]), (1, &[0, 1])]), s(&[(1, &[0, 2])])], 8).unwrap()
    }

    #[test]
    fn membership_examples() {
        let i = example_ideal();
        assert!(i.member(&s(&[(1, &[3, 0]), (1, &[0, 1])])));
        assert!(i.member(&s(&[(1, &[0, 3])])));
        assert!(!i.member(&Series::var(2, 0)));
        for g in i.generators() {
            assert!(i.member(g));
        }
    }

    #[test]
    fn invariance_examples() {
        // L_f(x^3 + y) = 3(x^3 + y) + x^3 and x^3 ≡ -y is not a member when β = 1
        let check = is_invariant(&example_ideal(), &example_field(1)).unwrap();
        assert!(!check.invariant);
        let (g, r) = check.witness.unwrap();
        assert_eq!(g, s(&[(1, &[3, 0]), (1, &[0, 1])]));
        assert_eq!(r, s(&[(-1, &[0, 1])]));
        assert!(is_invariant(&example_ideal(), &example_field(0)).unwrap().invariant);

        let x = IdealHandle::new(2, vec![Series::var(2, 0)], 6).unwrap();
        let diag = vec![Series::var(2, 0), s(&[(3, &[0, 1])])];
        assert!(is_invariant(&x, &diag).unwrap().invariant);

        let y = IdealHandle::new(2, vec![Series::var(2, 1)], 4).unwrap();
        let swap = vec![Series::var(2, 1), Series::var(2, 0)];
        let check = is_invariant(&y, &swap).unwrap();
        assert_eq!(check.witness, Some((Series::var(2, 1), Series::var(2, 0))));
    }

    #[test]
    fn closure_of_the_example_is_invariant() {
        let psi = IdealHandle::new(2, vec![s(&[(1, &[3, 0]), (1, &[0, 1]), (1, &[0, 2])])], 8).unwrap();
        let f = example_field(1);
        assert!(!is_invariant(&psi, &f).unwrap().invariant);
        let closed = psi.invariant_closure(&f).unwrap();
        assert!(is_invariant(&closed, &f).unwrap().invariant);
        assert!(closed.member(&s(&[(1, &[3, 0]), (1, &[0, 1])])));
        assert!(closed.member(&s(&[(1, &[0, 2])])));
    }

    #[test]
    fn truncated_field_below_n_is_rejected() {
        let f: Vec<Series> = example_field(1).iter().map(|c| c.truncated(3)).collect();
        assert!(is_invariant(&example_ideal(), &f).is_err());
    }

    #[test]
    fn semiinvariant_examples() {
        let diag = vec![Series::var(2, 0), s(&[(3, &[0, 1])])];
        assert_eq!(
            is_semiinvariant(&Series::var(2, 0), &diag, 6).unwrap().unwrap(),
            Series::one(2)
        );
        assert_eq!(
            is_semiinvariant(&s(&[(1, &[0, 2])]), &diag, 6).unwrap().unwrap(),
            Series::constant(2, Scalar::from_int(6))
        );
        assert_eq!(is_semiinvariant(&s(&[(1, &[1, 0]), (1, &[0, 1])]), &diag, 6).unwrap(), None);
    }

    #[test]
    fn nonconstant_cofactor() {
        // L_f(x) = x + x^2 = (1 + x)·x for f = (x + x^2, y)
        let f = vec![s(&[(1, &[1, 0]), (1, &[2, 0])]), Series::var(2, 1)];
        let c = is_semiinvariant(&Series::var(2, 0), &f, 5).unwrap().unwrap();
        assert_eq!(c, s(&[(1, &[0, 0]), (1, &[1, 0])]));
    }
}
