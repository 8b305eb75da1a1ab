//! Buchberger's algorithm for `⟨gens⟩ + ⟨x⟩^N`.
//!
//! The monomials of degree `N` are kept implicit: every polynomial is stored
//! with its terms of degree `≥ N` dropped, which is exactly reduction by those
//! monomials. Pairs between an explicit element `g` and the implicit
//! monomials become the truncated products `t·g` with `deg t = N − deg lm(g)`.

use crate::field::Scalar;
use crate::poly::{Monomial, Series, TermOrder};

/// Leading monomial and coefficient under `order`.
pub fn leading_term(p: &Series, order: TermOrder) -> Option<(Monomial, Scalar)> {
    match order {
        TermOrder::GradedLex => p.leading_term().map(|(m, c)| (m.clone(), c.clone())),
        _ => p
            .terms()
            .max_by(|a, b| order.cmp(a.0, b.0))
            .map(|(m, c)| (m.clone(), c.clone())),
    }
}

fn make_monic(p: &Series, order: TermOrder) -> Series {
    match leading_term(p, order) {
        Some((_, c)) => p.scale(&c.inv().expect("nonzero leading coefficient")),
        None => p.clone(),
    }
}

#[derive(Clone, Debug)]
struct Element {
    lm: Monomial,
    poly: Series,
}

/// Reduced Gröbner basis of `⟨gens⟩ + ⟨x⟩^N` in `K[x]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    nvars: usize,
    trunc_order: u32,
    order: TermOrder,
    polys: Vec<Series>,
    monomials: Vec<Monomial>,
}

enum Pair {
    Two(usize, usize),
    Multiple(usize, Monomial),
}

/// Full reduction of `p` (already of degree `< n`) by monic elements.
fn reduce_by(p: &Series, basis: &[Element], order: TermOrder, n: u32) -> Series {
    let mut p = p.as_polynomial().truncated(n).as_polynomial();
    let mut rem = Series::zero(p.nvars());
    while let Some((m, c)) = leading_term(&p, order) {
        match basis.iter().find(|e| e.lm.divides(&m)) {
            Some(e) => {
                let q = e.lm.quotient_of(&m).expect("divisibility checked");
                let sub = e.poly.mul_term(&q, &c).truncated(n).as_polynomial();
                p = &p - &sub;
            }
            None => {
                let mut t = Series::zero(p.nvars());
                t.add_term(m.clone(), c.clone());
                p = &p - &t;
                rem.add_term(m, c);
            }
        }
    }
    rem
}

fn s_polynomial(a: &Element, b: &Element, n: u32) -> Series {
    let l = a.lm.lcm(&b.lm);
    let one = Scalar::from_int(1);
    let left = a.poly.mul_term(&a.lm.quotient_of(&l).expect("lcm"), &one);
    let right = b.poly.mul_term(&b.lm.quotient_of(&l).expect("lcm"), &one);
    (&left - &right).truncated(n).as_polynomial()
}

impl GroebnerBasis {
    /// Runs Buchberger with the product criterion and the chain criterion
    /// against the implicit degree-`N` monomials.
    pub fn compute(nvars: usize, gens: &[Series], n: u32, order: TermOrder) -> GroebnerBasis {
        let mut elems: Vec<Element> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();
        let mut unit = false;

        let add = |h: Series, elems: &mut Vec<Element>, pairs: &mut Vec<Pair>, unit: &mut bool| {
            let h = make_monic(&h, order);
            let (lm, _) = leading_term(&h, order).expect("nonzero");
            if lm.is_one() {
                *unit = true;
            }
            let idx = elems.len();
            for (i, e) in elems.iter().enumerate() {
                // product criterion, and chain through a degree-N monomial
                if e.lm.is_coprime(&lm) || e.lm.lcm(&lm).degree() >= n {
                    continue;
                }
                pairs.push(Pair::Two(i, idx));
            }
            for t in Monomial::all_of_degree(nvars, n - lm.degree()) {
                pairs.push(Pair::Multiple(idx, t));
            }
            elems.push(Element { lm, poly: h });
        };

        for g in gens {
            let r = reduce_by(g, &elems, order, n);
            if !r.is_zero() {
                add(r, &mut elems, &mut pairs, &mut unit);
            }
            if unit {
                break;
            }
        }
        while !unit {
            let Some(pair) = pairs.pop() else { break };
            let s = match pair {
                Pair::Two(i, j) => s_polynomial(&elems[i], &elems[j], n),
                Pair::Multiple(i, t) => elems[i]
                    .poly
                    .mul_term(&t, &Scalar::from_int(1))
                    .truncated(n)
                    .as_polynomial(),
            };
            let r = reduce_by(&s, &elems, order, n);
            if !r.is_zero() {
                add(r, &mut elems, &mut pairs, &mut unit);
            }
        }

        if unit || n == 0 {
            return GroebnerBasis {
                nvars,
                trunc_order: n,
                order,
                polys: vec![Series::one(nvars)],
                monomials: Vec::new(),
            };
        }

        // minimal basis: drop elements whose leading monomial is a multiple of another
        elems.sort_by(|a, b| order.cmp(&a.lm, &b.lm));
        let mut minimal: Vec<Element> = Vec::new();
        for e in elems {
            if !minimal.iter().any(|k| k.lm.divides(&e.lm)) {
                minimal.push(e);
            }
        }
        // inter-reduction of the tails
        let mut reduced: Vec<Element> = Vec::with_capacity(minimal.len());
        for i in 0..minimal.len() {
            let others: Vec<Element> = minimal
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, e)| e.clone())
                .collect();
            let e = &minimal[i];
            let mut head = Series::zero(nvars);
            head.add_term(e.lm.clone(), Scalar::from_int(1));
            let tail = &e.poly - &head;
            let tail = reduce_by(&tail, &others, order, n);
            reduced.push(Element {
                lm: e.lm.clone(),
                poly: &head + &tail,
            });
        }
        let monomials = Monomial::all_of_degree(nvars, n)
            .into_iter()
            .filter(|m| !reduced.iter().any(|e| e.lm.divides(m)))
            .collect::<Vec<_>>();
        let mut monomials = monomials;
        monomials.sort_by(|a, b| order.cmp(a, b));
        GroebnerBasis {
            nvars,
            trunc_order: n,
            order,
            polys: reduced.into_iter().map(|e| e.poly).collect(),
            monomials,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn trunc_order(&self) -> u32 {
        self.trunc_order
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    /// The explicit elements, all of degree `< N`, sorted by leading monomial.
    pub fn polynomials(&self) -> &[Series] {
        &self.polys
    }

    /// Degree-`N` monomials that remain in the reduced basis.
    pub fn truncation_monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// Every element of the reduced basis.
    pub fn elements(&self) -> Vec<Series> {
        let mut out = self.polys.clone();
        out.extend(
            self.monomials
                .iter()
                .map(|m| Series::monomial(m.clone(), Scalar::from_int(1))),
        );
        out
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.polys.len() == 1 && self.polys[0] == Series::one(self.nvars)
    }

    /// Normal form modulo `⟨gens⟩ + ⟨x⟩^N`, as a polynomial of degree `< N`.
    pub fn reduce(&self, p: &Series) -> Series {
        let elems: Vec<Element> = self
            .polys
            .iter()
            .map(|q| Element {
                lm: leading_term(q, self.order).expect("nonzero").0,
                poly: q.clone(),
            })
            .collect();
        reduce_by(p, &elems, self.order, self.trunc_order)
    }

    pub fn contains(&self, p: &Series) -> bool {
        self.reduce(p).is_zero()
    }
}

#[cfg(test)]
pub(crate) mod oracle {
    //! Membership in `⟨gens⟩ + ⟨x⟩^N` by linear algebra in `K[x]/⟨x⟩^N`.

    use crate::linalg::ExactMatrix;
    use crate::poly::{Monomial, Series};
    use num_traits::Zero;

    pub struct Macaulay {
        columns: Vec<Monomial>,
        echelon: ExactMatrix,
        rank: usize,
    }

    impl Macaulay {
        pub fn new(nvars: usize, gens: &[Series], n: u32) -> Macaulay {
            let columns = Monomial::all_below(nvars, n);
            let mut rows = Vec::new();
            for g in gens {
                for t in Monomial::all_below(nvars, n) {
                    let p = g.mul_term(&t, &crate::field::Scalar::from_int(1)).truncated(n);
                    if p.is_zero() {
                        continue;
                    }
                    rows.push(columns.iter().map(|m| p.coeff(m)).collect::<Vec<_>>());
                }
            }
            if rows.is_empty() {
                rows.push(vec![crate::field::Scalar::zero(); columns.len()]);
            }
            let m = ExactMatrix::from_rows(rows).unwrap();
            let rank = m.rank();
            Macaulay {
                echelon: m.rref().0,
                rank,
                columns,
            }
        }

        pub fn contains(&self, p: &Series) -> bool {
            let n = self.columns.len();
            let mut rows = self.echelon.to_rows();
            rows.truncate(self.rank);
            let p = p.as_polynomial();
            let row: Vec<_> = self.columns.iter().map(|m| p.coeff(m)).collect();
            rows.push(row);
            let extended = ExactMatrix::from_rows(rows).unwrap();
            debug_assert_eq!(extended.cols(), n);
            extended.rank() == self.rank
        }
    }
}
