use std::cmp::Ordering;
use std::fmt;

/// Exponent vector `x_1^{a_1} ... x_n^{a_n}`.
///
/// `Ord` is the graded lexicographic order with `x_1 > x_2 > ... > x_n`; every
/// series stores its terms in this order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, j: usize) -> Self {
        let mut e = vec![0; nvars];
        e[j] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        self.divides(other)
            .then(|| Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Partial derivative `∂/∂x_j`: returns the multiplicity and the lowered monomial.
    pub fn derivative(&self, j: usize) -> Option<(u32, Monomial)> {
        let e = self.0[j];
        if e == 0 {
            return None;
        }
        let mut lowered = self.0.clone();
        lowered[j] -= 1;
        Some((e, Monomial(lowered)))
    }

    /// All exponent vectors in `nvars` variables of total degree exactly `degree`,
    /// in descending graded-lex order.
    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        fn rec(prefix: &mut Vec<u32>, left: u32, slots: usize, out: &mut Vec<Monomial>) {
            if slots == 1 {
                prefix.push(left);
                out.push(Monomial(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=left).rev() {
                prefix.push(e);
                rec(prefix, left - e, slots - 1, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if degree == 0 {
                out.push(Monomial(Vec::new()));
            }
            return out;
        }
        rec(&mut Vec::with_capacity(nvars), degree, nvars, &mut out);
        out
    }

    /// All monomials of total degree below `bound`.
    pub fn all_below(nvars: usize, bound: u32) -> Vec<Monomial> {
        (0..bound)
            .flat_map(|d| Monomial::all_of_degree(nvars, d))
            .collect()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        TermOrder::GradedLex.cmp(self, other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{:?}", self.0)
    }
}

/// Degree-compatible admissible term orders.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TermOrder {
    #[default]
    GradedLex,
    GradedRevLex,
}

impl TermOrder {
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        a.degree().cmp(&b.degree()).then_with(|| match self {
            TermOrder::GradedLex => a.0.cmp(&b.0),
            TermOrder::GradedRevLex => {
                // smaller exponent in the last differing variable wins
                for (x, y) in a.0.iter().zip(&b.0).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn graded_lex_examples() {
        let x3 = Monomial::new(vec![3, 0]);
        let y = Monomial::new(vec![0, 1]);
        let y2 = Monomial::new(vec![0, 2]);
        assert!(x3 > y2);
        assert!(y2 > y);
        assert!(Monomial::new(vec![1, 0]) > y);
    }

    #[test]
    fn grevlex_differs_from_grlex() {
        // x z^2 vs y^3 in three variables
        let a = Monomial::new(vec![1, 0, 2]);
        let b = Monomial::new(vec![0, 3, 0]);
        assert_eq!(TermOrder::GradedLex.cmp(&a, &b), Ordering::Greater);
        assert_eq!(TermOrder::GradedRevLex.cmp(&a, &b), Ordering::Less);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
        assert_eq!(Monomial::all_below(2, 4).len(), 10);
        let d2 = Monomial::all_of_degree(2, 2);
        assert!(d2.windows(2).all(|w| w[0] > w[1]));
    }

    fn arb_mono() -> impl Strategy<Value = Monomial> {
        proptest::collection::vec(0u32..5, 3).prop_map(Monomial::new)
    }

    proptest! {
        #[test]
        fn orders_are_total_and_multiplicative(a in arb_mono(), b in arb_mono(), c in arb_mono()) {
            for order in [TermOrder::GradedLex, TermOrder::GradedRevLex] {
                let ab = order.cmp(&a, &b);
                prop_assert_eq!(ab == Ordering::Equal, a == b);
                prop_assert_eq!(ab, order.cmp(&b, &a).reverse());
                prop_assert_eq!(order.cmp(&a.mul(&c), &b.mul(&c)), ab);
            }
        }
    }
}
