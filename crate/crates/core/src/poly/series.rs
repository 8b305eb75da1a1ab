use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{Monomial, PolyError};
use crate::field::{fmt_rational, Scalar};

/// Minimum of two truncation orders, where `None` means "exact".
pub(crate) fn min_trunc(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Sparse multivariate power series over `Q(i)`.
///
/// With `trunc = Some(N)` the value is a representative in `K[[x]]/<x>^N` and
/// no stored monomial has degree `>= N`; with `trunc = None` it is an exact
/// polynomial. Zero coefficients are never stored.
///
/// Equality compares the stored representatives (variable count and terms),
/// not the truncation order.
#[derive(Clone)]
pub struct Series {
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
    trunc: Option<u32>,
}

impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl Eq for Series {}

impl Series {
    pub fn zero(nvars: usize) -> Self {
        Series {
            nvars,
            terms: BTreeMap::new(),
            trunc: None,
        }
    }

    pub fn zero_truncated(nvars: usize, order: u32) -> Self {
        Series {
            nvars,
            terms: BTreeMap::new(),
            trunc: Some(order),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::monomial(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Scalar::one())
    }

    pub fn var(nvars: usize, j: usize) -> Self {
        Self::monomial(Monomial::var(nvars, j), Scalar::one())
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let mut s = Series::zero(m.nvars());
        s.add_term(m, c);
        s
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
    {
        let mut s = Series::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial variable count mismatch");
            s.add_term(m, c);
        }
        s
    }

    /// Builds `Σ c·x^e` from integer coefficients and exponent slices; handy in tests.
    pub fn from_int_terms(nvars: usize, terms: &[(i64, &[u32])]) -> Self {
        Self::from_terms(
            nvars,
            terms
                .iter()
                .map(|(c, e)| (Monomial::new(e.to_vec()), Scalar::from_int(*c))),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn trunc_order(&self) -> Option<u32> {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// Reduces into `K[[x]]/<x>^order` (never raises an existing truncation order).
    pub fn truncated(&self, order: u32) -> Series {
        let trunc = min_trunc(self.trunc, Some(order));
        let limit = trunc.unwrap_or(u32::MAX);
        Series {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() < limit)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
            trunc,
        }
    }

    /// Forgets the truncation order, reading the representative as a polynomial.
    pub fn as_polynomial(&self) -> Series {
        Series {
            trunc: None,
            ..self.clone()
        }
    }

    fn admits(&self, m: &Monomial) -> bool {
        self.trunc.is_none_or(|n| m.degree() < n)
    }

    /// Adds `c·m` in place, dropping terms beyond the truncation order.
    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() || !self.admits(&m) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Largest total degree present.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Smallest total degree present (the x-adic order).
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Divides by the graded-lex leading coefficient.
    pub fn monic(&self) -> Series {
        match self.leading_term() {
            Some((_, lc)) => {
                let inv = lc.inv().expect("stored coefficients are nonzero");
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    fn check_vars(&self, other: &Series) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VariableMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Series) -> Result<Series, PolyError> {
        self.check_vars(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Series) -> Result<Series, PolyError> {
        self.check_vars(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Series) -> Result<Series, PolyError> {
        self.check_vars(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &Scalar) -> Series {
        if c.is_zero() {
            return Series {
                terms: BTreeMap::new(),
                ..self.clone()
            };
        }
        Series {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
            trunc: self.trunc,
        }
    }

    /// Multiplies by `c·m`.
    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Series {
        let mut out = Series::zero(self.nvars);
        out.trunc = self.trunc;
        if c.is_zero() {
            return out;
        }
        for (a, b) in &self.terms {
            let p = a.mul(m);
            if out.admits(&p) {
                out.terms.insert(p, b * c);
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Series {
        let mut acc = Series::one(self.nvars);
        if let Some(n) = self.trunc {
            acc = acc.truncated(n);
        }
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative `∂/∂x_j`. A representative known modulo `<x>^N` has a
    /// derivative known modulo `<x>^(N-1)`.
    pub fn derivative(&self, j: usize) -> Series {
        let mut out = Series::zero(self.nvars);
        out.trunc = self.trunc.map(|n| n.saturating_sub(1));
        for (m, c) in &self.terms {
            if let Some((e, lowered)) = m.derivative(j) {
                out.add_term(lowered, c * &Scalar::from_int(i64::from(e)));
            }
        }
        out
    }

    /// Degree-`k` homogeneous component.
    pub fn homogeneous_part(&self, k: u32) -> Result<Series, PolyError> {
        if let Some(n) = self.trunc {
            if k >= n {
                return Err(PolyError::BeyondTruncation { degree: k, order: n });
            }
        }
        Ok(self.filter_terms(|m| m.degree() == k))
    }

    pub fn filter_terms<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Series {
        Series {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
            trunc: self.trunc,
        }
    }

    pub fn map_coeffs<F: Fn(&Monomial, &Scalar) -> Scalar>(&self, f: F) -> Series {
        let mut out = Series::zero(self.nvars);
        out.trunc = self.trunc;
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(m, c));
        }
        out
    }

    /// Substitutes `x_j ↦ h_j`. Each `h_j` must vanish at the origin so the
    /// result stays in the local ring; the result is truncated at the minimum
    /// of all truncation orders involved.
    pub fn compose(&self, h: &[Series]) -> Result<Series, PolyError> {
        if h.len() != self.nvars {
            return Err(PolyError::LengthMismatch {
                expected: self.nvars,
                found: h.len(),
            });
        }
        let target_vars = h.first().map_or(self.nvars, |s| s.nvars);
        let mut trunc = self.trunc;
        for (j, hj) in h.iter().enumerate() {
            if hj.nvars != target_vars {
                return Err(PolyError::VariableMismatch {
                    expected: target_vars,
                    found: hj.nvars,
                });
            }
            if !hj.constant_term().is_zero() {
                return Err(PolyError::NonzeroConstantTerm { index: j });
            }
            trunc = min_trunc(trunc, hj.trunc);
        }
        let cut = |s: &Series| match trunc {
            Some(n) => s.truncated(n),
            None => s.clone(),
        };
        let h: Vec<Series> = h.iter().map(cut).collect();

        // powers[j][e] = h_j^e
        let mut powers: Vec<Vec<Series>> = h
            .iter()
            .map(|hj| {
                let mut one = Series::one(target_vars);
                one.trunc = trunc;
                vec![cut(&one), hj.clone()]
            })
            .collect();
        let mut out = Series::zero(target_vars);
        out.trunc = trunc;
        for (m, c) in &self.terms {
            if let Some(n) = trunc {
                // each h_j has order >= 1, so x^a contributes only in degrees >= |a|
                if m.degree() >= n {
                    continue;
                }
            }
            let mut term = Series::constant(target_vars, c.clone());
            term.trunc = trunc;
            for (j, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[j].len() <= e as usize {
                    let next = &powers[j][powers[j].len() - 1] * &h[j];
                    powers[j].push(next);
                }
                term = &term * &powers[j][e as usize];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Canonical text: terms in descending graded-lex order.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        SeriesDisplay {
            series: self,
            names,
        }
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        self.display_with(names).to_string()
    }
}

impl<'a> Add<&'a Series> for &'a Series {
    type Output = Series;

    /// Panics on variable-count mismatch; see [`Series::checked_add`].
    fn add(self, rhs: &Series) -> Series {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.truncated(rhs.trunc.unwrap_or(u32::MAX));
        out.trunc = min_trunc(self.trunc, rhs.trunc);
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Series> for &'a Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.truncated(rhs.trunc.unwrap_or(u32::MAX));
        out.trunc = min_trunc(self.trunc, rhs.trunc);
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a Series> for &'a Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Series::zero(self.nvars);
        out.trunc = min_trunc(self.trunc, rhs.trunc);
        let limit = out.trunc.unwrap_or(u32::MAX);
        for (a, ca) in &self.terms {
            let da = a.degree();
            if da >= limit {
                break;
            }
            for (b, cb) in &rhs.terms {
                if da + b.degree() >= limit {
                    // terms are sorted by degree first
                    break;
                }
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(&-Scalar::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Series> for Series {
            type Output = Series;
            fn $method(self, rhs: Series) -> Series {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

struct SeriesDisplay<'a> {
    series: &'a Series,
    names: &'a [String],
}

fn fmt_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (j, &e) in m.exponents().iter().enumerate() {
        let name = names
            .get(j)
            .cloned()
            .unwrap_or_else(|| format!("x{}", j + 1));
        match e {
            0 => {}
            1 => parts.push(name),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

impl fmt::Display for SeriesDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.series.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.series.terms.iter().rev().enumerate() {
            let mono = fmt_monomial(m, self.names);
            let (negative, body) = if c.is_real() {
                let q = c.re();
                let abs = fmt_rational(&q.abs());
                let body = match (mono.is_empty(), q.abs().is_one()) {
                    (true, _) => abs,
                    (false, true) => mono,
                    (false, false) => format!("{abs}*{mono}"),
                };
                (q.is_negative(), body)
            } else if mono.is_empty() {
                (false, format!("({c})"))
            } else {
                (false, format!("({c})*{mono}"))
            };
            match (k, negative) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => f.write_str(&body)?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))?;
        if let Some(n) = self.trunc {
            write!(f, " + O({n})")?;
        }
        Ok(())
    }
}
