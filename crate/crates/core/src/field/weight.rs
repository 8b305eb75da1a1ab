use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::{fmt_rational, parse_rational};
use super::{FieldError, Scalar};

/// A point of `Q^d`, read as a Q-linear combination of `d` abstract basis
/// numbers. Weights of monomials and the eigenvalues of the semisimple part
/// live here, so Q-linear independence of eigenvalues is structural.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    coords: Vec<BigRational>,
}

impl Weight {
    pub fn new(coords: Vec<BigRational>) -> Self {
        Weight { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Weight {
            coords: coords
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Weight {
            coords: vec![BigRational::zero(); dim],
        }
    }

    /// The `k`-th abstract basis number of `Q^dim`.
    pub fn unit(dim: usize, k: usize) -> Self {
        let mut w = Weight::zero(dim);
        w.coords[k] = BigRational::one();
        w
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn check_dim(&self, other: &Weight) -> Result<(), FieldError> {
        if self.dim() != other.dim() {
            return Err(FieldError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    /// Exact equality, with a dimension check.
    pub fn weight_eq(&self, other: &Weight) -> Result<bool, FieldError> {
        self.check_dim(other)?;
        Ok(self.coords == other.coords)
    }

    pub fn checked_add(&self, other: &Weight) -> Result<Weight, FieldError> {
        self.check_dim(other)?;
        Ok(self + other)
    }

    pub fn scale(&self, factor: &BigRational) -> Weight {
        Weight {
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn scale_int(&self, factor: u64) -> Weight {
        self.scale(&BigRational::from_integer(BigInt::from(factor)))
    }

    /// Evaluates the weight at concrete values of the basis numbers.
    pub fn embed(&self, basis_values: &[Scalar]) -> Result<Scalar, FieldError> {
        if basis_values.len() != self.dim() {
            return Err(FieldError::DimensionMismatch {
                expected: self.dim(),
                found: basis_values.len(),
            });
        }
        Ok(self
            .coords
            .iter()
            .zip(basis_values)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, b)| &Scalar::from_rational(c.clone()) * b)
            .sum())
    }
}

impl<'a> Add<&'a Weight> for &'a Weight {
    type Output = Weight;

    /// Panics on dimension mismatch; use [`Weight::checked_add`] for untrusted input.
    fn add(self, rhs: &Weight) -> Weight {
        assert_eq!(self.dim(), rhs.dim(), "weight dimension mismatch");
        Weight {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a Weight> for &'a Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        self + &(-rhs)
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for Weight {
    /// One-dimensional weights print as a bare rational, others as `[a, b, ...]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim() == 1 {
            return f.write_str(&fmt_rational(&self.coords[0]));
        }
        let parts: Vec<String> = self.coords.iter().map(fmt_rational).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weight({self})")
    }
}

impl serde::Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.dim()))?;
        for c in &self.coords {
            seq.serialize_element(&fmt_rational(c))?;
        }
        seq.end()
    }
}

impl<'de> serde::Deserialize<'de> for Weight {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(deserializer)?;
        let coords = raw
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Ok(Weight { coords })
    }
}

/// Eigenvalues of the semisimple part as weights, plus optional concrete
/// values for the abstract basis numbers.
///
/// Concrete spectra (everything computed from a matrix) use basis `[1]` when
/// all eigenvalues are real and `[1, i]` otherwise; both embeddings are
/// injective, so weight equality and equality of complex values coincide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    eigenvalues: Vec<Weight>,
    embedding: Option<Vec<Scalar>>,
}

impl Spectrum {
    pub fn concrete(values: &[Scalar]) -> Self {
        if values.iter().all(Scalar::is_real) {
            Spectrum {
                eigenvalues: values
                    .iter()
                    .map(|v| Weight::new(vec![v.re().clone()]))
                    .collect(),
                embedding: Some(vec![Scalar::one()]),
            }
        } else {
            Spectrum {
                eigenvalues: values
                    .iter()
                    .map(|v| Weight::new(vec![v.re().clone(), v.im().clone()]))
                    .collect(),
                embedding: Some(vec![Scalar::one(), Scalar::i()]),
            }
        }
    }

    pub fn symbolic(
        eigenvalues: Vec<Weight>,
        embedding: Option<Vec<Scalar>>,
    ) -> Result<Self, FieldError> {
        let dim = eigenvalues.first().map_or(0, Weight::dim);
        for w in &eigenvalues {
            if w.dim() != dim {
                return Err(FieldError::DimensionMismatch {
                    expected: dim,
                    found: w.dim(),
                });
            }
        }
        if let Some(basis) = &embedding {
            if !eigenvalues.is_empty() && basis.len() != dim {
                return Err(FieldError::DimensionMismatch {
                    expected: dim,
                    found: basis.len(),
                });
            }
        }
        Ok(Spectrum {
            eigenvalues,
            embedding,
        })
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Dimension `d` of the weight space.
    pub fn dim(&self) -> usize {
        match (&self.eigenvalues.first(), &self.embedding) {
            (Some(w), _) => w.dim(),
            (None, Some(b)) => b.len(),
            (None, None) => 0,
        }
    }

    pub fn eigenvalues(&self) -> &[Weight] {
        &self.eigenvalues
    }

    pub fn embedding(&self) -> Option<&[Scalar]> {
        self.embedding.as_deref()
    }

    pub fn has_embedding(&self) -> bool {
        self.embedding.is_some()
    }

    pub fn embed(&self, w: &Weight) -> Option<Scalar> {
        let basis = self.embedding.as_ref()?;
        w.embed(basis).ok()
    }

    /// Concrete eigenvalues, when an embedding is known.
    pub fn values(&self) -> Option<Vec<Scalar>> {
        self.eigenvalues.iter().map(|w| self.embed(w)).collect()
    }
}
