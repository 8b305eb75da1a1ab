use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::FieldError;

/// Exact Gaussian rational `re + im·i`.
///
/// Both parts are `BigRational`, which keeps numerator and denominator coprime
/// with a positive denominator, so structural equality and hashing agree with
/// mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn from_rational(re: BigRational) -> Self {
        Scalar {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_int(value: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn gaussian(re: i64, im: i64) -> Self {
        Scalar {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    pub fn i() -> Self {
        Self::gaussian(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `re² + im²`, the squared modulus.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.im.is_zero() {
            return Ok(Self::from_rational(self.re.recip()));
        }
        let n = self.norm_sqr();
        Ok(Scalar {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Self, FieldError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Least common multiple of the denominators of both parts.
    pub fn denom_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.re.denom().lcm(self.im.denom())
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Exact value of a real scalar, if it is real.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_real().then_some(&self.re)
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::default()
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::from_int(1)
    }
}

impl From<BigRational> for Scalar {
    fn from(value: BigRational) -> Self {
        Scalar::from_rational(value)
    }
}

impl From<i64> for Scalar {
    fn from(value: i64) -> Self {
        Scalar::from_int(value)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Scalar::from_rational(&self.re * &rhs.re);
        }
        Scalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: -self.re,
            im: -self.im,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |acc, x| &acc * &x)
    }
}

/// Parses `p` or `p/q`.
pub fn parse_rational(src: &str) -> Result<BigRational, FieldError> {
    let s = src.trim();
    let bad = || FieldError::Malformed(src.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(FieldError::DivisionByZero);
    }
    Ok(BigRational::new(num, den))
}

/// Accepts `p/q` and the Gaussian forms `p/q+r/s*i`, `p/q-r/s*i`, `r/s*i`, `i`, `-i`.
impl FromStr for Scalar {
    type Err = FieldError;

    fn from_str(src: &str) -> Result<Self, Self::Err> {
        let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(FieldError::Malformed(src.to_string()));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Scalar::from_rational(parse_rational(&s)?));
        };
        // split the real part from the imaginary part at the last sign not in leading position
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        let (re_part, im_part) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("", body),
        };
        let im_part = im_part.strip_suffix('*').unwrap_or(im_part);
        let im = match im_part {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other.strip_prefix('+').unwrap_or(other))?,
        };
        let re = if re_part.is_empty() {
            BigRational::zero()
        } else {
            parse_rational(re_part)?
        };
        Ok(Scalar { re, im })
    }
}

pub(crate) fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    /// Real values print as `p/q`; others as `p/q+r/s*i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return f.write_str(&fmt_rational(&self.re));
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(
            f,
            "{}{}{}*i",
            fmt_rational(&self.re),
            sign,
            fmt_rational(&self.im.abs())
        )
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
