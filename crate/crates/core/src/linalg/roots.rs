//! Univariate polynomials over `Q(i)` and certified extraction of their
//! roots in `Q(i)`.
//!
//! Candidates come from a floating-point Durand–Kerner iteration on the
//! square-free part; every candidate is rounded to the lattice of possible
//! Gaussian-rational roots and accepted only after exact evaluation.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Zero};

use crate::field::Scalar;

/// Dense coefficients, lowest degree first, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(Vec<Scalar>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn eval(&self, z: &Scalar) -> Scalar {
        self.0
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| &(&acc * z) + c)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Scalar::from_int(k as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> UniPoly {
        match self.0.last() {
            Some(lc) => {
                let inv = lc.inv().expect("leading coefficient is nonzero");
                UniPoly(self.0.iter().map(|c| c * &inv).collect())
            }
            None => self.clone(),
        }
    }

    /// Euclidean division.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc_inv = divisor.0[dd].inv().expect("nonzero leading coefficient");
        let mut rem = self.0.clone();
        let mut quot = vec![Scalar::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = &rem[top] * &lc_inv;
            let shift = top - dd;
            for (k, d) in divisor.0.iter().enumerate() {
                let t = &c * d;
                rem[shift + k] -= &t;
            }
            quot[shift] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Divides out the linear factor `(z − root)`; `root` must be a root.
    pub fn deflate(&self, root: &Scalar) -> UniPoly {
        let divisor = UniPoly(vec![-root, Scalar::one()]);
        let (q, r) = self.div_rem(&divisor);
        debug_assert!(r.is_zero());
        q
    }

    pub fn square_free_part(&self) -> UniPoly {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    fn to_complex(&self) -> Vec<Complex64> {
        self.0
            .iter()
            .map(|c| {
                let (re, im) = c.to_f64_pair();
                Complex64::new(re, im)
            })
            .collect()
    }

    /// Multiplies by the common denominator and divides out the integer
    /// content, giving Gaussian-integer coefficients.
    fn primitive_gaussian(&self) -> UniPoly {
        let den = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(&c.denom_lcm()));
        let scaled: Vec<Scalar> = self
            .0
            .iter()
            .map(|c| c * &Scalar::from_rational(BigRational::from_integer(den.clone())))
            .collect();
        let content = scaled.iter().fold(BigInt::zero(), |acc, c| {
            acc.gcd(c.re().numer()).gcd(c.im().numer())
        });
        if content.is_zero() {
            return UniPoly(scaled);
        }
        let inv = Scalar::from_rational(BigRational::new(BigInt::one(), content));
        UniPoly(scaled.iter().map(|c| c * &inv).collect())
    }
}

fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lc = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lc).collect();
    let bound = 1.0
        + monic[..n]
            .iter()
            .map(|c| c.norm())
            .fold(0.0_f64, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(0.5 * bound, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();
    let eval = |x: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c);
    for _ in 0..2000 {
        let mut delta = 0.0_f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(1e-12, 0.0);
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            break;
        }
    }
    z
}

fn round_to_integer(x: f64) -> Option<BigInt> {
    if !x.is_finite() {
        return None;
    }
    BigInt::from_f64(x.round())
}

/// Tries to certify a Gaussian-rational root of `p` near `approx`.
///
/// For a primitive Gaussian-integer polynomial with leading coefficient `a`,
/// every root `r` in `Q(i)` has `a·r` a Gaussian integer.
fn certify_near(p: &UniPoly, approx: Complex64) -> Option<Scalar> {
    let prim = p.primitive_gaussian();
    let lc = prim.0.last()?.clone();
    let (lre, lim) = lc.to_f64_pair();
    let scaled = approx * Complex64::new(lre, lim);
    let base_re = round_to_integer(scaled.re)?;
    let base_im = round_to_integer(scaled.im)?;
    let lc_inv = lc.inv().ok()?;
    for dre in [0i64, -1, 1] {
        for dim in [0i64, -1, 1] {
            let g = Scalar::new(
                BigRational::from_integer(&base_re + dre),
                BigRational::from_integer(&base_im + dim),
            );
            let candidate = &g * &lc_inv;
            if prim.eval(&candidate).is_zero() {
                return Some(candidate);
            }
        }
    }
    None
}

/// Roots of `p` in `Q(i)` with multiplicities. Returns the roots found and the
/// cofactor that has no further roots in `Q(i)` (constant when `p` splits).
pub fn gaussian_rational_roots(p: &UniPoly) -> (Vec<(Scalar, usize)>, UniPoly) {
    let mut remaining = p.monic();
    let mut found: Vec<(Scalar, usize)> = Vec::new();
    if remaining.degree().unwrap_or(0) == 0 {
        return (found, remaining);
    }
    let mut sqfree = remaining.square_free_part();
    // a few passes: deflation can sharpen later approximations
    for _ in 0..3 {
        let Some(deg) = sqfree.degree() else { break };
        if deg == 0 {
            break;
        }
        let approx = if deg == 1 {
            let c = &(-&sqfree.0[0]) * &sqfree.0[1].inv().expect("nonzero");
            let (re, im) = c.to_f64_pair();
            vec![Complex64::new(re, im)]
        } else {
            durand_kerner(&sqfree.to_complex())
        };
        let mut progress = false;
        for z in approx {
            if let Some(r) = certify_near(&sqfree, z) {
                if found.iter().any(|(f, _)| f == &r) {
                    continue;
                }
                sqfree = sqfree.deflate(&r);
                let mut mult = 0;
                while remaining.eval(&r).is_zero() {
                    remaining = remaining.deflate(&r);
                    mult += 1;
                }
                found.push((r, mult));
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    (found, remaining)
}

/// Characteristic polynomial `det(zI − A)` by the Faddeev–LeVerrier recursion.
pub fn characteristic_polynomial(a: &super::ExactMatrix) -> UniPoly {
    let n = a.rows();
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut m = super::ExactMatrix::zeros(n, n);
    let identity = super::ExactMatrix::identity(n);
    for k in 1..=n {
        m = &(a * &m) + &identity.scale(&coeffs[n - k + 1]);
        let am = a * &m;
        let t = am.trace();
        coeffs[n - k] = &(-&t) * &Scalar::from_ratio(1, k as i64);
    }
    UniPoly::new(coeffs)
}
