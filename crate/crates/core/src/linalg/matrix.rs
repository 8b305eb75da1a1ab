use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use super::LinalgError;
use crate::field::Scalar;
use crate::poly::Series;

/// Dense matrix over `Q(i)`, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn diagonal(values: &[Scalar]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(LinalgError::DimensionMismatch {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(ExactMatrix {
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect())
                .collect(),
        )
        .expect("rows of equal length")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(columns: &[Vec<Scalar>]) -> Self {
        let rows = columns.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn diagonal_entries(&self) -> Vec<Scalar> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .collect()
    }

    pub fn trace(&self) -> Scalar {
        self.diagonal_entries().into_iter().sum()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn checked_mul(&self, rhs: &ExactMatrix) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, exp: u32) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut acc = Self::identity(self.rows);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn mul_vector(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `A·v` for a vector of series; scalars act coefficientwise.
    pub fn mul_series(&self, v: &[Series]) -> Result<Vec<Series>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let nvars = v.first().map_or(0, Series::nvars);
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(Series::zero(nvars), |acc, (a, s)| &acc + &s.scale(a))
            })
            .collect())
    }

    fn require_square(&self) -> Result<(), LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<Scalar, LinalgError> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(Scalar::one());
        }
        let mut m = self.to_rows();
        let mut prev = Scalar::one();
        let mut negate = false;
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(p) => {
                        m.swap(k, p);
                        negate = !negate;
                    }
                    None => return Ok(Scalar::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = num.checked_div(&prev)?;
                }
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        Ok(if negate { -det } else { det })
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut m = self.to_rows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][c].inv().expect("pivot is nonzero");
            for v in m[r].iter_mut() {
                *v = &*v * &inv;
            }
            for i in 0..self.rows {
                if i != r && !m[i][c].is_zero() {
                    let factor = m[i][c].clone();
                    for j in c..self.cols {
                        let t = &factor * &m[r][j];
                        m[i][j] -= &t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let reduced = ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: m.concat(),
        };
        (reduced, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space. Each basis vector is returned with the
    /// index of its free variable, where it has entry 1.
    pub fn nullspace(&self) -> Vec<(usize, Vec<Scalar>)> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, free);
            }
            basis.push((free, v));
        }
        basis
    }

    pub fn inverse(&self) -> Result<ExactMatrix, LinalgError> {
        self.require_square()?;
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Scalar::one());
        }
        let (r, pivots) = aug.rref();
        let rank = pivots.iter().filter(|&&c| c < n).count();
        if rank < n {
            return Err(LinalgError::Singular { rank });
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    /// Solves `A·x = b` where the right-hand sides are series; the scalar
    /// system is solved once and applied coefficientwise.
    pub fn solve(&self, rhs: &[Series]) -> Result<Vec<Series>, LinalgError> {
        self.require_square()?;
        if rhs.len() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                found: rhs.len(),
            });
        }
        self.inverse()?.mul_series(rhs)
    }

    pub fn solve_vector(&self, rhs: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        self.require_square()?;
        if rhs.len() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                found: rhs.len(),
            });
        }
        Ok(self.inverse()?.mul_vector(rhs))
    }
}

impl<'a> Mul<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.checked_mul(rhs).expect("matrix dimension mismatch")
    }
}

impl<'a> Add<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl serde::Serialize for ExactMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}
