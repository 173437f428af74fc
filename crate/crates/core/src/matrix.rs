//! Dense square matrices over exact rationals.

use std::fmt;

use num_traits::{One, Zero};

use crate::form::Rational;

/// A square `n x n` matrix of exact rationals, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatMatrix {
    n: usize,
    entries: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("matrix must have at least one row")]
    Empty,
    #[error("row {row} has {found} entries, expected {expected}")]
    NotSquare { row: usize, expected: usize, found: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

impl RatMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Rational::one();
        }
        RatMatrix { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        let mut entries = Vec::with_capacity(n * n);
        for (row, values) in rows.into_iter().enumerate() {
            if values.len() != n {
                return Err(MatrixError::NotSquare { row, expected: n, found: values.len() });
            }
            entries.extend(values);
        }
        Ok(RatMatrix { n, entries })
    }

    /// Builds a matrix from `(numerator, denominator)` pairs, row-major.
    pub fn from_ratios(rows: &[&[(i64, i64)]]) -> Result<Self, MatrixError> {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&(p, q)| crate::rational(p, q)).collect())
                .collect(),
        )
    }

    /// Builds a matrix whose columns are the given points.
    pub fn from_columns(columns: &[Vec<Rational>]) -> Result<Self, MatrixError> {
        let n = columns.len();
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        for (j, c) in columns.iter().enumerate() {
            if c.len() != n {
                return Err(MatrixError::NotSquare { row: j, expected: n, found: c.len() });
            }
        }
        let rows = (0..n).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect();
        Self::from_rows(rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row * self.n + col]
    }

    pub fn row(&self, row: usize) -> &[Rational] {
        &self.entries[row * self.n..(row + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, col: usize) -> Vec<Rational> {
        (0..self.n).map(|i| self.get(i, col).clone()).collect()
    }

    pub fn column_sums(&self) -> Vec<Rational> {
        (0..self.n)
            .map(|j| (0..self.n).fold(Rational::zero(), |acc, i| acc + self.get(i, j)))
            .collect()
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix, MatrixError> {
        if self.n != other.n {
            return Err(MatrixError::DimensionMismatch { left: self.n, right: other.n });
        }
        let n = self.n;
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        entries[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(RatMatrix { n, entries })
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, MatrixError> {
        if v.len() != self.n {
            return Err(MatrixError::DimensionMismatch { left: self.n, right: v.len() });
        }
        Ok((0..self.n)
            .map(|i| self.row(i).iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
            .collect())
    }

    /// Exact determinant by Gaussian elimination.
    pub fn determinant(&self) -> Rational {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = Rational::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[r * n + k].is_zero()) else {
                return Rational::zero();
            };
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            let pivot = a[k * n + k].clone();
            det *= &pivot;
            for r in k + 1..n {
                if a[r * n + k].is_zero() {
                    continue;
                }
                let factor = &a[r * n + k] / &pivot;
                for j in k..n {
                    let delta = &factor * &a[k * n + j];
                    a[r * n + j] -= delta;
                }
            }
        }
        det
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
