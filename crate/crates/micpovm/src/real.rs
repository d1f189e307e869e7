//! Real square matrices for Gram-matrix bookkeeping: explicit inversion
//! with partial pivoting and symmetric eigenvalues (through the complex
//! eigensolver on a zero-imaginary embedding).

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::hermitian::{eig_hermitian, ComplexMatrix, HermitianError, HermitianOperator};

/// Real square matrix, row-major.  Serializes as nested arrays of doubles.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        RealMatrix {
            dim,
            entries: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = RealMatrix::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let dim = rows.len();
        let mut m = RealMatrix::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "row {i} has wrong length");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.entries[i * self.dim + j] = value;
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn mul(&self, rhs: &RealMatrix) -> RealMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in mul");
        let d = self.dim;
        let mut out = RealMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out.set(i, j, out.get(i, j) + aik * rhs.get(k, j));
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &RealMatrix) -> RealMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a - b)
            .collect();
        RealMatrix { dim: self.dim, entries }
    }

    /// Gauss-Jordan inversion with partial pivoting.  Returns `None` when a
    /// pivot column is exactly zero or the result overflows; near-singular
    /// inputs are caught by the caller's condition-number gate instead.
    pub fn invert(&self) -> Option<RealMatrix> {
        let d = self.dim;
        let mut a = self.entries.clone();
        let mut inv = RealMatrix::identity(d);
        for col in 0..d {
            let mut pivot_row = col;
            let mut best = a[col * d + col].abs();
            for row in (col + 1)..d {
                let v = a[row * d + col].abs();
                if v > best {
                    best = v;
                    pivot_row = row;
                }
            }
            if best == 0.0 {
                return None;
            }
            if pivot_row != col {
                for j in 0..d {
                    a.swap(col * d + j, pivot_row * d + j);
                    inv.entries.swap(col * d + j, pivot_row * d + j);
                }
            }
            let pivot = a[col * d + col];
            for j in 0..d {
                a[col * d + j] /= pivot;
                inv.entries[col * d + j] /= pivot;
            }
            for row in 0..d {
                if row == col {
                    continue;
                }
                let factor = a[row * d + col];
                if factor == 0.0 {
                    continue;
                }
                for j in 0..d {
                    a[row * d + j] -= factor * a[col * d + j];
                    inv.entries[row * d + j] -= factor * inv.entries[col * d + j];
                }
            }
        }
        if inv.entries.iter().any(|v| !v.is_finite()) {
            return None;
        }
        Some(inv)
    }

    /// Eigenvalues (ascending) of a symmetric matrix, via the complex Jacobi
    /// solver on the symmetrized zero-imaginary embedding.
    pub fn symmetric_eigenvalues(&self) -> Result<Vec<f64>, HermitianError> {
        let d = self.dim;
        let mut m = ComplexMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                let sym = 0.5 * (self.get(i, j) + self.get(j, i));
                m.set(i, j, Complex64::new(sym, 0.0));
            }
        }
        let h = HermitianOperator::new(m)?;
        Ok(eig_hermitian(&h)?.eigenvalues)
    }
}

impl Serialize for RealMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<f64>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j)).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RealMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<f64>> = Vec::deserialize(deserializer)?;
        let dim = rows.len();
        if dim < 1 {
            return Err(D::Error::custom("matrix must have at least one row"));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(D::Error::custom(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    dim
                )));
            }
        }
        Ok(RealMatrix::from_rows(&rows))
    }
}
