//! Dense column-major `f64` matrices.
//!
//! This is the only matrix representation in the crate. Storage is
//! column-major (entry `(i, j)` lives at `i + j*rows`), which matches the
//! first-index-fastest linearization of [`crate::tensor::DenseTensor`] and
//! LAPACK's expectations. All kernels run sequentially with a fixed loop
//! order, so results are bit-reproducible for identical inputs.

use crate::error::{Result, TuckerError};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Zero matrix. Panics if either dimension is zero; empty matrices are
    /// never meaningful here.
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Builds a matrix from column-major data, validating length and
    /// finiteness.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Matrix> {
        if rows == 0 || cols == 0 {
            return Err(TuckerError::InvalidArgument(
                "matrix dimensions must be positive".into(),
            ));
        }
        if data.len() != rows * cols {
            return Err(TuckerError::ShapeMismatch(format!(
                "matrix data length {} != {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(TuckerError::NonFinite("matrix entry".into()));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Fills column-major from a function of `(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Matrix {
        let mut m = Matrix::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m.data[i + j * rows] = f(i, j);
            }
        }
        m
    }

    pub fn identity(n: usize) -> Matrix {
        Matrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    /// Rectangular identity: ones on the main diagonal, zero elsewhere.
    pub fn eye(rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i + j * self.rows]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i + j * self.rows] = v;
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// `self * b`. Accumulates over `k` in ascending order, one column of the
    /// result at a time.
    pub fn mul(&self, b: &Matrix) -> Matrix {
        assert_eq!(self.cols, b.rows, "inner dimensions must agree");
        let mut c = Matrix::zeros(self.rows, b.cols);
        for j in 0..b.cols {
            let bj = b.col(j);
            let cj = c.col_mut(j);
            for (k, &s) in bj.iter().enumerate() {
                let ak = &self.data[k * self.rows..(k + 1) * self.rows];
                for (ci, &ai) in cj.iter_mut().zip(ak) {
                    *ci += ai * s;
                }
            }
        }
        c
    }

    /// `self^T * b`: every entry is a dot product of two contiguous columns.
    pub fn mul_tn(&self, b: &Matrix) -> Matrix {
        assert_eq!(self.rows, b.rows, "inner dimensions must agree");
        let mut c = Matrix::zeros(self.cols, b.cols);
        for j in 0..b.cols {
            let bj = b.col(j);
            let cj = c.col_mut(j);
            for (i, ci) in cj.iter_mut().enumerate() {
                let ai = &self.data[i * self.rows..(i + 1) * self.rows];
                let mut acc = 0.0;
                for (&x, &y) in ai.iter().zip(bj) {
                    acc += x * y;
                }
                *ci = acc;
            }
        }
        c
    }

    /// `self * b^T`.
    pub fn mul_nt(&self, b: &Matrix) -> Matrix {
        assert_eq!(self.cols, b.cols, "inner dimensions must agree");
        let mut c = Matrix::zeros(self.rows, b.rows);
        for k in 0..self.cols {
            let ak = &self.data[k * self.rows..(k + 1) * self.rows];
            for j in 0..b.rows {
                let s = b.get(j, k);
                let cj = &mut c.data[j * self.rows..(j + 1) * self.rows];
                for (ci, &ai) in cj.iter_mut().zip(ak) {
                    *ci += ai * s;
                }
            }
        }
        c
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// `self - b`.
    pub fn sub(&self, b: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (b.rows, b.cols));
        let mut c = self.clone();
        for (ci, bi) in c.data.iter_mut().zip(&b.data) {
            *ci -= bi;
        }
        c
    }

    /// `self + s * b`.
    pub fn add_scaled(&self, b: &Matrix, s: f64) -> Matrix {
        assert_eq!((self.rows, self.cols), (b.rows, b.cols));
        let mut c = self.clone();
        for (ci, bi) in c.data.iter_mut().zip(&b.data) {
            *ci += s * bi;
        }
        c
    }

    pub fn scale(&self, s: f64) -> Matrix {
        let mut c = self.clone();
        for v in c.data.iter_mut() {
            *v *= s;
        }
        c
    }

    /// Symmetric part `(self + self^T) / 2`.
    pub fn sym_part(&self) -> Matrix {
        assert_eq!(self.rows, self.cols, "sym_part needs a square matrix");
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            0.5 * (self.get(i, j) + self.get(j, i))
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn trace(&self) -> f64 {
        assert_eq!(self.rows, self.cols, "trace needs a square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Frobenius inner product `trace(self^T b)`.
    pub fn inner(&self, b: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (b.rows, b.cols));
        self.data.iter().zip(&b.data).map(|(x, y)| x * y).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Max-norm deviation of `self^T self` from the identity; small values
    /// mean the columns are orthonormal.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.mul_tn(self);
        let mut worst = 0.0f64;
        for j in 0..g.cols {
            for i in 0..g.rows {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g.get(i, j) - target).abs());
            }
        }
        worst
    }
}
