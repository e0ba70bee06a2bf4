//! Dense tensors, matricization and mode products.
//!
//! A [`DenseTensor`] is a d-order array of `f64` with an explicit dimension
//! vector and a fixed linearization: the first index varies fastest, so the
//! element at (zero-based) indices `(k_1, .., k_d)` lives at offset
//! `sum_i k_i * prod_{j<i} n_j`. Under this layout `vec(X)` equals the
//! column-stacking of the mode-1 unfolding, which keeps unfold/fold and the
//! mode-product identity `(X x_i A)_(i) = A X_(i)` exactly consistent.
//!
//! Unfolding along mode `m` produces an `n_m x prod_{j != m} n_j` matrix
//! whose columns enumerate the remaining indices with the lower-numbered
//! mode varying fastest. `fold` is its exact inverse; the round trip is a
//! pure permutation copy and therefore bit-exact.
//!
//! All operations are pure and sequential with a fixed evaluation order, so
//! identical inputs give bit-identical outputs. Modes are zero-based
//! throughout the API.

use crate::error::{Result, TuckerError};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    dims: Vec<usize>,
    data: Vec<f64>,
}

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(TuckerError::InvalidArgument(
            "tensor must have at least one mode".into(),
        ));
    }
    if dims.contains(&0) {
        return Err(TuckerError::InvalidArgument(
            "tensor dimensions must be positive".into(),
        ));
    }
    Ok(dims.iter().product())
}

impl DenseTensor {
    /// Builds a tensor from its dimension vector and flat data in
    /// first-index-fastest order. Rejects empty/zero dims, length mismatch
    /// and non-finite entries.
    pub fn new(dims: Vec<usize>, data: Vec<f64>) -> Result<DenseTensor> {
        let len = check_dims(&dims)?;
        if data.len() != len {
            return Err(TuckerError::ShapeMismatch(format!(
                "tensor data length {} does not match dims {:?} (need {})",
                data.len(),
                dims,
                len
            )));
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(TuckerError::NonFinite("tensor entry".into()));
        }
        Ok(DenseTensor { dims, data })
    }

    pub fn zeros(dims: Vec<usize>) -> Result<DenseTensor> {
        let len = check_dims(&dims)?;
        Ok(DenseTensor {
            dims,
            data: vec![0.0; len],
        })
    }

    /// Internal constructor for results of arithmetic on already-validated
    /// tensors; skips the finiteness scan.
    pub(crate) fn from_parts(dims: Vec<usize>, data: Vec<f64>) -> DenseTensor {
        debug_assert_eq!(dims.iter().product::<usize>(), data.len());
        DenseTensor { dims, data }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.dims.len()
    }

    #[inline]
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false // dims are validated positive
    }

    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    /// Strides of the first-index-fastest layout.
    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1usize; self.dims.len()];
        for i in 1..self.dims.len() {
            s[i] = s[i - 1] * self.dims[i - 1];
        }
        s
    }

    /// Element access by zero-based multi-index (test and oracle helper; hot
    /// paths work on flat slices).
    pub fn get(&self, idx: &[usize]) -> f64 {
        debug_assert_eq!(idx.len(), self.dims.len());
        let mut off = 0;
        let mut stride = 1;
        for (k, &n) in idx.iter().zip(&self.dims) {
            debug_assert!(*k < n);
            off += k * stride;
            stride *= n;
        }
        self.data[off]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Euclidean inner product of two tensors with identical dims.
    pub fn inner(&self, other: &DenseTensor) -> Result<f64> {
        if self.dims != other.dims {
            return Err(TuckerError::ShapeMismatch(format!(
                "inner product needs identical dims, got {:?} and {:?}",
                self.dims, other.dims
            )));
        }
        Ok(self.data.iter().zip(&other.data).map(|(x, y)| x * y).sum())
    }

    /// Mode-`mode` matricization: rows are mode fibers, columns enumerate the
    /// remaining indices with the lower-numbered mode varying fastest.
    pub fn unfold(&self, mode: usize) -> Result<Matrix> {
        let d = self.order();
        if mode >= d {
            return Err(TuckerError::InvalidArgument(format!(
                "mode {} out of range for order-{} tensor",
                mode, d
            )));
        }
        let strides = self.strides();
        let n_mode = self.dims[mode];
        let stride_mode = strides[mode];
        let n_cols = self.len() / n_mode;
        let mut out = vec![0.0; self.len()];

        let mut idx = vec![0usize; d];
        let mut src_base = 0usize;
        for col in 0..n_cols {
            let dst = col * n_mode;
            let mut src = src_base;
            for k in 0..n_mode {
                out[dst + k] = self.data[src];
                src += stride_mode;
            }
            // Odometer over the modes other than `mode`, ascending.
            for j in 0..d {
                if j == mode {
                    continue;
                }
                idx[j] += 1;
                src_base += strides[j];
                if idx[j] < self.dims[j] {
                    break;
                }
                idx[j] = 0;
                src_base -= self.dims[j] * strides[j];
            }
        }
        Ok(Matrix::from_vec(n_mode, n_cols, out).expect("unfold produces consistent data"))
    }

    /// Inverse of [`DenseTensor::unfold`]; `fold(unfold(t, m), t.dims(), m)`
    /// reproduces `t` bit-exactly.
    pub fn fold(m: &Matrix, dims: &[usize], mode: usize) -> Result<DenseTensor> {
        let len = check_dims(dims)?;
        if mode >= dims.len() {
            return Err(TuckerError::InvalidArgument(format!(
                "mode {} out of range for order-{} tensor",
                mode,
                dims.len()
            )));
        }
        if m.rows() != dims[mode] || m.cols() != len / dims[mode] {
            return Err(TuckerError::ShapeMismatch(format!(
                "cannot fold {}x{} matrix into dims {:?} along mode {}",
                m.rows(),
                m.cols(),
                dims,
                mode
            )));
        }
        let d = dims.len();
        let mut strides = vec![1usize; d];
        for i in 1..d {
            strides[i] = strides[i - 1] * dims[i - 1];
        }
        let n_mode = dims[mode];
        let stride_mode = strides[mode];
        let n_cols = len / n_mode;
        let mdata = m.data();
        let mut out = vec![0.0; len];

        let mut idx = vec![0usize; d];
        let mut dst_base = 0usize;
        for col in 0..n_cols {
            let src = col * n_mode;
            let mut dst = dst_base;
            for k in 0..n_mode {
                out[dst] = mdata[src + k];
                dst += stride_mode;
            }
            for j in 0..d {
                if j == mode {
                    continue;
                }
                idx[j] += 1;
                dst_base += strides[j];
                if idx[j] < dims[j] {
                    break;
                }
                idx[j] = 0;
                dst_base -= dims[j] * strides[j];
            }
        }
        Ok(DenseTensor::from_parts(dims.to_vec(), out))
    }

    /// i-mode product `self x_mode a`, replacing dimension `mode` by
    /// `a.rows()`. Normative evaluation: unfold, multiply, fold.
    pub fn mode_product(&self, a: &Matrix, mode: usize) -> Result<DenseTensor> {
        self.mode_product_impl(a, mode, false)
    }

    /// i-mode product with the transposed factor, `self x_mode a^T`. Avoids
    /// materializing the transpose.
    pub fn mode_product_t(&self, a: &Matrix, mode: usize) -> Result<DenseTensor> {
        self.mode_product_impl(a, mode, true)
    }

    fn mode_product_impl(&self, a: &Matrix, mode: usize, transposed: bool) -> Result<DenseTensor> {
        let d = self.order();
        if mode >= d {
            return Err(TuckerError::InvalidArgument(format!(
                "mode {} out of range for order-{} tensor",
                mode, d
            )));
        }
        let (in_dim, out_dim) = if transposed {
            (a.rows(), a.cols())
        } else {
            (a.cols(), a.rows())
        };
        if in_dim != self.dims[mode] {
            return Err(TuckerError::ShapeMismatch(format!(
                "mode-{} product: factor contracts over {} but dim is {}",
                mode, in_dim, self.dims[mode]
            )));
        }
        let x = self.unfold(mode)?;
        let y = if transposed { a.mul_tn(&x) } else { a.mul(&x) };
        let mut new_dims = self.dims.clone();
        new_dims[mode] = out_dim;
        DenseTensor::fold(&y, &new_dims, mode)
    }

    /// Applies one factor per mode in ascending mode order, skipping
    /// `skip`. With `transposed` set, each factor `U_j` is applied as
    /// `U_j^T`. Ascending order is the normative result; products over
    /// distinct modes commute mathematically, the order only pins the
    /// floating-point rounding.
    pub fn multi_mode_product_except(
        &self,
        factors: &[Matrix],
        skip: usize,
        transposed: bool,
    ) -> Result<DenseTensor> {
        if skip >= self.order() {
            return Err(TuckerError::InvalidArgument(format!(
                "skip mode {} out of range for order-{} tensor",
                skip,
                self.order()
            )));
        }
        self.apply_factors(factors, Some(skip), transposed)
    }

    /// Applies one factor per mode in ascending mode order (no skip).
    pub fn multi_mode_product(&self, factors: &[Matrix], transposed: bool) -> Result<DenseTensor> {
        self.apply_factors(factors, None, transposed)
    }

    fn apply_factors(
        &self,
        factors: &[Matrix],
        skip: Option<usize>,
        transposed: bool,
    ) -> Result<DenseTensor> {
        let d = self.order();
        if factors.len() != d {
            return Err(TuckerError::ShapeMismatch(format!(
                "expected {} factors, got {}",
                d,
                factors.len()
            )));
        }
        let mut cur: Option<DenseTensor> = None;
        for (j, factor) in factors.iter().enumerate() {
            if skip == Some(j) {
                continue;
            }
            let next = match &cur {
                Some(t) => t.mode_product_impl(factor, j, transposed)?,
                None => self.mode_product_impl(factor, j, transposed)?,
            };
            cur = Some(next);
        }
        Ok(cur.unwrap_or_else(|| self.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tensor_1_to_8() -> DenseTensor {
        DenseTensor::new(vec![2, 2, 2], (1..=8).map(|v| v as f64).collect()).unwrap()
    }

    #[test]
    fn constructor_validation() {
        assert!(DenseTensor::new(vec![], vec![]).is_err());
        assert!(DenseTensor::new(vec![2, 0], vec![]).is_err());
        assert!(DenseTensor::new(vec![2, 2], vec![1.0; 3]).is_err());
        assert!(DenseTensor::new(vec![2], vec![f64::INFINITY, 0.0]).is_err());
    }

    #[test]
    fn unfold_mode0_of_1_to_8() {
        let t = tensor_1_to_8();
        let m = t.unfold(0).unwrap();
        // [[1,3,5,7],[2,4,6,8]]
        assert_eq!(m.rows(), 2);
        assert_eq!(m.cols(), 4);
        for (j, expect) in [[1.0, 2.0], [3.0, 4.0], [5.0, 6.0], [7.0, 8.0]]
            .iter()
            .enumerate()
        {
            assert_eq!(m.col(j), expect.as_slice());
        }
    }

    #[test]
    fn unfold_mode2_of_1_to_8() {
        let t = tensor_1_to_8();
        let m = t.unfold(2).unwrap();
        // [[1,2,3,4],[5,6,7,8]]
        assert_eq!((m.rows(), m.cols()), (2, 4));
        for j in 0..4 {
            assert_eq!(m.get(0, j), (j + 1) as f64);
            assert_eq!(m.get(1, j), (j + 5) as f64);
        }
    }

    #[test]
    fn matrix_unfolds_to_itself() {
        let t = DenseTensor::new(vec![3, 2], vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let m = t.unfold(0).unwrap();
        assert_eq!(m.data(), t.data());
        assert_eq!((m.rows(), m.cols()), (3, 2));
    }

    #[test]
    fn fold_unfold_roundtrip_bit_exact() {
        let t = tensor_1_to_8();
        for mode in 0..3 {
            let m = t.unfold(mode).unwrap();
            let back = DenseTensor::fold(&m, t.dims(), mode).unwrap();
            assert_eq!(back, t);
        }
    }

    #[test]
    fn fold_explicit_example() {
        let m = Matrix::from_vec(2, 4, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]).unwrap();
        let t = DenseTensor::fold(&m, &[2, 2, 2], 0).unwrap();
        let expect: Vec<f64> = (1..=8).map(|v| v as f64).collect();
        assert_eq!(t.data(), expect.as_slice());
    }

    #[test]
    fn fold_zero_matrix() {
        let m = Matrix::zeros(2, 4);
        let t = DenseTensor::fold(&m, &[2, 2, 2], 0).unwrap();
        assert!(t.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn fold_shape_mismatch() {
        let m = Matrix::zeros(2, 3);
        assert!(DenseTensor::fold(&m, &[2, 2, 2], 0).is_err());
    }

    #[test]
    fn mode_product_identity_and_zero() {
        let t = tensor_1_to_8();
        let id = Matrix::identity(2);
        let same = t.mode_product(&id, 1).unwrap();
        assert_eq!(same, t);

        let z = Matrix::zeros(3, 2);
        let zt = t.mode_product(&z, 0).unwrap();
        assert_eq!(zt.dims(), &[3, 2, 2]);
        assert!(zt.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn mode_product_row_sum_example() {
        let t = tensor_1_to_8();
        let ones = Matrix::from_vec(1, 2, vec![1.0, 1.0]).unwrap();
        let s = t.mode_product(&ones, 0).unwrap();
        assert_eq!(s.dims(), &[1, 2, 2]);
        assert_eq!(s.data(), &[3.0, 7.0, 11.0, 15.0]);
    }

    #[test]
    fn mode_product_rejects_mismatch() {
        let t = tensor_1_to_8();
        let bad = Matrix::zeros(2, 3);
        assert!(t.mode_product(&bad, 0).is_err());
        assert!(t.mode_product(&Matrix::identity(2), 5).is_err());
    }

    #[test]
    fn multi_mode_product_except_identities() {
        let t = tensor_1_to_8();
        let factors = vec![
            Matrix::identity(2),
            Matrix::identity(2),
            Matrix::identity(2),
        ];
        for skip in 0..3 {
            let r = t.multi_mode_product_except(&factors, skip, false).unwrap();
            assert_eq!(r, t);
        }
    }

    #[test]
    fn multi_mode_product_except_is_composition() {
        let t = tensor_1_to_8();
        let u1 = Matrix::from_fn(2, 2, |i, j| (i + j) as f64 * 0.5 + 1.0);
        let u3 = Matrix::from_fn(2, 2, |i, j| (2 * i + j) as f64 * 0.25 - 0.5);
        let factors = vec![u1.clone(), Matrix::identity(2), u3.clone()];
        let whole = t.multi_mode_product_except(&factors, 1, true).unwrap();
        let step = t
            .mode_product_t(&u1, 0)
            .unwrap()
            .mode_product_t(&u3, 2)
            .unwrap();
        assert_eq!(whole, step);
    }

    #[test]
    fn inner_requires_same_dims() {
        let t = tensor_1_to_8();
        let s = DenseTensor::zeros(vec![2, 4]).unwrap();
        assert!(t.inner(&s).is_err());
        assert_eq!(t.inner(&t).unwrap(), 204.0); // sum of squares of 1..8
    }

    #[test]
    fn norm_of_all_ones() {
        let t = DenseTensor::new(vec![2, 2, 2], vec![1.0; 8]).unwrap();
        assert!((t.frobenius_norm() - 8f64.sqrt()).abs() < 1e-15);
        assert_eq!(
            DenseTensor::zeros(vec![3, 3]).unwrap().frobenius_norm(),
            0.0
        );
    }
}
