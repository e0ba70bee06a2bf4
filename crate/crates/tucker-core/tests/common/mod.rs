//! Shared test oracles, independent of the library's computation paths:
//! a cyclic Jacobi eigensolver, a partial-pivot Gaussian solver, and
//! enumeration-based unfold / mode-product evaluators straight from the
//! definitions.

#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use tucker_core::{DenseTensor, Matrix};

pub fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Matrix::from_fn(rows, cols, |_, _| StandardNormal.sample(&mut rng))
}

pub fn gaussian_tensor(dims: &[usize], seed: u64) -> DenseTensor {
    let len: usize = dims.iter().product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<f64> = (0..len).map(|_| StandardNormal.sample(&mut rng)).collect();
    DenseTensor::new(dims.to_vec(), data).unwrap()
}

/// Random orthogonal n x n matrix (Q factor of a Gaussian draw).
pub fn random_orthogonal(n: usize, seed: u64) -> Matrix {
    tucker_core::linalg::qf(&gaussian_matrix(n, n, seed))
        .unwrap()
        .q
}

pub fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
    a.sub(b).max_abs()
}

pub fn rel_fro_diff(a: &Matrix, b: &Matrix) -> f64 {
    a.sub(b).frobenius_norm() / b.frobenius_norm().max(f64::MIN_POSITIVE)
}

/// Frobenius distance between the projectors onto the column spans.
pub fn projector_distance(u: &Matrix, v: &Matrix) -> f64 {
    let pu = u.mul_nt(u);
    let pv = v.mul_nt(v);
    pu.sub(&pv).frobenius_norm()
}

/// Cyclic Jacobi eigensolver for symmetric matrices. Returns eigenvalues in
/// descending order with matching eigenvector columns. Test-only oracle.
pub fn jacobi_eig(a: &Matrix) -> (Vec<f64>, Matrix) {
    assert_eq!(a.rows(), a.cols());
    let n = a.rows();
    let mut s = a.sym_part();
    let mut v = Matrix::identity(n);
    let scale = s.frobenius_norm().max(f64::MIN_POSITIVE);

    for _sweep in 0..200 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += s.get(p, q) * s.get(p, q);
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = s.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let tau = (s.get(q, q) - s.get(p, p)) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * c;
                // S <- J^T S J with J the (p,q) rotation
                for k in 0..n {
                    let skp = s.get(k, p);
                    let skq = s.get(k, q);
                    s.set(k, p, c * skp - sn * skq);
                    s.set(k, q, sn * skp + c * skq);
                }
                for k in 0..n {
                    let spk = s.get(p, k);
                    let sqk = s.get(q, k);
                    s.set(p, k, c * spk - sn * sqk);
                    s.set(q, k, sn * spk + c * sqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - sn * vkq);
                    v.set(k, q, sn * vkp + c * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s.get(j, j).partial_cmp(&s.get(i, i)).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| s.get(i, i)).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (k, &src) in order.iter().enumerate() {
        vectors.col_mut(k).copy_from_slice(v.col(src));
    }
    (values, vectors)
}

/// Dense linear solve by Gaussian elimination with partial pivoting.
/// Test-only oracle.
pub fn gauss_solve(a: &Matrix, b: &[f64]) -> Vec<f64> {
    assert_eq!(a.rows(), a.cols());
    assert_eq!(a.rows(), b.len());
    let n = a.rows();
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j)).collect())
        .collect();
    let mut rhs = b.to_vec();

    for k in 0..n {
        let mut piv = k;
        for i in k + 1..n {
            if m[i][k].abs() > m[piv][k].abs() {
                piv = i;
            }
        }
        m.swap(k, piv);
        rhs.swap(k, piv);
        assert!(m[k][k].abs() > 1e-300, "singular system in test oracle");
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                m[i][j] -= f * m[k][j];
            }
            rhs[i] -= f * rhs[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        for j in i + 1..n {
            acc -= m[i][j] * x[j];
        }
        x[i] = acc / m[i][i];
    }
    x
}

/// Unfolding by direct enumeration of index tuples, straight from the
/// column-ordering rule (remaining indices vary with the lower-numbered
/// mode fastest).
pub fn brute_unfold(t: &DenseTensor, mode: usize) -> Matrix {
    let d = t.order();
    let dims = t.dims();
    let n_cols = t.len() / dims[mode];
    let mut m = Matrix::zeros(dims[mode], n_cols);
    let mut idx = vec![0usize; d];
    for _ in 0..t.len() {
        let mut col = 0;
        let mut stride = 1;
        for j in 0..d {
            if j == mode {
                continue;
            }
            col += idx[j] * stride;
            stride *= dims[j];
        }
        m.set(idx[mode], col, t.get(&idx));
        for j in 0..d {
            idx[j] += 1;
            if idx[j] < dims[j] {
                break;
            }
            idx[j] = 0;
        }
    }
    m
}

/// Mode product by direct evaluation of the definition's summation.
pub fn brute_mode_product(t: &DenseTensor, a: &Matrix, mode: usize) -> DenseTensor {
    let d = t.order();
    let mut out_dims = t.dims().to_vec();
    out_dims[mode] = a.rows();
    let out_len: usize = out_dims.iter().product();
    let mut data = vec![0.0; out_len];

    let mut idx = vec![0usize; d];
    for flat in 0..out_len {
        let mut acc = 0.0;
        let mut src_idx = idx.clone();
        for k in 0..t.dims()[mode] {
            src_idx[mode] = k;
            acc += t.get(&src_idx) * a.get(idx[mode], k);
        }
        data[flat] = acc;
        for j in 0..d {
            idx[j] += 1;
            if idx[j] < out_dims[j] {
                break;
            }
            idx[j] = 0;
        }
    }
    DenseTensor::new(out_dims, data).unwrap()
}
