//! Matrix factorizations: unique thin QR, symmetric eigendecomposition,
//! dominant subspaces and a small dense Lyapunov solver.
//!
//! The QR factorization is hand-rolled Householder with a final sign fix so
//! that `diag(R) > 0`; with a strictly positive diagonal the thin QR of a
//! full-column-rank matrix is unique, which makes `qf` usable as a
//! well-defined retraction representative.
//!
//! Symmetric eigendecompositions are delegated to LAPACK's `dsyevr` (linked
//! from the system OpenBLAS) and post-processed to a fixed convention:
//! eigenvalues sorted descending, and each eigenvector scaled so its
//! largest-magnitude entry (lowest row index on ties) is positive.
//! `dominant_subspace` deliberately forms the full n x n Gram matrix and runs
//! the dense solver on it; this is the straightforward cubic route and the
//! intended cost model for the orthogonal-iteration baselines.

use crate::error::{Result, TuckerError};
use crate::matrix::Matrix;

/// Relative tolerance (times the Frobenius norm of the input) under which an
/// R diagonal entry signals rank deficiency in [`qf`].
pub const RANK_TOL: f64 = 1e-12;

/// Relative tolerance (times `trace/r`) under which the smallest eigenvalue
/// of a metric matrix signals loss of positive definiteness.
pub const PD_TOL: f64 = 1e-12;

mod lapack {
    use std::ffi::c_char;

    extern "C" {
        /// LAPACK symmetric eigensolver (MRRR), Fortran calling convention.
        pub fn dsyevr_(
            jobz: *const c_char,
            range: *const c_char,
            uplo: *const c_char,
            n: *const i32,
            a: *mut f64,
            lda: *const i32,
            vl: *const f64,
            vu: *const f64,
            il: *const i32,
            iu: *const i32,
            abstol: *const f64,
            m: *mut i32,
            w: *mut f64,
            z: *mut f64,
            ldz: *const i32,
            isuppz: *mut i32,
            work: *mut f64,
            lwork: *const i32,
            iwork: *mut i32,
            liwork: *const i32,
            info: *mut i32,
        );
    }
}

/// Thin QR factors with `q` orthonormal (n x r) and `r` upper triangular
/// (r x r) with strictly positive diagonal.
#[derive(Debug, Clone)]
pub struct QrFactors {
    pub q: Matrix,
    pub r: Matrix,
}

/// Unique thin QR of an `n x r` matrix with `n >= r` and full column rank.
///
/// Returns [`TuckerError::RankDeficient`] when any reduced-column norm falls
/// to or below `RANK_TOL * ||m||_F`.
pub fn qf(m: &Matrix) -> Result<QrFactors> {
    let n = m.rows();
    let r = m.cols();
    if n < r {
        return Err(TuckerError::InvalidArgument(format!(
            "qf needs n >= r, got {}x{}",
            n, r
        )));
    }
    let scale = m.frobenius_norm();
    let tol = RANK_TOL * scale;

    // `a` holds R in its upper triangle as elimination proceeds; Householder
    // vectors are stored separately, normalized so v[0] = 1 is implicit.
    let mut a = m.clone();
    let mut reflectors: Vec<(Vec<f64>, f64)> = Vec::with_capacity(r);

    for k in 0..r {
        let mut v: Vec<f64> = a.col(k)[k..].to_vec();
        let norm_x = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm_x <= tol {
            return Err(TuckerError::RankDeficient(format!(
                "column {} has reduced norm {:.3e} <= {:.3e}",
                k, norm_x, tol
            )));
        }
        // alpha = -sign(x0) * ||x||, so v = x - alpha e1 never cancels.
        let alpha = if v[0] >= 0.0 { -norm_x } else { norm_x };
        v[0] -= alpha;
        let vtv = v.iter().map(|x| x * x).sum::<f64>();
        let beta = 2.0 / vtv;

        a.set(k, k, alpha);
        for i in k + 1..n {
            a.set(i, k, 0.0);
        }
        for j in k + 1..r {
            let col = a.col_mut(j);
            let mut dot = 0.0;
            for (vi, &ci) in v.iter().zip(&col[k..]) {
                dot += vi * ci;
            }
            let s = beta * dot;
            for (vi, ci) in v.iter().zip(&mut col[k..]) {
                *ci -= s * vi;
            }
        }
        reflectors.push((v, beta));
    }

    // Accumulate Q = H_0 ... H_{r-1} applied to the first r columns of I.
    let mut q = Matrix::eye(n, r);
    for k in (0..r).rev() {
        let (v, beta) = &reflectors[k];
        for j in 0..r {
            let col = q.col_mut(j);
            let mut dot = 0.0;
            for (vi, &ci) in v.iter().zip(&col[k..]) {
                dot += vi * ci;
            }
            let s = beta * dot;
            for (vi, ci) in v.iter().zip(&mut col[k..]) {
                *ci -= s * vi;
            }
        }
    }

    let mut rmat = Matrix::from_fn(r, r, |i, j| if i <= j { a.get(i, j) } else { 0.0 });
    for j in 0..r {
        if rmat.get(j, j) < 0.0 {
            for jj in j..r {
                let v = rmat.get(j, jj);
                rmat.set(j, jj, -v);
            }
            for v in q.col_mut(j) {
                *v = -*v;
            }
        }
    }
    Ok(QrFactors { q, r: rmat })
}

/// Eigendecomposition of a symmetric matrix: `values` sorted descending,
/// column k of `vectors` pairs with `values[k]`, and each vector carries the
/// deterministic sign convention described in the module docs.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

/// Flips the sign of each column so its largest-magnitude entry (lowest row
/// index on ties) is positive.
fn fix_column_signs(m: &mut Matrix) {
    for j in 0..m.cols() {
        let col = m.col_mut(j);
        let mut best = 0usize;
        let mut best_mag = -1.0f64;
        for (i, v) in col.iter().enumerate() {
            let mag = v.abs();
            if mag > best_mag {
                best_mag = mag;
                best = i;
            }
        }
        if col[best] < 0.0 {
            for v in col.iter_mut() {
                *v = -*v;
            }
        }
    }
}

/// Calls `dsyevr` on a symmetric matrix and returns the eigenpairs with
/// (1-based) index range `il..=iu` in ascending eigenvalue order.
fn dsyevr(a: &Matrix, il: usize, iu: usize) -> Result<(Vec<f64>, Matrix)> {
    let n = a.rows();
    debug_assert_eq!(n, a.cols());
    debug_assert!(il >= 1 && il <= iu && iu <= n);
    let want = iu - il + 1;

    let mut work_a = a.data().to_vec();
    let mut w = vec![0.0f64; n];
    let mut z = vec![0.0f64; n * want];
    let mut isuppz = vec![0i32; 2 * n.max(1)];
    let mut m_found: i32 = 0;
    let mut info: i32 = 0;

    let jobz = b'V' as std::ffi::c_char;
    let range = if want == n { b'A' } else { b'I' } as std::ffi::c_char;
    let uplo = b'L' as std::ffi::c_char;
    let n_i = n as i32;
    let lda = n as i32;
    let ldz = n as i32;
    let il_i = il as i32;
    let iu_i = iu as i32;
    let vl = 0.0f64;
    let vu = 0.0f64;
    let abstol = 0.0f64; // default tolerance

    // Workspace query, then the real call.
    let mut lwork: i32 = -1;
    let mut liwork: i32 = -1;
    let mut work_query = [0.0f64; 1];
    let mut iwork_query = [0i32; 1];
    unsafe {
        lapack::dsyevr_(
            &jobz,
            &range,
            &uplo,
            &n_i,
            work_a.as_mut_ptr(),
            &lda,
            &vl,
            &vu,
            &il_i,
            &iu_i,
            &abstol,
            &mut m_found,
            w.as_mut_ptr(),
            z.as_mut_ptr(),
            &ldz,
            isuppz.as_mut_ptr(),
            work_query.as_mut_ptr(),
            &lwork,
            iwork_query.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(TuckerError::EigenFailure(info));
    }
    lwork = work_query[0] as i32;
    liwork = iwork_query[0];
    let mut work = vec![0.0f64; lwork.max(1) as usize];
    let mut iwork = vec![0i32; liwork.max(1) as usize];
    unsafe {
        lapack::dsyevr_(
            &jobz,
            &range,
            &uplo,
            &n_i,
            work_a.as_mut_ptr(),
            &lda,
            &vl,
            &vu,
            &il_i,
            &iu_i,
            &abstol,
            &mut m_found,
            w.as_mut_ptr(),
            z.as_mut_ptr(),
            &ldz,
            isuppz.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(TuckerError::EigenFailure(info));
    }
    if (m_found as usize) != want {
        return Err(TuckerError::EigenFailure(m_found));
    }
    w.truncate(want);
    let vectors = Matrix::from_vec(n, want, z).map_err(|_| {
        TuckerError::NumericFailure("eigensolver returned non-finite vectors".into())
    })?;
    Ok((w, vectors))
}

/// Symmetric eigendecomposition. The input is symmetrized first (callers may
/// carry round-off asymmetry up to ~1e-10 relative).
pub fn sym_eig(s: &Matrix) -> Result<EigenDecomposition> {
    if s.rows() != s.cols() {
        return Err(TuckerError::ShapeMismatch(format!(
            "sym_eig needs a square matrix, got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    let n = s.rows();
    let sym = s.sym_part();
    let (w_asc, z_asc) = dsyevr(&sym, 1, n)?;

    let mut values = Vec::with_capacity(n);
    let mut vectors = Matrix::zeros(n, n);
    for k in 0..n {
        // descending order
        let src = n - 1 - k;
        values.push(w_asc[src]);
        vectors.col_mut(k).copy_from_slice(z_asc.col(src));
    }
    fix_column_signs(&mut vectors);
    Ok(EigenDecomposition { values, vectors })
}

/// Orthonormal basis of the dominant r-dimensional left subspace of `m`:
/// the top-r eigenvectors of `m m^T`, computed by a dense symmetric
/// eigendecomposition of the explicitly formed Gram matrix.
pub fn dominant_subspace(m: &Matrix, r: usize) -> Result<Matrix> {
    let n = m.rows();
    let l = m.cols();
    if r == 0 || r > n.min(l) {
        return Err(TuckerError::InvalidArgument(format!(
            "subspace rank {} out of range for a {}x{} matrix",
            r, n, l
        )));
    }
    // Gram is bit-symmetric by construction (C[i][j] and C[j][i] sum the
    // same products in the same order).
    let gram = m.mul_nt(m);
    let (w_asc, z_asc) = dsyevr(&gram, n - r + 1, n)?;
    let _ = w_asc;
    let mut u = Matrix::zeros(n, r);
    for k in 0..r {
        u.col_mut(k).copy_from_slice(z_asc.col(r - 1 - k));
    }
    fix_column_signs(&mut u);
    Ok(u)
}

/// Solves the Lyapunov equation `lam S + S lam = c` for symmetric `S`, with
/// `lam` symmetric positive definite and `c` symmetric.
///
/// Route: eigendecompose `lam = Q D Q^T`, divide the rotated right-hand side
/// entrywise by `d_i + d_j`, rotate back.
pub fn solve_lyapunov(lam: &Matrix, c: &Matrix) -> Result<Matrix> {
    if lam.rows() != lam.cols() || c.rows() != c.cols() || lam.rows() != c.rows() {
        return Err(TuckerError::ShapeMismatch(format!(
            "solve_lyapunov needs square matrices of equal size, got {}x{} and {}x{}",
            lam.rows(),
            lam.cols(),
            c.rows(),
            c.cols()
        )));
    }
    let r = lam.rows();
    let eig = sym_eig(lam)?;
    let trace: f64 = eig.values.iter().sum();
    let smallest = *eig.values.last().expect("r >= 1");
    if smallest <= PD_TOL * trace / r as f64 {
        return Err(TuckerError::NotPositiveDefinite(format!(
            "smallest eigenvalue {:.3e} vs tolerance {:.3e}",
            smallest,
            PD_TOL * trace / r as f64
        )));
    }
    let q = &eig.vectors;
    let c_rot = q.mul_tn(&c.sym_part().mul(q)).sym_part();
    let mut s_rot = Matrix::zeros(r, r);
    for j in 0..r {
        for i in 0..r {
            s_rot.set(i, j, c_rot.get(i, j) / (eig.values[i] + eig.values[j]));
        }
    }
    Ok(q.mul(&s_rot).mul_nt(q).sym_part())
}
