//! Stiefel/Grassmann geometry: tangent projections under the Euclidean and
//! the preconditioned metric, the least-squares multiplier estimate that
//! defines the metric, the QR retraction, and the gradients used by the
//! coordinate-descent drivers.
//!
//! A [`StiefelPoint`] is an `n x r` matrix with orthonormal columns; it also
//! stands in for the subspace it spans (the quotient class under right
//! orthogonal rotation), since every cost evaluated here depends on the
//! subspace only.
//!
//! The preconditioned metric at `U` is `<xi, eta>_U = trace(xi^T eta lam)`
//! with `lam = (U^T Y)(U^T Y)^T`. Under it the orthogonal projection of an
//! ambient `Z` onto the tangent space is `Z - U S lam^{-1}` where `S` solves
//! the Lyapunov equation `lam S + S lam = lam (U^T Z + Z^T U) lam`.

use crate::error::{Result, TuckerError};
use crate::linalg::{qf, solve_lyapunov, sym_eig, PD_TOL};
use crate::matrix::Matrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Max-norm drift of `U^T U` from the identity beyond which a factor is
/// re-orthonormalized.
pub const ORTHO_DRIFT_TOL: f64 = 1e-10;

/// An `n x r` matrix with orthonormal columns.
#[derive(Debug, Clone)]
pub struct StiefelPoint {
    u: Matrix,
}

impl StiefelPoint {
    /// Wraps a matrix after checking the orthonormality invariant.
    pub fn new(u: Matrix) -> Result<StiefelPoint> {
        if u.rows() < u.cols() {
            return Err(TuckerError::InvalidArgument(format!(
                "Stiefel point needs n >= r, got {}x{}",
                u.rows(),
                u.cols()
            )));
        }
        if u.orthonormality_defect() > ORTHO_DRIFT_TOL {
            return Err(TuckerError::InvalidArgument(
                "matrix columns are not orthonormal within tolerance".into(),
            ));
        }
        Ok(StiefelPoint { u })
    }

    /// Orthonormalizes an arbitrary full-column-rank matrix via its Q factor.
    pub fn orthonormalized(m: &Matrix) -> Result<StiefelPoint> {
        Ok(StiefelPoint { u: qf(m)?.q })
    }

    /// Accepts the output of a retraction. Retractions land on the manifold
    /// up to round-off; if accumulated drift ever exceeds the tolerance the
    /// point is re-orthonormalized through `qf`.
    fn from_retraction(q: Matrix) -> Result<StiefelPoint> {
        if q.orthonormality_defect() > ORTHO_DRIFT_TOL {
            return StiefelPoint::orthonormalized(&q);
        }
        Ok(StiefelPoint { u: q })
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix {
        &self.u
    }

    pub fn into_matrix(self) -> Matrix {
        self.u
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.u.rows()
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.u.cols()
    }
}

/// First `r` columns of the `n x n` identity.
pub fn eye_stiefel(n: usize, r: usize) -> Result<StiefelPoint> {
    if r == 0 || r > n {
        return Err(TuckerError::InvalidArgument(format!(
            "eye_stiefel needs 1 <= r <= n, got n={} r={}",
            n, r
        )));
    }
    Ok(StiefelPoint {
        u: Matrix::eye(n, r),
    })
}

/// Q factor of an `n x r` matrix of independent standard normal variates
/// drawn from a ChaCha8 generator seeded with `seed` (column-major fill,
/// ziggurat normal transform). Deterministic for a fixed seed.
pub fn random_stiefel(n: usize, r: usize, seed: u64) -> Result<StiefelPoint> {
    if r == 0 || r > n {
        return Err(TuckerError::InvalidArgument(format!(
            "random_stiefel needs 1 <= r <= n, got n={} r={}",
            n, r
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Vec::with_capacity(n * r);
    for _ in 0..n * r {
        let v: f64 = StandardNormal.sample(&mut rng);
        data.push(v);
    }
    let g = Matrix::from_vec(n, r, data).expect("gaussian fill is finite");
    StiefelPoint::orthonormalized(&g)
}

fn check_ambient(u: &StiefelPoint, z: &Matrix, what: &str) -> Result<()> {
    if z.rows() != u.n() || z.cols() != u.r() {
        return Err(TuckerError::ShapeMismatch(format!(
            "{}: expected {}x{}, got {}x{}",
            what,
            u.n(),
            u.r(),
            z.rows(),
            z.cols()
        )));
    }
    Ok(())
}

/// Euclidean-metric tangent projection `Z - U sym(U^T Z)`.
pub fn proj_tangent_euclid(u: &StiefelPoint, z: &Matrix) -> Result<Matrix> {
    check_ambient(u, z, "proj_tangent_euclid")?;
    let a = u.matrix().mul_tn(z).sym_part();
    Ok(z.sub(&u.matrix().mul(&a)))
}

/// Preconditioned metric state: the symmetric positive semidefinite matrix
/// `lam = (U^T Y)(U^T Y)^T`.
#[derive(Debug, Clone)]
pub struct MetricState {
    lam: Matrix,
}

impl MetricState {
    /// Wraps an externally built metric matrix; it must be square and
    /// symmetric to round-off.
    pub fn new(lam: Matrix) -> Result<MetricState> {
        if lam.rows() != lam.cols() {
            return Err(TuckerError::ShapeMismatch(
                "metric matrix must be square".into(),
            ));
        }
        let asym = lam.sub(&lam.transpose()).max_abs();
        if asym > 1e-12 * lam.max_abs().max(1.0) {
            return Err(TuckerError::InvalidArgument(
                "metric matrix must be symmetric".into(),
            ));
        }
        Ok(MetricState { lam })
    }

    #[inline]
    pub fn lam(&self) -> &Matrix {
        &self.lam
    }
}

/// Least-squares multiplier estimate `lam = (U^T Y)(U^T Y)^T`, evaluated
/// through the r x L product; the n x n Gram of `Y` is never formed.
pub fn lambda_of(u: &StiefelPoint, y: &Matrix) -> Result<MetricState> {
    if y.rows() != u.n() {
        return Err(TuckerError::ShapeMismatch(format!(
            "lambda_of: row count {} != {}",
            y.rows(),
            u.n()
        )));
    }
    let w = u.matrix().mul_tn(y); // r x L
    Ok(MetricState { lam: w.mul_nt(&w) })
}

/// Inner product `trace(xi^T eta lam)` of the preconditioned metric.
pub fn metric_inner(xi: &Matrix, eta: &Matrix, lam: &MetricState) -> Result<f64> {
    if xi.rows() != eta.rows() || xi.cols() != eta.cols() {
        return Err(TuckerError::ShapeMismatch(
            "metric_inner operands must have equal shape".into(),
        ));
    }
    if lam.lam().rows() != xi.cols() {
        return Err(TuckerError::ShapeMismatch(
            "metric matrix size must match tangent columns".into(),
        ));
    }
    Ok(xi.inner(&eta.mul(lam.lam())))
}

/// Tangent projection in the preconditioned metric:
/// `Z - U S lam^{-1}` with `lam S + S lam = lam (U^T Z + Z^T U) lam`.
pub fn proj_tangent_precond(u: &StiefelPoint, z: &Matrix, lam: &MetricState) -> Result<Matrix> {
    check_ambient(u, z, "proj_tangent_precond")?;
    let l = lam.lam();
    if l.rows() != u.r() {
        return Err(TuckerError::ShapeMismatch(
            "metric matrix size must match factor rank".into(),
        ));
    }
    let m = u.matrix().mul_tn(z);
    let m_sym = m.add_scaled(&z.mul_tn(u.matrix()), 1.0); // U^T Z + Z^T U
    let rhs = l.mul(&m_sym).mul(l);
    let s = solve_lyapunov(l, &rhs)?;
    let s_lam_inv = apply_inverse_right(&s, l, false)?;
    Ok(z.sub(&u.matrix().mul(&s_lam_inv)))
}

/// Computes `a * lam^{-1}` through the eigendecomposition of `lam`.
///
/// With `clamp` set, eigenvalue components at or below the positive
/// definiteness tolerance are dropped (pseudo-inverse behavior) instead of
/// failing; diagnostics use this form.
fn apply_inverse_right(a: &Matrix, lam: &Matrix, clamp: bool) -> Result<Matrix> {
    let r = lam.rows();
    let eig = sym_eig(lam)?;
    let trace: f64 = eig.values.iter().sum();
    let tol = PD_TOL * trace / r as f64;
    let q = &eig.vectors;
    let mut aq = a.mul(q);
    for (k, &d) in eig.values.iter().enumerate() {
        if d > tol {
            let inv = 1.0 / d;
            for v in aq.col_mut(k) {
                *v *= inv;
            }
        } else if clamp {
            for v in aq.col_mut(k) {
                *v = 0.0;
            }
        } else {
            return Err(TuckerError::NotPositiveDefinite(format!(
                "metric eigenvalue {:.3e} at or below tolerance {:.3e}",
                d, tol
            )));
        }
    }
    Ok(aq.mul_nt(q))
}

/// Riemannian gradient of `-1/2 ||U^T Y||_F^2` under the preconditioned
/// metric, in the literal coordinate-descent form `G + U` with
/// `G = -Y (Y^T U)`. Evaluated as two thin products; the n x n Gram of `Y`
/// is never materialized.
pub fn precond_grad(u: &StiefelPoint, y: &Matrix) -> Result<Matrix> {
    if y.rows() != u.n() {
        return Err(TuckerError::ShapeMismatch(format!(
            "precond_grad: row count {} != {}",
            y.rows(),
            u.n()
        )));
    }
    let w = y.mul_tn(u.matrix()); // L x r
    let g = y.mul(&w); // Y (Y^T U)
    Ok(u.matrix().sub(&g))
}

/// Metric-consistent form of the preconditioned Riemannian gradient,
/// `G lam^{-1} + U`. This is the horizontal field that vanishes at
/// stationary subspaces; it is exposed behind a configuration switch and as
/// a convergence diagnostic.
pub fn metric_grad(u: &StiefelPoint, y: &Matrix) -> Result<Matrix> {
    metric_grad_impl(u, y, false)
}

pub(crate) fn metric_grad_clamped(u: &StiefelPoint, y: &Matrix) -> Result<Matrix> {
    metric_grad_impl(u, y, true)
}

fn metric_grad_impl(u: &StiefelPoint, y: &Matrix, clamp: bool) -> Result<Matrix> {
    if y.rows() != u.n() {
        return Err(TuckerError::ShapeMismatch(format!(
            "metric_grad: row count {} != {}",
            y.rows(),
            u.n()
        )));
    }
    let w = u.matrix().mul_tn(y); // r x L
    let lam = w.mul_nt(&w);
    let g = y.mul(&w.transpose()).scale(-1.0); // -Y (Y^T U)
    let g_lam_inv = apply_inverse_right(&g, &lam, clamp)?;
    Ok(g_lam_inv.add_scaled(u.matrix(), 1.0))
}

/// Riemannian gradient of `-1/2 ||U^T Y||_F^2` under the Euclidean metric:
/// `-(I - U U^T) Y (Y^T U)`, evaluated as `w = Y (Y^T U)` followed by
/// `U (U^T w) - w`.
pub fn euclid_reduced_grad(u: &StiefelPoint, y: &Matrix) -> Result<Matrix> {
    if y.rows() != u.n() {
        return Err(TuckerError::ShapeMismatch(format!(
            "euclid_reduced_grad: row count {} != {}",
            y.rows(),
            u.n()
        )));
    }
    let w = y.mul(&y.mul_tn(u.matrix())); // Y (Y^T U)
    let utw = u.matrix().mul_tn(&w);
    Ok(u.matrix().mul(&utw).sub(&w))
}

/// QR retraction `qf(U - alpha * xi).Q`. The descent drivers call this with
/// `xi` equal to the Riemannian gradient, so the move is against `xi`.
pub fn retract_qr(u: &StiefelPoint, xi: &Matrix, alpha: f64) -> Result<StiefelPoint> {
    check_ambient(u, xi, "retract_qr")?;
    let target = u.matrix().add_scaled(xi, -alpha);
    let f = qf(&target)?;
    StiefelPoint::from_retraction(f.q)
}
