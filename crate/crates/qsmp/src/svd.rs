//! SVD-derived quantities and PSD square roots via Jacobi iteration.
//!
//! Everything here targets dense matrices up to a few hundred rows, where
//! Jacobi methods are simple and numerically robust. Both solvers cap at
//! [`MAX_SWEEPS`] sweeps and report [`Error::ConvergenceFailure`] beyond it.

use crate::error::{Error, Result};
use crate::matrix::RealMatrix;

/// Iteration cap for both Jacobi solvers.
pub const MAX_SWEEPS: usize = 100;
/// Relative off-diagonal threshold at which a pair counts as orthogonal.
pub const JACOBI_REL_TOL: f64 = 1e-12;
/// Default relative tolerance for [`numeric_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-9;
/// Max asymmetry accepted by [`psd_sqrt`].
pub const PSD_SYMMETRY_TOL: f64 = 1e-9;
/// Most negative eigenvalue accepted by [`psd_sqrt`]; anything within
/// tolerance is clamped to zero.
pub const PSD_EIGEN_TOL: f64 = 1e-9;

/// Thin singular value decomposition `A = U diag(sigma) V^T`.
///
/// `sigma` is non-increasing and non-negative with `min(rows, cols)`
/// entries; `u` is `rows x k` and `v` is `cols x k` where `k = sigma.len()`.
/// Columns of `u` belonging to zero singular values are zero.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: RealMatrix,
    pub sigma: Vec<f64>,
    pub v: RealMatrix,
}

impl Svd {
    /// `U diag(sigma) V^T`, for residual checks.
    pub fn reconstruct(&self) -> RealMatrix {
        let k = self.sigma.len();
        RealMatrix::from_fn(self.u.rows(), self.v.rows(), |i, j| {
            (0..k).map(|t| self.u.get(i, t) * self.sigma[t] * self.v.get(j, t)).sum()
        })
    }
}

/// Full SVD of a dense real matrix by one-sided Jacobi.
pub fn svd(a: &RealMatrix) -> Result<Svd> {
    if a.rows() >= a.cols() {
        one_sided_jacobi(a)
    } else {
        // A = U S V^T  <=>  A^T = V S U^T
        let t = one_sided_jacobi(&a.transpose())?;
        Ok(Svd { u: t.v, sigma: t.sigma, v: t.u })
    }
}

/// Singular values in non-increasing order, length `min(rows, cols)`.
pub fn singular_values(a: &RealMatrix) -> Result<Vec<f64>> {
    Ok(svd(a)?.sigma)
}

/// Sum of singular values.
pub fn trace_norm(a: &RealMatrix) -> Result<f64> {
    Ok(singular_values(a)?.iter().sum())
}

/// Largest singular value (l2 operator norm).
pub fn operator_norm(a: &RealMatrix) -> Result<f64> {
    Ok(singular_values(a)?.first().copied().unwrap_or(0.0))
}

/// Count of singular values above `tol` times the largest one.
///
/// The zero matrix has rank 0. `tol` must be positive;
/// [`DEFAULT_RANK_TOL`] is the usual choice.
pub fn numeric_rank(a: &RealMatrix, tol: f64) -> Result<usize> {
    if tol <= 0.0 {
        return Err(Error::InvalidConfig(format!("rank tolerance must be positive, got {tol}")));
    }
    let sv = singular_values(a)?;
    let largest = sv.first().copied().unwrap_or(0.0);
    Ok(sv.iter().filter(|&&s| s > tol * largest && s > 0.0).count())
}

fn one_sided_jacobi(a: &RealMatrix) -> Result<Svd> {
    debug_assert!(a.rows() >= a.cols());
    let (m, n) = (a.rows(), a.cols());
    let mut w = a.clone();
    let mut v = RealMatrix::identity(n);
    // columns whose norm falls below eps * ||A||_F are numerically zero;
    // without this floor, rank-deficient columns decay into denormals and
    // the relative threshold below never fires
    let zero_floor = (f64::EPSILON * a.frobenius_norm()).powi(2);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = 0.0;
                for i in 0..m {
                    let (wp, wq) = (w.get(i, p), w.get(i, q));
                    app += wp * wp;
                    aqq += wq * wq;
                    apq += wp * wq;
                }
                if app <= zero_floor || aqq <= zero_floor {
                    continue;
                }
                if apq.abs() <= JACOBI_REL_TOL * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_columns(&mut w, p, q, c, s);
                rotate_columns(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure(MAX_SWEEPS));
    }

    // Column norms are the singular values; sort descending.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|j| w.column_norm_at(j)).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let largest = sigma.first().copied().unwrap_or(0.0);
    let u = RealMatrix::from_fn(m, n, |i, k| {
        let j = order[k];
        if norms[j] > largest * f64::EPSILON && norms[j] > 0.0 {
            w.get(i, j) / norms[j]
        } else {
            0.0
        }
    });
    let v_sorted = RealMatrix::from_fn(n, n, |i, k| v.get(i, order[k]));
    Ok(Svd { u, sigma, v: v_sorted })
}

fn rotate_columns(w: &mut RealMatrix, p: usize, q: usize, c: f64, s: f64) {
    for i in 0..w.rows() {
        let (wp, wq) = (w.get(i, p), w.get(i, q));
        w.set(i, p, c * wp - s * wq);
        w.set(i, q, s * wp + c * wq);
    }
}

/// Eigendecomposition of a symmetric matrix: `A = V diag(values) V^T`
/// with eigenvalues in non-increasing order.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: RealMatrix,
}

/// Cyclic Jacobi eigendecomposition. The input is symmetrized first; callers
/// that care about asymmetry must check it themselves.
pub fn symmetric_eigen(a: &RealMatrix) -> Result<SymmetricEigen> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    let mut m = RealMatrix::from_fn(n, n, |i, j| 0.5 * (a.get(i, j) + a.get(j, i)));
    let mut v = RealMatrix::identity(n);
    let frob = m.frobenius_norm();

    let mut converged = false;
    for _ in 0..=MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * m.get(p, q) * m.get(p, q);
            }
        }
        if off.sqrt() <= JACOBI_REL_TOL * frob || frob == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (m.get(p, p), m.get(q, q));
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // A <- J^T A J on rows/columns p, q
                for k in 0..n {
                    if k != p && k != q {
                        let (akp, akq) = (m.get(k, p), m.get(k, q));
                        m.set(k, p, c * akp - s * akq);
                        m.set(p, k, c * akp - s * akq);
                        m.set(k, q, s * akp + c * akq);
                        m.set(q, k, s * akp + c * akq);
                    }
                }
                m.set(p, p, app - t * apq);
                m.set(q, q, aqq + t * apq);
                m.set(p, q, 0.0);
                m.set(q, p, 0.0);
                rotate_columns(&mut v, p, q, c, s);
            }
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.get(j, j).partial_cmp(&m.get(i, i)).unwrap());
    let values: Vec<f64> = order.iter().map(|&j| m.get(j, j)).collect();
    let vectors = RealMatrix::from_fn(n, n, |i, k| v.get(i, order[k]));
    Ok(SymmetricEigen { values, vectors })
}

/// Symmetric PSD square root: returns `T = V sqrt(L) V^T` with `T^T T = G`.
///
/// Eigenvalues within [`PSD_EIGEN_TOL`] below zero are clamped to zero;
/// anything more negative is rejected as [`Error::NotPsd`]. Asymmetry beyond
/// [`PSD_SYMMETRY_TOL`] is rejected as [`Error::NotSymmetric`].
pub fn psd_sqrt(g: &RealMatrix) -> Result<RealMatrix> {
    if !g.is_square() {
        return Err(Error::NotSquare { rows: g.rows(), cols: g.cols() });
    }
    let asym = g.asymmetry();
    if asym > PSD_SYMMETRY_TOL {
        return Err(Error::NotSymmetric(asym));
    }
    let eig = symmetric_eigen(g)?;
    if let Some(&min) = eig.values.last() {
        if min < -PSD_EIGEN_TOL {
            return Err(Error::NotPsd(min));
        }
    }
    let roots: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let n = g.rows();
    let t = RealMatrix::from_fn(n, n, |i, j| {
        (0..n).map(|k| eig.vectors.get(i, k) * roots[k] * eig.vectors.get(j, k)).sum()
    });
    // Symmetrize away rounding noise; T is symmetric by construction.
    Ok(RealMatrix::from_fn(n, n, |i, j| 0.5 * (t.get(i, j) + t.get(j, i))))
}
