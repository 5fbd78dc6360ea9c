//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Deterministic sweep order, no external dependencies. Iterates to machine
//! precision regardless of `eps_eig`, which only governs how results are
//! interpreted downstream.

use num_complex::Complex64;

use super::{CMatrix, Cplx, LinalgError};
use crate::config::ToleranceConfig;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues (ascending) with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermEig {
    pub eigenvalues: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermEig {
    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<Cplx> {
        let n = self.vectors.dim();
        (0..n).map(|i| self.vectors[(i, k)]).collect()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            acc += a[(p, q)].norm_sqr();
        }
    }
    (2.0 * acc).sqrt()
}

/// Diagonalizes a Hermitian matrix with cyclic complex Jacobi rotations.
///
/// Precondition: `‖H − H*‖ ≤ eps_herm · ‖H‖` (checked; see
/// [`LinalgError::NotHermitian`]). Postcondition: `H = Q Λ Q*` with `Q`
/// unitary and eigenvalues sorted ascending.
pub fn herm_eig(h: &CMatrix, cfg: &ToleranceConfig) -> Result<HermEig, LinalgError> {
    let scale = h.frobenius_norm();
    let defect = h.herm_defect();
    let tol = ToleranceConfig::tol(cfg.eps_herm, scale);
    if defect > tol {
        return Err(LinalgError::NotHermitian {
            defect: defect / scale.max(f64::MIN_POSITIVE),
            tol: cfg.eps_herm,
        });
    }
    Ok(herm_eig_unchecked(h))
}

/// Jacobi iteration without the Hermiticity gate; the input is symmetrized
/// first, so callers that construct Hermitian matrices use this directly.
pub(crate) fn herm_eig_unchecked(h: &CMatrix) -> HermEig {
    let n = h.dim();
    let mut a = h.hermitize();
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm();
    let stop = 1e-14 * scale.max(f64::MIN_POSITIVE);

    if n > 1 {
        for _sweep in 0..MAX_SWEEPS {
            if off_diagonal_norm(&a) <= stop {
                break;
            }
            for p in 0..n - 1 {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
        // Jacobi converges quadratically; the budget above is generous and in
        // practice five to ten sweeps suffice at these sizes. Leftover
        // off-diagonal mass is below the stop threshold or stuck at rounding
        // level, either of which the reconstruction bound tolerates.
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .re
            .partial_cmp(&a[(j, j)].re)
            .expect("diagonal entries are finite")
            .then(i.cmp(&j))
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    HermEig {
        eigenvalues,
        vectors,
    }
}

/// One complex Jacobi rotation annihilating the (p,q) entry.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let abs = apq.norm();
    if abs == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / abs;

    // Solve t^2 - 2 tau t - 1 = 0 for the root of smaller magnitude.
    let tau = (aqq - app) / (2.0 * abs);
    let t = if tau >= 0.0 {
        -1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let s_fwd = s * phase; // entry R[p][q] = -s_fwd is implied by the update below

    let n = a.dim();
    // A <- A R with R = [[c, -s e^{iφ}], [s e^{-iφ}, c]] on the (p,q) plane.
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp + s_fwd.conj() * akq;
        a[(k, q)] = -s_fwd * akp + c * akq;
    }
    // A <- R† A.
    for l in 0..n {
        let apl = a[(p, l)];
        let aql = a[(q, l)];
        a[(p, l)] = c * apl + s_fwd * aql;
        a[(q, l)] = -s_fwd.conj() * apl + c * aql;
    }
    // Keep the pivot pair exactly Hermitian.
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    // V <- V R accumulates the eigenvectors.
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp + s_fwd.conj() * vkq;
        v[(k, q)] = -s_fwd * vkp + c * vkq;
    }
}

/// Largest singular value, computed as `sqrt(λ_max(A*A))`.
pub fn op_norm(a: &CMatrix, _cfg: &ToleranceConfig) -> Result<f64, LinalgError> {
    let gram = a.adjoint().mul(a);
    let eig = herm_eig_unchecked(&gram);
    Ok(eig.max().max(0.0).sqrt())
}

/// True iff the minimum eigenvalue is at least `-eps_eig · ‖H‖`.
///
/// Precondition: `H` Hermitian within `eps_herm` (checked).
pub fn is_positive_semidefinite(h: &CMatrix, cfg: &ToleranceConfig) -> Result<bool, LinalgError> {
    let eig = herm_eig(h, cfg)?;
    let scale = h.frobenius_norm();
    Ok(eig.min() >= -ToleranceConfig::tol(cfg.eps_eig, scale))
}
