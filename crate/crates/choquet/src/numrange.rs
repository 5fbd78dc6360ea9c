//! Numerical range sweeps, the numerical radius, and the spectral
//! extreme-point criteria.
//!
//! The sweep evaluates, for each support direction `θ`, the Hermitian matrix
//! `H(θ) = (e^{-iθ} T + e^{iθ} T*)/2`; its top eigenpair gives the support
//! value and a boundary point `⟨Tx, x⟩`. The polygon of those points is an
//! inner approximation of W(T) that converges as the angle count grows.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::ToleranceConfig;
use crate::convex::{
    convex_hull, extreme_points_of_polygon, point_location, ConvexError, Location, Polygon2D,
};
use crate::linalg::{self, c64, CMatrix, Cplx, LinalgError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RangeError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Convex(#[from] ConvexError),
    #[error("the self-commutator T*T - TT* is not positive semidefinite; the spectral extreme-point criterion does not apply")]
    HyponormalityFails,
}

/// Polygonal approximation of the numerical range with its support data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericalRangeApprox {
    pub polygon: Polygon2D,
    /// Sweep angles in [0, 2π), equispaced.
    pub angles: Vec<f64>,
    /// `λ_max(H(θ))` per angle.
    pub support_values: Vec<f64>,
    /// Principal boundary point `⟨Tx, x⟩` per angle.
    #[serde(with = "crate::report::cplx_seq")]
    pub boundary_points: Vec<Cplx>,
    /// Extra boundary points recorded when the top eigenvalue is degenerate;
    /// flat boundary portions are exactly where one vector per angle
    /// under-covers the range.
    #[serde(with = "crate::report::cplx_seq")]
    pub extra_points: Vec<Cplx>,
    /// Numerical radius, refined beyond the grid.
    pub radius: f64,
    pub source_dim: usize,
}

/// `(e^{-iθ} T + e^{iθ} T*)/2`, Hermitian by construction.
fn rotated_real_part(t: &CMatrix, theta: f64) -> CMatrix {
    let w = c64(theta.cos(), -theta.sin());
    let wbar = w.conj();
    CMatrix::from_fn(t.dim(), |i, j| {
        (w * t[(i, j)] + wbar * t[(j, i)].conj()) * 0.5
    })
}

struct SupportSample {
    support: f64,
    point: Cplx,
    /// Boundary points of every eigenvector tied with the top eigenvalue.
    tied: Vec<Cplx>,
}

fn support_sample(t: &CMatrix, theta: f64, cfg: &ToleranceConfig) -> SupportSample {
    let h = rotated_real_part(t, theta);
    let eig = linalg::herm_eig(&h, cfg).expect("H(theta) is Hermitian by construction");
    let n = t.dim();
    let top = eig.max();
    let scale = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let tie_tol = ToleranceConfig::tol(cfg.eps_eig, scale);
    let point = t.rayleigh(&eig.vector(n - 1));
    let mut tied = Vec::new();
    for k in (0..n.saturating_sub(1)).rev() {
        if top - eig.eigenvalues[k] > tie_tol {
            break;
        }
        tied.push(t.rayleigh(&eig.vector(k)));
    }
    SupportSample {
        support: top,
        point,
        tied,
    }
}

/// Support value and boundary point at a single direction.
pub(crate) fn support_at(t: &CMatrix, theta: f64, cfg: &ToleranceConfig) -> (f64, Cplx) {
    let s = support_sample(t, theta, cfg);
    (s.support, s.point)
}

/// Golden-section maximization returning the best abscissa and value seen.
pub(crate) fn golden_max_arg(
    mut f: impl FnMut(f64) -> f64,
    mut a: f64,
    mut b: f64,
    iters: usize,
) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let (mut xbest, mut fbest) = if fc >= fd { (c, fc) } else { (d, fd) };
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
        if fc > fbest {
            fbest = fc;
            xbest = c;
        }
        if fd > fbest {
            fbest = fd;
            xbest = d;
        }
    }
    (xbest, fbest)
}

fn golden_max(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut best = fc.max(fd);
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
        best = best.max(fc.max(fd));
    }
    best
}

/// Sweeps `angle_count` equispaced support directions and assembles the
/// polygon, support data and refined numerical radius.
pub fn numrange_sweep(t: &CMatrix, cfg: &ToleranceConfig) -> Result<NumericalRangeApprox, RangeError> {
    let n = t.dim();
    let count = cfg.angle_count as usize;
    let mut angles = Vec::with_capacity(count);
    let mut support_values = Vec::with_capacity(count);
    let mut boundary_points = Vec::with_capacity(count);
    let mut extra_points = Vec::new();

    for k in 0..count {
        let theta = 2.0 * PI * k as f64 / count as f64;
        let s = support_sample(t, theta, cfg);
        angles.push(theta);
        support_values.push(s.support);
        boundary_points.push(s.point);
        extra_points.extend(s.tied);
    }

    let mut all_points = boundary_points.clone();
    all_points.extend(extra_points.iter().copied());
    let polygon = convex_hull(&all_points, cfg)?;

    let radius = refine_radius(t, cfg, &angles, &boundary_points);

    Ok(NumericalRangeApprox {
        polygon,
        angles,
        support_values,
        boundary_points,
        extra_points,
        radius,
        source_dim: n,
    })
}

/// Golden-section refinement of `|⟨Tx(θ), x(θ)⟩|` around the best grid angle.
fn refine_radius(t: &CMatrix, cfg: &ToleranceConfig, angles: &[f64], points: &[Cplx]) -> f64 {
    let moduli: Vec<f64> = points.iter().map(|p| p.norm()).collect();
    let mut best_k = 0usize;
    for (k, &m) in moduli.iter().enumerate() {
        if m > moduli[best_k] {
            best_k = k;
        }
    }
    let grid_max = moduli[best_k];
    let grid_min = moduli.iter().cloned().fold(f64::INFINITY, f64::min);
    // Constant profile (discs, single points): the grid already attains the
    // radius, skip refinement.
    if grid_max - grid_min <= 1e-13 * grid_max.max(1.0) {
        return grid_max;
    }
    let step = 2.0 * PI / angles.len() as f64;
    let refined = golden_max(
        |theta| support_sample(t, theta, cfg).point.norm(),
        angles[best_k] - step,
        angles[best_k] + step,
        60,
    );
    refined.max(grid_max)
}

/// Numerical radius: the grid maximum of `|⟨Tx, x⟩|` refined by
/// golden-section search near the maximizing angle.
pub fn numerical_radius(t: &CMatrix, cfg: &ToleranceConfig) -> Result<f64, RangeError> {
    let count = cfg.angle_count as usize;
    let mut angles = Vec::with_capacity(count);
    let mut points = Vec::with_capacity(count);
    for k in 0..count {
        let theta = 2.0 * PI * k as f64 / count as f64;
        angles.push(theta);
        points.push(support_sample(t, theta, cfg).point);
    }
    Ok(refine_radius(t, cfg, &angles, &points))
}

/// True iff `λ` lies on the boundary band of the sweep polygon and matches
/// one of its extreme points within the hull tolerance. This is an
/// approximation at `eps_hull` resolution near boundary flats.
pub fn is_extreme_point_of_range(
    lambda: Cplx,
    t: &CMatrix,
    cfg: &ToleranceConfig,
) -> Result<bool, RangeError> {
    let nr = numrange_sweep(t, cfg)?;
    Ok(is_extreme_against(lambda, &nr.polygon, cfg))
}

pub(crate) fn is_extreme_against(lambda: Cplx, polygon: &Polygon2D, cfg: &ToleranceConfig) -> bool {
    if point_location(lambda, polygon, cfg) != Location::OnBoundary {
        return false;
    }
    let band = ToleranceConfig::tol(cfg.eps_hull, polygon.scale());
    extreme_points_of_polygon(polygon, cfg)
        .iter()
        .any(|v| (v - lambda).norm() <= band)
}

/// Spectral points that are extreme points of the numerical range, each a
/// certified one-dimensional boundary-representation character.
///
/// Requires the positivity gate `T*T - TT* ≥ 0`; without it the criterion's
/// hypothesis fails and the output would not be certified.
pub fn spectral_extreme_boundary_points(
    t: &CMatrix,
    cfg: &ToleranceConfig,
) -> Result<Vec<Cplx>, RangeError> {
    let comm = linalg::self_commutator(t);
    if !linalg::is_positive_semidefinite(&comm, cfg)? {
        return Err(RangeError::HyponormalityFails);
    }
    let eigs = linalg::eigenvalues(t, cfg)?;
    let nr = numrange_sweep(t, cfg)?;
    let scale = nr.polygon.scale();
    let dedupe_tol = ToleranceConfig::tol(cfg.eps_eig, scale);
    let mut out: Vec<Cplx> = Vec::new();
    for lam in eigs {
        if out.iter().any(|p| (p - lam).norm() <= dedupe_tol) {
            continue;
        }
        if is_extreme_against(lam, &nr.polygon, cfg) {
            out.push(lam);
        }
    }
    Ok(out)
}
