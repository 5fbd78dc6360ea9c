//! Periodic weighted shifts at the symbol level: the p×p symbol matrices
//! Ω_λ, numerical checks for the facts the circle-of-matrices verdict rests
//! on, and finite truncations of the shift itself.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{EnvelopeShape, EnvelopeVerdict, ShilovDescription};
use crate::config::ToleranceConfig;
use crate::convex::{self, convex_hull, ConvexError};
use crate::linalg::{c64, CMatrix, Cplx};
use crate::numrange::{self, RangeError};

/// λ-grid used by the envelope verdict's constancy evidence.
pub const DEFAULT_LAMBDA_GRID: usize = 360;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShiftError {
    #[error("weight list must be nonempty")]
    EmptyWeights,
    #[error("weight {index} is {value}; weights must be strictly positive")]
    NonpositiveWeight { index: usize, value: f64 },
    #[error("symbol parameter has modulus {modulus}; it must be unimodular")]
    NotUnimodular { modulus: f64 },
    #[error("λ-grid of {grid} is too small; at least 8 points are required")]
    GridTooSmall { grid: usize },
    #[error("expected {expected} extreme points on the critical circle, found {found}: {detail}")]
    CountMismatch {
        expected: usize,
        found: usize,
        detail: String,
    },
    #[error(transparent)]
    Range(#[from] RangeError),
    #[error(transparent)]
    Convex(#[from] ConvexError),
}

/// One period of a periodic weight sequence in canonical form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicShiftSpec {
    /// Weights of one smallest period, w_1..w_p.
    pub weights: Vec<f64>,
    /// Smallest period.
    pub p: usize,
    /// True iff some weight appears exactly once within a period.
    pub distinct: bool,
    /// Primitive p-th root of unity e^{2πi/p}.
    #[serde(with = "crate::report::cplx_pair")]
    pub omega: Cplx,
}

/// The p×p symbol of the shift at a point of the circle: subdiagonal
/// w_1..w_{p-1} and corner entry w_p·λ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolMatrix {
    #[serde(with = "crate::report::cplx_pair")]
    pub lambda: Cplx,
    pub matrix: CMatrix,
}

fn check_weights(raw_weights: &[f64]) -> Result<(), ShiftError> {
    if raw_weights.is_empty() {
        return Err(ShiftError::EmptyWeights);
    }
    for (index, &w) in raw_weights.iter().enumerate() {
        if !(w > 0.0) || !w.is_finite() {
            return Err(ShiftError::NonpositiveWeight { index, value: w });
        }
    }
    Ok(())
}

fn build_spec(weights: Vec<f64>) -> PeriodicShiftSpec {
    let p = weights.len();
    let distinct = weights
        .iter()
        .any(|w| weights.iter().filter(|v| *v == w).count() == 1);
    let angle = 2.0 * PI / p as f64;
    PeriodicShiftSpec {
        weights,
        p,
        distinct,
        omega: c64(angle.cos(), angle.sin()),
    }
}

/// Folds a raw weight list to its smallest period and records whether the
/// distinctness hypothesis holds. Period detection uses exact equality: the
/// weights are input literals, not computed quantities.
pub fn normalize_spec(raw_weights: &[f64]) -> Result<PeriodicShiftSpec, ShiftError> {
    check_weights(raw_weights)?;
    let len = raw_weights.len();
    let mut p = len;
    for d in 1..len {
        if len % d != 0 {
            continue;
        }
        if (0..len).all(|i| raw_weights[i] == raw_weights[i % d]) {
            p = d;
            break;
        }
    }
    Ok(build_spec(raw_weights[..p].to_vec()))
}

impl PeriodicShiftSpec {
    /// Treats the whole weight list as one period without folding it down.
    /// The symbol-level checks are meaningful for any chosen presentation;
    /// the envelope verdict itself requires the canonical minimal one.
    pub fn from_presentation(weights: &[f64]) -> Result<PeriodicShiftSpec, ShiftError> {
        check_weights(weights)?;
        Ok(build_spec(weights.to_vec()))
    }
}

/// Builds the symbol matrix Ω_λ; for p = 1 this is the 1×1 matrix [w_1 λ].
pub fn periodic_symbol(spec: &PeriodicShiftSpec, lambda: Cplx) -> Result<SymbolMatrix, ShiftError> {
    let modulus = lambda.norm();
    if (modulus - 1.0).abs() > 1e-12 {
        return Err(ShiftError::NotUnimodular { modulus });
    }
    let p = spec.p;
    let mut m = CMatrix::zeros(p);
    if p == 1 {
        m[(0, 0)] = lambda * spec.weights[0];
    } else {
        for i in 0..p - 1 {
            m[(i + 1, i)] = c64(spec.weights[i], 0.0);
        }
        m[(0, p - 1)] = lambda * spec.weights[p - 1];
    }
    Ok(SymbolMatrix { lambda, matrix: m })
}

fn unit(theta: f64) -> Cplx {
    c64(theta.cos(), theta.sin())
}

/// Mean numerical radius over a λ-grid and the worst deviation from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusConstancy {
    pub grid: usize,
    pub mean: f64,
    pub max_deviation: f64,
}

/// Computes `r(Ω_λ)` over `grid_size` equispaced λ and reports the mean and
/// the maximum deviation; constancy is expected at solver-tolerance level.
pub fn radius_constancy_check(
    spec: &PeriodicShiftSpec,
    grid_size: usize,
    cfg: &ToleranceConfig,
) -> Result<RadiusConstancy, ShiftError> {
    if grid_size < 8 {
        return Err(ShiftError::GridTooSmall { grid: grid_size });
    }
    let mut radii = Vec::with_capacity(grid_size);
    for k in 0..grid_size {
        let lambda = unit(2.0 * PI * k as f64 / grid_size as f64);
        let sym = periodic_symbol(spec, lambda)?;
        radii.push(numrange::numerical_radius(&sym.matrix, cfg)?);
    }
    let mean = radii.iter().sum::<f64>() / grid_size as f64;
    let max_deviation = radii
        .iter()
        .map(|r| (r - mean).abs())
        .fold(0.0f64, f64::max);
    Ok(RadiusConstancy {
        grid: grid_size,
        mean,
        max_deviation,
    })
}

/// Extreme points of W(Ω_ζ) on the critical circle of radius r, with the
/// p-th-root prediction they are checked against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleExtremes {
    #[serde(with = "crate::report::cplx_pair")]
    pub zeta: Cplx,
    pub radius: f64,
    #[serde(with = "crate::report::cplx_seq")]
    pub points: Vec<Cplx>,
    #[serde(with = "crate::report::cplx_seq")]
    pub predicted: Vec<Cplx>,
    pub max_gap: f64,
}

/// Locates the extreme points of W(Ω_ζ) whose modulus reaches the numerical
/// radius r: exactly p of them, at `r·η` for the p-th roots η of ζ.
///
/// The support function h(θ) equals r precisely at the angles where the range
/// touches the circle r·𝕋, so each grid-local maximum of h is refined by
/// golden-section search and kept when it reaches r within the hull band.
pub fn circle_extreme_check(
    spec: &PeriodicShiftSpec,
    zeta: Cplx,
    cfg: &ToleranceConfig,
) -> Result<CircleExtremes, ShiftError> {
    let sym = periodic_symbol(spec, zeta)?;
    let omega = &sym.matrix;
    let count = cfg.angle_count as usize;
    let step = 2.0 * PI / count as f64;

    let supports: Vec<f64> = (0..count)
        .map(|k| numrange::support_at(omega, k as f64 * step, cfg).0)
        .collect();
    let spread = supports.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - supports.iter().cloned().fold(f64::INFINITY, f64::min);
    if spread <= 1e-12 * supports[0].abs().max(1.0) {
        return Err(ShiftError::CountMismatch {
            expected: spec.p,
            found: count,
            detail: "support function is constant; the touch set is not isolated".to_string(),
        });
    }

    // Refine every grid-local maximum of the support function.
    let mut refined: Vec<(f64, f64)> = Vec::new();
    for k in 0..count {
        let prev = supports[(k + count - 1) % count];
        let next = supports[(k + 1) % count];
        if supports[k] >= prev && supports[k] >= next {
            let theta = k as f64 * step;
            let (th, h) = numrange::golden_max_arg(
                |t| numrange::support_at(omega, t, cfg).0,
                theta - step,
                theta + step,
                64,
            );
            refined.push((th.rem_euclid(2.0 * PI), h));
        }
    }
    let radius = refined.iter().map(|&(_, h)| h).fold(0.0f64, f64::max);
    let keep_band = ToleranceConfig::tol(cfg.eps_hull, radius.max(1.0));
    let mut kept: Vec<(f64, f64)> = refined
        .into_iter()
        .filter(|&(_, h)| h >= radius - keep_band)
        .collect();
    kept.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite angles"));

    // Merge refinements that converged to the same touch angle.
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (th, h) in kept {
        match merged.last_mut() {
            Some((t0, h0)) if (th - *t0).abs() < 0.5 * step => {
                if h > *h0 {
                    *t0 = th;
                    *h0 = h;
                }
            }
            _ => merged.push((th, h)),
        }
    }
    if merged.len() >= 2 {
        let first = merged[0];
        let last = *merged.last().expect("nonempty");
        if (first.0 + 2.0 * PI - last.0).abs() < 0.5 * step {
            merged[0] = if first.1 >= last.1 { first } else { last };
            merged.pop();
        }
    }

    let points: Vec<Cplx> = merged
        .iter()
        .map(|&(th, _)| numrange::support_at(omega, th, cfg).1)
        .collect();
    if points.len() != spec.p {
        return Err(ShiftError::CountMismatch {
            expected: spec.p,
            found: points.len(),
            detail: format!("refined circle touches at radius {radius:.6}"),
        });
    }

    // Predicted touch set: the p-th roots of ζ scaled to the critical circle.
    let base = zeta.arg();
    let predicted: Vec<Cplx> = (0..spec.p)
        .map(|k| unit((base + 2.0 * PI * k as f64) / spec.p as f64) * radius)
        .collect();
    let mut max_gap = 0.0f64;
    let mut used = vec![false; points.len()];
    for pr in &predicted {
        let mut best = f64::INFINITY;
        let mut best_i = usize::MAX;
        for (i, pt) in points.iter().enumerate() {
            if !used[i] {
                let d = (pt - pr).norm();
                if d < best {
                    best = d;
                    best_i = i;
                }
            }
        }
        used[best_i] = true;
        max_gap = max_gap.max(best);
    }
    if max_gap > ToleranceConfig::tol(cfg.eps_hull, radius.max(1.0)) {
        return Err(ShiftError::CountMismatch {
            expected: spec.p,
            found: points.len(),
            detail: format!(
                "touch points deviate from the root prediction by {max_gap:.3e}"
            ),
        });
    }

    Ok(CircleExtremes {
        zeta,
        radius,
        points,
        predicted,
        max_gap,
    })
}

/// Hausdorff gap between `e^{iθ}·W(Ω_1)` and `W(Ω_{e^{ipθ}})`.
///
/// When θ is aligned with the sweep grid the two polygons share their support
/// directions and the gap sits at solver tolerance; off-grid θ adds the
/// polygon discretization error.
pub fn rotation_covariance_check(
    spec: &PeriodicShiftSpec,
    theta: f64,
    cfg: &ToleranceConfig,
) -> Result<f64, ShiftError> {
    let base = periodic_symbol(spec, c64(1.0, 0.0))?;
    let nr1 = numrange::numrange_sweep(&base.matrix, cfg)?;
    let rotated: Vec<Cplx> = nr1
        .polygon
        .vertices()
        .iter()
        .map(|v| v * unit(theta))
        .collect();
    let poly_a = convex_hull(&rotated, cfg)?;

    let lambda = unit(spec.p as f64 * theta);
    let shifted = periodic_symbol(spec, lambda)?;
    let nr2 = numrange::numrange_sweep(&shifted.matrix, cfg)?;

    Ok(convex::hausdorff_distance(&poly_a, &nr2.polygon))
}

/// N×N finite section of the shift: subdiagonal w_1, w_2, ... cycled with
/// period p.
pub fn truncation(spec: &PeriodicShiftSpec, n: usize) -> CMatrix {
    assert!(n >= 2, "truncation needs dimension at least 2");
    let mut m = CMatrix::zeros(n);
    for k in 0..n - 1 {
        m[(k + 1, k)] = c64(spec.weights[k % spec.p], 0.0);
    }
    m
}

/// Everything the verdict checked, kept for audit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftEvidence {
    pub weights: Vec<f64>,
    pub p: usize,
    pub distinct: bool,
    pub radius_constancy: Option<RadiusConstancy>,
    pub circle_checks: Vec<CircleExtremes>,
    pub rotation_checks: Vec<RotationCheck>,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationCheck {
    pub theta: f64,
    pub gap: f64,
}

/// Assembles the envelope verdict for a periodic shift.
///
/// Period 1 is a scaled proper isometry and is decided by rule. For larger
/// periods the distinctness hypothesis gates the verdict; when it holds, the
/// radius-constancy, circle-extreme and rotation-covariance checks must all
/// pass their tolerances, otherwise the verdict is withheld with diagnostics.
pub fn periodic_envelope_verdict(
    spec: &PeriodicShiftSpec,
    cfg: &ToleranceConfig,
) -> Result<(EnvelopeVerdict, ShiftEvidence), ShiftError> {
    let mut evidence = ShiftEvidence {
        weights: spec.weights.clone(),
        p: spec.p,
        distinct: spec.distinct,
        radius_constancy: None,
        circle_checks: Vec::new(),
        rotation_checks: Vec::new(),
        diagnostics: Vec::new(),
    };

    if spec.p == 1 {
        evidence
            .diagnostics
            .push("period 1: scaled proper isometry, decided by rule".to_string());
        return Ok((
            EnvelopeVerdict::with_shilov(
                EnvelopeShape::ContinuousOnCircle,
                ShilovDescription::CompactOperators,
            ),
            evidence,
        ));
    }

    if !spec.distinct {
        evidence.diagnostics.push(
            "no weight appears exactly once within a period; the distinctness hypothesis fails"
                .to_string(),
        );
        return Ok((EnvelopeVerdict::undetermined(), evidence));
    }

    let mut failed = false;

    let rc = radius_constancy_check(spec, DEFAULT_LAMBDA_GRID, cfg)?;
    let rc_tol = (1e-8 * rc.mean).max(1e-12);
    if rc.max_deviation > rc_tol {
        failed = true;
        evidence.diagnostics.push(format!(
            "numerical radius varies by {:.3e} over the λ-grid (allowed {:.3e})",
            rc.max_deviation, rc_tol
        ));
    }
    let radius = rc.mean;
    evidence.radius_constancy = Some(rc);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed ^ 0x0c1c);
    let mut zetas = vec![c64(1.0, 0.0)];
    for _ in 0..2 {
        zetas.push(unit(rng.gen_range(0.0..2.0 * PI)));
    }
    for zeta in zetas {
        match circle_extreme_check(spec, zeta, cfg) {
            Ok(ce) => evidence.circle_checks.push(ce),
            Err(e) => {
                failed = true;
                evidence
                    .diagnostics
                    .push(format!("circle extreme check at ζ = {zeta}: {e}"));
            }
        }
    }

    // Grid-aligned rotation angles keep the two sweeps vertex-comparable.
    let count = cfg.angle_count as usize;
    let rot_tol = 2.0 * ToleranceConfig::tol(cfg.eps_hull, radius.max(1.0));
    for k in [count / 4, 1] {
        let theta = 2.0 * PI * k as f64 / count as f64;
        let gap = rotation_covariance_check(spec, theta, cfg)?;
        if gap > rot_tol {
            failed = true;
            evidence.diagnostics.push(format!(
                "rotation covariance gap {gap:.3e} at θ = {theta:.6} (allowed {rot_tol:.3e})"
            ));
        }
        evidence.rotation_checks.push(RotationCheck { theta, gap });
    }

    if failed {
        return Ok((EnvelopeVerdict::undetermined(), evidence));
    }
    Ok((
        EnvelopeVerdict::with_shilov(
            EnvelopeShape::CircleMatrices { p: spec.p },
            ShilovDescription::CompactOperators,
        ),
        evidence,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::op_norm;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn normalize_folds_periods() {
        let s = normalize_spec(&[1.0, 2.0, 1.0, 2.0]).unwrap();
        assert_eq!(s.p, 2);
        assert_eq!(s.weights, vec![1.0, 2.0]);
        assert!(s.distinct);

        let s = normalize_spec(&[1.0, 2.0, 2.0]).unwrap();
        assert_eq!(s.p, 3);
        assert!(s.distinct);

        let s = normalize_spec(&[2.0, 2.0, 2.0]).unwrap();
        assert_eq!(s.p, 1);

        let s = normalize_spec(&[1.0, 1.0, 2.0, 2.0]).unwrap();
        assert_eq!(s.p, 4);
        assert!(!s.distinct);
    }

    #[test]
    fn normalize_rejects_bad_weights() {
        assert!(matches!(normalize_spec(&[]), Err(ShiftError::EmptyWeights)));
        assert!(matches!(
            normalize_spec(&[1.0, 0.0]),
            Err(ShiftError::NonpositiveWeight { index: 1, .. })
        ));
        assert!(matches!(
            normalize_spec(&[-1.0]),
            Err(ShiftError::NonpositiveWeight { index: 0, .. })
        ));
    }

    #[test]
    fn symbol_matrix_layout() {
        let spec = normalize_spec(&[1.0, 2.0]).unwrap();
        let sym = periodic_symbol(&spec, c64(1.0, 0.0)).unwrap();
        assert_eq!(sym.matrix[(0, 1)], c64(2.0, 0.0));
        assert_eq!(sym.matrix[(1, 0)], c64(1.0, 0.0));
        assert_eq!(sym.matrix[(0, 0)], c64(0.0, 0.0));

        let sym_i = periodic_symbol(&spec, c64(0.0, 1.0)).unwrap();
        assert_eq!(sym_i.matrix[(0, 1)], c64(0.0, 2.0));

        let one = normalize_spec(&[3.0]).unwrap();
        let lam = c64((0.3f64).cos(), (0.3f64).sin());
        let s = periodic_symbol(&one, lam).unwrap();
        assert!((s.matrix[(0, 0)] - lam * 3.0).norm() < 1e-15);

        assert!(matches!(
            periodic_symbol(&spec, c64(0.5, 0.0)),
            Err(ShiftError::NotUnimodular { .. })
        ));
    }

    #[test]
    fn symbol_norm_is_max_weight() {
        let spec = normalize_spec(&[0.5, 2.0, 1.0]).unwrap();
        let cfg = cfg();
        for k in 0..5 {
            let lam = unit(2.0 * PI * k as f64 / 5.0);
            let sym = periodic_symbol(&spec, lam).unwrap();
            let n = op_norm(&sym.matrix, &cfg).unwrap();
            assert!((n - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn radius_constancy_for_two_weights() {
        let spec = normalize_spec(&[1.0, 2.0]).unwrap();
        let rc = radius_constancy_check(&spec, 16, &cfg()).unwrap();
        assert!((rc.mean - 1.5).abs() < 1e-9);
        assert!(rc.max_deviation < 1e-9);
    }

    #[test]
    fn radius_constancy_for_unitary_symbols() {
        // Equal weights in a period-3 presentation make every symbol a
        // circulant unitary: radius exactly 1 (circulant eigenvalue oracle).
        let spec = PeriodicShiftSpec::from_presentation(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(spec.p, 3);
        let rc = radius_constancy_check(&spec, 12, &cfg()).unwrap();
        assert!((rc.mean - 1.0).abs() < 1e-10);
        assert!(rc.max_deviation < 1e-10);
    }

    #[test]
    fn radius_for_scalar_symbol() {
        let spec = normalize_spec(&[2.0]).unwrap();
        let rc = radius_constancy_check(&spec, 8, &cfg()).unwrap();
        assert!((rc.mean - 2.0).abs() < 1e-12);
        assert!(rc.max_deviation < 1e-12);
    }

    #[test]
    fn grid_too_small_is_rejected() {
        let spec = normalize_spec(&[1.0, 2.0]).unwrap();
        assert!(matches!(
            radius_constancy_check(&spec, 4, &cfg()),
            Err(ShiftError::GridTooSmall { grid: 4 })
        ));
    }

    #[test]
    fn circle_extremes_of_the_ellipse() {
        let spec = normalize_spec(&[1.0, 2.0]).unwrap();
        let ce = circle_extreme_check(&spec, c64(1.0, 0.0), &cfg()).unwrap();
        assert_eq!(ce.points.len(), 2);
        assert!((ce.radius - 1.5).abs() < 1e-8);
        let mut pts = ce.points.clone();
        pts.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((pts[0] - c64(-1.5, 0.0)).norm() < 1e-7);
        assert!((pts[1] - c64(1.5, 0.0)).norm() < 1e-7);
    }

    #[test]
    fn circle_extremes_rotate_with_zeta() {
        let spec = normalize_spec(&[1.0, 2.0]).unwrap();
        let ce = circle_extreme_check(&spec, c64(-1.0, 0.0), &cfg()).unwrap();
        let mut pts = ce.points.clone();
        pts.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((pts[0] - c64(0.0, -1.5)).norm() < 1e-7);
        assert!((pts[1] - c64(0.0, 1.5)).norm() < 1e-7);
    }

    #[test]
    fn circle_extremes_of_unitary_symbol() {
        // Circulant spectrum oracle: the period-3 equal-weight symbol at
        // ζ = 1 is the cyclic permutation with the cube roots of unity as
        // its spectrum, so the triangle touches the unit circle there.
        let spec = PeriodicShiftSpec::from_presentation(&[1.0, 1.0, 1.0]).unwrap();
        let ce = circle_extreme_check(&spec, c64(1.0, 0.0), &cfg()).unwrap();
        assert_eq!(ce.points.len(), 3);
        assert!((ce.radius - 1.0).abs() < 1e-9);
        for k in 0..3 {
            let target = unit(2.0 * PI * k as f64 / 3.0);
            assert!(ce.points.iter().any(|p| (p - target).norm() < 1e-6));
        }
    }

    #[test]
    fn rotation_covariance_gap_is_small_on_grid_angles() {
        let spec = normalize_spec(&[1.0, 2.0]).unwrap();
        let cfg = cfg();
        let gap0 = rotation_covariance_check(&spec, 0.0, &cfg).unwrap();
        assert!(gap0 < 1e-12);
        let gap = rotation_covariance_check(&spec, PI / 2.0, &cfg).unwrap();
        assert!(gap < 1e-6, "gap = {gap:.3e}");
    }

    #[test]
    fn truncation_layout_and_radius() {
        let spec = normalize_spec(&[1.0, 2.0]).unwrap();
        let t2 = truncation(&spec, 2);
        assert_eq!(t2[(1, 0)], c64(1.0, 0.0));
        assert_eq!(t2[(0, 1)], c64(0.0, 0.0));
        // Antidiagonal oracle: radius of [[0,0],[1,0]] is 1/2.
        let r = numrange::numerical_radius(&t2, &cfg()).unwrap();
        assert!((r - 0.5).abs() < 1e-10);

        let t3 = truncation(&spec, 3);
        assert_eq!(t3[(1, 0)], c64(1.0, 0.0));
        assert_eq!(t3[(2, 1)], c64(2.0, 0.0));

        let ones = normalize_spec(&[1.0, 1.0]).unwrap();
        let t = truncation(&ones, 3);
        assert_eq!(t[(1, 0)], c64(1.0, 0.0));
        assert_eq!(t[(2, 1)], c64(1.0, 0.0));
    }

    #[test]
    fn verdict_for_distinct_weights() {
        let spec = normalize_spec(&[1.0, 2.0]).unwrap();
        let (v, ev) = periodic_envelope_verdict(&spec, &cfg()).unwrap();
        assert_eq!(v.shape, EnvelopeShape::CircleMatrices { p: 2 });
        assert_eq!(v.shilov, ShilovDescription::CompactOperators);
        assert!(v.simplicity_flag);
        assert!(ev.diagnostics.is_empty());
        assert_eq!(ev.circle_checks.len(), 3);
    }

    #[test]
    fn verdict_for_period_one() {
        let spec = normalize_spec(&[1.0, 1.0]).unwrap();
        assert_eq!(spec.p, 1);
        let (v, _) = periodic_envelope_verdict(&spec, &cfg()).unwrap();
        assert_eq!(v.shape, EnvelopeShape::ContinuousOnCircle);
        assert_eq!(v.shilov, ShilovDescription::CompactOperators);
    }

    #[test]
    fn verdict_withheld_without_distinctness() {
        let spec = normalize_spec(&[1.0, 1.0, 2.0, 2.0]).unwrap();
        let (v, ev) = periodic_envelope_verdict(&spec, &cfg()).unwrap();
        assert_eq!(v.shape, EnvelopeShape::Undetermined);
        assert!(!ev.diagnostics.is_empty());
    }
}
