//! Classification of boundary representations and assembly of the
//! C*-envelope verdict.
//!
//! Scalar summands are decided exactly by hull separation against the other
//! summands' numerical ranges. Selfadjoint and normal inputs are decided by
//! their spectra. Summands of dimension at least two are never claimed as
//! boundary representations outright: either a norm-drop certificate shows
//! they cannot be dropped, or they stay undetermined.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::{self, NormDropCertificate};
use crate::config::ToleranceConfig;
use crate::convex::{self, convex_hull, point_location, ConvexError, Location};
use crate::linalg::{self, c64, CMatrix, Cplx, LinalgError};
use crate::numrange::{self, RangeError};
use crate::shifts::{self, ShiftError, ShiftEvidence};
use crate::structure::{self, BlockDecomposition, StructureError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error("block {index} is not a 1x1 block")]
    NotScalarBlock { index: usize },
    #[error("the operator is scalar; its operator system is degenerate")]
    ScalarOperator,
    #[error("unsupported descriptor: {reason}")]
    UnsupportedDescriptor { reason: String },
    #[error("descriptor invariant violated: {reason}")]
    InvalidDescriptor { reason: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Convex(#[from] ConvexError),
    #[error(transparent)]
    Range(#[from] RangeError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Shift(#[from] ShiftError),
}

/// Tagged operator input: explicit matrices, direct sums, finite and periodic
/// shifts, and the symbolic infinite-dimensional classes decided by rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum OperatorDescriptor {
    Matrix {
        data: CMatrix,
    },
    DirectSum {
        blocks: Vec<OperatorDescriptor>,
    },
    FiniteShift {
        #[serde(with = "crate::report::cplx_seq")]
        weights: Vec<Cplx>,
    },
    PeriodicShift {
        weights: Vec<f64>,
    },
    UnilateralShift,
    Unitary {
        spectrum: UnitarySpectrum,
    },
    Normal {
        #[serde(with = "crate::report::cplx_seq")]
        eigenvalues: Vec<Cplx>,
    },
}

/// Spectrum of a unitary: the full circle or a finite unimodular set.
#[derive(Debug, Clone, PartialEq)]
pub enum UnitarySpectrum {
    FullCircle,
    FiniteSet(Vec<Cplx>),
}

impl Serialize for UnitarySpectrum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            UnitarySpectrum::FullCircle => s.serialize_str("circle"),
            UnitarySpectrum::FiniteSet(pts) => {
                use serde::ser::SerializeSeq;
                let mut seq = s.serialize_seq(Some(pts.len()))?;
                for p in pts {
                    seq.serialize_element(&(p.re, p.im))?;
                }
                seq.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for UnitarySpectrum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) if s == "circle" => Ok(UnitarySpectrum::FullCircle),
            serde_json::Value::Array(items) => {
                let mut pts = Vec::with_capacity(items.len());
                for item in items {
                    let pair: (f64, f64) =
                        serde_json::from_value(item).map_err(D::Error::custom)?;
                    pts.push(c64(pair.0, pair.1));
                }
                Ok(UnitarySpectrum::FiniteSet(pts))
            }
            other => Err(D::Error::custom(format!(
                "expected \"circle\" or a list of [re, im] pairs, got {other}"
            ))),
        }
    }
}

/// Representation identifier within a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepId {
    /// Direct summand by block index (decomposition order).
    Block(usize),
    /// Character attached to the k-th distinct spectral point.
    SpectralPoint(usize),
    /// The circle-parametrized family of symbol evaluations.
    CircleFamily,
    /// The defining (identity) representation.
    Defining,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Boundary,
    NotBoundary,
    RequiredByNormCertificate,
    Undetermined,
}

/// Which exact statement (checked hypotheses included) produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleTag {
    ProperIsometry,
    UnitarySpectrum,
    FiniteShiftIrreducible,
    IrreducibleMatrix,
    PeriodicShiftSymbols,
    SelfadjointEndpoints,
}

/// Auditable data behind a status: hull distances, certificates, rule tags or
/// symbol-level check results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    /// Scalar block against the hull of the remaining numerical ranges;
    /// positive distance means outside.
    ScalarBlockHull { signed_distance: f64, band_flag: bool },
    NormCertificate(NormDropCertificate),
    NoCertificateFound { budget: u32 },
    SpectralCharacter {
        #[serde(with = "crate::report::cplx_pair")]
        point: Cplx,
        signed_distance: f64,
        band_flag: bool,
        extreme: bool,
    },
    Rule(RuleTag),
    ShiftChecks(ShiftEvidence),
    HypothesisFailure { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryStatus {
    pub rep_id: RepId,
    pub status: Status,
    pub evidence: Evidence,
}

/// Shape of the C*-envelope, when determined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeShape {
    FullMatrixAlgebra(usize),
    /// Dimensions of the kept summands, largest first.
    BlockSum(Vec<usize>),
    FiniteFunctionAlgebra(#[serde(with = "crate::report::cplx_seq")] Vec<Cplx>),
    ContinuousOnCircle,
    CircleMatrices { p: usize },
    TwoPoints,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShilovDescription {
    Trivial,
    DroppedBlocks(Vec<usize>),
    CompactOperators,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeVerdict {
    pub shape: EnvelopeShape,
    pub shilov: ShilovDescription,
    /// True iff the verdict excluded an irreducible representation, which
    /// witnesses that the generated C*-algebra is not simple.
    pub simplicity_flag: bool,
}

impl EnvelopeVerdict {
    pub fn undetermined() -> Self {
        EnvelopeVerdict {
            shape: EnvelopeShape::Undetermined,
            shilov: ShilovDescription::Undetermined,
            simplicity_flag: false,
        }
    }

    pub(crate) fn with_shilov(shape: EnvelopeShape, shilov: ShilovDescription) -> Self {
        let simplicity_flag = !matches!(
            shilov,
            ShilovDescription::Trivial | ShilovDescription::Undetermined
        );
        EnvelopeVerdict {
            shape,
            shilov,
            simplicity_flag,
        }
    }
}

/// Classifies the 1x1 block `ℓ` of a decomposition against the hull of the
/// union of the other blocks' numerical ranges: strictly outside the closed
/// hull means boundary, inside or on it means not. The evidence carries the
/// signed distance and whether the call fell in the tolerance band.
pub fn classify_scalar_block(
    ell: usize,
    decomp: &BlockDecomposition,
    cfg: &ToleranceConfig,
) -> Result<BoundaryStatus, ClassifyError> {
    if decomp.blocks[ell].dim() != 1 {
        return Err(ClassifyError::NotScalarBlock { index: ell });
    }
    let lambda = decomp.blocks[ell][(0, 0)];
    let mut points: Vec<Cplx> = Vec::new();
    for (j, b) in decomp.blocks.iter().enumerate() {
        if j == ell {
            continue;
        }
        let nr = numrange::numrange_sweep(b, cfg)?;
        points.extend_from_slice(nr.polygon.vertices());
    }
    let hull = convex_hull(&points, cfg)?;
    Ok(scalar_status_against(ell, lambda, &hull, cfg))
}

fn scalar_status_against(
    ell: usize,
    lambda: Cplx,
    hull: &convex::Polygon2D,
    cfg: &ToleranceConfig,
) -> BoundaryStatus {
    let loc = point_location(lambda, hull, cfg);
    let signed = convex::signed_distance(lambda, hull);
    let band = ToleranceConfig::tol(cfg.eps_hull, hull.scale());
    let status = if loc == Location::Outside {
        Status::Boundary
    } else {
        // The theorem requires the point strictly outside the closed hull, so
        // the boundary band is inclusive.
        Status::NotBoundary
    };
    BoundaryStatus {
        rep_id: RepId::Block(ell),
        status,
        evidence: Evidence::ScalarBlockHull {
            signed_distance: signed,
            band_flag: signed.abs() <= band,
        },
    }
}

/// Selfadjoint case: boundary characters at the spectral minimum and maximum,
/// everything in between excluded; the envelope is two points.
pub fn classify_selfadjoint(
    t: &CMatrix,
    cfg: &ToleranceConfig,
) -> Result<(Vec<BoundaryStatus>, EnvelopeVerdict), ClassifyError> {
    let scale = t.frobenius_norm();
    if t.herm_defect() > ToleranceConfig::tol(cfg.eps_herm, scale) {
        return Err(ClassifyError::InvalidDescriptor {
            reason: "classify_selfadjoint requires a selfadjoint matrix".to_string(),
        });
    }
    let eig = linalg::herm_eig(t, cfg)?;
    let spread = eig.max() - eig.min();
    let tol = ToleranceConfig::tol(cfg.eps_eig, eig.max().abs().max(eig.min().abs()));
    if spread <= tol {
        return Err(ClassifyError::ScalarOperator);
    }
    let clusters = structure::cluster_ascending(&eig.eigenvalues, tol);
    let values: Vec<f64> = clusters
        .iter()
        .map(|cl| eig.eigenvalues[cl.clone()].iter().sum::<f64>() / cl.len() as f64)
        .collect();
    let k = values.len();
    let (t0, t1) = (values[0], values[k - 1]);
    let band = ToleranceConfig::tol(cfg.eps_hull, spread.max(1.0));
    let statuses = values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let endpoint = i == 0 || i == k - 1;
            let dist = (v - t0).min(t1 - v);
            BoundaryStatus {
                rep_id: RepId::SpectralPoint(i),
                status: if endpoint {
                    Status::Boundary
                } else {
                    Status::NotBoundary
                },
                evidence: Evidence::SpectralCharacter {
                    point: c64(v, 0.0),
                    signed_distance: if endpoint { 0.0 } else { -dist },
                    band_flag: dist.abs() <= band,
                    extreme: endpoint,
                },
            }
        })
        .collect();
    let dropped: Vec<usize> = (1..k.saturating_sub(1)).collect();
    let shilov = if dropped.is_empty() {
        ShilovDescription::Trivial
    } else {
        ShilovDescription::DroppedBlocks(dropped)
    };
    Ok((
        statuses,
        EnvelopeVerdict::with_shilov(EnvelopeShape::TwoPoints, shilov),
    ))
}

/// Normal operator with finite spectrum: boundary characters sit exactly at
/// the extreme points of the convex hull of the eigenvalues (a point mass is
/// the unique representing measure iff the point is extreme), and the
/// envelope is the function algebra on those points.
pub fn classify_normal_finite(
    eigs: &[Cplx],
    cfg: &ToleranceConfig,
) -> Result<(Vec<BoundaryStatus>, EnvelopeVerdict), ClassifyError> {
    if eigs.is_empty() {
        return Err(ClassifyError::Convex(ConvexError::EmptyInput));
    }
    // Collapse eigenvalue multiplicities: characters live on distinct points.
    let mut scale: f64 = 1.0;
    for i in 0..eigs.len() {
        for j in (i + 1)..eigs.len() {
            scale = scale.max((eigs[i] - eigs[j]).norm());
        }
    }
    let tol = ToleranceConfig::tol(cfg.eps_hull, scale);
    let mut points: Vec<Cplx> = Vec::new();
    for &e in eigs {
        if !points.iter().any(|p| (p - e).norm() <= tol) {
            points.push(e);
        }
    }

    let hull = convex_hull(&points, cfg)?;
    let extremes = convex::extreme_points_of_polygon(&hull, cfg);
    let band = ToleranceConfig::tol(cfg.eps_hull, hull.scale());

    let mut statuses = Vec::with_capacity(points.len());
    let mut boundary_points = Vec::new();
    let mut dropped = Vec::new();
    for (i, &p) in points.iter().enumerate() {
        let extreme = extremes.iter().any(|v| (v - p).norm() <= band);
        let signed = convex::signed_distance(p, &hull);
        statuses.push(BoundaryStatus {
            rep_id: RepId::SpectralPoint(i),
            status: if extreme {
                Status::Boundary
            } else {
                Status::NotBoundary
            },
            evidence: Evidence::SpectralCharacter {
                point: p,
                signed_distance: signed,
                band_flag: signed.abs() <= band,
                extreme,
            },
        });
        if extreme {
            boundary_points.push(p);
        } else {
            dropped.push(i);
        }
    }
    let shilov = if dropped.is_empty() {
        ShilovDescription::Trivial
    } else {
        ShilovDescription::DroppedBlocks(dropped)
    };
    Ok((
        statuses,
        EnvelopeVerdict::with_shilov(EnvelopeShape::FiniteFunctionAlgebra(boundary_points), shilov),
    ))
}

/// Full pipeline for an explicit matrix: route selfadjoint and normal inputs
/// to their exact classifiers, otherwise decompose into irreducible summands
/// and classify block by block.
pub fn classify_matrix_operator(
    t: &CMatrix,
    cfg: &ToleranceConfig,
) -> Result<(Vec<BoundaryStatus>, EnvelopeVerdict), ClassifyError> {
    t.check_dim_limit()?;
    let scale = t.frobenius_norm();

    if t.herm_defect() <= ToleranceConfig::tol(cfg.eps_herm, scale) {
        return classify_selfadjoint(t, cfg);
    }
    let comm = linalg::self_commutator(t);
    if comm.frobenius_norm() <= ToleranceConfig::tol(cfg.eps_herm, scale * scale) {
        let eigs = structure::normal_eigenvalues(t, cfg)?;
        return classify_normal_finite(&eigs, cfg);
    }

    let decomp = structure::decompose_irreducible(t, cfg)?;
    let m = decomp.blocks.len();
    if m == 1 {
        // Irreducible: the generated algebra is the full matrix algebra,
        // which is simple, so its lone representation is boundary.
        let statuses = vec![BoundaryStatus {
            rep_id: RepId::Block(0),
            status: Status::Boundary,
            evidence: Evidence::Rule(RuleTag::IrreducibleMatrix),
        }];
        return Ok((
            statuses,
            EnvelopeVerdict::with_shilov(
                EnvelopeShape::FullMatrixAlgebra(t.dim()),
                ShilovDescription::Trivial,
            ),
        ));
    }

    // Group unitarily equivalent summands; duplicated summands carry the same
    // representation, so classification happens per class.
    let mut class_of: Vec<usize> = vec![usize::MAX; m];
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..m {
        let mut assigned = false;
        for (c, &r) in reps.iter().enumerate() {
            if structure::unitarily_equivalent_fingerprint(&decomp.blocks[i], &decomp.blocks[r], cfg)
            {
                class_of[i] = c;
                assigned = true;
                break;
            }
        }
        if !assigned {
            class_of[i] = reps.len();
            reps.push(i);
        }
    }
    let k = reps.len();

    // One sweep polygon per class representative.
    let mut polys = Vec::with_capacity(k);
    for &r in &reps {
        polys.push(numrange::numrange_sweep(&decomp.blocks[r], cfg)?.polygon);
    }

    // Scalar classes first: hull separation against the other classes.
    let mut class_status: Vec<Option<BoundaryStatus>> = vec![None; k];
    for c in 0..k {
        let r = reps[c];
        if decomp.blocks[r].dim() != 1 {
            continue;
        }
        let lambda = decomp.blocks[r][(0, 0)];
        let mut pts: Vec<Cplx> = Vec::new();
        for (c2, poly) in polys.iter().enumerate() {
            if c2 != c {
                pts.extend_from_slice(poly.vertices());
            }
        }
        let hull = convex_hull(&pts, cfg)?;
        class_status[c] = Some(scalar_status_against(r, lambda, &hull, cfg));
    }

    let not_boundary_scalars: Vec<usize> = (0..k)
        .filter(|&c| {
            matches!(
                class_status[c],
                Some(BoundaryStatus {
                    status: Status::NotBoundary,
                    ..
                })
            )
        })
        .collect();

    // Blocks of dimension >= 2: required if dropping the class (plus every
    // excluded scalar class) produces a norm-drop certificate.
    let rep_decomp = BlockDecomposition {
        change_of_basis: CMatrix::identity(reps.iter().map(|&r| decomp.blocks[r].dim()).sum()),
        blocks: reps.iter().map(|&r| decomp.blocks[r].clone()).collect(),
        block_dims: reps.iter().map(|&r| decomp.blocks[r].dim()).collect(),
        residual: 0.0,
    };
    for c in 0..k {
        if class_status[c].is_some() {
            continue;
        }
        let kept: Vec<usize> = (0..k)
            .filter(|&c2| c2 != c && !not_boundary_scalars.contains(&c2))
            .collect();
        let (status, evidence) = if kept.is_empty() {
            let cert = certificate::trivial_full_drop(&rep_decomp, cfg);
            (
                Status::RequiredByNormCertificate,
                Evidence::NormCertificate(cert),
            )
        } else {
            match certificate::norm_drop_certificate(&rep_decomp, &kept, cfg) {
                Some(cert) => (
                    Status::RequiredByNormCertificate,
                    Evidence::NormCertificate(cert),
                ),
                None => (
                    Status::Undetermined,
                    Evidence::NoCertificateFound {
                        budget: cfg.cert_budget,
                    },
                ),
            }
        };
        class_status[c] = Some(BoundaryStatus {
            rep_id: RepId::Block(reps[c]),
            status,
            evidence,
        });
    }

    // Per-original-block statuses, cloning the class verdicts.
    let mut statuses = Vec::with_capacity(m);
    for (i, &c) in class_of.iter().enumerate() {
        let mut st = class_status[c].clone().expect("every class classified");
        st.rep_id = RepId::Block(i);
        statuses.push(st);
    }

    if statuses
        .iter()
        .any(|s| s.status == Status::Undetermined)
    {
        return Ok((statuses, EnvelopeVerdict::undetermined()));
    }

    let kept_classes: Vec<usize> = (0..k)
        .filter(|&c| {
            matches!(
                class_status[c].as_ref().map(|s| s.status),
                Some(Status::Boundary) | Some(Status::RequiredByNormCertificate)
            )
        })
        .collect();
    let mut kept_dims: Vec<usize> = kept_classes
        .iter()
        .map(|&c| decomp.blocks[reps[c]].dim())
        .collect();
    kept_dims.sort_unstable_by(|a, b| b.cmp(a));

    let dropped: Vec<usize> = statuses
        .iter()
        .enumerate()
        .filter(|(_, s)| s.status == Status::NotBoundary)
        .map(|(i, _)| i)
        .collect();
    let shilov = if dropped.is_empty() {
        ShilovDescription::Trivial
    } else {
        ShilovDescription::DroppedBlocks(dropped)
    };

    let shape = match kept_dims.len() {
        0 => EnvelopeShape::Undetermined,
        1 => EnvelopeShape::FullMatrixAlgebra(kept_dims[0]),
        _ => EnvelopeShape::BlockSum(kept_dims),
    };
    if shape == EnvelopeShape::Undetermined {
        return Ok((statuses, EnvelopeVerdict::undetermined()));
    }
    Ok((statuses, EnvelopeVerdict::with_shilov(shape, shilov)))
}

/// Materializes a finite-dimensional descriptor as an explicit matrix.
fn materialize(d: &OperatorDescriptor) -> Result<CMatrix, ClassifyError> {
    match d {
        OperatorDescriptor::Matrix { data } => Ok(data.clone()),
        OperatorDescriptor::FiniteShift { weights } => Ok(finite_shift_matrix(weights)),
        OperatorDescriptor::Normal { eigenvalues } => {
            if eigenvalues.is_empty() {
                return Err(ClassifyError::InvalidDescriptor {
                    reason: "normal descriptor needs at least one eigenvalue".to_string(),
                });
            }
            Ok(CMatrix::diag(eigenvalues))
        }
        OperatorDescriptor::Unitary {
            spectrum: UnitarySpectrum::FiniteSet(pts),
        } => {
            if pts.is_empty() {
                return Err(ClassifyError::InvalidDescriptor {
                    reason: "unitary descriptor needs a nonempty spectrum".to_string(),
                });
            }
            Ok(CMatrix::diag(pts))
        }
        OperatorDescriptor::DirectSum { blocks } => {
            if blocks.is_empty() {
                return Err(ClassifyError::InvalidDescriptor {
                    reason: "direct sum needs at least one summand".to_string(),
                });
            }
            let mats = blocks.iter().map(materialize).collect::<Result<Vec<_>, _>>()?;
            Ok(linalg::direct_sum(&mats)?)
        }
        OperatorDescriptor::PeriodicShift { .. }
        | OperatorDescriptor::UnilateralShift
        | OperatorDescriptor::Unitary {
            spectrum: UnitarySpectrum::FullCircle,
        } => Err(ClassifyError::UnsupportedDescriptor {
            reason: "infinite-dimensional summands cannot be mixed into a direct sum".to_string(),
        }),
    }
}

/// The (d+1) x (d+1) shift matrix with subdiagonal weights.
pub fn finite_shift_matrix(weights: &[Cplx]) -> CMatrix {
    let d = weights.len();
    let mut m = CMatrix::zeros(d + 1);
    for (i, &w) in weights.iter().enumerate() {
        m[(i + 1, i)] = w;
    }
    m
}

/// Validates descriptor invariants (weight positivity, unimodularity).
pub fn validate_descriptor(d: &OperatorDescriptor) -> Result<(), ClassifyError> {
    let fail = |reason: String| Err(ClassifyError::InvalidDescriptor { reason });
    match d {
        OperatorDescriptor::Matrix { .. } => Ok(()),
        OperatorDescriptor::DirectSum { blocks } => {
            if blocks.is_empty() {
                return fail("direct sum needs at least one summand".to_string());
            }
            blocks.iter().try_for_each(validate_descriptor)
        }
        OperatorDescriptor::FiniteShift { weights } => {
            if weights.is_empty() {
                return fail("finite shift needs at least one weight".to_string());
            }
            if let Some(k) = weights.iter().position(|w| w.norm() == 0.0) {
                return fail(format!("finite shift weight {k} is zero"));
            }
            Ok(())
        }
        OperatorDescriptor::PeriodicShift { weights } => {
            if weights.is_empty() {
                return fail("periodic shift needs at least one weight".to_string());
            }
            if let Some(k) = weights.iter().position(|&w| !(w > 0.0) || !w.is_finite()) {
                return fail(format!("periodic shift weight {k} must be strictly positive"));
            }
            Ok(())
        }
        OperatorDescriptor::UnilateralShift => Ok(()),
        OperatorDescriptor::Unitary { spectrum } => match spectrum {
            UnitarySpectrum::FullCircle => Ok(()),
            UnitarySpectrum::FiniteSet(pts) => {
                if pts.is_empty() {
                    return fail("unitary spectrum must be nonempty".to_string());
                }
                if let Some(k) = pts.iter().position(|z| (z.norm() - 1.0).abs() > 1e-12) {
                    return fail(format!("unitary spectrum point {k} is not unimodular"));
                }
                Ok(())
            }
        },
        OperatorDescriptor::Normal { eigenvalues } => {
            if eigenvalues.is_empty() {
                return fail("normal descriptor needs at least one eigenvalue".to_string());
            }
            Ok(())
        }
    }
}

/// Rule-table dispatch over the descriptor classes.
pub fn classify_descriptor(
    d: &OperatorDescriptor,
    cfg: &ToleranceConfig,
) -> Result<(Vec<BoundaryStatus>, EnvelopeVerdict), ClassifyError> {
    validate_descriptor(d)?;
    match d {
        OperatorDescriptor::UnilateralShift => Ok((
            vec![
                BoundaryStatus {
                    rep_id: RepId::Defining,
                    status: Status::NotBoundary,
                    evidence: Evidence::Rule(RuleTag::ProperIsometry),
                },
                BoundaryStatus {
                    rep_id: RepId::CircleFamily,
                    status: Status::Boundary,
                    evidence: Evidence::Rule(RuleTag::ProperIsometry),
                },
            ],
            EnvelopeVerdict::with_shilov(
                EnvelopeShape::ContinuousOnCircle,
                ShilovDescription::CompactOperators,
            ),
        )),
        OperatorDescriptor::Unitary { spectrum } => match spectrum {
            UnitarySpectrum::FullCircle => Ok((
                vec![BoundaryStatus {
                    rep_id: RepId::CircleFamily,
                    status: Status::Boundary,
                    evidence: Evidence::Rule(RuleTag::UnitarySpectrum),
                }],
                EnvelopeVerdict::with_shilov(
                    EnvelopeShape::ContinuousOnCircle,
                    ShilovDescription::Trivial,
                ),
            )),
            UnitarySpectrum::FiniteSet(pts) => {
                // Every spectral point of a unitary supports a boundary
                // character; unimodular points are automatically extreme.
                let statuses = pts
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| BoundaryStatus {
                        rep_id: RepId::SpectralPoint(i),
                        status: Status::Boundary,
                        evidence: Evidence::SpectralCharacter {
                            point: p,
                            signed_distance: 0.0,
                            band_flag: false,
                            extreme: true,
                        },
                    })
                    .collect();
                Ok((
                    statuses,
                    EnvelopeVerdict::with_shilov(
                        EnvelopeShape::FiniteFunctionAlgebra(pts.clone()),
                        ShilovDescription::Trivial,
                    ),
                ))
            }
        },
        OperatorDescriptor::Normal { eigenvalues } => classify_normal_finite(eigenvalues, cfg),
        OperatorDescriptor::FiniteShift { weights } => Ok((
            vec![BoundaryStatus {
                rep_id: RepId::Block(0),
                status: Status::Boundary,
                evidence: Evidence::Rule(RuleTag::FiniteShiftIrreducible),
            }],
            EnvelopeVerdict::with_shilov(
                EnvelopeShape::FullMatrixAlgebra(weights.len() + 1),
                ShilovDescription::Trivial,
            ),
        )),
        OperatorDescriptor::PeriodicShift { weights } => {
            let spec = shifts::normalize_spec(weights)?;
            let (verdict, evidence) = shifts::periodic_envelope_verdict(&spec, cfg)?;
            let statuses = if verdict.shape == EnvelopeShape::Undetermined {
                vec![BoundaryStatus {
                    rep_id: RepId::CircleFamily,
                    status: Status::Undetermined,
                    evidence: Evidence::ShiftChecks(evidence),
                }]
            } else {
                vec![
                    BoundaryStatus {
                        rep_id: RepId::Defining,
                        status: Status::NotBoundary,
                        evidence: Evidence::Rule(RuleTag::PeriodicShiftSymbols),
                    },
                    BoundaryStatus {
                        rep_id: RepId::CircleFamily,
                        status: Status::Boundary,
                        evidence: Evidence::ShiftChecks(evidence),
                    },
                ]
            };
            Ok((statuses, verdict))
        }
        OperatorDescriptor::Matrix { data } => classify_matrix_operator(data, cfg),
        OperatorDescriptor::DirectSum { .. } => {
            let t = materialize(d)?;
            classify_matrix_operator(&t, cfg)
        }
    }
}
