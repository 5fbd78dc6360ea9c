//! Numerical ranges, noncommutative Choquet boundaries and C*-envelope
//! verdicts for operator systems generated by a single operator.
//!
//! The crate classifies boundary representations for the operator system
//! spanned by `1`, `T` and `T*`: exactly for scalar direct summands,
//! selfadjoint and normal operators, finite weighted shifts and periodic
//! weighted shifts (at the symbol level), and with certified numerical
//! evidence (hull separations, norm-drop certificates, symbol sweeps)
//! everywhere else. See the `choquet` binary for the command-line surface.

pub mod certificate;
pub mod classify;
pub mod config;
pub mod convex;
pub mod linalg;
pub mod matricial;
pub mod numrange;
pub mod report;
pub mod shifts;
pub mod structure;

pub use classify::{
    classify_descriptor, classify_matrix_operator, classify_normal_finite, classify_scalar_block,
    classify_selfadjoint, BoundaryStatus, ClassifyError, EnvelopeShape, EnvelopeVerdict, Evidence,
    OperatorDescriptor, RepId, ShilovDescription, Status, UnitarySpectrum,
};
pub use config::ToleranceConfig;
pub use convex::{convex_hull, extreme_points_of_polygon, point_location, Polygon2D};
pub use linalg::{
    c64, direct_sum, eigenvalues, herm_eig, is_positive_semidefinite, op_norm, self_commutator,
    CMatrix, Cplx,
};
pub use numrange::{
    is_extreme_point_of_range, numerical_radius, numrange_sweep, spectral_extreme_boundary_points,
    NumericalRangeApprox,
};
pub use report::{emit_polygon_csv, emit_report, parse_descriptor, ReportDocument, ReportError};
pub use shifts::{
    circle_extreme_check, normalize_spec, periodic_envelope_verdict, periodic_symbol,
    radius_constancy_check, rotation_covariance_check, truncation, PeriodicShiftSpec, SymbolMatrix,
};
pub use structure::{
    commutant_dimension, decompose_irreducible, shift_moduli_equivalent, BlockDecomposition,
};
