//! Shared tolerance and reproducibility settings.

use serde::{Deserialize, Serialize};

/// Absolute floor applied to every relative tolerance, so comparisons stay
/// meaningful for inputs with tiny norms.
pub const ABS_TOL_FLOOR: f64 = 1e-14;

/// Largest matrix dimension the dense solvers accept.
pub const MAX_DIM: usize = 64;

/// Tolerances, sweep resolution and RNG seeding used by every operation.
///
/// All "within tolerance" comparisons scale the relevant epsilon by a norm of
/// the data, floored at [`ABS_TOL_FLOOR`]. Identical inputs and config produce
/// bit-identical outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Relative tolerance for Hermiticity checks.
    pub eps_herm: f64,
    /// Relative tolerance for eigensolver convergence and rank decisions.
    pub eps_eig: f64,
    /// Relative tolerance for geometric membership and hull pruning.
    pub eps_hull: f64,
    /// Number of equispaced support directions in a numerical-range sweep.
    pub angle_count: u32,
    /// Evaluation budget for norm-drop certificate searches.
    pub cert_budget: u32,
    /// Seed for every randomized search; fixed seed means fixed output.
    pub rng_seed: u64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            eps_herm: 1e-10,
            eps_eig: 1e-10,
            eps_hull: 1e-6,
            angle_count: 720,
            cert_budget: 2000,
            rng_seed: 0x5EED_0151,
        }
    }
}

impl ToleranceConfig {
    /// Checks the structural invariants (positive tolerances, at least 16
    /// sweep angles). Returns a human-readable complaint on failure.
    pub fn validate(&self) -> Result<(), String> {
        if !(self.eps_herm > 0.0) || !self.eps_herm.is_finite() {
            return Err(format!("eps_herm must be positive, got {}", self.eps_herm));
        }
        if !(self.eps_eig > 0.0) || !self.eps_eig.is_finite() {
            return Err(format!("eps_eig must be positive, got {}", self.eps_eig));
        }
        if !(self.eps_hull > 0.0) || !self.eps_hull.is_finite() {
            return Err(format!("eps_hull must be positive, got {}", self.eps_hull));
        }
        if self.angle_count < 16 {
            return Err(format!(
                "angle_count must be at least 16, got {}",
                self.angle_count
            ));
        }
        if self.cert_budget == 0 {
            return Err("cert_budget must be positive".to_string());
        }
        Ok(())
    }

    /// Relative tolerance `eps * scale`, floored at [`ABS_TOL_FLOOR`].
    pub fn tol(eps: f64, scale: f64) -> f64 {
        (eps * scale).max(ABS_TOL_FLOOR)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        assert!(ToleranceConfig::default().validate().is_ok());
    }

    #[test]
    fn rejects_small_angle_count() {
        let cfg = ToleranceConfig {
            angle_count: 8,
            ..ToleranceConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn tol_has_absolute_floor() {
        assert_eq!(ToleranceConfig::tol(1e-10, 0.0), ABS_TOL_FLOOR);
        assert!(ToleranceConfig::tol(1e-10, 1e6) > ABS_TOL_FLOOR);
    }
}
