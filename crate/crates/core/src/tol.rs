//! Numerical tolerance policy threaded through every operation.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Absolute threshold below which a quadratic-form or entry value counts
/// as zero.
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;

/// Relative singular-value threshold for rank and nullspace decisions.
pub const DEFAULT_RANK_TOL_REL: f64 = 1e-8;

/// Pair of tolerances used by all support, rank and zero classifications.
///
/// `zero_tol` is absolute: quadratic forms, matrix entries and vector
/// components with magnitude at most `zero_tol` are treated as zero.
/// `rank_tol_rel` is relative: a singular value counts as nonzero only if
/// it exceeds `rank_tol_rel` times the largest singular value of the same
/// decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub zero_tol: f64,
    pub rank_tol_rel: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            zero_tol: DEFAULT_ZERO_TOL,
            rank_tol_rel: DEFAULT_RANK_TOL_REL,
        }
    }
}

impl TolerancePolicy {
    /// Build a policy, rejecting values outside (0, 1).
    pub fn new(zero_tol: f64, rank_tol_rel: f64) -> Result<Self> {
        if !(zero_tol > 0.0 && zero_tol < 1.0) {
            return Err(Error::InvalidTolerance(format!(
                "zero_tol must lie in (0, 1), got {zero_tol:e}"
            )));
        }
        if !(rank_tol_rel > 0.0 && rank_tol_rel < 1.0) {
            return Err(Error::InvalidTolerance(format!(
                "rank_tol_rel must lie in (0, 1), got {rank_tol_rel:e}"
            )));
        }
        Ok(TolerancePolicy {
            zero_tol,
            rank_tol_rel,
        })
    }

    /// True if `x` counts as zero under the absolute threshold.
    pub fn is_zero(&self, x: f64) -> bool {
        x.abs() <= self.zero_tol
    }
}
