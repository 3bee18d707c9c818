//! The single tolerance knob threaded through predicates and verifiers.

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Residual thresholds.
///
/// Algebraic predicates (Study condition, rotation test, bilinear-form
/// residuals) are evaluated on inputs scaled to unit max-coordinate and
/// compared against `algebraic`. Geometric predicates use `linear` for
/// lengths relative to the problem scale and `angular` for sines of angles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Tolerance<T: Real> {
    pub algebraic: T,
    pub linear: T,
    pub angular: T,
    /// Snap angles below this (or within it of π) are not counted as snapping.
    pub snap: T,
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        Self {
            algebraic: T::lit(1e-9),
            linear: T::lit(1e-8),
            angular: T::lit(1e-8),
            snap: T::lit(1e-6),
        }
    }
}

impl<T: Real> Tolerance<T> {
    /// Same thresholds scaled by `factor` (used by `--tol` overrides).
    pub fn scaled(self, factor: T) -> Self {
        Self {
            algebraic: self.algebraic * factor,
            linear: self.linear * factor,
            angular: self.angular * factor,
            snap: self.snap,
        }
    }
}
