//! Numeric tolerances shared by every discretized check.

/// Absolute and relative tolerances. All checks that compare sampled
/// quantities take one of these rather than a literal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            abs: 1e-9,
            rel: 1e-7,
        }
    }
}

impl Tolerances {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    /// Threshold scaled by `max(1, |scale|)`.
    pub fn scaled(&self, scale: f64) -> f64 {
        self.rel * scale.abs().max(1.0)
    }
}

/// Slack used when filtering candidate points against the balls of an intersection.
pub const FEASIBILITY_SLACK: f64 = 1e-9;

/// Unit-norm tolerance on directions passed to support queries.
pub const UNIT_NORM_TOL: f64 = 1e-9;

/// Orthogonality tolerance for similarity rotations.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;
