//! Goals and their per-goal learning machinery.

use motion::DmpSkill;
use predictors::Predictor;

/// A goal is a (color, angle) coordinate in the [0,100]^2 feature space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoalPoint {
    pub color: f64,
    pub angle: f64,
}

impl GoalPoint {
    pub fn new(color: f64, angle: f64) -> Self {
        debug_assert!((0.0..=100.0).contains(&color) && (0.0..=100.0).contains(&angle));
        GoalPoint { color, angle }
    }

    pub fn distance(&self, other: &GoalPoint) -> f64 {
        let dc = self.color - other.color;
        let da = self.angle - other.angle;
        (dc * dc + da * da).sqrt()
    }

    /// Grid cell as (row = angle sample, col = color sample).
    pub fn cell(&self) -> (usize, usize) {
        (
            (self.angle.round() as usize).min(99),
            (self.color.round() as usize).min(99),
        )
    }
}

/// Everything attached to one discovered goal: its skill and its models.
#[derive(Debug, Clone)]
pub struct GoalRecord {
    pub goal: GoalPoint,
    pub dmp: DmpSkill,
    pub forward: Predictor,
    pub inverse: Predictor,
    /// Latest tanh-bounded forward-model error, in [0,1).
    pub current_error: f64,
}
