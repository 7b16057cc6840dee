//! Event records emitted by the update loop.

use crate::goal::GoalPoint;

/// Behavioral mode derived from field activations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exploring,
    Exploiting,
    Idle,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Exploring => "exploring",
            Mode::Exploiting => "exploiting",
            Mode::Idle => "idle",
        }
    }
}

/// What happened, when. `t_s` is simulated time in seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub t_s: f64,
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EventKind {
    /// A novel goal entered the ledger.
    Discovery { goal: GoalPoint, first_error: f64 },
    /// The selection process latched a goal for learning.
    Selection { goal_idx: usize, goal: GoalPoint },
    /// A motion started (exploration babble or exploitation attempt).
    MotionStart { exploratory: bool },
    /// Outcome of a motion.
    Outcome { moved: bool, angle: Option<f64> },
    /// A new error value was computed for a goal.
    ErrorUpdate { goal_idx: usize, old: f64, new: f64 },
    /// Learning-progress trace level after an update.
    LpUpdate { goal_idx: usize, lp: f64 },
    /// The persistence threshold fired; the action memory resets.
    ForceReset { goal_idx: usize },
    /// Tonic activation crossed threshold (exploration engaged).
    TonicOn,
    /// Tonic activation fell back below threshold.
    TonicOff,
    /// The attended object became habituated (selection peak suppressed).
    Habituated { color: f64 },
    /// Pose generation gave up: the ring is saturated with inhibition.
    ExplorationExhausted,
}

impl EventKind {
    pub fn name(&self) -> &'static str {
        match self {
            EventKind::Discovery { .. } => "discovery",
            EventKind::Selection { .. } => "selection",
            EventKind::MotionStart { .. } => "motion_start",
            EventKind::Outcome { .. } => "outcome",
            EventKind::ErrorUpdate { .. } => "error_update",
            EventKind::LpUpdate { .. } => "lp_update",
            EventKind::ForceReset { .. } => "force_reset",
            EventKind::TonicOn => "tonic_on",
            EventKind::TonicOff => "tonic_off",
            EventKind::Habituated { .. } => "habituated",
            EventKind::ExplorationExhausted => "exploration_exhausted",
        }
    }
}

/// Coarse per-tick summary for trace logging.
#[derive(Debug, Clone, PartialEq)]
pub struct TickTrace {
    pub t_s: f64,
    pub mode: Mode,
    pub tonic: f64,
    pub phasic_max: f64,
    pub boost: f64,
    pub selection_max: f64,
    pub visual_memory_max: f64,
}
