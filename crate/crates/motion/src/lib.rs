//! Dynamic movement primitives.
//!
//! One recorded demonstration is fit into a second-order attractor system
//! with a learned forcing term; the skill then regenerates goal-adapted
//! trajectories from new start and goal positions.

pub mod dmp;
pub mod trajectory;

mod error;

pub use dmp::{phase, DmpSkill, DEFAULT_ALPHA, DEFAULT_DAMPING, DEFAULT_N_BASIS, DEFAULT_SPRING};
pub use error::MotionError;
pub use trajectory::Trajectory;
