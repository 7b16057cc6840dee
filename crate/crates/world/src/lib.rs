//! Simulated 2D tabletop.
//!
//! Replaces the physics simulator: an effector sweeps piecewise-linear paths
//! over a bounded workspace, objects respond to contact with kind-dependent
//! displacement models, and outcomes are read out as (color, angle) features
//! on the [0,100] scale used by the fields.

mod contact;
mod features;
mod state;

pub use contact::ContactParams;
pub use features::{color_feature, feature_to_workspace, goal_angle_feature, workspace_to_feature};
pub use state::{ObjectKind, PushOutcome, Workspace, WorldError, WorldState};
