//! Curiosity-driven control architecture over dynamic fields.
//!
//! An attention switch alternates between exploration (babbling around an
//! object until habituation suppresses its novelty) and exploitation
//! (selecting discovered goals by learning progress and stored error,
//! with persistence deciding how long to keep trying).

pub mod arch;
pub mod config;
pub mod goal;
pub mod log;
pub mod replay;

pub use arch::{ArchitectureState, Command, PushWorld};
pub use config::{ArchitectureConfig, Gains, Timing, DEFAULT_CONFIG_TOML};
pub use goal::{GoalPoint, GoalRecord};
pub use log::{Event, EventKind, Mode, TickTrace};
pub use replay::{
    attempts_per_selection, run_persistence_replay, selection_sequence, PersistenceSettings,
    ScriptedWorld, TwoObjectWorld,
};
