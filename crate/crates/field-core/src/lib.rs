//! Numerical engine for dynamic-field primitives.
//!
//! Everything here integrates with explicit Euler at a fixed step and is
//! deterministic for a fixed seed: activation fields over 0-D/1-D/2-D
//! feature grids, difference-of-Gaussians interaction kernels, gated memory
//! traces, two-input slow boosts and inter-field projections.

pub mod config;
pub mod field;
pub mod grid;
pub mod kernel;
pub mod noise;
pub mod projection;
pub mod trace;
pub mod transfer;

mod error;

pub use error::FieldError;
pub use field::FieldGrid;
pub use grid::{Grid, Shape};
pub use kernel::InteractionKernel;
pub use noise::GaussStream;
pub use projection::{DimMap, Projection};
pub use trace::{Gate, MemoryTrace, SlowBoost};
pub use transfer::Transfer;

/// Samples per feature dimension; the feature space is [0,100].
pub const FEATURE_EXTENT: usize = 100;

/// Global simulation step in milliseconds.
pub const DT_MS: f64 = 10.0;
