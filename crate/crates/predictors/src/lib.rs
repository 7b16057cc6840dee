//! Forward and inverse models as small multilayer perceptrons.
//!
//! A forward model maps (object pose, motor command) to the outcome angle
//! feature; an inverse model maps (object pose, desired angle) to a motor
//! command. Training keeps a 20-sample FIFO replay buffer: each call first
//! takes one gradient step on the new samples, then runs one epoch over the
//! whole buffer. Reported losses are tanh-bounded so they stay below one.

mod mlp;

pub use mlp::{bounded_loss, Predictor, PredictorError, PredictorKind, Sample, BUFFER_CAPACITY};
