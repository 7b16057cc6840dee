use thiserror::Error;

use crate::grid::Shape;

/// Errors raised by field construction and stepping.
#[derive(Debug, Error)]
pub enum FieldError {
    #[error("shape mismatch: expected {expected:?}, got {got:?}")]
    ShapeMismatch { expected: Shape, got: Shape },

    #[error("integration unstable: dt = {dt} ms must stay below tau = {tau} ms")]
    IntegrationStability { dt: f64, tau: f64 },

    #[error("invalid configuration: {0}")]
    Configuration(String),
}
