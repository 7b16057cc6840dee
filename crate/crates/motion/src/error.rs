use thiserror::Error;

#[derive(Debug, Error)]
pub enum MotionError {
    #[error("degenerate demonstration: {0}")]
    DegenerateDemo(String),

    #[error("non-finite parameter or state: {0}")]
    Numeric(String),

    #[error("malformed trajectory record: {0}")]
    Parse(String),
}
