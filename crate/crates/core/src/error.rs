use alloc::boxed::Box;
use alloc::string::String;

/// Failures raised by the discretization and its solvers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("element {element} has degenerate length {length:e}")]
    DegenerateElement { element: usize, length: f64 },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("singular block at node {node}")]
    SingularSystem { node: usize },
    #[error("Newton iteration did not converge in {iterations} iterations (constraint violation {violation:e})")]
    NewtonDiverged { iterations: usize, violation: f64 },
    #[error("array length mismatch: expected {expected}, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("initial curve violates the boundary constraint at node {node} (|F| = {violation:e})")]
    ConstraintViolatedAtStart { node: usize, violation: f64 },
    #[error("exact solution has no field component")]
    MissingExactField,
    #[error("error is exactly zero")]
    ZeroError,
    #[error("step {step}: {source}")]
    AtStep { step: usize, source: Box<Error> },
}

impl Error {
    /// Attach the time-step index at which the failure occurred.
    pub fn at_step(self, step: usize) -> Error {
        Error::AtStep {
            step,
            source: Box::new(self),
        }
    }

    /// The underlying error with any step context removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtStep { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
