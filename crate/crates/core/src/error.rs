use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial degree must be at least 1, got {0}")]
    InvalidDegree(usize),
    #[error("interpolation nodes {0} and {1} coincide")]
    DuplicateNodes(usize, usize),
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("nonpositive Jacobian {jacobian:e} in element {element}")]
    NonpositiveJacobian { element: usize, jacobian: f64 },
    #[error("nonpositive water height {0:e}")]
    NonpositiveHeight(f64),
    #[error("wave speed must be positive, got {0:e}")]
    NonpositiveWaveSpeed(f64),
    #[error("flow regime mismatch: flux requires {expected}, state is {found}")]
    RegimeMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("negative radicand in {name}: {value:e} (boundary data incompatible with interior regime)")]
    NegativeRadicand { name: &'static str, value: f64 },
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
