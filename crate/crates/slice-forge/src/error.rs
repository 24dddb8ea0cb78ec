use thiserror::Error;

/// Errors shared across the library.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("division by a zero quaternion")]
    ZeroDivision,
    #[error("quaternion is not an imaginary unit: {0}")]
    NotAUnit(String),
    #[error("grids do not match")]
    GridMismatch,
    #[error("grid has no cells")]
    EmptyGrid,
    #[error("point ({0}, {1}) is outside the region")]
    PointOutsideRegion(f64, f64),
    #[error("distance to the complement must be positive (got {0})")]
    NonpositiveDistance(f64),
    #[error("point is outside the radius of convergence (|x| = {abs}, R = {radius})")]
    OutsideRadius { abs: f64, radius: f64 },
    #[error("point is outside the function domain")]
    OutsideDomain,
    #[error("real-axis values are not conjugation-fixed (max deviation {0})")]
    RealAxisMismatch(f64),
    #[error("the two units coincide (|J - K| = {0})")]
    CoincidentUnits(f64),
    #[error("trace point is outside the common half-slice region")]
    OutsideDJK,
    #[error("cap probes disagree (spread {spread} > tol {tol}); the function is not locally a slice function here")]
    CapDisagreement { spread: f64, tol: f64 },
    #[error("trace point is outside the symmetric completion")]
    OutsideCompletion,
    #[error("extension values disagree across latitude choices (spread {spread} > tol {tol})")]
    InconsistentExtension { spread: f64, tol: f64 },
    #[error("no second unit is available on this sphere inside the domain")]
    NoSecondUnit,
    #[error("probe stencil of step {0} does not fit inside the slice region")]
    TooCloseToBoundary(f64),
    #[error("sail attachment violates condition {condition}: {detail}")]
    InvalidSail { condition: u8, detail: String },
    #[error("invalid width function: {0}")]
    InvalidWidth(String),
    #[error("point is outside the domain")]
    PointOutsideDomain,
    #[error("domain is not speared at this resolution: component at latitude {latitude} misses the real axis")]
    NotSpeared { latitude: f64 },
    #[error("classifier implications violated: {0}")]
    InternalInconsistency(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidConfig(e.to_string())
    }
}
