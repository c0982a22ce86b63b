use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("distinct points are affinely dependent")]
    DegenerateConfiguration,

    #[error("basis is rank deficient")]
    RankDeficient,

    #[error("polyhedron has empty feasible region")]
    InfeasibleSet,

    #[error("no projection candidate passed verification: {0}")]
    NumericalFailure(String),

    #[error("point does not belong to the set")]
    PointNotInSet,

    #[error("circumcentered-reflection operator undefined: distinct collinear triple")]
    OperatorUndefined,

    #[error("point lies in the polar cone; spherical projection undefined")]
    InPolarCone,

    #[error("point lies in the kernel of the circumcentered-reflection operator")]
    InKernel,

    #[error("three distinct points lie on a common great circle")]
    CommonGreatCircle,

    #[error("two distinct antipodal points have no unique geodesic midpoint")]
    AntipodalPair,

    #[error("cone is not proper: {0}")]
    NotProper(String),

    #[error("spherical polytopes have empty intersection")]
    EmptyIntersection,

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("malformed trace: {0}")]
    Trace(String),
}

impl Error {
    /// Stable machine-readable identifier for error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "InvalidInput",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::DegenerateConfiguration => "DegenerateConfiguration",
            Error::RankDeficient => "RankDeficient",
            Error::InfeasibleSet => "InfeasibleSet",
            Error::NumericalFailure(_) => "NumericalFailure",
            Error::PointNotInSet => "PointNotInSet",
            Error::OperatorUndefined => "OperatorUndefined",
            Error::InPolarCone => "InPolarCone",
            Error::InKernel => "InKernel",
            Error::CommonGreatCircle => "CommonGreatCircle",
            Error::AntipodalPair => "AntipodalPair",
            Error::NotProper(_) => "NotProper",
            Error::EmptyIntersection => "EmptyIntersection",
            Error::Scenario(_) => "Scenario",
            Error::Trace(_) => "Trace",
        }
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
