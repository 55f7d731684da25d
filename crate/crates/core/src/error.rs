use thiserror::Error;

use crate::numeric::NumericError;

/// Errors raised by geometric constructions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("the two elements coincide (up to scale)")]
    IdenticalElements,
    #[error("point lies at infinity where an affine point is required")]
    NotAffine,
    #[error("the two Fermat points coincide")]
    CoincidentFermatPoints,
    #[error("five points do not determine a unique conic (kernel dimension {0})")]
    NoUniqueConic(usize),
    #[error("conic is degenerate")]
    DegenerateConic,
    #[error("conic has no affine center")]
    NotCentral,
    #[error("point is not on the conic (residual {0:e})")]
    PointNotOnConic(f64),
    #[error("polar of a singular point of a degenerate conic is undefined")]
    PoleUndefined,
    #[error("the line is a component of the conic")]
    LineInConic,
    #[error("circles are concentric")]
    ConcentricCircles,
    #[error("circle and conic meet in {0} real residual points, expected 3")]
    FewerThanThreeRealIntersections(usize),
    #[error("triangle is not scalene")]
    NotScalene,
    #[error("triangle is degenerate (collinear or repeated vertices)")]
    DegenerateTriangle,
    #[error("construction lines are not concurrent (residual {0:e})")]
    LinesNotConcurrent(f64),
    #[error("triangles are not perspective under this pairing (residual {0:e})")]
    NotPerspective(f64),
    #[error("triangles are not triply perspective")]
    NotTriplyPerspective,
    #[error("hexagon has repeated adjacent vertices")]
    DegenerateHexagon,
    #[error("parameter makes the construction degenerate: {0}")]
    DegenerateParameter(String),
    #[error("correspondence frame is not in general position")]
    DegenerateFrame,
    #[error("point is not on the Hessian line (residual {0:e})")]
    NotOnHessianLine(f64),
    #[error("a chord through the center point is tangent; the vertex collapses")]
    TangentChord,
    #[error("vertex is not on the conic (residual {0:e})")]
    VertexNotOnConic(f64),
    #[error("scene is degenerate: {0}")]
    DegenerateScene(String),
    #[error("no candidate triangle passed validation")]
    NoValidCandidate,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
