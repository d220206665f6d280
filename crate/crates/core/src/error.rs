use thiserror::Error;

/// Errors raised by the geometry kernel and the constructions built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("lines are parallel")]
    ParallelLines,
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("polygon is not convex (turn {turn:.3e} at vertex {vertex})")]
    NotConvex { vertex: usize, turn: f64 },
    #[error("bisection did not converge (residual {residual:.3e})")]
    NoConvergence { residual: f64 },
    #[error("polygon has an odd number of vertices ({0})")]
    OddVertexCount(usize),
    #[error("polygon is not half-area (max residual {residual:.3e})")]
    NotHalfArea { residual: f64 },
    #[error("degenerate edge {0}: a+ or a- vanishes")]
    DegenerateEdge(usize),
    #[error("construction produced a non-convex polygon")]
    NonConvexResult,
    #[error("hyperbolic arc {edge} endpoints disagree on the product constant ({k0} vs {k1})")]
    InconsistentArc { edge: usize, k0: f64, k1: f64 },
    #[error("cusp criteria disagree at vertex {0}")]
    CriteriaDisagree(usize),
    #[error("lambda pattern and discrete envelope disagree on skew-symmetry")]
    ClassificationConflict,
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),
    #[error("rejection sampling failed after {0} attempts")]
    RetriesExhausted(usize),
    #[error("not a trapezoid: {0}")]
    NotATrapezoid(String),
    #[error("epsilon too large for a valid maximal-cusp polygon")]
    EpsilonTooLarge,
    #[error("parameter c = {c} outside valid interval ({lo}, {hi})")]
    OutsideValidInterval { c: f64, lo: f64, hi: f64 },
    #[error("validation failed: {0}")]
    ValidationFailed(String),
    #[error("every edge has parallel opposite sides")]
    AllEdgesParallel,
    #[error("malformed document: {0}")]
    MalformedDocument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
