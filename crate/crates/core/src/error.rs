use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero has no primitive representative")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid cone: {0}")]
    InvalidCone(String),
    #[error("empty cone list")]
    EmptyConeList,
    #[error("empty box")]
    EmptyBox,
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("diagram fails axiom: {0}")]
    AxiomFailure(String),
    #[error("diagram is not smooth: {0}")]
    NotSmooth(String),
    #[error("degenerate Kähler parameters: {0}")]
    DegenerateKahler(String),
    #[error("charge matrix: {0}")]
    Charges(String),
    #[error("non-primitive covector {0}")]
    NonPrimitive(String),
    #[error("edge {0} is not part of the diagram")]
    UnknownEdge(String),
    #[error("on wall: {0}")]
    OnWall(String),
    #[error("path hits discriminant: {0}")]
    PathHitsDiscriminant(String),
    #[error("face {0} is not a dual vertex")]
    UnknownDualVertex(String),
    #[error("corrections must have positive valuation (offending vertex {0})")]
    NonPositiveCorrection(String),
    #[error("correction coefficients must be integers (offending vertex {0})")]
    NonIntegralCorrection(String),
    #[error("family cannot converge: {0}")]
    Divergent(String),
    #[error("wall not adjacent to series chamber: {0}")]
    WallNotAdjacent(String),
    #[error("invalid wall data: {0}")]
    InvalidWall(String),
    #[error("unknown format {0}")]
    UnknownFormat(String),
    #[error("empty diagram")]
    EmptyDiagram,
    #[error("invalid truncation: {0}")]
    InvalidTruncation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
