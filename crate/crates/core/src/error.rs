use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph of order {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("weight at vertex {vertex} is not strictly positive: {weight}")]
    NonPositiveWeight { vertex: usize, weight: String },
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
    #[error("invalid generator parameters: {0}")]
    Generator(String),

    #[error("graph6: {0}")]
    Graph6(String),
    #[error("json: {0}")]
    Json(String),

    #[error("{op}: graph order {n} exceeds cap {cap}")]
    CapExceeded { op: &'static str, n: usize, cap: usize },

    #[error("scenario: {0}")]
    Scenario(String),
    #[error("event is not valid in this scenario: {0}")]
    InvalidEvent(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid probability assignment: {0}")]
    Assignment(String),
    #[error("tolerance must be positive, got {0}")]
    Tolerance(f64),

    #[error("solver did not converge after {iterations} iterations; bracket [{lower}, {upper}]")]
    Nonconvergence {
        lower: f64,
        upper: f64,
        iterations: usize,
    },
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("bound ordering violated: {0}")]
    OrderingViolation(String),
}

impl Error {
    /// Stable machine-readable identifier for the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::VertexOutOfRange { .. } => "vertex_out_of_range",
            Error::SelfLoop(_) => "self_loop",
            Error::NonPositiveWeight { .. } => "non_positive_weight",
            Error::WeightCount { .. } => "weight_count",
            Error::BadRational(_) => "bad_rational",
            Error::Generator(_) => "generator",
            Error::Graph6(_) => "graph6",
            Error::Json(_) => "json",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::Scenario(_) => "scenario",
            Error::InvalidEvent(_) => "invalid_event",
            Error::Dimension(_) => "dimension",
            Error::Assignment(_) => "assignment",
            Error::Tolerance(_) => "tolerance",
            Error::Nonconvergence { .. } => "nonconvergence",
            Error::Unbounded => "unbounded",
            Error::Numerical(_) => "numerical",
            Error::OrderingViolation(_) => "ordering_violation",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
