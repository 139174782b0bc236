use thiserror::Error;

/// Errors raised while reading a DIMACS graph.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("no `p edge n m` line before line {line}")]
    MissingHeader { line: usize },
    #[error("line {line}: second problem line")]
    DuplicateHeader { line: usize },
    #[error("line {line}: unsupported problem format `{format}`")]
    UnsupportedFormat { line: usize, format: String },
    #[error("line {line}: malformed line")]
    MalformedLine { line: usize },
    #[error("line {line}: `{token}` is not a non-negative integer")]
    NotAnInteger { line: usize, token: String },
    #[error("line {line}: vertex {vertex} outside 1..={n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
}

/// Errors raised by model builders and decoders.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("number of colors {colors} outside 1..={n}")]
    ColorsOutOfRange { colors: usize, n: usize },
    #[error("number of colors must be at least 1")]
    NoColors,
    #[error("big-M constant must be at least 1")]
    BigMTooSmall,
    #[error("model has no variable named `{0}`")]
    MissingVariable(String),
    #[error("assignment has {got} values but the model has {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
    #[error("order vector of vertex {vertex} is not non-increasing")]
    NonMonotoneOrder { vertex: usize },
    #[error("vertex {vertex} has {count} colors assigned")]
    AmbiguousColor { vertex: usize, count: usize },
    #[error("model was built by {found}, expected {expected}")]
    WrongModelKind { expected: &'static str, found: String },
    #[error("invalid model: {0}")]
    Invalid(String),
}

/// Errors raised by the LP solver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("numerical failure in simplex: {0}")]
    Numerical(String),
    #[error("unsupported model: {0}")]
    Unsupported(String),
    #[error("linear relaxation is unbounded")]
    Unbounded,
}

/// Errors raised by the two-stage bounds engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("invalid bounds lb={lb}, ub={ub} for a graph with {n} vertices")]
    InvalidBounds { lb: usize, ub: usize, n: usize },
    #[error("no equitable {ub}-coloring exists, so the upper bound {ub} is wrong")]
    WrongUpperBound { ub: usize },
    #[error("decoded coloring failed certification: {0}")]
    Certification(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
}

/// Errors raised by the brute-force oracle.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle refuses graphs with {n} vertices (limit {limit})")]
    TooLarge { n: usize, limit: usize },
    #[error("number of colors {p} outside 1..={n}")]
    ColorsOutOfRange { p: usize, n: usize },
}
