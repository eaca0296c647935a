use crate::multigraph::{EdgeRef, VertexId};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("edges {0} and {1} do not share exactly one endpoint instance")]
    NotIncident(EdgeRef, EdgeRef),
    #[error("edge {0} does not exist")]
    MissingEdge(EdgeRef),
    #[error("vertex {0} does not exist")]
    MissingVertex(VertexId),
    #[error("loop at vertex {0}: graphs are loopless")]
    Loop(VertexId),
    #[error("vertex {vertex} has multidegree {mdeg}, expected 2")]
    BadDegree { vertex: VertexId, mdeg: u32 },
    #[error("bad size: {0}")]
    BadSize(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("malformed model: {0}")]
    MalformedModel(String),
    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("node {0} is not a node of the decomposition tree")]
    InvalidNode(usize),
    #[error("graph has {n} vertices, above the exact-search cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("nice-ification exceeded its iteration budget of {0} moves")]
    IterationBudgetExceeded(usize),
    #[error("nice-ification step increased width from {before} to {after}")]
    WidthIncreased { before: usize, after: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge {0} is not covered by the pipeline mappings")]
    UnknownEdge(EdgeRef),
    #[error("pattern graph must be connected with at least one edge")]
    BadPattern,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
