use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("vertex {vertex} is out of range for a hypergraph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("vertex {vertex} is outside the ground set")]
    VertexOutsideGround { vertex: usize },

    #[error("hypergraphs may not contain the empty edge")]
    EmptyEdge,

    #[error("parameter `{name}` out of range: {detail}")]
    Parameter { name: &'static str, detail: String },

    #[error("hypergraph is not uniform")]
    NotUniform,

    #[error("input set is not independent")]
    NotIndependent,

    #[error("hypergraph is not an antichain")]
    NotAntichain,

    #[error("hypergraph has no edges")]
    NoEdges,

    #[error("size guard exceeded for {what}: {n} vertices > limit {limit}")]
    Guard { what: &'static str, n: usize, limit: usize },

    #[error("round watchdog fired after {rounds} rounds")]
    Watchdog { rounds: usize },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, detail: impl Into<String>) -> Self {
        Error::Parameter { name, detail: detail.into() }
    }
}
