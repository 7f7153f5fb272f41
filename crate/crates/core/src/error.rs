use thiserror::Error;

use crate::graph::{EdgeId, VertexId};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("loop edge at vertex {0}")]
    LoopEdge(VertexId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(VertexId, VertexId),
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("vertex {0} is not in the set")]
    VertexNotInSet(VertexId),
    #[error("edge id {0} listed more than once")]
    DuplicateEdgeId(EdgeId),
    #[error("edge id {edge} out of range for a graph with {m} edges")]
    EdgeOutOfRange { edge: EdgeId, m: usize },
    #[error("expected {expected} entries, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("bounds out of range at vertex {vertex}: need 0 <= {lower} <= {upper} <= {degree}")]
    BoundsOutOfRange {
        vertex: VertexId,
        lower: usize,
        upper: usize,
        degree: usize,
    },
    #[error("lower bound equals upper bound ({bound}) at vertex {vertex} of positive degree")]
    StrictnessViolated { vertex: VertexId, bound: usize },
    #[error("orientation violates bounds at vertex {vertex} (out-degree {out_degree})")]
    BoundsViolatedByOrientation { vertex: VertexId, out_degree: usize },
    #[error("hypotheses not satisfied at vertices {vertices:?}")]
    HypothesesNotSatisfied { vertices: Vec<VertexId> },
    #[error("graph is not bipartite; odd cycle through edges {cycle:?}")]
    NotBipartite { cycle: Vec<EdgeId> },
    #[error("no orientation or factor satisfies the bounds")]
    Infeasible,
    #[error("internal invariant broken: {0}")]
    InternalInvariantBroken(String),

    #[error("{n} vertices exceed the exhaustive subset cap of {cap}")]
    TooLargeForExhaustive { n: usize, cap: usize },
    #[error("{m} edges exceed the enumeration cap of {cap}")]
    TooLargeForEnumeration { m: usize, cap: usize },
    #[error("invalid flow network: {0}")]
    InvalidNetwork(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("no bounds given for vertex {0}")]
    MissingVertex(VertexId),
    #[error("bounds given twice for vertex {0}")]
    DuplicateVertex(VertexId),
    #[error("empty sampling window at vertex {vertex} (degree {degree})")]
    WindowEmpty { vertex: VertexId, degree: usize },
    #[error("result does not match the instance edge list at line {line}")]
    EdgeListMismatch { line: usize },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn invariant(message: impl Into<String>) -> Self {
        Error::InternalInvariantBroken(message.into())
    }

    /// Strips any line-number wrapper.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtLine { source, .. } => source.root(),
            other => other,
        }
    }
}
