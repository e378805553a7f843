use thiserror::Error;

/// Errors raised by graph construction, the engines and the oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("edge ({u}, {v}) has an endpoint outside [0, {n})")]
    EndpointOutOfRange { u: usize, v: usize, n: usize },

    #[error("self-loop on vertex {v}")]
    SelfLoop { v: usize },

    #[error("invalid generator size: {0}")]
    InvalidSize(&'static str),

    #[error("edge probability {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("the vertex set is empty")]
    EmptyVertexSet,

    #[error("ranks are not a bijection onto 1..={n}")]
    NotABijection { n: usize },

    #[error("rank assignment covers {found} vertices, graph has {expected}")]
    RankMismatch { expected: usize, found: usize },

    #[error("vertex {v} is not in a graph with {n} vertices")]
    UnknownVertex { v: usize, n: usize },

    #[error("query trace inconsistent with graph at vertex {vertex}: {reason}")]
    InconsistentTrace { vertex: usize, reason: &'static str },

    #[error("time {t} is outside 0..={n}")]
    InvalidTime { t: usize, n: usize },

    #[error("vertex {v} is already revealed")]
    AlreadyRevealed { v: usize },

    #[error("vertices {u} and {v} are not adjacent")]
    NotAdjacent { u: usize, v: usize },

    #[error("path has {len} vertices, at least 2 are required")]
    PathTooShort { len: usize },

    #[error("path is not dangerous at the given time")]
    NotDangerous,

    #[error("{unrevealed} unrevealed vertices exceed the completion bound {bound}")]
    CompletionSpaceTooLarge { unrevealed: usize, bound: usize },

    #[error("{n} vertices exceed the exhaustive bound {bound}")]
    ExhaustiveBoundExceeded { n: usize, bound: usize },

    #[error("at least one trial is required")]
    ZeroTrials,
}

pub type Result<T> = core::result::Result<T, Error>;
