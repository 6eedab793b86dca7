use crate::syntax::Direction;
use crate::types::BaseTopo;

/// Errors raised while evaluating a well-typed program.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuntimeError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("`{0}` applied to an empty collection")]
    EmptyCollection(&'static str),
    #[error("`{0}` is not supported on grids")]
    GridUnsupportedOp(&'static str),
    #[error("structural error: pattern matched {matched} positions, replacement has {replacement} elements (grid {rows}x{cols})")]
    Structural { matched: usize, replacement: usize, rows: usize, cols: usize },
    #[error("fixpoint not reached after {0} steps")]
    FixpointDivergence(usize),
    #[error("`{0}`: no neighbor in that direction")]
    NoNeighbor(String),
    #[error("the first argument of `{0}` must be a pattern variable bound in the collection")]
    PositionalArgNotPatternVar(String),
    #[error("direction `{direction}` does not exist in a {}", .topology.name())]
    DirectionTopologyMismatch { direction: Direction, topology: BaseTopo },
    #[error("functional values cannot be compared")]
    IncomparableValue,
    #[error("invalid position {0}")]
    InvalidPosition(usize),
    #[error("grid rows have different lengths")]
    RaggedGrid,
    #[error("unbound identifier `{0}` at run time")]
    Unbound(String),
    #[error("run-time type mismatch: {0}")]
    TypeMismatch(String),
}
