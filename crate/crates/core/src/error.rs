use thiserror::Error;

use crate::tournament::DirectedEdge;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("tournament size must be at least {min}, got {n}")]
    InvalidSize { n: usize, min: usize },

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("probability {0} must lie strictly inside (0, 1)")]
    DegenerateProbability(f64),

    #[error("edge {0} has opposite orientation")]
    EdgeOpposite(DirectedEdge),

    #[error("vertex {vertex} outside 1..={n}")]
    VertexOutOfRange { vertex: u32, n: usize },

    #[error("vertices {0}, {1}, {2} are not distinct")]
    NonDistinct(u32, u32, u32),

    #[error("vertex {0} is not the smallest of the triple")]
    NotCanonical(u32),

    #[error("unknown element id {0}")]
    UnknownElement(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("odd n required (got {0}); flip analysis is restricted to regular parity tournaments")]
    EvenN(usize),

    #[error("index {index} out of range 0..={max}")]
    OutOfRange { index: usize, max: usize },

    #[error("illegal move: {0}")]
    IllegalMove(String),

    #[error("strategy error: {0}")]
    Strategy(String),

    #[error("no alternating path from element {from} to the free element {free}")]
    NoCascadePath { from: usize, free: usize },

    #[error("board has {0} elements; the exact solver supports at most 64")]
    BoardTooLarge(usize),

    #[error("only Maker bias 1 is supported, got {0}")]
    UnsupportedBias(u32),

    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
