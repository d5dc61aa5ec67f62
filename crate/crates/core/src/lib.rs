//! Maker-Breaker directed-triangle games on tournaments.
//!
//! Boards are tournaments on `1..=n`; Maker claims edges, Breaker deletes
//! them, and Maker wins by owning every edge of a directed triangle. The
//! crate builds the boards and their winning-set hypergraphs, plays and
//! exhaustively checks scripted strategies, solves small games exactly, and
//! computes the bias and flip-bias threshold quantities.

pub mod criteria;
pub mod error;
pub mod flip;
pub mod hypergraph;
pub mod par;
pub mod random;
pub mod rng;
pub mod solver;
pub mod strategies;
pub mod tournament;
pub mod transcript;
pub mod verify;

pub use error::{Error, Result};
pub use hypergraph::{validate_pairing, GameState, Pairing, PairingCheck, PairingIssue, Player, Threat, WinningSetSystem};
pub use par::Exec;
pub use tournament::{DirectedEdge, ScoreVector, Tournament, Triangle};
