//! Game transcripts: a JSON record of the board, the bias and every turn,
//! plus replay with legality checking.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{GameState, Player, WinningSetSystem};
use crate::tournament::{DirectedEdge, Tournament};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurnRecord {
    pub player: Player,
    pub elements: Vec<DirectedEdge>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    /// Tournament file payload (`n`, newline, orientation bits).
    pub board: String,
    pub bias: [u32; 2],
    pub moves: Vec<TurnRecord>,
    pub winner: Option<Player>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

impl Transcript {
    pub fn new(t: &Tournament, maker_bias: u32, breaker_bias: u32) -> Self {
        Self {
            board: t.to_text(),
            bias: [maker_bias, breaker_bias],
            moves: Vec::new(),
            winner: None,
            seed: None,
            meta: None,
        }
    }

    /// Appends one element to the current turn, opening a new turn record
    /// when the player changes.
    pub fn push(&mut self, player: Player, e: DirectedEdge) {
        match self.moves.last_mut() {
            Some(turn) if turn.player == player => turn.elements.push(e),
            _ => self.moves.push(TurnRecord { player, elements: vec![e] }),
        }
    }

    /// Builds a transcript from a sequence of element-id moves starting at
    /// `start`; consecutive moves by the same player are grouped.
    pub fn from_moves(start: &GameState, moves: &[(Player, usize)]) -> Result<Self> {
        let (a, b) = start.bias();
        let sys = start.system();
        let mut out = Transcript::new(sys.tournament(), a, b);
        let mut state = start.clone();
        for &(p, e) in moves {
            state.play(p, e)?;
            out.push(p, sys.element(e));
        }
        out.winner = state.winner_if_terminal();
        Ok(out)
    }

    pub fn tournament(&self) -> Result<Tournament> {
        Tournament::from_text(&self.board)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Replay failure, pointing at the 1-based turn record that broke.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayError {
    pub ply: usize,
    pub message: String,
}

impl std::fmt::Display for ReplayError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ply {}: {}", self.ply, self.message)
    }
}

impl std::error::Error for ReplayError {}

/// Replays every turn, checking that each player moves in order, claims only
/// unclaimed board edges, uses their whole bias unless the game ends, and
/// that the recorded winner matches. Returns the final state.
pub fn replay(tr: &Transcript) -> std::result::Result<GameState, ReplayError> {
    let err = |ply: usize, message: String| ReplayError { ply, message };
    let t = tr.tournament().map_err(|e| err(0, e.to_string()))?;
    let [a, b] = tr.bias;
    if a == 0 || b == 0 {
        return Err(err(0, "bias entries must be positive".into()));
    }
    let sys = Arc::new(WinningSetSystem::new(&t));
    let mut state = GameState::new(sys.clone(), a, b);
    for (i, turn) in tr.moves.iter().enumerate() {
        let ply = i + 1;
        if state.winner_if_terminal().is_some() {
            return Err(err(ply, "move after the game was decided".into()));
        }
        if turn.player != state.to_move() {
            return Err(err(ply, format!("{} moved out of turn", turn.player)));
        }
        if turn.elements.is_empty() {
            return Err(err(ply, "empty turn".into()));
        }
        for &e in &turn.elements {
            if state.to_move() != turn.player {
                return Err(err(ply, format!("{} claimed more than their bias", turn.player)));
            }
            let id = sys.element_id(e).map_err(|x| err(ply, x.to_string()))?;
            state.claim(id).map_err(|x| err(ply, x.to_string()))?;
        }
        let finished = state.winner_if_terminal().is_some() || state.num_unclaimed() == 0;
        if state.to_move() == turn.player && !finished {
            return Err(err(ply, format!("{} claimed fewer elements than their bias", turn.player)));
        }
    }
    let winner = state.winner_if_terminal();
    if winner != tr.winner {
        return Err(err(
            tr.moves.len(),
            format!("recorded winner {:?} but replay gives {:?}", tr.winner, winner),
        ));
    }
    Ok(state)
}
