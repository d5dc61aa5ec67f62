//! Deterministic move-choosing scripts and a driver that plays two of them
//! against each other.

mod cycle;
mod pairing;
mod pi6;

use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rand::seq::IteratorRandom;

pub use cycle::{CycleCatalog, CycleHopper, CATALOG};
pub use pairing::{compute_switch_cascade, small_pairing, Cascade, PairingScript};
pub use pi6::Pi6Breaker;

use crate::error::{Error, Result};
use crate::hypergraph::{GameState, Pairing, Player, WinningSetSystem};
use crate::rng::{rng_from_seed, Rng};
use crate::transcript::Transcript;

#[derive(Clone, Debug)]
pub enum StrategyScript {
    Pairing(PairingScript),
    Pi6(Pi6Breaker),
    CycleHop(CycleHopper),
    /// Always takes the lowest-id unclaimed element.
    Lowest(Player),
    /// Uniformly random unclaimed element from a seeded stream.
    Random(Player, Rng),
}

impl StrategyScript {
    pub fn breaker_pairing_small(sys: &WinningSetSystem, n: usize) -> Result<Self> {
        Ok(Self::Pairing(PairingScript::small(sys, n)?))
    }

    pub fn breaker_pairing(pairing: Pairing, sys: &WinningSetSystem) -> Self {
        Self::Pairing(PairingScript::new(pairing, sys.num_elements()))
    }

    pub fn breaker_pi6(sys: &WinningSetSystem) -> Result<Self> {
        Ok(Self::Pi6(Pi6Breaker::new(sys)?))
    }

    pub fn maker_pi7(sys: &WinningSetSystem) -> Result<Self> {
        Ok(Self::CycleHop(CycleHopper::pi7(sys)?))
    }

    pub fn maker_pin(sys: &WinningSetSystem) -> Result<Self> {
        Ok(Self::CycleHop(CycleHopper::restricted(sys)?))
    }

    pub fn maker_on_copy(sys: &WinningSetSystem, map: [u32; 7]) -> Result<Self> {
        Ok(Self::CycleHop(CycleHopper::on_copy(sys, map)?))
    }

    pub fn random(role: Player, seed: u64) -> Self {
        Self::Random(role, rng_from_seed(seed))
    }

    /// Resolves a CLI-style script name for the given side.
    pub fn by_name(name: &str, role: Player, sys: &WinningSetSystem, seed: u64) -> Result<Self> {
        let n = sys.tournament().n();
        let script = match (name, role) {
            ("pairing", Player::Breaker) => Self::breaker_pairing_small(sys, n)?,
            ("pi6", Player::Breaker) => Self::breaker_pi6(sys)?,
            ("pi7", Player::Maker) => Self::maker_pi7(sys)?,
            ("pin", Player::Maker) => Self::maker_pin(sys)?,
            ("lowest", r) => Self::Lowest(r),
            ("random", r) => Self::random(r, seed),
            _ => return Err(Error::Strategy(format!("no {role} script named {name:?}"))),
        };
        Ok(script)
    }

    pub fn role(&self) -> Player {
        match self {
            Self::Pairing(_) | Self::Pi6(_) => Player::Breaker,
            Self::CycleHop(_) => Player::Maker,
            Self::Lowest(r) | Self::Random(r, _) => *r,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Pairing(_) => "pairing",
            Self::Pi6(_) => "pi6",
            Self::CycleHop(_) => "cycle-hop",
            Self::Lowest(_) => "lowest",
            Self::Random(..) => "random",
        }
    }

    /// Elements outside this set never influence the script and are never
    /// claimed by it. Opponent moves outside it are interchangeable.
    pub fn support(&self) -> Option<&FixedBitSet> {
        match self {
            Self::CycleHop(c) => Some(c.support()),
            _ => None,
        }
    }

    /// The pairing a Breaker script currently relies on.
    pub fn current_pairing(&self) -> Option<&Pairing> {
        match self {
            Self::Pairing(p) => Some(p.pairing()),
            Self::Pi6(p) => p.pairing(),
            _ => None,
        }
    }

    pub fn without_double_threat(self) -> Self {
        match self {
            Self::CycleHop(c) => Self::CycleHop(c.without_double_threat()),
            other => other,
        }
    }

    /// The element to claim now. Must only be called on the script's turn.
    pub fn choose(&mut self, state: &GameState) -> Result<usize> {
        if state.to_move() != self.role() {
            return Err(Error::Strategy(format!("{} script asked to move on {}'s turn", self.role(), state.to_move())));
        }
        let e = match self {
            Self::Pairing(p) => p.choose(state)?,
            Self::Pi6(p) => p.choose(state)?,
            Self::CycleHop(c) => c.choose(state)?,
            Self::Lowest(_) => state.unclaimed().next().ok_or_else(|| Error::Strategy("board is full".into()))?,
            Self::Random(_, rng) => {
                state.unclaimed().choose(rng).ok_or_else(|| Error::Strategy("board is full".into()))?
            }
        };
        if !state.is_unclaimed(e) {
            return Err(Error::Strategy(format!("script chose taken element {}", state.system().element(e))));
        }
        Ok(e)
    }
}

/// Plays `maker` against `breaker` on a fresh `(a:b)` game until it is
/// decided and returns the transcript.
pub fn play_game(
    sys: &Arc<WinningSetSystem>,
    bias: (u32, u32),
    maker: &mut StrategyScript,
    breaker: &mut StrategyScript,
) -> Result<Transcript> {
    if maker.role() != Player::Maker || breaker.role() != Player::Breaker {
        return Err(Error::Strategy("scripts given for the wrong sides".into()));
    }
    let mut state = GameState::new(sys.clone(), bias.0, bias.1);
    let mut tr = Transcript::new(sys.tournament(), bias.0, bias.1);
    while state.winner_if_terminal().is_none() {
        let script = match state.to_move() {
            Player::Maker => &mut *maker,
            Player::Breaker => &mut *breaker,
        };
        let player = state.to_move();
        let e = script.choose(&state)?;
        state.claim(e)?;
        tr.push(player, sys.element(e));
    }
    tr.winner = state.winner_if_terminal();
    Ok(tr)
}
