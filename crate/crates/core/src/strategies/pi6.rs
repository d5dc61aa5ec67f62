//! Breaker's winning script on Π(6).
//!
//! Breaker answers the first Maker move by deleting (2,5), or (6,2) if Maker
//! took (2,5). From then on she plays a pairing that leaves (2,3) spare and
//! repairs it with a switch cascade whenever Maker lands on a paired element
//! before the pairing phase starts.

use fixedbitset::FixedBitSet;

use super::pairing::{compute_switch_cascade, pairing_of, respond, take_new};
use crate::error::{Error, Result};
use crate::hypergraph::{GameState, Pairing, WinningSetSystem};
use crate::tournament::{DirectedEdge, Tournament};

const DEFAULT_PAIRS: [((u32, u32), (u32, u32)); 6] = [
    ((1, 2), (3, 1)),
    ((4, 2), (3, 4)),
    ((5, 3), (4, 5)),
    ((6, 4), (5, 6)),
    ((3, 6), (6, 2)),
    ((5, 1), (1, 4)),
];

const STATIC_PAIRS: [((u32, u32), (u32, u32)); 4] =
    [((2, 3), (4, 2)), ((3, 4), (5, 3)), ((6, 4), (5, 6)), ((1, 4), (4, 5))];

#[derive(Clone, Debug)]
enum Phase {
    Opening,
    /// Maker opened with (2,5) and Breaker took (6,2).
    AfterSpoke,
    Pairing(Pairing),
}

#[derive(Clone, Debug)]
pub struct Pi6Breaker {
    phase: Phase,
    seen: FixedBitSet,
    spare: usize,
    spoke: usize,
    rim: usize,
    tail: usize,
    top: usize,
    default: Pairing,
    cascade_lengths: Vec<usize>,
}

impl Pi6Breaker {
    pub fn new(sys: &WinningSetSystem) -> Result<Self> {
        if *sys.tournament() != Tournament::parity(6)? {
            return Err(Error::Strategy("the Π(6) script needs the parity board on 6 vertices".into()));
        }
        let id = |a, b| sys.element_id(DirectedEdge::new(a, b));
        Ok(Self {
            phase: Phase::Opening,
            seen: FixedBitSet::with_capacity(sys.num_elements()),
            spare: id(2, 3)?,
            spoke: id(2, 5)?,
            rim: id(6, 2)?,
            tail: id(5, 1)?,
            top: id(1, 2)?,
            default: pairing_of(sys, &DEFAULT_PAIRS)?,
            cascade_lengths: Vec::new(),
        })
    }

    /// Current pairing, once the pairing phase has started.
    pub fn pairing(&self) -> Option<&Pairing> {
        match &self.phase {
            Phase::Pairing(p) => Some(p),
            _ => None,
        }
    }

    /// Lengths of the cascades performed so far.
    pub fn cascade_lengths(&self) -> &[usize] {
        &self.cascade_lengths
    }

    fn cascade(&mut self, sys: &WinningSetSystem, base: &Pairing, m: usize) -> Result<Pairing> {
        let c = compute_switch_cascade(sys, base, m, self.spare)?;
        self.cascade_lengths.push(c.length());
        Ok(c.pairing.with_hint(self.spare))
    }

    pub(crate) fn choose(&mut self, state: &GameState) -> Result<usize> {
        let sys = state.system();
        let new = take_new(&mut self.seen, state.maker());
        let m = *new.last().ok_or_else(|| Error::Strategy("Breaker asked to move before Maker".into()))?;
        match std::mem::replace(&mut self.phase, Phase::Opening) {
            Phase::Opening if m == self.spoke => {
                self.phase = Phase::AfterSpoke;
                Ok(self.rim)
            }
            Phase::Opening => {
                let default = self.default.clone();
                self.phase = Phase::Pairing(self.cascade(sys, &default, m)?);
                Ok(self.spoke)
            }
            Phase::AfterSpoke if m == self.tail => {
                self.phase = Phase::Pairing(pairing_of(sys, &STATIC_PAIRS)?);
                Ok(self.top)
            }
            Phase::AfterSpoke => {
                let reduced = Pairing::new(self.default.pairs[..4].to_vec());
                self.phase = Phase::Pairing(self.cascade(sys, &reduced, m)?);
                Ok(self.tail)
            }
            Phase::Pairing(p) => {
                let e = respond(&p, state, Some(m));
                self.phase = Phase::Pairing(p);
                Ok(e)
            }
        }
    }
}
