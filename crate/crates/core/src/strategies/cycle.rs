//! Maker's cycle-hopping script on Π(7) and on any board holding an
//! order-preserving copy of Π(7).
//!
//! Maker opens with (1,2). Breaker's reply decides which catalogued
//! hypergraph cycle through (1,2) is still intact; Maker then claims every
//! second element along it. Each claim leaves one threat that Breaker must
//! answer, and the last claim leaves two.

use fixedbitset::FixedBitSet;

use super::pairing::take_new;
use crate::error::{Error, Result};
use crate::hypergraph::{GameState, WinningSetSystem};
use crate::tournament::{DirectedEdge, Tournament};

type Path = &'static [(u32, u32)];

/// The cycles, bridges and classification lists on Π(7), in copy
/// coordinates. Cycles are closed: the first element is repeated at the end.
#[derive(Clone, Debug)]
pub struct CycleCatalog {
    pub outer: Path,
    pub bridges: [Path; 4],
    /// Detour avoiding (5,6).
    pub avoid_rim: Path,
    /// Detour avoiding the left arc.
    pub avoid_left: Path,
    /// Detour avoiding the right arc.
    pub avoid_right: Path,
    pub left: Path,
    pub right: Path,
}

pub const CATALOG: CycleCatalog = CycleCatalog {
    outer: &[
        (1, 2), (3, 1), (2, 3), (4, 2), (3, 4), (5, 3), (4, 5), (6, 4),
        (5, 6), (7, 5), (6, 7), (1, 6), (7, 1), (2, 7), (1, 2),
    ],
    bridges: [
        &[(1, 2), (5, 1), (2, 5), (6, 2), (5, 6)],
        &[(2, 3), (6, 2), (3, 6), (7, 3), (6, 7)],
        &[(3, 4), (7, 3), (4, 7), (1, 4), (7, 1)],
        &[(4, 5), (5, 1), (1, 4), (4, 7), (7, 1)],
    ],
    avoid_rim: &[
        (1, 2), (3, 1), (2, 3), (6, 2), (3, 6), (7, 3), (6, 7), (1, 6), (7, 1), (2, 7), (1, 2),
    ],
    avoid_left: &[
        (1, 2), (3, 1), (2, 3), (4, 2), (3, 4), (5, 3), (4, 5), (6, 4), (5, 6), (6, 2), (2, 5), (5, 1), (1, 2),
    ],
    avoid_right: &[
        (1, 2), (2, 7), (7, 1), (1, 6), (6, 7), (7, 5), (5, 6), (6, 2), (2, 5), (5, 1), (1, 2),
    ],
    left: &[(2, 7), (7, 1), (1, 6), (6, 7), (7, 5)],
    right: &[(3, 1), (2, 3), (4, 2), (3, 4), (5, 3), (4, 5), (6, 4)],
};

impl CycleCatalog {
    pub fn cycles(&self) -> [(&'static str, Path); 4] {
        [("outer", self.outer), ("avoid_rim", self.avoid_rim), ("avoid_left", self.avoid_left), ("avoid_right", self.avoid_right)]
    }

    /// The cycle to hop along after Breaker deleted `b1` (copy coordinates;
    /// `None` for an edge outside the copy).
    pub fn select(&self, b1: Option<DirectedEdge>) -> (&'static str, Path) {
        let hit = |list: Path, e: DirectedEdge| list.contains(&(e.from, e.to));
        match b1 {
            Some(e) if (e.from, e.to) == (5, 6) => ("avoid_rim", self.avoid_rim),
            Some(e) if hit(self.left, e) => ("avoid_left", self.avoid_left),
            Some(e) if hit(self.right, e) => ("avoid_right", self.avoid_right),
            _ => ("outer", self.outer),
        }
    }
}

#[derive(Clone, Debug)]
enum Phase {
    Opening,
    Choosing,
    Hopping { cycle: Vec<usize>, next: usize },
}

#[derive(Clone, Debug)]
pub struct CycleHopper {
    /// Board vertex of copy vertex `i + 1`.
    map: [u32; 7],
    phase: Phase,
    seen: FixedBitSet,
    support: FixedBitSet,
    double_threat: bool,
    chosen: Option<&'static str>,
}

impl CycleHopper {
    /// Script for the copy of Π(7) on `map[0] < … < map[6]`.
    pub fn on_copy(sys: &WinningSetSystem, map: [u32; 7]) -> Result<Self> {
        let t = sys.tournament();
        if map.windows(2).any(|w| w[0] >= w[1]) || map[6] as usize > t.n() || map[0] == 0 {
            return Err(Error::Strategy(format!("invalid copy vertices {map:?}")));
        }
        let pi7 = Tournament::parity(7)?;
        let mut support = FixedBitSet::with_capacity(sys.num_elements());
        for i in 1..=7u32 {
            for j in i + 1..=7 {
                let (u, v) = (map[i as usize - 1], map[j as usize - 1]);
                if t.beats(u, v) != pi7.beats(i, j) {
                    return Err(Error::Strategy(format!("vertices {map:?} do not induce a copy of Π(7)")));
                }
                support.insert(t.edge_id(DirectedEdge::new(u, v)));
            }
        }
        Ok(Self {
            map,
            phase: Phase::Opening,
            seen: FixedBitSet::with_capacity(sys.num_elements()),
            support,
            double_threat: true,
            chosen: None,
        })
    }

    pub fn pi7(sys: &WinningSetSystem) -> Result<Self> {
        if sys.tournament().n() != 7 {
            return Err(Error::Strategy("the Π(7) script needs a board on 7 vertices".into()));
        }
        Self::on_copy(sys, [1, 2, 3, 4, 5, 6, 7])
    }

    /// Plays on the copy spanned by vertices 1..=7 of a larger parity board.
    pub fn restricted(sys: &WinningSetSystem) -> Result<Self> {
        if sys.tournament().n() <= 7 {
            return Err(Error::Strategy("the restricted script needs more than 7 vertices".into()));
        }
        Self::on_copy(sys, [1, 2, 3, 4, 5, 6, 7])
    }

    /// Disables the final hop that creates the double threat; the script then
    /// spends those turns on the lowest-id unclaimed copy element instead.
    pub fn without_double_threat(mut self) -> Self {
        self.double_threat = false;
        self
    }

    pub fn support(&self) -> &FixedBitSet {
        &self.support
    }

    pub fn map(&self) -> [u32; 7] {
        self.map
    }

    /// Name of the cycle picked after Breaker's first move.
    pub fn chosen_cycle(&self) -> Option<&'static str> {
        self.chosen
    }

    fn to_board(&self, sys: &WinningSetSystem, (a, b): (u32, u32)) -> Result<usize> {
        sys.element_id(DirectedEdge::new(self.map[a as usize - 1], self.map[b as usize - 1]))
    }

    fn to_copy(&self, e: DirectedEdge) -> Option<DirectedEdge> {
        let pos = |v: u32| self.map.iter().position(|&x| x == v).map(|i| i as u32 + 1);
        Some(DirectedEdge::new(pos(e.from)?, pos(e.to)?))
    }

    pub(crate) fn choose(&mut self, state: &GameState) -> Result<usize> {
        let sys = state.system();
        let new = take_new(&mut self.seen, state.breaker());
        if let Some(t) = state.threats().first() {
            return Ok(t.missing);
        }
        match std::mem::replace(&mut self.phase, Phase::Opening) {
            Phase::Opening => {
                self.phase = Phase::Choosing;
                self.to_board(sys, (1, 2))
            }
            Phase::Choosing => {
                let b1 = new.first().and_then(|&e| self.to_copy(sys.element(e)));
                let (name, path) = CATALOG.select(b1);
                let cycle = path.iter().map(|&e| self.to_board(sys, e)).collect::<Result<Vec<_>>>()?;
                if let Some(&hit) = cycle.iter().find(|&&e| state.breaker()[e]) {
                    return Err(Error::Strategy(format!("selected cycle {name} lost {}", sys.element(hit))));
                }
                self.chosen = Some(name);
                self.phase = Phase::Hopping { cycle, next: 2 };
                self.choose(state)
            }
            Phase::Hopping { cycle, next } => {
                let k = cycle.len() - 1;
                if next >= k {
                    return Err(Error::Strategy("cycle exhausted without a win".into()));
                }
                if next == k - 2 && !self.double_threat {
                    self.phase = Phase::Hopping { cycle, next };
                    return self
                        .support
                        .ones()
                        .find(|&e| state.is_unclaimed(e))
                        .ok_or_else(|| Error::Strategy("no unclaimed copy element".into()));
                }
                let e = cycle[next];
                if !state.is_unclaimed(e) {
                    return Err(Error::Strategy(format!("hop target {} is taken", sys.element(e))));
                }
                self.phase = Phase::Hopping { cycle, next: next + 2 };
                Ok(e)
            }
        }
    }
}
