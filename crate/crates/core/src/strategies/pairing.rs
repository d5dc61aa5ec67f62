//! Pairing strategies and the switch cascade that repairs a pairing after
//! Maker claims a paired element.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::hypergraph::{GameState, Pairing, WinningSetSystem};
use crate::tournament::{DirectedEdge, Tournament};

pub(crate) fn ids(sys: &WinningSetSystem, edges: &[(u32, u32)]) -> Result<Vec<usize>> {
    edges.iter().map(|&(a, b)| sys.element_id(DirectedEdge::new(a, b))).collect()
}

type EdgePair = ((u32, u32), (u32, u32));

pub(crate) fn pairing_of(sys: &WinningSetSystem, pairs: &[EdgePair]) -> Result<Pairing> {
    let mut out = Vec::with_capacity(pairs.len());
    for &(x, y) in pairs {
        let v = ids(sys, &[x, y])?;
        out.push((v[0], v[1]));
    }
    Ok(Pairing::new(out))
}

/// The fixed pairings used on Π(3), Π(4) and Π(5).
pub fn small_pairing(sys: &WinningSetSystem, n: usize) -> Result<Pairing> {
    let pairs: &[EdgePair] = match n {
        3 => &[((1, 2), (2, 3))],
        4 => &[((1, 2), (3, 1)), ((3, 4), (4, 2))],
        5 => &[((1, 2), (3, 1)), ((2, 3), (4, 2)), ((3, 4), (5, 3)), ((4, 5), (1, 4)), ((5, 1), (2, 5))],
        _ => return Err(Error::Strategy(format!("no fixed pairing for n={n}"))),
    };
    pairing_of(sys, pairs)
}

/// Outcome of [`compute_switch_cascade`]: the repaired pairing and the
/// alternating path `m, partner(m), …, free` that was walked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cascade {
    pub pairing: Pairing,
    pub path: Vec<usize>,
}

impl Cascade {
    /// Number of pairs that were redrawn.
    pub fn length(&self) -> usize {
        self.path.len() / 2
    }
}

/// Walks from Maker's element `m` to the spare element `free`, alternating
/// between "partner in the pairing" and "third element of the set that pair
/// blocks", then shifts every pair on the path by one so that `m` is left
/// unpaired and every set stays blocked.
pub fn compute_switch_cascade(sys: &WinningSetSystem, pairing: &Pairing, m: usize, free: usize) -> Result<Cascade> {
    let Some(mut partner) = pairing.partner(m) else {
        return Ok(Cascade { pairing: pairing.clone(), path: Vec::new() });
    };
    if pairing.contains(free) {
        return Err(Error::Strategy(format!("spare element {} is paired", sys.element(free))));
    }
    let no_path = || Error::NoCascadePath { from: m, free };
    let mut path = vec![m];
    let mut cur = m;
    loop {
        path.push(partner);
        let sid = sys.set_containing_pair(cur, partner).ok_or_else(no_path)?;
        let third = sys.set(sid).into_iter().find(|&e| e != cur && e != partner).unwrap();
        if path.contains(&third) {
            return Err(no_path());
        }
        path.push(third);
        if third == free {
            break;
        }
        cur = third;
        partner = pairing.partner(third).ok_or_else(no_path)?;
    }
    let mut pairs: Vec<(usize, usize)> =
        pairing.pairs.iter().copied().filter(|&(x, y)| !path.contains(&x) && !path.contains(&y)).collect();
    for w in path[1..].chunks(2) {
        pairs.push((w[0], w[1]));
    }
    Ok(Cascade { pairing: Pairing { pairs, unpaired_hint: None }, path })
}

/// Breaker answers every Maker claim with its partner, or with the
/// lowest-id unclaimed element when the partner is gone or there is none.
#[derive(Clone, Debug)]
pub struct PairingScript {
    pairing: Pairing,
    seen: FixedBitSet,
}

impl PairingScript {
    pub fn new(pairing: Pairing, num_elements: usize) -> Self {
        Self { pairing, seen: FixedBitSet::with_capacity(num_elements) }
    }

    /// The fixed pairing script for Π(n), n ∈ {3, 4, 5}; other boards are
    /// rejected.
    pub fn small(sys: &WinningSetSystem, n: usize) -> Result<Self> {
        if !(3..=5).contains(&n) || *sys.tournament() != Tournament::parity(n)? {
            return Err(Error::Strategy(format!("the fixed pairing script needs the parity board on {n} vertices")));
        }
        Ok(Self::new(small_pairing(sys, n)?, sys.num_elements()))
    }

    pub fn pairing(&self) -> &Pairing {
        &self.pairing
    }

    pub(crate) fn choose(&mut self, state: &GameState) -> Result<usize> {
        let new = take_new(&mut self.seen, state.maker());
        Ok(respond(&self.pairing, state, new.last().copied()))
    }
}

/// Partner of `m` if still unclaimed, else the lowest-id unclaimed element.
pub(crate) fn respond(pairing: &Pairing, state: &GameState, m: Option<usize>) -> usize {
    m.and_then(|m| pairing.partner(m))
        .filter(|&p| state.is_unclaimed(p))
        .or_else(|| state.unclaimed().next())
        .expect("a move is requested only while elements remain")
}

/// Elements of `owned` not yet in `seen`, marking them seen.
pub(crate) fn take_new(seen: &mut FixedBitSet, owned: &FixedBitSet) -> Vec<usize> {
    let new: Vec<usize> = owned.difference(seen).collect();
    for &e in &new {
        seen.insert(e);
    }
    new
}
