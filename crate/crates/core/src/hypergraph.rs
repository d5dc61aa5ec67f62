//! The game as a 3-uniform hypergraph: board elements are tournament edges,
//! winning sets are directed triangles. Also the mutable [`GameState`],
//! Breaker's cuts, Maker threats and pairing checks.

use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tournament::{DirectedEdge, Tournament, Triangle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Maker,
    Breaker,
}

impl Player {
    pub fn other(self) -> Self {
        match self {
            Player::Maker => Player::Breaker,
            Player::Breaker => Player::Maker,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Maker => "maker",
            Player::Breaker => "breaker",
        })
    }
}

#[derive(Debug)]
struct Board {
    tournament: Tournament,
    elements: Vec<DirectedEdge>,
    triangles: Vec<Triangle>,
    sets: Vec<[usize; 3]>,
    incidence: Vec<Vec<usize>>,
}

/// Board elements plus the family of winning sets, with the subset of sets
/// (and elements) still alive after cuts.
///
/// Element ids are pair indices of the underlying tournament; set ids are
/// positions in the lexicographic triangle enumeration. Both stay stable
/// under [`WinningSetSystem::cut`].
#[derive(Clone, Debug)]
pub struct WinningSetSystem {
    board: Arc<Board>,
    live_sets: FixedBitSet,
    live_elements: FixedBitSet,
}

impl WinningSetSystem {
    pub fn new(t: &Tournament) -> Self {
        let elements = t.edges();
        let triangles = t.enumerate_triangles();
        let mut incidence = vec![Vec::new(); elements.len()];
        let sets: Vec<[usize; 3]> = triangles
            .iter()
            .enumerate()
            .map(|(sid, &[a, b, c])| {
                let ids = [
                    t.edge_id(DirectedEdge::new(a, b)),
                    t.edge_id(DirectedEdge::new(b, c)),
                    t.edge_id(DirectedEdge::new(c, a)),
                ];
                for &e in &ids {
                    incidence[e].push(sid);
                }
                ids
            })
            .collect();
        let mut live_sets = FixedBitSet::with_capacity(sets.len());
        live_sets.insert_range(..);
        let mut live_elements = FixedBitSet::with_capacity(elements.len());
        for (e, inc) in incidence.iter().enumerate() {
            if !inc.is_empty() {
                live_elements.insert(e);
            }
        }
        let board = Board { tournament: t.clone(), elements, triangles, sets, incidence };
        Self { board: Arc::new(board), live_sets, live_elements }
    }

    pub fn tournament(&self) -> &Tournament {
        &self.board.tournament
    }

    /// Number of board elements (every tournament edge, cut or not).
    pub fn num_elements(&self) -> usize {
        self.board.elements.len()
    }

    /// Number of winning sets before any cut.
    pub fn num_sets_total(&self) -> usize {
        self.board.sets.len()
    }

    pub fn num_live_sets(&self) -> usize {
        self.live_sets.count_ones(..)
    }

    pub fn element(&self, id: usize) -> DirectedEdge {
        self.board.elements[id]
    }

    /// Id of a board edge given in its present orientation.
    pub fn element_id(&self, e: DirectedEdge) -> Result<usize> {
        if !self.tournament().has_edge(e) {
            return Err(Error::Parse(format!("edge {e} is not on the board")));
        }
        Ok(self.tournament().edge_id(e))
    }

    pub fn set(&self, sid: usize) -> [usize; 3] {
        self.board.sets[sid]
    }

    pub fn triangle(&self, sid: usize) -> Triangle {
        self.board.triangles[sid]
    }

    pub fn set_edges(&self, sid: usize) -> [DirectedEdge; 3] {
        self.set(sid).map(|e| self.element(e))
    }

    pub fn is_live(&self, sid: usize) -> bool {
        self.live_sets[sid]
    }

    pub fn live_sets(&self) -> impl Iterator<Item = usize> + '_ {
        self.live_sets.ones()
    }

    pub fn live_elements(&self) -> &FixedBitSet {
        &self.live_elements
    }

    /// All sets (live or not) containing element `e`.
    pub fn sets_containing(&self, e: usize) -> &[usize] {
        &self.board.incidence[e]
    }

    /// The unique set containing both elements, if any.
    pub fn set_containing_pair(&self, e1: usize, e2: usize) -> Option<usize> {
        self.board.incidence[e1].iter().copied().find(|sid| self.board.sets[*sid].contains(&e2))
    }

    /// Largest number of live sets sharing a pair of elements.
    pub fn delta2(&self) -> usize {
        let mut best = 0;
        let mut seen = std::collections::HashMap::new();
        for sid in self.live_sets() {
            let s = self.board.sets[sid];
            for (x, y) in [(s[0], s[1]), (s[0], s[2]), (s[1], s[2])] {
                let key = (x.min(y), x.max(y));
                let c = seen.entry(key).or_insert(0usize);
                *c += 1;
                best = best.max(*c);
            }
        }
        best
    }

    /// Breaker deletes `e`: every set through `e` dies, then every element
    /// left in no live set.
    pub fn cut(&self, e: usize) -> Result<Self> {
        if e >= self.num_elements() {
            return Err(Error::UnknownElement(e));
        }
        let mut out = self.clone();
        for &sid in &self.board.incidence[e] {
            out.live_sets.set(sid, false);
        }
        out.live_elements.clear();
        for sid in out.live_sets.ones() {
            for &x in &self.board.sets[sid] {
                out.live_elements.insert(x);
            }
        }
        Ok(out)
    }

    pub fn cut_all(&self, elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        elements.into_iter().try_fold(self.clone(), |s, e| s.cut(e))
    }

    /// Live sets as sorted edge triples; handy for comparing against lists.
    pub fn live_set_edges(&self) -> Vec<[DirectedEdge; 3]> {
        self.live_sets()
            .map(|sid| {
                let mut es = self.set_edges(sid);
                es.sort();
                es
            })
            .collect()
    }
}

impl PartialEq for WinningSetSystem {
    fn eq(&self, other: &Self) -> bool {
        self.board.tournament == other.board.tournament
            && self.live_sets == other.live_sets
            && self.live_elements == other.live_elements
    }
}

/// A winning set with two Maker elements, no Breaker element, and one
/// unclaimed element `missing`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Threat {
    pub set: usize,
    pub missing: usize,
}

/// Position of an `(a:b)` game: who owns what, whose turn, and how many
/// elements the player to move still picks this turn.
#[derive(Clone, Debug)]
pub struct GameState {
    system: Arc<WinningSetSystem>,
    maker: FixedBitSet,
    breaker: FixedBitSet,
    maker_bias: u32,
    breaker_bias: u32,
    to_move: Player,
    picks_left: u32,
    claimed: usize,
}

impl GameState {
    /// Fresh game, Maker to move.
    pub fn new(system: Arc<WinningSetSystem>, maker_bias: u32, breaker_bias: u32) -> Self {
        assert!(maker_bias >= 1 && breaker_bias >= 1, "biases must be positive");
        let m = system.num_elements();
        Self {
            system,
            maker: FixedBitSet::with_capacity(m),
            breaker: FixedBitSet::with_capacity(m),
            maker_bias,
            breaker_bias,
            to_move: Player::Maker,
            picks_left: maker_bias,
            claimed: 0,
        }
    }

    pub fn system(&self) -> &Arc<WinningSetSystem> {
        &self.system
    }

    pub fn maker(&self) -> &FixedBitSet {
        &self.maker
    }

    pub fn breaker(&self) -> &FixedBitSet {
        &self.breaker
    }

    pub fn bias(&self) -> (u32, u32) {
        (self.maker_bias, self.breaker_bias)
    }

    pub fn to_move(&self) -> Player {
        self.to_move
    }

    pub fn picks_left(&self) -> u32 {
        self.picks_left
    }

    pub fn is_unclaimed(&self, e: usize) -> bool {
        e < self.system.num_elements() && !self.maker[e] && !self.breaker[e]
    }

    pub fn num_unclaimed(&self) -> usize {
        self.system.num_elements() - self.claimed
    }

    pub fn unclaimed(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.system.num_elements()).filter(|&e| self.is_unclaimed(e))
    }

    /// The player to move takes `e`; the turn passes once their bias is used
    /// up or the board runs out.
    pub fn claim(&mut self, e: usize) -> Result<()> {
        if e >= self.system.num_elements() {
            return Err(Error::UnknownElement(e));
        }
        if !self.is_unclaimed(e) {
            return Err(Error::IllegalMove(format!("element {} already taken", self.system.element(e))));
        }
        match self.to_move {
            Player::Maker => self.maker.insert(e),
            Player::Breaker => self.breaker.insert(e),
        }
        self.claimed += 1;
        self.picks_left -= 1;
        if self.picks_left == 0 {
            self.end_turn();
        }
        Ok(())
    }

    /// Like [`GameState::claim`] but checks that `player` is on move.
    pub fn play(&mut self, player: Player, e: usize) -> Result<()> {
        if player != self.to_move {
            return Err(Error::IllegalMove(format!("{player} moved out of turn")));
        }
        self.claim(e)
    }

    /// Ends the current turn early (only meaningful once the game is decided
    /// or the board is exhausted).
    pub fn end_turn(&mut self) {
        self.to_move = self.to_move.other();
        self.picks_left = match self.to_move {
            Player::Maker => self.maker_bias,
            Player::Breaker => self.breaker_bias,
        };
    }

    fn set_counts(&self, sid: usize) -> (u8, u8) {
        let s = self.system.set(sid);
        let mk = s.iter().filter(|&&e| self.maker[e]).count() as u8;
        let br = s.iter().filter(|&&e| self.breaker[e]).count() as u8;
        (mk, br)
    }

    /// Live sets Maker could complete with one more element, ascending by set
    /// id.
    pub fn threats(&self) -> Vec<Threat> {
        self.system
            .live_sets()
            .filter_map(|sid| {
                let (mk, br) = self.set_counts(sid);
                if mk == 2 && br == 0 {
                    let missing = self.system.set(sid).into_iter().find(|&e| !self.maker[e]).unwrap();
                    Some(Threat { set: sid, missing })
                } else {
                    None
                }
            })
            .collect()
    }

    /// Maker once she owns a live set; Breaker once every live set holds a
    /// Breaker element (or the board is exhausted without a Maker set).
    pub fn winner_if_terminal(&self) -> Option<Player> {
        let mut all_blocked = true;
        for sid in self.system.live_sets() {
            let (mk, br) = self.set_counts(sid);
            if mk == 3 {
                return Some(Player::Maker);
            }
            if br == 0 {
                all_blocked = false;
            }
        }
        if all_blocked || self.num_unclaimed() == 0 {
            Some(Player::Breaker)
        } else {
            None
        }
    }
}

/// Disjoint element pairs meant to block winning sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Pairing {
    pub pairs: Vec<(usize, usize)>,
    pub unpaired_hint: Option<usize>,
}

impl Pairing {
    pub fn new(pairs: Vec<(usize, usize)>) -> Self {
        Self { pairs, unpaired_hint: None }
    }

    pub fn with_hint(mut self, hint: usize) -> Self {
        self.unpaired_hint = Some(hint);
        self
    }

    pub fn partner(&self, e: usize) -> Option<usize> {
        self.pairs.iter().find_map(|&(x, y)| {
            if x == e {
                Some(y)
            } else if y == e {
                Some(x)
            } else {
                None
            }
        })
    }

    pub fn contains(&self, e: usize) -> bool {
        self.partner(e).is_some()
    }

    /// Pairs written with the board's edges, for diagnostics.
    pub fn describe(&self, sys: &WinningSetSystem) -> String {
        self.pairs
            .iter()
            .map(|&(x, y)| format!("{{{},{}}}", sys.element(x), sys.element(y)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairingIssue {
    /// Element appears in more than one pair.
    Overlap(usize),
    /// A pair uses an element that is already played.
    TouchesExcluded(usize),
    /// The two elements of a pair share no winning set.
    NotCoOccurring(usize, usize),
    /// A live set contains no pair.
    Unblocked(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingCheck {
    pub valid: bool,
    pub issue: Option<PairingIssue>,
    pub diagnostic: String,
}

/// Checks that `pairing` is a valid Breaker pairing for the live sets of
/// `sys` given the already played elements `exclude`.
pub fn validate_pairing(sys: &WinningSetSystem, pairing: &Pairing, exclude: &[usize]) -> PairingCheck {
    let fail = |issue: PairingIssue, diagnostic: String| PairingCheck { valid: false, issue: Some(issue), diagnostic };
    let mut used = FixedBitSet::with_capacity(sys.num_elements());
    for &(x, y) in &pairing.pairs {
        for e in [x, y] {
            if e >= sys.num_elements() {
                return fail(PairingIssue::Overlap(e), format!("element id {e} is not on the board"));
            }
            if used.put(e) || x == y {
                return fail(PairingIssue::Overlap(e), format!("element {} is paired twice", sys.element(e)));
            }
            if exclude.contains(&e) {
                return fail(PairingIssue::TouchesExcluded(e), format!("element {} is already played", sys.element(e)));
            }
        }
        if sys.set_containing_pair(x, y).is_none() {
            return fail(
                PairingIssue::NotCoOccurring(x, y),
                format!("{} and {} share no winning set", sys.element(x), sys.element(y)),
            );
        }
    }
    for sid in sys.live_sets() {
        let s = sys.set(sid);
        let blocked = pairing.pairs.iter().any(|&(x, y)| s.contains(&x) && s.contains(&y));
        if !blocked {
            let [a, b, c] = sys.set_edges(sid);
            return fail(PairingIssue::Unblocked(sid), format!("winning set {{{a},{b},{c}}} contains no pair"));
        }
    }
    PairingCheck { valid: true, issue: None, diagnostic: String::new() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn edge(a: u32, b: u32) -> DirectedEdge {
        DirectedEdge::new(a, b)
    }

    fn sorted(mut v: Vec<[DirectedEdge; 3]>) -> Vec<[DirectedEdge; 3]> {
        v.sort();
        v
    }

    fn sets_from(list: &[[(u32, u32); 3]]) -> Vec<[DirectedEdge; 3]> {
        sorted(
            list.iter()
                .map(|s| {
                    let mut es = s.map(|(a, b)| edge(a, b));
                    es.sort();
                    es
                })
                .collect(),
        )
    }

    fn pi6_sets() -> Vec<[(u32, u32); 3]> {
        vec![
            [(1, 2), (3, 1), (2, 3)],
            [(2, 3), (4, 2), (3, 4)],
            [(3, 4), (5, 3), (4, 5)],
            [(4, 5), (6, 4), (5, 6)],
            [(5, 6), (6, 2), (2, 5)],
            [(2, 5), (5, 1), (1, 2)],
            [(2, 3), (3, 6), (6, 2)],
            [(5, 1), (1, 4), (4, 5)],
        ]
    }

    #[test]
    fn pi5_has_the_five_cyclic_sets() {
        let sys = WinningSetSystem::new(&Tournament::parity(5).unwrap());
        let expected = sets_from(&[
            [(1, 2), (3, 1), (2, 3)],
            [(2, 3), (4, 2), (3, 4)],
            [(3, 4), (5, 3), (4, 5)],
            [(4, 5), (1, 4), (5, 1)],
            [(5, 1), (2, 5), (1, 2)],
        ]);
        assert_eq!(sorted(sys.live_set_edges()), expected);
        assert_eq!(WinningSetSystem::new(&Tournament::transitive(8).unwrap()).num_live_sets(), 0);
    }

    #[test]
    fn pi6_sets_and_cuts() {
        let sys = WinningSetSystem::new(&Tournament::parity(6).unwrap());
        let f = pi6_sets();
        assert_eq!(sorted(sys.live_set_edges()), sets_from(&f));
        let id = |a, b| sys.element_id(edge(a, b)).unwrap();
        let cut = sys.cut(id(2, 5)).unwrap();
        assert_eq!(sorted(cut.live_set_edges()), sets_from(&[f[0], f[1], f[2], f[3], f[6], f[7]]));
        let cut2 = sys.cut(id(6, 2)).unwrap().cut(id(5, 1)).unwrap();
        assert_eq!(sorted(cut2.live_set_edges()), sets_from(&f[0..4]));
        // (1,6) lies in no set
        let idle = id(1, 6);
        assert!(!sys.live_elements()[idle]);
        assert_eq!(sys.cut(idle).unwrap(), sys);
        assert_eq!(sys.cut(999), Err(Error::UnknownElement(999)));
    }

    #[test]
    fn cut_prunes_orphaned_elements() {
        let sys = WinningSetSystem::new(&Tournament::parity(3).unwrap());
        let cut = sys.cut(0).unwrap();
        assert_eq!(cut.num_live_sets(), 0);
        assert_eq!(cut.live_elements().count_ones(..), 0);
    }

    #[test]
    fn pi7_delta2() {
        let sys = WinningSetSystem::new(&Tournament::parity(7).unwrap());
        assert_eq!(sys.num_live_sets(), 14);
        // brute-force pairwise co-occurrence count
        let mut best = 0;
        for x in 0..sys.num_elements() {
            for y in x + 1..sys.num_elements() {
                let c = (0..sys.num_sets_total())
                    .filter(|&s| sys.set(s).contains(&x) && sys.set(s).contains(&y))
                    .count();
                best = best.max(c);
            }
        }
        assert_eq!(best, 1);
        assert_eq!(sys.delta2(), 1);
    }

    #[test]
    fn delta2_is_one_on_every_small_tournament_family() {
        for n in 3..=12 {
            assert_eq!(WinningSetSystem::new(&Tournament::parity(n).unwrap()).delta2(), 1);
            for seed in 0..5 {
                let sys = WinningSetSystem::new(&Tournament::random(n, 0.5, seed).unwrap());
                assert!(sys.delta2() <= 1);
            }
        }
    }

    fn pi7_state() -> GameState {
        GameState::new(Arc::new(WinningSetSystem::new(&Tournament::parity(7).unwrap())), 1, 1)
    }

    #[test]
    fn threats_on_outer_cycle() {
        let mut s = pi7_state();
        let sys = s.system().clone();
        let id = |a, b| sys.element_id(edge(a, b)).unwrap();
        assert!(s.threats().is_empty());
        assert_eq!(s.winner_if_terminal(), None);
        // v0 = (1,2), v1 = (3,1), v2 = (2,3); Breaker plays elsewhere
        s.play(Player::Maker, id(1, 2)).unwrap();
        s.play(Player::Breaker, id(4, 7)).unwrap();
        s.play(Player::Maker, id(2, 3)).unwrap();
        let t = s.threats();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].missing, id(3, 1));
    }

    #[test]
    fn double_threat_at_cycle_end() {
        let mut s = pi7_state();
        let sys = s.system().clone();
        let id = |a, b| sys.element_id(edge(a, b)).unwrap();
        // C' = (1,2),(3,1),(2,3),(6,2),(3,6),(7,3),(6,7),(1,6),(7,1),(2,7),(1,2); k = 10
        // Maker holds v6=(6,7), v8=(7,1), v10=v0=(1,2)
        for (m, b) in [((1, 2), (5, 6)), ((6, 7), (3, 6)), ((7, 1), (4, 5))] {
            s.play(Player::Maker, id(m.0, m.1)).unwrap();
            s.play(Player::Breaker, id(b.0, b.1)).unwrap();
        }
        let mut missing: Vec<usize> = s.threats().iter().map(|t| t.missing).collect();
        missing.sort();
        let mut expected = vec![id(1, 6), id(2, 7)];
        expected.sort();
        assert_eq!(missing, expected);
    }

    #[test]
    fn winner_detection() {
        let sys = Arc::new(WinningSetSystem::new(&Tournament::parity(5).unwrap()));
        let id = |a, b| sys.element_id(edge(a, b)).unwrap();
        let mut s = GameState::new(sys.clone(), 3, 1);
        for e in [(1, 2), (3, 1), (2, 3)] {
            s.claim(id(e.0, e.1)).unwrap();
        }
        assert_eq!(s.winner_if_terminal(), Some(Player::Maker));

        let mut s = GameState::new(Arc::new(WinningSetSystem::new(&Tournament::parity(3).unwrap())), 1, 1);
        s.claim(0).unwrap();
        s.claim(1).unwrap();
        assert_eq!(s.winner_if_terminal(), Some(Player::Breaker));
        assert!(s.claim(1).is_err());
        assert!(s.play(Player::Breaker, 2).is_err());
    }

    fn pi5_pairing(sys: &WinningSetSystem) -> Pairing {
        let a = [(1, 2), (3, 1), (2, 3), (4, 2), (3, 4), (5, 3), (4, 5), (1, 4), (5, 1), (2, 5)]
            .map(|(x, y)| sys.element_id(edge(x, y)).unwrap());
        Pairing::new(vec![(a[0], a[1]), (a[2], a[3]), (a[4], a[5]), (a[6], a[7]), (a[8], a[9])])
    }

    #[test]
    fn pi5_pairing_validates() {
        let sys = WinningSetSystem::new(&Tournament::parity(5).unwrap());
        let p = pi5_pairing(&sys);
        assert!(validate_pairing(&sys, &p, &[]).valid);
        let mut dropped = p.clone();
        dropped.pairs.remove(2);
        let check = validate_pairing(&sys, &dropped, &[]);
        assert!(!check.valid);
        assert!(matches!(check.issue, Some(PairingIssue::Unblocked(_))));
        assert!(check.diagnostic.contains("(5,3)"), "{}", check.diagnostic);
        let touched = validate_pairing(&sys, &p, &[p.pairs[0].0]);
        assert!(matches!(touched.issue, Some(PairingIssue::TouchesExcluded(_))));
        let mut overlap = p.clone();
        overlap.pairs.push((p.pairs[0].0, p.pairs[1].1));
        assert!(matches!(validate_pairing(&sys, &overlap, &[]).issue, Some(PairingIssue::Overlap(_))));
    }

    #[test]
    fn pi6_default_pairing_after_cut() {
        let sys = WinningSetSystem::new(&Tournament::parity(6).unwrap());
        let id = |a, b| sys.element_id(edge(a, b)).unwrap();
        let cut = sys.cut(id(2, 5)).unwrap();
        let pairs = [((1, 2), (3, 1)), ((4, 2), (3, 4)), ((5, 3), (4, 5)), ((6, 4), (5, 6)), ((3, 6), (6, 2)), ((5, 1), (1, 4))]
            .map(|(x, y)| (id(x.0, x.1), id(y.0, y.1)));
        let p = Pairing::new(pairs.to_vec()).with_hint(id(2, 3));
        assert!(validate_pairing(&cut, &p, &[id(2, 5)]).valid);
        assert!(!p.contains(id(2, 3)));
    }

    proptest! {
        #[test]
        fn cut_commutes_and_is_idempotent(n in 3usize..=10, seed in any::<u64>(), x in any::<prop::sample::Index>(), y in any::<prop::sample::Index>()) {
            let sys = WinningSetSystem::new(&Tournament::random(n, 0.5, seed).unwrap());
            let m = sys.num_elements();
            let (e, f) = (x.index(m), y.index(m));
            let ef = sys.cut(e).unwrap().cut(f).unwrap();
            let fe = sys.cut(f).unwrap().cut(e).unwrap();
            prop_assert_eq!(&ef, &fe);
            prop_assert_eq!(sys.cut(e).unwrap().cut(e).unwrap(), sys.cut(e).unwrap());
        }

        #[test]
        fn winner_is_monotone(n in 3usize..=8, seed in any::<u64>(), owners in proptest::collection::vec(0u8..3, 28)) {
            let sys = Arc::new(WinningSetSystem::new(&Tournament::random(n, 0.5, seed).unwrap()));
            let m = sys.num_elements();
            let mut s = GameState::new(sys.clone(), 1, 1);
            for (e, &o) in owners.iter().take(m).enumerate() {
                match o {
                    1 => s.maker.insert(e),
                    2 => s.breaker.insert(e),
                    _ => {}
                }
            }
            s.claimed = s.maker.count_ones(..) + s.breaker.count_ones(..);
            let before = s.winner_if_terminal();
            let free: Vec<usize> = s.unclaimed().collect();
            for &e in &free {
                let mut mk = s.clone();
                mk.maker.insert(e);
                mk.claimed += 1;
                if before == Some(Player::Maker) {
                    prop_assert_eq!(mk.winner_if_terminal(), Some(Player::Maker));
                }
                let mut br = s.clone();
                br.breaker.insert(e);
                br.claimed += 1;
                if before == Some(Player::Breaker) {
                    prop_assert_eq!(br.winner_if_terminal(), Some(Player::Breaker));
                }
            }
        }
    }
}
