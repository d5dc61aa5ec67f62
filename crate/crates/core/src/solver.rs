//! Exact perfect-play solver for `(1:b)` games on boards with at most 64
//! elements.
//!
//! Positions are two `u64` masks plus the Breaker sub-move counter. A turn of
//! Breaker's `b` deletions is searched as `b` sub-moves with strictly
//! increasing element ids, so each unordered `b`-set is visited once. The
//! memo key of a mid-turn node therefore includes the last id taken.
//!
//! Pruning rules, all exact:
//! * Maker to move with an open threat wins at once.
//! * No unblocked set left: Breaker wins.
//! * At the start of a turn, at most `b` unblocked sets: Breaker deletes one
//!   element from each of them and wins.
//! * Breaker facing more threats than picks left, or a threat she can no
//!   longer reach under the increasing-id rule, loses.
//! * Only elements of unblocked sets are ever worth claiming or deleting.
//!
//! On odd-`n` parity boards positions are canonicalised under the rotations
//! that preserve the live family of sets.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::hypergraph::{GameState, Player, WinningSetSystem};
use crate::par::Exec;
use crate::rng::derive_seed;
use crate::transcript::Transcript;

pub const DEFAULT_SOLVE_BUDGET: u64 = 500_000_000;

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Maximum number of expanded nodes, line extraction included.
    pub budget: u64,
    pub symmetry: bool,
    pub exec: Exec,
    /// Shuffle move order with this seed instead of the usual heuristic.
    pub ordering_seed: Option<u64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { budget: DEFAULT_SOLVE_BUDGET, symmetry: true, exec: Exec::default(), ordering_seed: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Win(Player),
    /// The node budget ran out before the value was known.
    Unknown,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub outcome: Outcome,
    /// A principal line from the input position: the winner always plays the
    /// lowest-id winning move, the loser its lowest-id candidate.
    pub line: Vec<(Player, usize)>,
    pub nodes: u64,
    pub budget: u64,
}

impl SolveResult {
    pub fn winner(&self) -> Option<Player> {
        match self.outcome {
            Outcome::Win(p) => Some(p),
            Outcome::Unknown => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Node {
    maker: u64,
    breaker: u64,
    to_move: Player,
    picks: u32,
    last: Option<u8>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Key {
    maker: u64,
    breaker: u64,
    tag: u16,
}

struct Scan {
    complete: bool,
    unblocked: u32,
    /// Missing elements of the open threats.
    threats: u64,
    /// Unclaimed elements lying in some unblocked set.
    live: u64,
    /// Lowest unclaimed element of each unblocked set.
    firsts: Vec<usize>,
}

enum Step {
    Value(bool),
    Moves(Vec<Node>, Vec<(Player, usize)>),
}

struct Ctx<'a> {
    sets: Vec<u64>,
    full: u64,
    b: u32,
    rotations: Vec<Vec<u8>>,
    order_seed: Option<u64>,
    budget: u64,
    counter: &'a AtomicU64,
    exhausted: &'a AtomicBool,
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

fn above(last: Option<u8>) -> u64 {
    match last {
        None => u64::MAX,
        Some(63) => 0,
        Some(l) => u64::MAX << (l + 1),
    }
}

impl Ctx<'_> {
    fn scan(&self, n: &Node) -> Scan {
        let free = self.full & !(n.maker | n.breaker);
        let mut s = Scan { complete: false, unblocked: 0, threats: 0, live: 0, firsts: Vec::new() };
        for &set in &self.sets {
            if set & n.breaker != 0 {
                continue;
            }
            let mk = (set & n.maker).count_ones();
            if mk == 3 {
                s.complete = true;
                return s;
            }
            s.unblocked += 1;
            let open = set & free;
            if mk == 2 {
                s.threats |= open;
            }
            s.live |= open;
            s.firsts.push(open.trailing_zeros() as usize);
        }
        s
    }

    fn map_mask(perm: &[u8], m: u64) -> u64 {
        bits(m).fold(0, |acc, e| acc | 1u64 << perm[e])
    }

    fn key(&self, n: &Node) -> Key {
        let (maker, breaker) = if n.last.is_none() && !self.rotations.is_empty() {
            self.rotations
                .iter()
                .map(|p| (Self::map_mask(p, n.maker), Self::map_mask(p, n.breaker)))
                .fold((n.maker, n.breaker), |best, c| best.min(c))
        } else {
            (n.maker, n.breaker)
        };
        let tag = match n.to_move {
            Player::Maker => 0,
            Player::Breaker => 1 | ((n.picks as u16) << 1) | ((n.last.map_or(0, |l| l as u16 + 1)) << 8),
        };
        Key { maker, breaker, tag }
    }

    fn tick(&self) -> bool {
        if self.counter.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.exhausted.store(true, Ordering::Relaxed);
            false
        } else {
            true
        }
    }

    /// Either the value of `n` from the pruning rules, or its children in
    /// search order together with the move leading to each.
    fn expand(&self, n: &Node) -> Step {
        let s = self.scan(n);
        if s.complete {
            return Step::Value(true);
        }
        if s.unblocked == 0 || self.full & !(n.maker | n.breaker) == 0 {
            return Step::Value(false);
        }
        let (cands, player) = match n.to_move {
            Player::Maker => {
                if s.threats != 0 {
                    return Step::Value(true);
                }
                if s.unblocked <= self.b {
                    return Step::Value(false);
                }
                (s.live, Player::Maker)
            }
            Player::Breaker => {
                let m = s.threats.count_ones();
                if m > n.picks || s.threats & !above(n.last) != 0 {
                    return Step::Value(true);
                }
                if n.last.is_none() && s.unblocked <= n.picks {
                    return Step::Value(false);
                }
                let c = if m == n.picks {
                    s.threats & s.threats.wrapping_neg()
                } else {
                    let mut c = s.live & above(n.last);
                    if s.threats != 0 {
                        let low = s.threats.trailing_zeros();
                        c &= u64::MAX >> (63 - low);
                    }
                    c
                };
                if c == 0 {
                    let child = Node { to_move: Player::Maker, picks: 1, last: None, ..*n };
                    return Step::Moves(vec![child], Vec::new());
                }
                (c, Player::Breaker)
            }
        };
        let mut order: Vec<usize> = bits(cands).collect();
        match self.order_seed {
            Some(seed) => {
                let salt = derive_seed(seed, n.maker ^ n.breaker.rotate_left(17) ^ n.picks as u64);
                order.sort_by_key(|&e| derive_seed(salt, e as u64));
            }
            None => {
                let score = |e: usize| -> u32 {
                    let bit = 1u64 << e;
                    self.sets
                        .iter()
                        .filter(|&&set| set & bit != 0 && set & n.breaker == 0)
                        .map(|&set| 1 + 4 * (set & n.maker).count_ones())
                        .sum()
                };
                order.sort_by_key(|&e| (std::cmp::Reverse(score(e)), e));
            }
        }
        let children = order.iter().map(|&e| self.child(n, e)).collect();
        let moves = order.iter().map(|&e| (player, e)).collect();
        Step::Moves(children, moves)
    }

    fn child(&self, n: &Node, e: usize) -> Node {
        let bit = 1u64 << e;
        match n.to_move {
            Player::Maker => Node { maker: n.maker | bit, to_move: Player::Breaker, picks: self.b, last: None, ..*n },
            Player::Breaker if n.picks > 1 => {
                Node { breaker: n.breaker | bit, picks: n.picks - 1, last: Some(e as u8), ..*n }
            }
            Player::Breaker => Node { breaker: n.breaker | bit, to_move: Player::Maker, picks: 1, last: None, ..*n },
        }
    }

    /// `Some(true)` when Maker wins from `n`.
    fn search(&self, n: &Node, memo: &mut HashMap<Key, bool>) -> Option<bool> {
        if !self.tick() {
            return None;
        }
        let (children, _) = match self.expand(n) {
            Step::Value(v) => return Some(v),
            Step::Moves(c, m) => (c, m),
        };
        let key = self.key(n);
        if let Some(&v) = memo.get(&key) {
            return Some(v);
        }
        let maker_node = n.to_move == Player::Maker;
        let mut value = !maker_node;
        for c in &children {
            let v = self.search(c, memo)?;
            if v == maker_node {
                value = v;
                break;
            }
        }
        memo.insert(key, value);
        Some(value)
    }

    /// Finishes a line from a node whose value came from a pruning rule.
    fn finish_pruned(&self, mut n: Node, line: &mut Vec<(Player, usize)>) {
        loop {
            let s = self.scan(&n);
            if s.complete || s.unblocked == 0 || self.full & !(n.maker | n.breaker) == 0 {
                return;
            }
            let free = self.full & !(n.maker | n.breaker);
            let e = match n.to_move {
                Player::Maker if s.threats != 0 => Some(s.threats.trailing_zeros() as usize),
                Player::Maker => Some(s.live.trailing_zeros() as usize),
                Player::Breaker => {
                    let mut wanted: Vec<usize> =
                        if s.threats != 0 { bits(s.threats).collect() } else { s.firsts.clone() };
                    wanted.sort_unstable();
                    wanted
                        .into_iter()
                        .find(|&e| above(n.last) & (1u64 << e) != 0)
                        .or_else(|| bits(free & above(n.last)).next())
                }
            };
            let Some(e) = e else {
                // no reachable pick left this turn
                n = Node { to_move: Player::Maker, picks: 1, last: None, ..n };
                continue;
            };
            line.push((n.to_move, e));
            n = self.child(&n, e);
        }
    }

    fn principal_line(&self, root: Node, memo: &mut HashMap<Key, bool>) -> Option<Vec<(Player, usize)>> {
        let mut line = Vec::new();
        let mut n = root;
        loop {
            let (children, moves) = match self.expand(&n) {
                Step::Value(_) => {
                    self.finish_pruned(n, &mut line);
                    return Some(line);
                }
                Step::Moves(c, m) => (c, m),
            };
            if moves.is_empty() {
                n = children[0];
                continue;
            }
            let mut order: Vec<usize> = (0..moves.len()).collect();
            order.sort_by_key(|&i| moves[i].1);
            let value = self.search(&n, memo)?;
            let mover_wins = value == (n.to_move == Player::Maker);
            let mut pick = order[0];
            if mover_wins {
                for &i in &order {
                    if self.search(&children[i], memo)? == value {
                        pick = i;
                        break;
                    }
                }
            }
            line.push(moves[pick]);
            n = children[pick];
        }
    }
}

fn rotation_perms(sys: &WinningSetSystem, sets: &[u64]) -> Vec<Vec<u8>> {
    let t = sys.tournament();
    let n = t.n();
    if n.is_multiple_of(2) || n < 3 {
        return Vec::new();
    }
    let mut family: Vec<u64> = sets.to_vec();
    family.sort_unstable();
    let mut out = Vec::new();
    for r in 1..n as u32 {
        if t.rotate(r) != *t {
            continue;
        }
        let image = |v: u32| (v - 1 + r) % n as u32 + 1;
        let perm: Vec<u8> = (0..sys.num_elements())
            .map(|e| {
                let d = sys.element(e);
                t.edge_id(crate::tournament::DirectedEdge::new(image(d.from), image(d.to))) as u8
            })
            .collect();
        let mut mapped: Vec<u64> = sets.iter().map(|&s| Ctx::map_mask(&perm, s)).collect();
        mapped.sort_unstable();
        if mapped == family {
            out.push(perm);
        }
    }
    out
}

fn to_mask(set: &fixedbitset::FixedBitSet) -> u64 {
    set.ones().fold(0, |acc, e| acc | 1u64 << e)
}

/// Solves `state` under perfect play. Maker's bias must be 1.
pub fn solve(state: &GameState, cfg: &SolverConfig) -> Result<SolveResult> {
    let (a, b) = state.bias();
    if a != 1 {
        return Err(Error::UnsupportedBias(a));
    }
    let sys = state.system();
    let m = sys.num_elements();
    if m > 64 {
        return Err(Error::BoardTooLarge(m));
    }
    let sets: Vec<u64> =
        sys.live_sets().map(|sid| sys.set(sid).iter().fold(0u64, |acc, &e| acc | 1u64 << e)).collect();
    let rotations = if cfg.symmetry { rotation_perms(sys, &sets) } else { Vec::new() };
    let counter = AtomicU64::new(0);
    let exhausted = AtomicBool::new(false);
    let ctx = Ctx {
        sets,
        full: if m == 64 { u64::MAX } else { (1u64 << m) - 1 },
        b,
        rotations,
        order_seed: cfg.ordering_seed,
        budget: cfg.budget,
        counter: &counter,
        exhausted: &exhausted,
    };
    let root = Node {
        maker: to_mask(state.maker()),
        breaker: to_mask(state.breaker()),
        to_move: state.to_move(),
        picks: state.picks_left(),
        last: None,
    };

    // Root children are solved independently, each with its own table, so
    // the node count does not depend on scheduling.
    let value = match ctx.expand(&root) {
        Step::Value(v) => Some(v),
        Step::Moves(children, _) => {
            let mut seen = std::collections::HashSet::new();
            let unique: Vec<Node> = children.into_iter().filter(|c| seen.insert(ctx.key(c))).collect();
            let values = cfg.exec.map_indexed(unique.len(), |i| ctx.search(&unique[i], &mut HashMap::new()));
            let maker_node = root.to_move == Player::Maker;
            if values.contains(&Some(maker_node)) {
                Some(maker_node)
            } else if values.iter().all(|v| v.is_some()) {
                Some(!maker_node)
            } else {
                None
            }
        }
    };
    let mut memo = HashMap::new();
    let line = match value {
        Some(_) => ctx.principal_line(root, &mut memo),
        None => None,
    };
    let nodes = counter.load(Ordering::Relaxed).min(cfg.budget);
    match (value, line) {
        (Some(v), Some(line)) if !exhausted.load(Ordering::Relaxed) => Ok(SolveResult {
            outcome: Outcome::Win(if v { Player::Maker } else { Player::Breaker }),
            line,
            nodes,
            budget: cfg.budget,
        }),
        _ => Ok(SolveResult { outcome: Outcome::Unknown, line: Vec::new(), nodes, budget: cfg.budget }),
    }
}

/// Convenience: solves the fresh `(1:b)` game on the whole board.
pub fn solve_board(sys: &std::sync::Arc<WinningSetSystem>, b: u32, cfg: &SolverConfig) -> Result<SolveResult> {
    solve(&GameState::new(sys.clone(), 1, b), cfg)
}

impl SolveResult {
    pub fn transcript(&self, start: &GameState) -> Result<Transcript> {
        Transcript::from_moves(start, &self.line)
    }
}

#[derive(Clone, Debug)]
pub struct ThresholdResult {
    pub threshold: u32,
    /// Winner for each `b = 1..=threshold`.
    pub winners: Vec<Player>,
    pub nodes: u64,
}

/// Smallest `b` for which Breaker wins the `(1:b)` game, found by ascending
/// search. Relies on bias monotonicity.
pub fn threshold_bias_exact(sys: &std::sync::Arc<WinningSetSystem>, cfg: &SolverConfig) -> Result<ThresholdResult> {
    let mut winners = Vec::new();
    let mut nodes = 0;
    for b in 1..=sys.num_elements().max(1) as u32 {
        let r = solve_board(sys, b, cfg)?;
        nodes += r.nodes;
        match r.outcome {
            Outcome::Unknown => return Err(Error::BudgetExhausted(cfg.budget)),
            Outcome::Win(p) => {
                winners.push(p);
                if p == Player::Breaker {
                    return Ok(ThresholdResult { threshold: b, winners, nodes });
                }
            }
        }
    }
    unreachable!("Breaker wins once she can delete the whole board in one turn")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tournament::Tournament;
    use crate::transcript::replay;
    use std::sync::Arc;

    fn board(t: Tournament) -> Arc<WinningSetSystem> {
        Arc::new(WinningSetSystem::new(&t))
    }

    type NaiveMemo = HashMap<(Vec<usize>, Vec<usize>, u32, bool), Player>;

    /// Plain memoised minimax over single claims, no pruning.
    fn naive(state: &GameState, memo: &mut NaiveMemo) -> Player {
        if let Some(w) = state.winner_if_terminal() {
            return w;
        }
        let key = (
            state.maker().ones().collect(),
            state.breaker().ones().collect(),
            state.picks_left(),
            state.to_move() == Player::Maker,
        );
        if let Some(&w) = memo.get(&key) {
            return w;
        }
        let me = state.to_move();
        let mut w = me.other();
        for e in state.unclaimed().collect::<Vec<_>>() {
            let mut c = state.clone();
            c.claim(e).unwrap();
            if naive(&c, memo) == me {
                w = me;
                break;
            }
        }
        memo.insert(key, w);
        w
    }

    #[test]
    fn small_parity_boards() {
        for n in 3..=6 {
            let r = solve_board(&board(Tournament::parity(n).unwrap()), 1, &SolverConfig::default()).unwrap();
            assert_eq!(r.winner(), Some(Player::Breaker), "n={n}");
        }
        let r = solve_board(&board(Tournament::parity(7).unwrap()), 1, &SolverConfig::default()).unwrap();
        assert_eq!(r.winner(), Some(Player::Maker));
    }

    #[test]
    fn agrees_with_naive_minimax() {
        for seed in 0..40 {
            let n = 4 + (seed % 2) as usize;
            let t = Tournament::random(n, 0.5, seed).unwrap();
            let sys = board(t);
            for b in 1..=2 {
                let start = GameState::new(sys.clone(), 1, b);
                let expected = naive(&start, &mut HashMap::new());
                let cfg = SolverConfig { exec: Exec::Sequential, ..Default::default() };
                assert_eq!(solve(&start, &cfg).unwrap().winner(), Some(expected), "seed={seed} b={b}");
            }
        }
    }

    #[test]
    fn transitive_and_huge_bias() {
        let r = solve_board(&board(Tournament::transitive(6).unwrap()), 1, &SolverConfig::default()).unwrap();
        assert_eq!(r.winner(), Some(Player::Breaker));
        let r = solve_board(&board(Tournament::parity(7).unwrap()), 21, &SolverConfig::default()).unwrap();
        assert_eq!(r.winner(), Some(Player::Breaker));
    }

    #[test]
    fn principal_line_replays() {
        for n in [5, 7] {
            let sys = board(Tournament::parity(n).unwrap());
            let start = GameState::new(sys.clone(), 1, 1);
            let r = solve(&start, &SolverConfig::default()).unwrap();
            let tr = r.transcript(&start).unwrap();
            assert_eq!(tr.winner, r.winner());
            replay(&tr).unwrap();
        }
    }

    #[test]
    fn budget_exhaustion_is_unknown() {
        let sys = board(Tournament::parity(7).unwrap());
        let cfg = SolverConfig { budget: 50, ..Default::default() };
        let r = solve_board(&sys, 1, &cfg).unwrap();
        assert_eq!(r.outcome, Outcome::Unknown);
        assert!(r.line.is_empty());
        assert!(threshold_bias_exact(&sys, &cfg).is_err());
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let sys = board(Tournament::parity(7).unwrap());
        let seq = solve_board(&sys, 1, &SolverConfig { exec: Exec::Sequential, ..Default::default() }).unwrap();
        let par = solve_board(&sys, 1, &SolverConfig { exec: Exec::Parallel, ..Default::default() }).unwrap();
        assert_eq!(seq.outcome, par.outcome);
        assert_eq!(seq.line, par.line);
        assert_eq!(seq.nodes, par.nodes);
    }

    #[test]
    fn random_orderings_agree() {
        for n in [5, 6] {
            let sys = board(Tournament::parity(n).unwrap());
            for seed in 0..10 {
                let cfg = SolverConfig { ordering_seed: Some(seed), ..Default::default() };
                assert_eq!(solve_board(&sys, 1, &cfg).unwrap().winner(), Some(Player::Breaker));
            }
        }
    }

    #[test]
    fn symmetry_off_agrees() {
        for n in [5, 7] {
            let sys = board(Tournament::parity(n).unwrap());
            let with = solve_board(&sys, 1, &SolverConfig::default()).unwrap();
            let without = solve_board(&sys, 1, &SolverConfig { symmetry: false, ..Default::default() }).unwrap();
            assert_eq!(with.outcome, without.outcome);
        }
    }

    #[test]
    fn rotated_positions_have_equal_value() {
        let t = Tournament::parity(7).unwrap();
        let sys = board(t.clone());
        let perms = {
            let sets: Vec<u64> =
                sys.live_sets().map(|sid| sys.set(sid).iter().fold(0u64, |a, &e| a | 1 << e)).collect();
            rotation_perms(&sys, &sets)
        };
        assert_eq!(perms.len(), 6);
        let cfg = SolverConfig { symmetry: false, exec: Exec::Sequential, ..Default::default() };
        for (m1, b1) in [(0usize, 5usize), (3, 11), (7, 20)] {
            let mut s = GameState::new(sys.clone(), 1, 1);
            s.claim(m1).unwrap();
            s.claim(b1).unwrap();
            let v = solve(&s, &cfg).unwrap().winner();
            for p in &perms {
                let mut r = GameState::new(sys.clone(), 1, 1);
                r.claim(p[m1] as usize).unwrap();
                r.claim(p[b1] as usize).unwrap();
                assert_eq!(solve(&r, &cfg).unwrap().winner(), v);
            }
        }
    }

    #[test]
    fn pi7_threshold_and_monotonicity() {
        let sys = board(Tournament::parity(7).unwrap());
        let r = threshold_bias_exact(&sys, &SolverConfig::default()).unwrap();
        assert!(r.threshold >= 2);
        assert_eq!(r.winners[0], Player::Maker);
        for b in r.threshold..=r.threshold + 2 {
            assert_eq!(solve_board(&sys, b, &SolverConfig::default()).unwrap().winner(), Some(Player::Breaker));
        }
        let lambda = board(Tournament::transitive(7).unwrap());
        assert_eq!(threshold_bias_exact(&lambda, &SolverConfig::default()).unwrap().threshold, 1);
    }

    #[test]
    fn rejects_unsupported_inputs() {
        let sys = board(Tournament::parity(5).unwrap());
        assert_eq!(solve(&GameState::new(sys, 2, 1), &SolverConfig::default()).unwrap_err(), Error::UnsupportedBias(2));
        let big = board(Tournament::parity(12).unwrap());
        assert_eq!(solve_board(&big, 1, &SolverConfig::default()).unwrap_err(), Error::BoardTooLarge(66));
    }
}
