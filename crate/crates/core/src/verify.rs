//! Exhaustive verification of a scripted strategy: the script plays one
//! side, and every legal reply of the other side is tried.
//!
//! When the script declares a support (a Maker script confined to one copy of
//! Π(7)), all opponent moves outside the support are interchangeable and only
//! the lowest-id one is explored.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::Result;
use crate::hypergraph::{GameState, Player, WinningSetSystem};
use crate::par::Exec;
use crate::strategies::StrategyScript;
use crate::transcript::Transcript;

pub const DEFAULT_VERIFY_BUDGET: u64 = 1_000_000_000;

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Maximum number of visited positions.
    pub budget: u64,
    pub exec: Exec,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { budget: DEFAULT_VERIFY_BUDGET, exec: Exec::default() }
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    /// The script won on every line.
    Verified,
    /// First losing line in lowest-id depth-first order.
    Refuted(Box<Transcript>),
    Unknown,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub verdict: Verdict,
    /// Complete games examined.
    pub lines: u64,
    pub nodes: u64,
    pub budget: u64,
}

impl VerifyReport {
    pub fn is_ok(&self) -> bool {
        matches!(self.verdict, Verdict::Verified)
    }

    pub fn counterexample(&self) -> Option<&Transcript> {
        match &self.verdict {
            Verdict::Refuted(t) => Some(t),
            _ => None,
        }
    }
}

enum Outcome {
    Ok,
    Fail(Vec<(Player, usize)>, Option<String>),
    OutOfBudget,
}

struct Ctx<'a> {
    role: Player,
    budget: u64,
    nodes: &'a AtomicU64,
    lines: &'a AtomicU64,
    stop: &'a AtomicBool,
}

impl Ctx<'_> {
    fn adversary_moves(&self, state: &GameState, script: &StrategyScript) -> Vec<usize> {
        let mut moves: Vec<usize> = state.unclaimed().collect();
        if let Some(support) = script.support() {
            let outside = moves.iter().copied().find(|&e| !support[e]);
            moves.retain(|&e| support[e]);
            moves.extend(outside);
            moves.sort_unstable();
        }
        moves
    }

    fn dfs(&self, state: &GameState, script: &mut StrategyScript, path: &mut Vec<(Player, usize)>) -> Outcome {
        if self.stop.load(Ordering::Relaxed) || self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.stop.store(true, Ordering::Relaxed);
            return Outcome::OutOfBudget;
        }
        if let Some(w) = state.winner_if_terminal() {
            self.lines.fetch_add(1, Ordering::Relaxed);
            return if w == self.role { Outcome::Ok } else { Outcome::Fail(path.clone(), None) };
        }
        if state.to_move() == self.role {
            let e = match script.choose(state) {
                Ok(e) => e,
                Err(err) => return Outcome::Fail(path.clone(), Some(err.to_string())),
            };
            let mut next = state.clone();
            next.claim(e).expect("script move is legal");
            path.push((self.role, e));
            let out = self.dfs(&next, script, path);
            path.pop();
            return out;
        }
        for e in self.adversary_moves(state, script) {
            let mut next = state.clone();
            next.claim(e).expect("unclaimed move is legal");
            let mut s = script.clone();
            path.push((self.role.other(), e));
            let out = self.dfs(&next, &mut s, path);
            path.pop();
            if !matches!(out, Outcome::Ok) {
                return out;
            }
        }
        Outcome::Ok
    }
}

/// Runs `script` from the start of the `(a:b)` game against every opponent
/// line. The opponent's first-ply alternatives are explored concurrently.
pub fn verify_strategy(
    script: &StrategyScript,
    sys: &Arc<WinningSetSystem>,
    bias: (u32, u32),
    cfg: &VerifyConfig,
) -> Result<VerifyReport> {
    let role = script.role();
    let nodes = AtomicU64::new(0);
    let lines = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let ctx = Ctx { role, budget: cfg.budget, nodes: &nodes, lines: &lines, stop: &stop };

    // Advance through the script's own opening moves until the opponent has a
    // real choice, then split.
    let mut state = GameState::new(sys.clone(), bias.0, bias.1);
    let mut script = script.clone();
    let mut prefix = Vec::new();
    let mut early = None;
    while state.winner_if_terminal().is_none() && state.to_move() == role {
        match script.choose(&state) {
            Ok(e) => {
                state.claim(e)?;
                prefix.push((role, e));
            }
            Err(err) => {
                early = Some(Outcome::Fail(prefix.clone(), Some(err.to_string())));
                break;
            }
        }
    }
    let outcome = match early {
        Some(o) => o,
        None if state.winner_if_terminal().is_some() => ctx.dfs(&state, &mut script, &mut prefix),
        None => {
            let first = ctx.adversary_moves(&state, &script);
            let results = cfg.exec.map_indexed(first.len(), |i| {
                let mut next = state.clone();
                next.claim(first[i]).expect("unclaimed move is legal");
                let mut path = prefix.clone();
                path.push((role.other(), first[i]));
                ctx.dfs(&next, &mut script.clone(), &mut path)
            });
            results
                .into_iter()
                .find(|o| !matches!(o, Outcome::Ok))
                .unwrap_or(Outcome::Ok)
        }
    };
    // A refutation found before the budget ran out is genuine even if another
    // worker later hit the limit.
    let verdict = match outcome {
        Outcome::Ok if !stop.load(Ordering::Relaxed) => Verdict::Verified,
        Outcome::Ok | Outcome::OutOfBudget => Verdict::Unknown,
        Outcome::Fail(path, note) => {
            let start = GameState::new(sys.clone(), bias.0, bias.1);
            let mut tr = Transcript::from_moves(&start, &path)?;
            if let Some(note) = note {
                tr.meta = Some(serde_json::json!({ "script_error": note }));
            }
            Verdict::Refuted(Box::new(tr))
        }
    };
    Ok(VerifyReport {
        verdict,
        lines: lines.load(Ordering::Relaxed),
        nodes: nodes.load(Ordering::Relaxed).min(cfg.budget),
        budget: cfg.budget,
    })
}

/// [`verify_strategy`] for a Maker script.
pub fn verify_maker_strategy(
    script: &StrategyScript,
    sys: &Arc<WinningSetSystem>,
    bias: (u32, u32),
    cfg: &VerifyConfig,
) -> Result<VerifyReport> {
    assert_eq!(script.role(), Player::Maker, "expected a Maker script");
    verify_strategy(script, sys, bias, cfg)
}

/// [`verify_strategy`] for a Breaker script.
pub fn verify_breaker_strategy(
    script: &StrategyScript,
    sys: &Arc<WinningSetSystem>,
    bias: (u32, u32),
    cfg: &VerifyConfig,
) -> Result<VerifyReport> {
    assert_eq!(script.role(), Player::Breaker, "expected a Breaker script");
    verify_strategy(script, sys, bias, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tournament::Tournament;
    use crate::transcript::replay;

    fn board(n: usize) -> Arc<WinningSetSystem> {
        Arc::new(WinningSetSystem::new(&Tournament::parity(n).unwrap()))
    }

    #[test]
    fn small_pairings_verify() {
        for n in 3..=5 {
            let sys = board(n);
            let s = StrategyScript::breaker_pairing_small(&sys, n).unwrap();
            let r = verify_breaker_strategy(&s, &sys, (1, 1), &VerifyConfig::default()).unwrap();
            assert!(r.is_ok(), "n={n}");
            assert!(r.lines > 0);
        }
    }

    #[test]
    fn lowest_breaker_is_refuted_on_pi5_with_replayable_line() {
        let sys = board(5);
        let r = verify_breaker_strategy(&StrategyScript::Lowest(Player::Breaker), &sys, (1, 1), &VerifyConfig::default())
            .unwrap();
        let tr = r.counterexample().expect("lowest-id deletion loses");
        assert_eq!(tr.winner, Some(Player::Maker));
        replay(tr).unwrap();
    }

    #[test]
    fn broken_pairing_is_refuted() {
        let sys = board(5);
        let mut p = crate::strategies::small_pairing(&sys, 5).unwrap();
        p.pairs.pop();
        let s = StrategyScript::breaker_pairing(p, &sys);
        let r = verify_breaker_strategy(&s, &sys, (1, 1), &VerifyConfig::default()).unwrap();
        assert!(r.counterexample().is_some());
    }

    #[test]
    fn pi7_maker_verifies_and_mutant_fails() {
        let sys = board(7);
        let s = StrategyScript::maker_pi7(&sys).unwrap();
        let r = verify_maker_strategy(&s, &sys, (1, 1), &VerifyConfig::default()).unwrap();
        assert!(r.is_ok());
        let r = verify_maker_strategy(&s.without_double_threat(), &sys, (1, 1), &VerifyConfig::default()).unwrap();
        let tr = r.counterexample().expect("mutant must be refuted");
        assert_eq!(tr.winner, Some(Player::Breaker));
        replay(tr).unwrap();
    }

    #[test]
    fn tiny_budget_is_unknown() {
        let sys = board(7);
        let s = StrategyScript::maker_pi7(&sys).unwrap();
        let r = verify_maker_strategy(&s, &sys, (1, 1), &VerifyConfig { budget: 10, ..Default::default() }).unwrap();
        assert!(matches!(r.verdict, Verdict::Unknown));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let sys = board(5);
        let s = StrategyScript::Lowest(Player::Breaker);
        let a = verify_breaker_strategy(&s, &sys, (1, 1), &VerifyConfig { exec: Exec::Sequential, ..Default::default() })
            .unwrap();
        let b = verify_breaker_strategy(&s, &sys, (1, 1), &VerifyConfig { exec: Exec::Parallel, ..Default::default() })
            .unwrap();
        assert_eq!(a.counterexample(), b.counterexample());
    }
}
