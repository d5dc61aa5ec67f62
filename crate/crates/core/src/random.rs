//! Random tournaments `T(n, p)`: order-preserving copies of Π(7), their
//! expected number, and Monte Carlo estimates of copy existence and of
//! Maker winning by playing on a found copy.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::WinningSetSystem;
use crate::par::Exec;
use crate::rng::derive_seed;
use crate::strategies::StrategyScript;
use crate::tournament::{binomial, Tournament};
use crate::verify::{verify_maker_strategy, Verdict, VerifyConfig};

pub const COPY_SIZE: usize = 7;
pub const DEFAULT_TRIAL_BUDGET: u64 = 10_000_000;

fn check_open(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::InvalidProbability(p));
    }
    if p == 0.0 || p == 1.0 {
        return Err(Error::DegenerateProbability(p));
    }
    Ok(())
}

/// Pairs `i < j` of Π(7) oriented `i → j`, and oriented `j → i`.
pub fn orientation_counts() -> (u32, u32) {
    let t = Tournament::parity(COPY_SIZE).expect("valid size");
    let forward = t.edges().iter().filter(|e| e.from < e.to).count() as u32;
    (forward, t.num_edges() as u32 - forward)
}

/// Probability that a fixed 7-set of `T(n, p)` induces Π(7) in increasing
/// order.
pub fn copy_probability(p: f64) -> Result<f64> {
    check_open(p)?;
    let (f, r) = orientation_counts();
    Ok(p.powi(f as i32) * (1.0 - p).powi(r as i32))
}

pub fn expected_copies(n: usize, p: f64) -> Result<f64> {
    let q = copy_probability(p)?;
    if n < COPY_SIZE {
        return Ok(0.0);
    }
    Ok(binomial(n as u64, COPY_SIZE as u64) as f64 * q)
}

/// Depth-first search over increasing tuples, abandoning a prefix as soon as
/// one of its edges disagrees with Π(7). Calls `found` for every full match
/// and stops when it returns `false`.
fn search(t: &Tournament, found: &mut dyn FnMut(&[u32; COPY_SIZE]) -> bool) {
    let pattern = Tournament::parity(COPY_SIZE).expect("valid size");
    let n = t.n() as u32;
    let mut tuple = [0u32; COPY_SIZE];

    fn rec(
        t: &Tournament,
        pattern: &Tournament,
        n: u32,
        depth: usize,
        tuple: &mut [u32; COPY_SIZE],
        found: &mut dyn FnMut(&[u32; COPY_SIZE]) -> bool,
    ) -> bool {
        if depth == COPY_SIZE {
            return found(tuple);
        }
        let start = if depth == 0 { 1 } else { tuple[depth - 1] + 1 };
        let room = (COPY_SIZE - depth - 1) as u32;
        for v in start..=n.saturating_sub(room) {
            let fits = (0..depth).all(|a| t.beats(tuple[a], v) == pattern.beats(a as u32 + 1, depth as u32 + 1));
            if fits {
                tuple[depth] = v;
                if !rec(t, pattern, n, depth + 1, tuple, found) {
                    return false;
                }
            }
        }
        true
    }

    rec(t, &pattern, n, 0, &mut tuple, found);
}

/// The lexicographically first increasing 7-tuple inducing Π(7).
pub fn find_embedding(t: &Tournament) -> Option<[u32; COPY_SIZE]> {
    let mut out = None;
    search(t, &mut |tuple| {
        out = Some(*tuple);
        false
    });
    out
}

pub fn count_embeddings(t: &Tournament) -> u64 {
    let mut count = 0;
    search(t, &mut |_| {
        count += 1;
        true
    });
    count
}

/// A Monte Carlo proportion with its 95% Wilson interval.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub n: usize,
    pub p: f64,
    pub trials: u64,
    pub successes: u64,
    /// Trials whose outcome could not be decided within budget.
    pub unknowns: u64,
    /// `successes / (trials - unknowns)`.
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub master_seed: u64,
}

/// 95% Wilson score interval for `k` successes out of `m`.
pub fn wilson_interval(k: u64, m: u64) -> (f64, f64) {
    if m == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054f64;
    let m = m as f64;
    let ph = k as f64 / m;
    let denom = 1.0 + z * z / m;
    let center = (ph + z * z / (2.0 * m)) / denom;
    let half = z * (ph * (1.0 - ph) / m + z * z / (4.0 * m * m)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn estimate(n: usize, p: f64, trials: u64, successes: u64, unknowns: u64, master_seed: u64) -> McEstimate {
    let decided = trials - unknowns;
    let (ci_low, ci_high) = wilson_interval(successes, decided);
    let estimate = if decided == 0 { f64::NAN } else { successes as f64 / decided as f64 };
    McEstimate { n, p, trials, successes, unknowns, estimate, ci_low, ci_high, master_seed }
}

/// Fraction of sampled `T(n, p)` containing a copy of Π(7). Trial `i` uses
/// the seed `derive_seed(master_seed, i)`.
pub fn mc_embedding_probability(n: usize, p: f64, trials: u64, master_seed: u64, exec: Exec) -> Result<McEstimate> {
    check_open(p)?;
    let hits = exec.map_indexed(trials as usize, |i| -> Result<bool> {
        let t = Tournament::random(n, p, derive_seed(master_seed, i as u64))?;
        Ok(find_embedding(&t).is_some())
    });
    let successes = hits.into_iter().collect::<Result<Vec<_>>>()?.into_iter().filter(|&h| h).count() as u64;
    Ok(estimate(n, p, trials, successes, 0, master_seed))
}

/// Outcome of a single Maker-win trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialOutcome {
    NoCopy,
    Verified,
    Refuted,
    Unknown,
}

/// One trial: sample, look for a copy, and if there is one, certify Maker's
/// copy-restricted script against every Breaker line.
pub fn maker_win_trial(n: usize, p: f64, seed: u64, budget: u64) -> Result<TrialOutcome> {
    let t = Tournament::random(n, p, seed)?;
    let Some(map) = find_embedding(&t) else {
        return Ok(TrialOutcome::NoCopy);
    };
    let sys = Arc::new(WinningSetSystem::new(&t));
    let script = StrategyScript::maker_on_copy(&sys, map)?;
    let cfg = VerifyConfig { budget, exec: Exec::Sequential };
    let report = verify_maker_strategy(&script, &sys, (1, 1), &cfg)?;
    Ok(match report.verdict {
        Verdict::Verified => TrialOutcome::Verified,
        Verdict::Refuted(_) => TrialOutcome::Refuted,
        Verdict::Unknown => TrialOutcome::Unknown,
    })
}

/// Fraction of sampled `T(n, p)` on which Maker's win is certified. Trials
/// without a copy count as decided non-wins; trials that run out of budget
/// are reported as unknowns and excluded from the estimate.
pub fn mc_maker_win(n: usize, p: f64, trials: u64, master_seed: u64, budget: u64, exec: Exec) -> Result<McEstimate> {
    check_open(p)?;
    let outcomes = exec.map_indexed(trials as usize, |i| maker_win_trial(n, p, derive_seed(master_seed, i as u64), budget));
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let successes = outcomes.iter().filter(|&&o| o == TrialOutcome::Verified).count() as u64;
    let unknowns = outcomes.iter().filter(|&&o| o == TrialOutcome::Unknown).count() as u64;
    Ok(estimate(n, p, trials, successes, unknowns, master_seed))
}
