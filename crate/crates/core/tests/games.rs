use std::sync::Arc;

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dtgame::solver::{solve_board, SolverConfig};
use dtgame::strategies::StrategyScript;
use dtgame::verify::{verify_breaker_strategy, verify_maker_strategy, VerifyConfig};
use dtgame::{validate_pairing, Pairing, Player, Tournament, WinningSetSystem};

fn board(n: usize) -> Arc<WinningSetSystem> {
    Arc::new(WinningSetSystem::new(&Tournament::parity(n).unwrap()))
}

/// Every pairing that blocks all live sets, in lexicographic search order,
/// up to `limit` of them.
fn blocking_pairings(sys: &WinningSetSystem, limit: usize) -> Vec<Pairing> {
    fn go(
        sys: &WinningSetSystem,
        sets: &[usize],
        used: &mut Vec<bool>,
        pairs: &mut Vec<(usize, usize)>,
        out: &mut Vec<Pairing>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        let Some((&s, rest)) = sets.split_first() else {
            out.push(Pairing::new(pairs.clone()));
            return;
        };
        let [x, y, z] = sys.set(s);
        if pairs.iter().any(|&(a, b)| [x, y, z].contains(&a) && [x, y, z].contains(&b)) {
            return go(sys, rest, used, pairs, out, limit);
        }
        for (a, b) in [(x, y), (x, z), (y, z)] {
            if !used[a] && !used[b] {
                used[a] = true;
                used[b] = true;
                pairs.push((a, b));
                go(sys, rest, used, pairs, out, limit);
                pairs.pop();
                used[a] = false;
                used[b] = false;
            }
        }
    }
    let sets: Vec<usize> = sys.live_sets().collect();
    let mut out = Vec::new();
    go(sys, &sets, &mut vec![false; sys.num_elements()], &mut Vec::new(), &mut out, limit);
    out
}

#[test]
fn valid_pairings_never_lose() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut checked = 0;
    for _ in 0..60 {
        let n = rng.random_range(4..=6);
        let sys = Arc::new(WinningSetSystem::new(&Tournament::random(n, 0.5, rng.random()).unwrap()));
        assert!(sys.num_elements() <= 15);
        for pairing in blocking_pairings(&sys, 3) {
            assert!(validate_pairing(&sys, &pairing, &[]).valid);
            let script = StrategyScript::breaker_pairing(pairing, &sys);
            let rep = verify_breaker_strategy(&script, &sys, (1, 1), &VerifyConfig::default()).unwrap();
            assert!(rep.is_ok(), "{:?}", rep.counterexample());
            checked += 1;
        }
    }
    assert!(checked > 20, "only {checked} pairings exercised");
}

#[test]
fn scripted_winners_agree_with_solver() {
    for n in 3..=7 {
        let sys = board(n);
        let solved = solve_board(&sys, 1, &SolverConfig::default()).unwrap().winner().unwrap();
        let script = match n {
            3..=5 => StrategyScript::breaker_pairing_small(&sys, n).unwrap(),
            6 => StrategyScript::breaker_pi6(&sys).unwrap(),
            _ => StrategyScript::maker_pi7(&sys).unwrap(),
        };
        let rep = match script.role() {
            Player::Maker => verify_maker_strategy(&script, &sys, (1, 1), &VerifyConfig::default()),
            Player::Breaker => verify_breaker_strategy(&script, &sys, (1, 1), &VerifyConfig::default()),
        }
        .unwrap();
        assert!(rep.is_ok(), "n={n}");
        assert_eq!(script.role(), solved, "n={n}");
    }
}

#[test]
fn pi7_value_is_independent_of_move_ordering() {
    let sys = board(7);
    for seed in 0..3 {
        let cfg = SolverConfig { ordering_seed: Some(seed), ..Default::default() };
        assert_eq!(solve_board(&sys, 1, &cfg).unwrap().winner(), Some(Player::Maker), "seed={seed}");
    }
}

#[test]
fn moon_bound_on_random_twenty_vertex_boards() {
    let max = (20 * 20 * 20 - 4 * 20) / 24;
    for seed in 0..1000 {
        let t = Tournament::random(20, 0.5, seed).unwrap();
        let w = t.count_triangles_moon();
        assert!(w <= max as u64, "seed={seed}");
        assert_eq!(w, t.enumerate_triangles().len() as u64);
    }
}
