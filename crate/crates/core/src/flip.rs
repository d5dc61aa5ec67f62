//! Breaker's preemptive edge flipping on Π(n), n odd, which turns the board
//! into the transitive tournament one vertex at a time, and the thresholds
//! derived from the per-flip triangle ledger.
//!
//! Flipping the edge `j → i` to `i → j` removes `1 + δ_i − δ_j` directed
//! triangles, where δ are the deviances just before the flip. The ledger is
//! maintained incrementally, so no triangle enumeration is needed even for
//! large `n`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tournament::{binomial, w_closed_form, DirectedEdge, Tournament};

#[derive(Clone, Debug, Serialize)]
pub struct FlipPlan {
    pub n: usize,
    /// Edges as oriented before their flip, in execution order.
    pub flips: Vec<DirectedEdge>,
    /// Triangles removed by each flip.
    pub deltas: Vec<u64>,
    /// Number of flips in phase `i` at index `i - 1`.
    pub phases: Vec<usize>,
    /// Triangles on the unflipped board.
    pub initial: u64,
}

fn check_odd(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidSize { n, min: 3 });
    }
    if n.is_multiple_of(2) {
        return Err(Error::EvenN(n));
    }
    Ok(())
}

/// Phase `i` (vertex `i = 1..n-2`) flips the incoming edges `(j, i)`,
/// `j > i` of the same parity, largest `j` first.
pub fn build_flip_plan(n: usize) -> Result<FlipPlan> {
    check_odd(n)?;
    let total = (n - 1) * (n - 1) / 4;
    let mut flips = Vec::with_capacity(total);
    let mut deltas = Vec::with_capacity(total);
    let mut phases = Vec::with_capacity(n - 2);
    let mut dev = vec![0i64; n + 1];
    for i in 1..=n - 2 {
        let mut count = 0;
        let mut j = if (n - i).is_multiple_of(2) { n } else { n - 1 };
        while j > i {
            let d = 1 + dev[i] - dev[j];
            debug_assert!(d > 0);
            flips.push(DirectedEdge::new(j as u32, i as u32));
            deltas.push(d as u64);
            dev[i] += 1;
            dev[j] -= 1;
            count += 1;
            j -= 2;
        }
        phases.push(count);
    }
    Ok(FlipPlan { n, flips, deltas, phases, initial: w_closed_form(n) })
}

/// One line of the flip ledger: the board after flip number `step`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerRow {
    pub step: usize,
    pub phase: usize,
    pub flip: DirectedEdge,
    pub delta: u64,
    pub remaining: u64,
    pub deviances: Vec<i64>,
}

impl FlipPlan {
    pub fn total(&self) -> usize {
        self.flips.len()
    }

    /// Triangles left after the first `k` flips.
    pub fn triangles_after(&self, k: usize) -> Result<u64> {
        if k > self.total() {
            return Err(Error::OutOfRange { index: k, max: self.total() });
        }
        Ok(self.initial - self.deltas[..k].iter().sum::<u64>())
    }

    /// All `total + 1` remaining counts, starting with the unflipped board.
    pub fn remaining_series(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.total() + 1);
        let mut left = self.initial;
        out.push(left);
        for &d in &self.deltas {
            left -= d;
            out.push(left);
        }
        out
    }

    /// Π(n) with the first `k` flips applied.
    pub fn apply(&self, k: usize) -> Result<Tournament> {
        if k > self.total() {
            return Err(Error::OutOfRange { index: k, max: self.total() });
        }
        let mut t = Tournament::parity(self.n)?;
        for &e in &self.flips[..k] {
            t = t.flip_edge(e)?;
        }
        Ok(t)
    }

    /// The per-flip ledger, deviances taken from the actual score vectors.
    pub fn ledger(&self) -> Result<Vec<LedgerRow>> {
        let mut t = Tournament::parity(self.n)?;
        let mut rows = Vec::with_capacity(self.total());
        let mut left = self.initial;
        let mut phase_of = Vec::with_capacity(self.total());
        for (i, &len) in self.phases.iter().enumerate() {
            phase_of.extend(std::iter::repeat_n(i + 1, len));
        }
        for (k, (&e, &d)) in self.flips.iter().zip(&self.deltas).enumerate() {
            t = t.flip_edge(e)?;
            left -= d;
            rows.push(LedgerRow {
                step: k + 1,
                phase: phase_of[k],
                flip: e,
                delta: d,
                remaining: left,
                deviances: t.score_vector().deviances().expect("odd n"),
            });
        }
        Ok(rows)
    }
}

pub fn kappa_upper_paper(n: usize) -> Result<i64> {
    check_odd(n)?;
    Ok(((n - 1) * (n - 1) / 4) as i64 - 3)
}

/// Fewest flips leaving at most three triangles.
pub fn kappa_upper_exact(n: usize) -> Result<usize> {
    let plan = build_flip_plan(n)?;
    Ok(plan.remaining_series().iter().position(|&r| r <= 3).expect("the plan ends with no triangles"))
}

/// Most flips that still leave more than `C(n,2)` triangles, or 0 when even
/// the unflipped board does not.
pub fn kappa_lower_exact(n: usize) -> Result<usize> {
    let plan = build_flip_plan(n)?;
    let edges = binomial(n as u64, 2);
    Ok(plan.remaining_series().iter().rposition(|&r| r > edges).unwrap_or(0))
}

/// Lower threshold with the `O(n)` term dropped.
pub fn kappa_lower_paper_asymptotic(n: usize) -> Result<f64> {
    check_odd(n)?;
    let n = n as f64;
    Ok(n * n / 4.0 - 1.5f64.powf(2.0 / 3.0) * n.powf(4.0 / 3.0))
}

/// The flip ledger read backwards, cut into blocks `(k, …, 1, k, …, 1)`.
#[derive(Clone, Debug, Serialize)]
pub struct BlockDecomposition {
    pub n: usize,
    pub reverse: Vec<u64>,
    /// `C(n, 2)`.
    pub edges: u64,
    /// Number of whole blocks whose cumulative sum stays within `edges`.
    pub k: u64,
    /// Cumulative sum of the first `k` blocks.
    pub sum_k: u64,
    /// Cumulative length of the first `k` blocks.
    pub len_k: u64,
    /// Entries of block `k + 1` needed to push the sum past `edges`.
    pub extra: Option<u64>,
    /// Shortest reverse prefix whose sum exceeds `edges`.
    pub x: Option<u64>,
}

pub fn block_sum_closed(z: u64) -> u64 {
    z * (z + 1) * (z + 2) / 3
}

pub fn block_len_closed(z: u64) -> u64 {
    z * (z + 1)
}

pub fn block_decomposition(n: usize) -> Result<BlockDecomposition> {
    let plan = build_flip_plan(n)?;
    let reverse: Vec<u64> = plan.deltas.iter().rev().copied().collect();
    let edges = binomial(n as u64, 2);
    let (mut k, mut sum_k, mut len_k) = (0u64, 0u64, 0u64);
    loop {
        let len = 2 * (k + 1);
        let end = len_k + len;
        if end as usize > reverse.len() {
            break;
        }
        let block_sum: u64 = reverse[len_k as usize..end as usize].iter().sum();
        if sum_k + block_sum > edges {
            break;
        }
        k += 1;
        sum_k += block_sum;
        len_k = end;
    }
    let mut acc = sum_k;
    let mut extra = None;
    for (i, &d) in reverse.iter().skip(len_k as usize).take(2 * (k as usize + 1)).enumerate() {
        acc += d;
        if acc > edges {
            extra = Some(i as u64 + 1);
            break;
        }
    }
    Ok(BlockDecomposition { n, reverse, edges, k, sum_k, len_k, extra, x: extra.map(|r| len_k + r) })
}

/// `kappa_lower_exact` through the block walk: total flips minus `x`.
pub fn kappa_lower_from_blocks(n: usize) -> Result<usize> {
    let b = block_decomposition(n)?;
    Ok(b.x.map_or(0, |x| b.reverse.len() - x as usize))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_one() {
        let plan = build_flip_plan(7).unwrap();
        let expect: Vec<DirectedEdge> = [(7, 1), (5, 1), (3, 1), (6, 2), (4, 2), (7, 3), (5, 3), (6, 4), (7, 5)]
            .iter()
            .map(|&e| e.into())
            .collect();
        assert_eq!(plan.flips, expect);
        assert_eq!(plan.deltas, vec![1, 2, 3, 1, 2, 1, 2, 1, 1]);
        assert_eq!(plan.phases, vec![3, 2, 2, 1, 1]);
        assert_eq!(plan.remaining_series(), vec![14, 13, 11, 8, 7, 5, 4, 2, 1, 0]);
        let rows = plan.ledger().unwrap();
        let devs: Vec<Vec<i64>> = rows.iter().map(|r| r.deviances.clone()).collect();
        assert_eq!(
            devs,
            vec![
                vec![1, 0, 0, 0, 0, 0, -1],
                vec![2, 0, 0, 0, -1, 0, -1],
                vec![3, 0, -1, 0, -1, 0, -1],
                vec![3, 1, -1, 0, -1, -1, -1],
                vec![3, 2, -1, -1, -1, -1, -1],
                vec![3, 2, 0, -1, -1, -1, -2],
                vec![3, 2, 1, -1, -2, -1, -2],
                vec![3, 2, 1, 0, -2, -2, -2],
                vec![3, 2, 1, 0, -1, -2, -3],
            ]
        );
        assert_eq!(plan.apply(9).unwrap(), Tournament::transitive(7).unwrap());
        assert_eq!(plan.triangles_after(6).unwrap(), 4);
        assert!(plan.triangles_after(10).is_err());
    }

    #[test]
    fn ledger_matches_enumeration() {
        for n in (3..=21).step_by(2) {
            let plan = build_flip_plan(n).unwrap();
            let series = plan.remaining_series();
            let mut t = Tournament::parity(n).unwrap();
            assert_eq!(t.enumerate_triangles().len() as u64, series[0]);
            for (k, &e) in plan.flips.iter().enumerate() {
                t = t.flip_edge(e).unwrap();
                assert_eq!(t.enumerate_triangles().len() as u64, series[k + 1], "n={n} k={}", k + 1);
            }
            assert_eq!(t, Tournament::transitive(n).unwrap());
        }
    }

    #[test]
    fn phase_shape() {
        for n in (3..=201).step_by(2) {
            let plan = build_flip_plan(n).unwrap();
            assert_eq!(plan.total(), (n - 1) * (n - 1) / 4);
            assert_eq!(plan.deltas.iter().sum::<u64>(), w_closed_form(n));
            let mut at = 0;
            for (i, &len) in plan.phases.iter().enumerate() {
                assert_eq!(len, (n - (i + 1)) / 2);
                let want: Vec<u64> = (1..=len as u64).collect();
                assert_eq!(plan.deltas[at..at + len], want[..], "n={n} phase {}", i + 1);
                at += len;
            }
        }
    }

    #[test]
    fn kappa_values() {
        assert_eq!(kappa_upper_paper(7).unwrap(), 6);
        assert_eq!(kappa_upper_paper(13).unwrap(), 33);
        assert_eq!(kappa_upper_exact(7).unwrap(), 7);
        // remaining on Π(5): 5, 4, 2, 1, 0
        assert_eq!(build_flip_plan(5).unwrap().deltas, vec![1, 2, 1, 1]);
        assert_eq!(kappa_upper_exact(5).unwrap(), 2);
        assert_eq!(kappa_lower_exact(7).unwrap(), 0);
        assert!(matches!(build_flip_plan(8), Err(Error::EvenN(8))));
    }

    /// Independent scan: largest k with w(13) - F(k) > 78.
    #[test]
    fn kappa_lower_thirteen() {
        let plan = build_flip_plan(13).unwrap();
        assert_eq!(plan.initial, 91);
        let mut f = 0;
        let mut best = 0;
        for (k, d) in std::iter::once(0).chain(plan.deltas.iter().copied()).enumerate() {
            f += d;
            if f <= 12 {
                best = k;
            }
        }
        assert_eq!(kappa_lower_exact(13).unwrap(), best);
    }

    #[test]
    fn blocks() {
        assert_eq!(block_sum_closed(3), 20);
        assert_eq!(block_len_closed(3), 12);
        let b = block_decomposition(41).unwrap();
        assert_eq!(b.reverse[..13], [1, 1, 2, 1, 2, 1, 3, 2, 1, 3, 2, 1, 4]);
        for n in (13..=301).step_by(2) {
            let b = block_decomposition(n).unwrap();
            assert_eq!(b.sum_k, block_sum_closed(b.k));
            assert_eq!(b.len_k, block_len_closed(b.k));
            let r = b.extra.expect("w(n) exceeds C(n,2) from n = 13 on");
            assert!(b.sum_k <= b.edges && b.edges < block_sum_closed(b.k + 1));
            assert!(r <= 2 * (b.k + 1));
            assert_eq!(kappa_lower_from_blocks(n).unwrap(), kappa_lower_exact(n).unwrap(), "n={n}");
        }
        let b = block_decomposition(101).unwrap();
        assert!((b.k as f64 - (3.0 * 5050f64).cbrt()).abs() <= 2.0);
    }

    #[test]
    fn block_pattern_holds_to_large_z() {
        // every block k of the reverse sequence is (k..1, k..1)
        let b = block_decomposition(1001).unwrap();
        let mut at = 0usize;
        let mut z = 1u64;
        while at + 2 * z as usize <= b.reverse.len() {
            let want: Vec<u64> = (1..=z).rev().chain((1..=z).rev()).collect();
            assert_eq!(b.reverse[at..at + 2 * z as usize], want[..]);
            at += 2 * z as usize;
            assert_eq!(at as u64, block_len_closed(z));
            z += 1;
        }
        for z in 0..=10_000u64 {
            let walk: u64 = (1..=z).map(|k| k * (k + 1)).sum();
            assert_eq!(walk, block_sum_closed(z));
            assert_eq!((1..=z).map(|k| 2 * k).sum::<u64>(), block_len_closed(z));
        }
    }

    #[test]
    fn sandwich() {
        for n in (3..=101).step_by(2) {
            let lo = kappa_lower_exact(n).unwrap();
            let hi = kappa_upper_exact(n).unwrap();
            assert!(lo <= hi && hi <= (n - 1) * (n - 1) / 4, "n={n}");
        }
    }
}
