//! Tournaments: construction, mutation, text serialization and directed
//! triangle counting.
//!
//! Vertices are labelled `1..=n`. The orientation of every unordered pair
//! `{i, j}` with `i < j` is one bit, stored in row-major pair order
//! `(1,2), (1,3), …, (1,n), (2,3), …, (n-1,n)`; a set bit means `i → j`.
//! The same pair index doubles as the stable element id of the edge on the
//! game board.

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// The edge `from → to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(u32, u32)", into = "(u32, u32)")]
pub struct DirectedEdge {
    pub from: u32,
    pub to: u32,
}

impl DirectedEdge {
    pub const fn new(from: u32, to: u32) -> Self {
        Self { from, to }
    }

    pub fn reversed(self) -> Self {
        Self::new(self.to, self.from)
    }
}

impl fmt::Display for DirectedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.from, self.to)
    }
}

impl From<(u32, u32)> for DirectedEdge {
    fn from((from, to): (u32, u32)) -> Self {
        Self::new(from, to)
    }
}

impl From<DirectedEdge> for (u32, u32) {
    fn from(e: DirectedEdge) -> Self {
        (e.from, e.to)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tournament {
    n: usize,
    forward: FixedBitSet,
}

/// Out-degrees plus their offsets from the regular score `(n-1)/2`.
///
/// The offsets are kept doubled so that they stay integral for even `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoreVector {
    pub scores: Vec<u32>,
    pub twice_deviances: Vec<i64>,
}

impl ScoreVector {
    /// Deviances `s_i - (n-1)/2`; only integral (and returned) for odd `n`.
    pub fn deviances(&self) -> Option<Vec<i64>> {
        if self.scores.len() % 2 == 1 {
            Some(self.twice_deviances.iter().map(|d| d / 2).collect())
        } else {
            None
        }
    }
}

pub type Triangle = [u32; 3];

pub fn num_pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc as u64
}

/// Number of directed triangles of the parity tournament on `n` vertices
/// (the maximum over all tournaments of that size).
pub fn w_closed_form(n: usize) -> u64 {
    let n = n as u64;
    if n % 2 == 1 {
        (n * n * n - n) / 24
    } else {
        (n * n * n - 4 * n) / 24
    }
}

/// The same count as a sum over the middle vertex of each triangle.
pub fn w_ceiling_sum(n: usize) -> u64 {
    let n = n as u64;
    (1..n.saturating_sub(1))
        .map(|i| i.div_ceil(2) * (n - (i + 1)).div_ceil(2))
        .sum()
}

impl Tournament {
    fn blank(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidSize { n, min: 1 });
        }
        Ok(Self { n, forward: FixedBitSet::with_capacity(num_pairs(n)) })
    }

    /// Builds a tournament from a predicate on ordered pairs `i < j`
    /// returning whether the edge points `i → j`.
    pub fn from_fn(n: usize, mut forward: impl FnMut(u32, u32) -> bool) -> Result<Self> {
        let mut t = Self::blank(n)?;
        let mut idx = 0;
        for i in 1..=n as u32 {
            for j in i + 1..=n as u32 {
                t.forward.set(idx, forward(i, j));
                idx += 1;
            }
        }
        Ok(t)
    }

    /// `i → j` (for `i < j`) exactly when `i + j` is odd.
    pub fn parity(n: usize) -> Result<Self> {
        Self::from_fn(n, |i, j| (i + j) % 2 == 1)
    }

    /// Every edge points from the smaller label to the larger, so vertex 1
    /// beats everyone and vertex `n` nobody.
    pub fn transitive(n: usize) -> Result<Self> {
        Self::from_fn(n, |_, _| true)
    }

    /// `T(n, p)`: each pair `i < j` independently points `i → j` with
    /// probability `p`. Pairs are sampled in lexicographic order from a
    /// ChaCha stream seeded with `seed`.
    pub fn random(n: usize, p: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        let mut rng = rng_from_seed(seed);
        Self::from_fn(n, |_, _| rng.random::<f64>() < p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        num_pairs(self.n)
    }

    fn check_vertex(&self, v: u32) -> Result<()> {
        if v == 0 || v as usize > self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Index of the unordered pair `{i, j}`; `i < j` required.
    #[inline]
    pub fn pair_index(&self, i: u32, j: u32) -> usize {
        debug_assert!(i < j && j as usize <= self.n);
        let (i, j, n) = (i as usize, j as usize, self.n);
        (i - 1) * n - (i - 1) * i / 2 + (j - i - 1)
    }

    /// Inverse of [`Tournament::pair_index`].
    pub fn pair_at(&self, mut index: usize) -> (u32, u32) {
        let n = self.n;
        for i in 1..n {
            let row = n - i;
            if index < row {
                return (i as u32, (i + 1 + index) as u32);
            }
            index -= row;
        }
        panic!("pair index out of range")
    }

    /// Whether the edge `u → v` is present. `u == v` yields `false`.
    #[inline]
    pub fn beats(&self, u: u32, v: u32) -> bool {
        match u.cmp(&v) {
            std::cmp::Ordering::Less => self.forward[self.pair_index(u, v)],
            std::cmp::Ordering::Greater => !self.forward[self.pair_index(v, u)],
            std::cmp::Ordering::Equal => false,
        }
    }

    pub fn has_edge(&self, e: DirectedEdge) -> bool {
        e.from != e.to
            && e.from >= 1
            && e.to >= 1
            && e.from as usize <= self.n
            && e.to as usize <= self.n
            && self.beats(e.from, e.to)
    }

    /// Element id of an edge, whichever way it is oriented.
    pub fn edge_id(&self, e: DirectedEdge) -> usize {
        let (i, j) = if e.from < e.to { (e.from, e.to) } else { (e.to, e.from) };
        self.pair_index(i, j)
    }

    /// The oriented edge stored at pair index `index`.
    pub fn edge_at(&self, index: usize) -> DirectedEdge {
        let (i, j) = self.pair_at(index);
        if self.forward[index] {
            DirectedEdge::new(i, j)
        } else {
            DirectedEdge::new(j, i)
        }
    }

    /// All edges in pair order.
    pub fn edges(&self) -> Vec<DirectedEdge> {
        let mut out = Vec::with_capacity(self.num_edges());
        for i in 1..=self.n as u32 {
            for j in i + 1..=self.n as u32 {
                out.push(if self.beats(i, j) { DirectedEdge::new(i, j) } else { DirectedEdge::new(j, i) });
            }
        }
        out
    }

    /// Returns a copy with `e` reversed.
    pub fn flip_edge(&self, e: DirectedEdge) -> Result<Self> {
        self.check_vertex(e.from)?;
        self.check_vertex(e.to)?;
        if e.from == e.to || !self.beats(e.from, e.to) {
            return Err(Error::EdgeOpposite(e));
        }
        let mut t = self.clone();
        t.flip_in_place(e);
        Ok(t)
    }

    pub(crate) fn flip_in_place(&mut self, e: DirectedEdge) {
        let idx = self.edge_id(e);
        self.forward.toggle(idx);
    }

    pub fn score_vector(&self) -> ScoreVector {
        let n = self.n;
        let mut scores = vec![0u32; n];
        let mut idx = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.forward[idx] {
                    scores[i] += 1;
                } else {
                    scores[j] += 1;
                }
                idx += 1;
            }
        }
        let twice_deviances = scores.iter().map(|&s| 2 * i64::from(s) - (n as i64 - 1)).collect();
        ScoreVector { scores, twice_deviances }
    }

    /// Whether `(a, b, c)` with `a` the smallest label is a directed
    /// triangle `a → b → c → a`.
    pub fn is_directed_triangle(&self, a: u32, b: u32, c: u32) -> Result<bool> {
        for v in [a, b, c] {
            self.check_vertex(v)?;
        }
        if a == b || b == c || a == c {
            return Err(Error::NonDistinct(a, b, c));
        }
        if a > b || a > c {
            return Err(Error::NotCanonical(a));
        }
        Ok(self.beats(a, b) && self.beats(b, c) && self.beats(c, a))
    }

    /// All directed triangles in canonical form (smallest label first),
    /// sorted lexicographically.
    pub fn enumerate_triangles(&self) -> Vec<Triangle> {
        let n = self.n as u32;
        let mut out = Vec::new();
        for a in 1..=n {
            for b in a + 1..=n {
                let ab = self.beats(a, b);
                for c in b + 1..=n {
                    let bc = self.beats(b, c);
                    let ca = self.beats(c, a);
                    // a cyclic triple is either a→b→c→a or a→c→b→a
                    if ab && bc && ca {
                        out.push([a, b, c]);
                    } else if !ab && !bc && !ca {
                        out.push([a, c, b]);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// `C(n,3) - Σ C(s_i, 2)`.
    pub fn count_triangles_moon(&self) -> u64 {
        let n = self.n as u64;
        let sv = self.score_vector();
        binomial(n, 3) - sv.scores.iter().map(|&s| binomial(u64::from(s), 2)).sum::<u64>()
    }

    /// Relabels every vertex `v ↦ ((v - 1 + shift) mod n) + 1`.
    pub fn rotate(&self, shift: u32) -> Self {
        let n = self.n as u32;
        let preimage = |v: u32| (v - 1 + n - shift % n) % n + 1;
        Self::from_fn(self.n, |i, j| self.beats(preimage(i), preimage(j))).expect("n >= 1")
    }

    /// The sub-tournament induced on `vertices`, relabelled `1..=k` in the
    /// given order.
    pub fn induced(&self, vertices: &[u32]) -> Result<Self> {
        for &v in vertices {
            self.check_vertex(v)?;
        }
        Self::from_fn(vertices.len(), |i, j| self.beats(vertices[i as usize - 1], vertices[j as usize - 1]))
    }

    /// Two-line text form: `n`, then one `1`/`0` per pair in pair order.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.num_edges() + 16);
        s.push_str(&self.n.to_string());
        s.push('\n');
        for idx in 0..self.num_edges() {
            s.push(if self.forward[idx] { '1' } else { '0' });
        }
        s.push('\n');
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("missing size line".into()))?
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("bad size: {e}")))?;
        let bits = lines.next().unwrap_or("").trim();
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::Parse("trailing content after orientation line".into()));
        }
        let mut t = Self::blank(n)?;
        if bits.len() != t.num_edges() {
            return Err(Error::Parse(format!("expected {} orientation bits, found {}", t.num_edges(), bits.len())));
        }
        for (idx, ch) in bits.chars().enumerate() {
            match ch {
                '1' => t.forward.insert(idx),
                '0' => {}
                other => return Err(Error::Parse(format!("unexpected character {other:?} at bit {idx}"))),
            }
        }
        Ok(t)
    }
}

impl fmt::Debug for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tournament({})", self.to_text().replace('\n', " ").trim_end())
    }
}

impl fmt::Display for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Tournament {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_text(s)
    }
}
