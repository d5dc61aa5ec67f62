//! Closed-form winner criteria and bias-threshold bounds.
//!
//! Criterion arithmetic is exact (big integers); only the square-root bounds
//! use floating point. The upper bound drops its `o(1)` term and is an
//! asymptotic statement, not a threshold for small `n`.

use num_bigint::BigUint;

use crate::tournament::{binomial, w_closed_form};

/// Breaker (second player) wins the `(1:1)` game when the number of
/// `s`-element winning sets is below `2^(s-1)`.
pub fn erdos_selfridge_breaker(num_sets: u64, s: u32) -> bool {
    assert!(s >= 1, "set size must be positive");
    BigUint::from(num_sets) < (BigUint::from(1u32) << (s - 1))
}

/// Maker (first player) wins the `(a:b)` game on an `s`-uniform family when
/// `|F| · ((a+b)/a)^(-s) > a²b²/(a+b)³ · Δ₂ · |X|`. Evaluated after clearing
/// denominators.
pub fn beck_maker_biased(a: u64, b: u64, num_sets: u64, set_size: u32, delta2: u64, board_size: u64) -> bool {
    assert!(a > 0 && b > 0 && set_size > 0, "arguments must be positive");
    let big = BigUint::from;
    let ab = big(a + b);
    let lhs = big(num_sets) * big(a).pow(set_size) * ab.pow(3);
    let rhs = big(a).pow(2) * big(b).pow(2) * big(delta2) * big(board_size) * ab.pow(set_size);
    lhs > rhs
}

/// The Maker criterion specialised to the triangle game on `n` vertices
/// with Maker bias 1.
pub fn beck_maker_on_parity(n: usize, b: u64) -> bool {
    beck_maker_biased(1, b, w_closed_form(n), 3, 1, binomial(n as u64, 2))
}

/// Largest bias for which the Maker criterion still applies is below this:
/// `sqrt(w(n) / C(n,2))`.
pub fn bias_lower_bound(n: usize) -> f64 {
    assert!(n >= 3, "n must be at least 3");
    (w_closed_form(n) as f64 / binomial(n as u64, 2) as f64).sqrt()
}

/// Asymptotic Breaker bound `sqrt(8n/3)` (the `o(1)` term dropped).
pub fn bias_upper_bound_glazik(n: usize) -> f64 {
    assert!(n >= 3, "n must be at least 3");
    (8.0 * n as f64 / 3.0).sqrt()
}
