//! Arithmetic-progression detection in finite integer sets.
//!
//! Two deliberately independent routes compute the same quantity.
//! `extract_ap_from_shift_overlap` follows the constructive argument: when
//! `|B ∩ (B+h)| > (1−α)·|B|`, the run lengths `r(b)` (longest
//! `b, b+h, …, b+(r−1)h` inside `B`) must somewhere reach `⌊1/α⌋ + 1`, and it
//! returns a maximal run found by walking `r(b)` for every `b`.
//! `longest_ap_with_difference` answers the same question by decomposing `B`
//! into runs from their start elements. The two are checked against each
//! other in tests; neither calls the other.
//!
//! All set arguments are sorted slices of distinct values.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;
use crate::sieve::{BitSieve, SieveError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProgressionError {
    #[error("set must be non-empty")]
    EmptySet,
    #[error("difference must be >= 1")]
    ZeroDifference,
    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    AlphaOutOfRange(Rational),
    #[error(
        "shift overlap too small: |B ∩ (B+{h})| = {overlap} of |B| = {size} \
         does not exceed (1-{alpha})·|B|"
    )]
    OverlapTooSmall {
        h: u64,
        overlap: u64,
        size: u64,
        alpha: Rational,
    },
    #[error(transparent)]
    Sieve(#[from] SieveError),
}

/// A progression `start, start+difference, …` of `length` terms, each lying
/// in whatever host set produced the witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct APWitness {
    pub start: u64,
    pub difference: u64,
    pub length: u64,
}

impl APWitness {
    pub fn elements(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.length).map(move |j| self.start + j * self.difference)
    }

    /// True when every term is present in the sorted slice.
    pub fn contained_in(&self, sorted: &[u64]) -> bool {
        self.elements().all(|v| sorted.binary_search(&v).is_ok())
    }
}

impl std::fmt::Display for APWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} terms from {} with difference {}",
            self.length, self.start, self.difference
        )
    }
}

/// `start + idx·h ∈ members`, with overflow reading as absent.
fn probe(members: &HashSet<u64>, start: u64, h: u64, idx: u64) -> bool {
    idx.checked_mul(h)
        .and_then(|off| start.checked_add(off))
        .is_some_and(|v| members.contains(&v))
}

/// `|B ∩ (B+h)|`: how many `b ∈ B` have `b+h ∈ B`. Two-pointer over the
/// sorted slice.
pub fn shift_overlap(b: &[u64], h: u64) -> u64 {
    let mut count = 0;
    let mut j = 0;
    for &x in b {
        let target = match x.checked_add(h) {
            Some(t) => t,
            None => break,
        };
        while j < b.len() && b[j] < target {
            j += 1;
        }
        if j < b.len() && b[j] == target {
            count += 1;
        }
    }
    count
}

/// Dense-overlap extraction: given `|B ∩ (B+h)| > (1−α)·|B|` (verified
/// exactly: `overlap·q > (q−p)·|B|` for `α = p/q`), walks the run length
/// `r(b)` for every element and returns a maximal run, which is guaranteed
/// to have length at least `⌊1/α⌋ + 1`. Ties: smallest start.
pub fn extract_ap_from_shift_overlap(
    b: &[u64],
    h: u64,
    alpha: Rational,
) -> Result<APWitness, ProgressionError> {
    if b.is_empty() {
        return Err(ProgressionError::EmptySet);
    }
    if h == 0 {
        return Err(ProgressionError::ZeroDifference);
    }
    if alpha <= Rational::from_integer(0) || alpha >= Rational::one() {
        return Err(ProgressionError::AlphaOutOfRange(alpha));
    }
    debug_assert!(b.windows(2).all(|w| w[0] < w[1]), "input must be sorted distinct");

    let overlap = shift_overlap(b, h);
    let (p, q) = (alpha.numer(), alpha.denom());
    let n = b.len() as u128;
    // overlap·q > (q−p)·n, all in u128 — exact, no rounding anywhere.
    if (overlap as u128) * q <= (q - p) * n {
        return Err(ProgressionError::OverlapTooSmall {
            h,
            overlap,
            size: b.len() as u64,
            alpha,
        });
    }

    let members: HashSet<u64> = b.iter().copied().collect();
    let mut best_start = b[0];
    let mut best_len = 0u64;
    for &start in b {
        // r(start): least r with start + r·h missing.
        let mut r = 1u64;
        while probe(&members, start, h, r) {
            r += 1;
        }
        if r > best_len {
            best_len = r;
            best_start = start;
        }
    }

    let guaranteed = (q / p) as u64 + 1;
    debug_assert!(
        best_len >= guaranteed,
        "dense overlap must force a run of length {guaranteed}, found {best_len}"
    );
    Ok(APWitness {
        start: best_start,
        difference: h,
        length: best_len,
    })
}

/// Longest progression with difference exactly `h` inside `B`, by run
/// decomposition: every element whose predecessor `b−h` is absent starts a
/// run, and runs tile `B ∩ (B+h)`-chains disjointly. Ties: smallest start.
pub fn longest_ap_with_difference(b: &[u64], h: u64) -> Result<APWitness, ProgressionError> {
    if b.is_empty() {
        return Err(ProgressionError::EmptySet);
    }
    if h == 0 {
        return Err(ProgressionError::ZeroDifference);
    }
    debug_assert!(b.windows(2).all(|w| w[0] < w[1]), "input must be sorted distinct");

    let members: HashSet<u64> = b.iter().copied().collect();
    let mut best = APWitness {
        start: b[0],
        difference: h,
        length: 1,
    };
    for &start in b {
        let is_run_start = start < h || !members.contains(&(start - h));
        if !is_run_start {
            continue;
        }
        let mut len = 1u64;
        while probe(&members, start, h, len) {
            len += 1;
        }
        if len > best.length {
            best = APWitness {
                start,
                difference: h,
                length: len,
            };
        }
    }
    Ok(best)
}

/// Longest progression over all differences, scanning every pair as a
/// `(start, start+difference)` seed. O(|B|²·L). Ties: smallest start, then
/// smallest difference. A singleton reports length 1 with difference 1.
pub fn longest_ap(b: &[u64]) -> Result<APWitness, ProgressionError> {
    if b.is_empty() {
        return Err(ProgressionError::EmptySet);
    }
    debug_assert!(b.windows(2).all(|w| w[0] < w[1]), "input must be sorted distinct");

    let members: HashSet<u64> = b.iter().copied().collect();
    let mut best = APWitness {
        start: b[0],
        difference: 1,
        length: 1,
    };
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            let d = b[j] - b[i];
            // A seed with a live predecessor is a suffix of a run already
            // seeded at its true start (earlier i, same d): skip it.
            if b[i] >= d && members.contains(&(b[i] - d)) {
                continue;
            }
            let mut len = 2u64;
            while probe(&members, b[i], d, len) {
                len += 1;
            }
            if len > best.length {
                best = APWitness {
                    start: b[i],
                    difference: d,
                    length: len,
                };
            }
        }
    }
    Ok(best)
}

/// First progression of exactly `length` terms in scan order (smallest
/// start, then smallest difference), or `None`. `sorted` holds distinct
/// ascending values; `length >= 2`.
pub fn find_ap_of_length(sorted: &[u64], length: u64) -> Option<APWitness> {
    assert!(length >= 2);
    let members: HashSet<u64> = sorted.iter().copied().collect();
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            let d = sorted[j] - sorted[i];
            if (2..length).all(|t| probe(&members, sorted[i], d, t)) {
                return Some(APWitness {
                    start: sorted[i],
                    difference: d,
                    length,
                });
            }
        }
    }
    None
}

/// Exhaustive scan for four squares in arithmetic progression up to `n`:
/// every square pair `(x², y²)` seeds difference `y² − x²`, and only the two
/// continuations need membership checks, so the scan is quadratic in the
/// number of squares (about linear in `n`). Classical number theory says the
/// result is always `None`; a witness would be a major finding.
pub fn scan_squares_4ap(n: u64) -> Result<Option<APWitness>, ProgressionError> {
    let sieve = squares_sieve(n)?;
    let squares: Vec<u64> = (1..=n.isqrt()).map(|r| r * r).collect();
    for i in 0..squares.len() {
        for j in i + 1..squares.len() {
            let d = squares[j] - squares[i];
            let Some(t3) = squares[j].checked_add(d) else {
                continue;
            };
            if t3 > n || !sieve.contains(t3) {
                continue;
            }
            let t4 = t3 + d;
            if t4 <= n && sieve.contains(t4) {
                return Ok(Some(APWitness {
                    start: squares[i],
                    difference: d,
                    length: 4,
                }));
            }
        }
    }
    Ok(None)
}

fn squares_sieve(n: u64) -> Result<BitSieve, SieveError> {
    let mut sieve = BitSieve::empty(n)?;
    for r in 0..=n.isqrt() {
        sieve.set(r * r);
    }
    Ok(sieve)
}
