//! Membership oracles for the integer sets cubes are searched in: perfect
//! squares, images of quadratic polynomials, explicit lists, and greedily
//! built progression-free sets.
//!
//! An oracle carries a working window `[1, limit]`. `contains` answers pure
//! mathematical membership where the set has a closed form (squares,
//! quadratic images); for the constructed kinds it answers relative to the
//! materialized window. `enumerate(n)` always means the sorted elements of
//! `S ∩ [1, n]`, while sieves cover `[0, n]` so that 0 keeps its membership
//! bit (0 is a square).

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::progression::{self, APWitness};
use crate::sieve::{BitSieve, SieveError};
use crate::transform::{QuadraticForm, TransformError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle window limit must be >= 1")]
    ZeroLimit,
    #[error("progression length k must be >= 3, got {0}")]
    InvalidK(u32),
    #[error("greedy construction yielded a progression ({0}); invariant broken")]
    ConstructionNotApFree(APWitness),
    #[error(transparent)]
    Form(#[from] TransformError),
    #[error(transparent)]
    Sieve(#[from] SieveError),
}

/// True iff `x` is a perfect square. Integer square root with an exactness
/// check; floating point never touches the decision.
pub fn is_square(x: u64) -> bool {
    let t = x.isqrt();
    debug_assert!(t * t <= x && (t + 1).checked_mul(t + 1).is_none_or(|s| s > x));
    t * t == x
}

/// Least `x >= min_x` with `f(x) = y`, if any: `y` is in the image of `f`
/// exactly when `4ay + b² − 4ac` is a perfect square `t²` with `t ≡ ±b`
/// compatible, i.e. `x = (±t − b) / 2a` a non-negative integer.
pub fn quadratic_membership(form: &QuadraticForm, y: u64, min_x: u64) -> Option<u64> {
    let disc = form.complete_square(y);
    if disc < 0 {
        return None;
    }
    let t = (disc as u128).isqrt();
    if t * t != disc as u128 {
        return None;
    }
    let t = t as i128;
    let den = 2 * form.a() as i128;
    let mut best: Option<u64> = None;
    for root in [t, -t] {
        let num = root - form.b() as i128;
        if num >= 0 && num % den == 0 {
            let x = (num / den) as u64;
            if x >= min_x && best.is_none_or(|b| x < b) {
                best = Some(x);
            }
        }
    }
    best
}

fn is_false(v: &bool) -> bool {
    !v
}

/// What set the oracle describes; `SetOracle` adds the working window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleKind {
    Squares,
    Quadratic {
        #[serde(flatten)]
        form: QuadraticForm,
        /// Admit `x = 0` as a polynomial argument (default is `x >= 1`).
        #[serde(default, skip_serializing_if = "is_false")]
        from_zero: bool,
    },
    Explicit {
        elements: Vec<u64>,
    },
    #[serde(rename = "greedy_apfree")]
    GreedyApFree {
        k: u32,
    },
}

#[derive(Debug, Clone)]
pub struct SetOracle {
    kind: OracleKind,
    limit: u64,
    greedy_cache: OnceLock<Vec<u64>>,
}

impl PartialEq for SetOracle {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.limit == other.limit
    }
}

impl SetOracle {
    pub fn new(kind: OracleKind, limit: u64) -> Result<Self, OracleError> {
        if limit == 0 {
            return Err(OracleError::ZeroLimit);
        }
        let kind = match kind {
            OracleKind::Explicit { mut elements } => {
                elements.sort_unstable();
                elements.dedup();
                OracleKind::Explicit { elements }
            }
            OracleKind::GreedyApFree { k } if k < 3 => return Err(OracleError::InvalidK(k)),
            other => other,
        };
        Ok(SetOracle {
            kind,
            limit,
            greedy_cache: OnceLock::new(),
        })
    }

    pub fn squares(limit: u64) -> Result<Self, OracleError> {
        Self::new(OracleKind::Squares, limit)
    }

    pub fn quadratic(form: QuadraticForm, limit: u64) -> Result<Self, OracleError> {
        Self::new(
            OracleKind::Quadratic {
                form,
                from_zero: false,
            },
            limit,
        )
    }

    pub fn explicit(elements: Vec<u64>, limit: u64) -> Result<Self, OracleError> {
        Self::new(OracleKind::Explicit { elements }, limit)
    }

    pub fn kind(&self) -> &OracleKind {
        &self.kind
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    fn min_x(form_from_zero: bool) -> u64 {
        if form_from_zero {
            0
        } else {
            1
        }
    }

    fn greedy_elements(&self, k: u32) -> &[u64] {
        self.greedy_cache
            .get_or_init(|| greedy_apfree_set(k, self.limit))
    }

    /// Pure membership for the closed-form kinds; membership within the
    /// materialized window for the constructed kinds.
    pub fn contains(&self, x: u64) -> bool {
        match &self.kind {
            OracleKind::Squares => is_square(x),
            OracleKind::Quadratic { form, from_zero } => {
                quadratic_membership(form, x, Self::min_x(*from_zero)).is_some()
            }
            OracleKind::Explicit { elements } => elements.binary_search(&x).is_ok(),
            OracleKind::GreedyApFree { k } => {
                x <= self.limit && self.greedy_elements(*k).binary_search(&x).is_ok()
            }
        }
    }

    /// Sorted elements of `S ∩ [1, n]`.
    pub fn enumerate(&self, n: u64) -> Result<Vec<u64>, OracleError> {
        Ok(match &self.kind {
            OracleKind::Squares => (1..=n.isqrt()).map(|r| r * r).collect(),
            OracleKind::Quadratic { form, from_zero } => {
                let mut vals = quadratic_values(form, Self::min_x(*from_zero), n);
                vals.retain(|&v| v >= 1);
                vals
            }
            OracleKind::Explicit { elements } => elements
                .iter()
                .copied()
                .filter(|&v| (1..=n).contains(&v))
                .collect(),
            OracleKind::GreedyApFree { k } => {
                if n <= self.limit {
                    let elems = self.greedy_elements(*k);
                    let cut = elems.partition_point(|&v| v <= n);
                    elems[..cut].to_vec()
                } else {
                    // The construction is prefix-stable, so extending the
                    // window is consistent with the cached run.
                    greedy_apfree_set(*k, n)
                }
            }
        })
    }

    /// Membership bits over `[0, n]`.
    pub fn build_sieve(&self, n: u64) -> Result<BitSieve, OracleError> {
        let mut sieve = BitSieve::empty(n)?;
        match &self.kind {
            OracleKind::Squares => {
                for r in 0..=n.isqrt() {
                    sieve.set(r * r);
                }
            }
            OracleKind::Quadratic { form, from_zero } => {
                for v in quadratic_values(form, Self::min_x(*from_zero), n) {
                    sieve.set(v);
                }
            }
            OracleKind::Explicit { elements } => {
                for &v in elements.iter().filter(|&&v| v <= n) {
                    sieve.set(v);
                }
            }
            OracleKind::GreedyApFree { k } => {
                let owned;
                let elems: &[u64] = if n <= self.limit {
                    self.greedy_elements(*k)
                } else {
                    owned = greedy_apfree_set(*k, n);
                    &owned
                };
                for &v in elems.iter().filter(|&&v| v <= n) {
                    sieve.set(v);
                }
            }
        }
        Ok(sieve)
    }
}

/// All values of `f` in `[0, n]` over arguments `x >= min_x`, sorted and
/// deduplicated. Walks past the vertex, where the polynomial increases
/// without bound, and stops at the first too-large value there.
fn quadratic_values(form: &QuadraticForm, min_x: u64, n: u64) -> Vec<u64> {
    let mut vals = Vec::new();
    let mut x = min_x;
    loop {
        let v = form.eval(x);
        let past_vertex = 2 * form.a() as i128 * x as i128 + form.b() as i128 >= 0;
        if v > n as i128 && past_vertex {
            break;
        }
        if (0..=n as i128).contains(&v) {
            vals.push(v as u64);
        }
        x += 1;
    }
    vals.sort_unstable();
    vals.dedup();
    vals
}

/// Greedy progression-free construction: scan `1..=n` ascending and admit
/// `x` unless it would close a `k`-term progression, i.e. unless some
/// difference `h` has `x−h, x−2h, …, x−(k−1)h` all admitted already. Since
/// admitted elements are all smaller than `x`, checking `x` as the largest
/// term is exhaustive.
pub fn greedy_apfree_set(k: u32, n: u64) -> Vec<u64> {
    assert!(k >= 3);
    let steps = (k - 1) as u64;
    let mut admitted = vec![false; n as usize + 1];
    let mut out = Vec::new();
    'next: for x in 1..=n {
        let max_h = x.saturating_sub(1) / steps;
        'diffs: for h in 1..=max_h {
            for j in 1..=steps {
                if !admitted[(x - j * h) as usize] {
                    continue 'diffs;
                }
            }
            continue 'next;
        }
        admitted[x as usize] = true;
        out.push(x);
    }
    out
}

/// Greedy construction wrapped as an explicit oracle, certified
/// progression-free by the independent brute-force scan.
pub fn greedy_apfree(k: u32, n: u64) -> Result<SetOracle, OracleError> {
    if k < 3 {
        return Err(OracleError::InvalidK(k));
    }
    let elements = greedy_apfree_set(k, n);
    let longest = progression::longest_ap(&elements).expect("construction admits 1");
    if longest.length >= k as u64 {
        return Err(OracleError::ConstructionNotApFree(longest));
    }
    SetOracle::explicit(elements, n)
}
