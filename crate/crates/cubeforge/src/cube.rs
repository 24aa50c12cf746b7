//! Hilbert cubes: a base value plus generators, denoting all subset sums
//! `base + Σ ε_i·g_i` over `ε ∈ {0,1}^d`.
//!
//! Generators are kept in the order given. Layer-by-layer quantities (the
//! partial expansions after adjoining each generator in turn) depend on that
//! order, while identity does not: equality and hashing compare the base and
//! the *sorted* generator multiset, so `H(0; [2,1])` and `H(0; [1,2])` are
//! the same cube with different layer decompositions.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubeError {
    #[error("generators must be >= 1")]
    ZeroGenerator,
    #[error("cube element exceeds u64 (base {base}, generators sum past the span)")]
    Overflow { base: u64 },
    #[error("operation needs at least one generator")]
    EmptyCube,
    #[error("dimension {0} too large to size the multiset (2^d exceeds u128)")]
    DimensionTooLarge(usize),
}

#[derive(Deserialize)]
struct RawCube {
    a0: u64,
    generators: Vec<u64>,
}

/// `H(base; g_1, …, g_d)`. Dimension `d` may be zero (a single point).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawCube")]
pub struct HilbertCube {
    #[serde(rename = "a0")]
    base: u64,
    generators: Vec<u64>,
}

impl TryFrom<RawCube> for HilbertCube {
    type Error = CubeError;

    fn try_from(raw: RawCube) -> Result<Self, CubeError> {
        HilbertCube::new(raw.a0, raw.generators)
    }
}

impl PartialEq for HilbertCube {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.sorted_generators() == other.sorted_generators()
    }
}

impl Eq for HilbertCube {}

impl std::hash::Hash for HilbertCube {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.base.hash(state);
        self.sorted_generators().hash(state);
    }
}

impl HilbertCube {
    pub fn new(base: u64, generators: Vec<u64>) -> Result<Self, CubeError> {
        if generators.contains(&0) {
            return Err(CubeError::ZeroGenerator);
        }
        Ok(HilbertCube { base, generators })
    }

    pub fn point(base: u64) -> Self {
        HilbertCube {
            base,
            generators: Vec::new(),
        }
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn dimension(&self) -> usize {
        self.generators.len()
    }

    fn sorted_generators(&self) -> Vec<u64> {
        let mut g = self.generators.clone();
        g.sort_unstable();
        g
    }

    /// Same cube with generators in ascending order.
    pub fn canonical(&self) -> HilbertCube {
        HilbertCube {
            base: self.base,
            generators: self.sorted_generators(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.generators.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn has_distinct_generators(&self) -> bool {
        let g = self.sorted_generators();
        g.windows(2).all(|w| w[0] < w[1])
    }

    /// Largest number of times any single generator value repeats
    /// (0 for a point cube).
    pub fn max_multiplicity(&self) -> usize {
        let g = self.sorted_generators();
        let mut best = 0;
        let mut run = 0;
        let mut prev = None;
        for v in g {
            run = if prev == Some(v) { run + 1 } else { 1 };
            best = best.max(run);
            prev = Some(v);
        }
        best
    }

    /// Largest element, `base + Σ generators`.
    pub fn span_end(&self) -> Result<u64, CubeError> {
        let mut total = self.base;
        for &g in &self.generators {
            total = total.checked_add(g).ok_or(CubeError::Overflow { base: self.base })?;
        }
        Ok(total)
    }

    /// Full expansion: distinct elements, all layers, multiset size.
    pub fn expand(&self) -> Result<CubeExpansion, CubeError> {
        let d = self.generators.len();
        if d >= 128 {
            return Err(CubeError::DimensionTooLarge(d));
        }
        // Fails early if any element would overflow.
        self.span_end()?;

        let mut layers = Vec::with_capacity(d + 1);
        layers.push(vec![self.base]);
        for &g in &self.generators {
            let prev = layers.last().unwrap();
            layers.push(merge_with_shift(prev, g));
        }
        Ok(CubeExpansion {
            distinct_elements: layers.last().unwrap().clone(),
            multiset_size: 1u128 << d,
            layers,
        })
    }

    /// Consecutive layer-size ratios `|H_{i+1}| / |H_i|` for `i = 1..d-1`,
    /// exact and reduced. Needs `d >= 1`.
    pub fn layer_ratios(&self) -> Result<Vec<Rational>, CubeError> {
        if self.generators.is_empty() {
            return Err(CubeError::EmptyCube);
        }
        let sizes = self.expand()?.layer_sizes();
        Ok((1..self.dimension())
            .map(|i| {
                Rational::new(sizes[i + 1] as u128, sizes[i] as u128)
                    .expect("layer sizes are positive")
            })
            .collect())
    }
}

/// Sorted union of `prev` and `prev + g`. Elements were range-checked by the
/// caller, so plain adds suffice.
fn merge_with_shift(prev: &[u64], g: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(prev.len() * 2);
    let (mut i, mut j) = (0, 0);
    while i < prev.len() && j < prev.len() {
        let a = prev[i];
        let b = prev[j] + g;
        match a.cmp(&b) {
            std::cmp::Ordering::Less => {
                out.push(a);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&prev[i..]);
    out.extend(prev[j..].iter().map(|&v| v + g));
    out
}

/// Result of expanding a cube: every layer in ascending element order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeExpansion {
    distinct_elements: Vec<u64>,
    multiset_size: u128,
    layers: Vec<Vec<u64>>,
}

impl CubeExpansion {
    /// Distinct elements, ascending.
    pub fn distinct_elements(&self) -> &[u64] {
        &self.distinct_elements
    }

    pub fn distinct_count(&self) -> u64 {
        self.distinct_elements.len() as u64
    }

    /// `2^d`, counting subset sums with multiplicity.
    pub fn multiset_size(&self) -> u128 {
        self.multiset_size
    }

    /// `layers()[i]` is the expansion of the first `i` generators.
    pub fn layers(&self) -> &[Vec<u64>] {
        &self.layers
    }

    pub fn layer_sizes(&self) -> Vec<u64> {
        self.layers.iter().map(|l| l.len() as u64).collect()
    }

    pub fn min(&self) -> u64 {
        self.distinct_elements[0]
    }

    pub fn max(&self) -> u64 {
        *self.distinct_elements.last().unwrap()
    }
}
