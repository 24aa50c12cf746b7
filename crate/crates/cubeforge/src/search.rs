//! Exhaustive search for maximal cubes inside an oracle window.
//!
//! The search walks generator multisets in ascending order, so each cube is
//! visited exactly once. The decisive structure is the candidate set
//! `cand(H) = {x >= 1 : H + x ⊆ S ∩ [1, N]}`, maintained incrementally: for
//! the root `{a₀}` it is read straight off the sorted element list, and
//! adjoining a generator `g` refines it to `{x ∈ cand : x + g ∈ cand}` — a
//! two-pointer pass over a sorted vector, never a re-expansion. The span
//! bound `a₀ + Σ aᵢ <= N` is implicit: candidates only ever contain values
//! whose sums stay inside the window.
//!
//! A cube is reported when no admissible extension of any value exists (the
//! full candidate set is consulted, not just values above the last
//! generator) and its dimension clears `min_dim`. Branches parallelize over
//! the base; merge order is canonical (dimension descending, base ascending,
//! generators lexicographic), so reports are identical for every thread
//! count. No shared mutable state exists during the walk — a best-dimension
//! watermark could prune subtrees, but it would make node counts depend on
//! scheduling, and exact per-branch work is part of the report contract.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cube::HilbertCube;
use crate::oracle::{OracleError, OracleKind, SetOracle};
use crate::progression;
use crate::sieve::{BitSieve, SieveError};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("min_dim must be >= 1")]
    ZeroMinDim,
    #[error("memory budget exceeded before exploration: {source}")]
    Resource {
        source: SieveError,
        /// What was known when the search stopped: nothing was explored.
        partial: Box<SearchReport>,
    },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("thread pool construction failed: {0}")]
    Threads(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Distinct,
    Multiset,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub oracle: SetOracle,
    pub n: u64,
    pub mode: SearchMode,
    pub min_dim: usize,
    /// 0 means unlimited.
    pub max_results: usize,
    /// 0 lets the thread pool pick.
    pub threads: usize,
    /// Also explore cubes based at 0 (when 0 is in the set). Off by
    /// default: the window is [1, N].
    pub include_zero_base: bool,
    /// Reject candidates whose new layer would contain a 4-term
    /// progression. Sound for squares and quadratic images, where such a
    /// layer cannot be realized anyway; results must not change.
    pub prune_layer_4ap: bool,
    /// Multiset-mode multiplicity cap; `None` uses the oracle default
    /// (3 for squares and quadratic images, k−1 for greedy sets, unbounded
    /// for explicit sets).
    pub max_multiplicity: Option<u32>,
    /// One diagnostics line per completed base branch.
    pub progress: bool,
}

impl SearchConfig {
    pub fn new(oracle: SetOracle, n: u64, mode: SearchMode, min_dim: usize) -> Self {
        SearchConfig {
            oracle,
            n,
            mode,
            min_dim,
            max_results: 0,
            threads: 0,
            include_zero_base: false,
            prune_layer_4ap: false,
            max_multiplicity: None,
            progress: false,
        }
    }

    fn multiplicity_cap(&self) -> Option<u32> {
        match self.mode {
            SearchMode::Distinct => Some(1),
            SearchMode::Multiset => self.max_multiplicity.or(match self.oracle.kind() {
                OracleKind::Squares | OracleKind::Quadratic { .. } => Some(3),
                OracleKind::GreedyApFree { k } => Some(k - 1),
                OracleKind::Explicit { .. } => None,
            }),
        }
    }
}

/// Reference dimension bounds evaluated at the window size; `None` below
/// `N = 16`, where `ln ln N` is not positive.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundComparison {
    pub dim_distinct: Option<f64>,
    pub dim_multiset: Option<f64>,
}

fn dim_bounds(n: u64, mode: SearchMode) -> BoundComparison {
    let lnln = (n >= 16).then(|| (n as f64).ln().ln());
    BoundComparison {
        dim_distinct: lnln.map(|v| 7.0 * v),
        dim_multiset: match mode {
            SearchMode::Multiset => lnln.map(|v| 21.0 * v),
            SearchMode::Distinct => None,
        },
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchReport {
    /// Exact maximum dimension over the whole space, reported cubes or not.
    pub best_dimension: usize,
    /// Maximal cubes of dimension >= min_dim, canonically ordered.
    pub cubes: Vec<HilbertCube>,
    pub nodes_explored: u64,
    /// True when max_results clipped the cube list.
    pub truncated: bool,
    pub bound_comparison: BoundComparison,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub ok: bool,
    /// Smallest element failing the window or the membership test.
    pub first_failure: Option<u64>,
}

/// Check `expand(cube) ⊆ S ∩ [1, n]` element by element, reporting the
/// smallest offender. An expansion that overflows u64 fails with no named
/// element.
pub fn verify_cube(cube: &HilbertCube, oracle: &SetOracle, n: u64) -> Verification {
    verify_cube_in_window(cube, oracle, n, false)
}

/// Like `verify_cube`, optionally admitting 0 itself (for cubes based at 0,
/// which live just outside the [1, n] window).
pub fn verify_cube_in_window(
    cube: &HilbertCube,
    oracle: &SetOracle,
    n: u64,
    allow_zero: bool,
) -> Verification {
    let expansion = match cube.expand() {
        Ok(e) => e,
        Err(_) => {
            return Verification {
                ok: false,
                first_failure: None,
            }
        }
    };
    for &v in expansion.distinct_elements() {
        let in_window = (1..=n).contains(&v) || (allow_zero && v == 0);
        if !in_window || !oracle.contains(v) {
            return Verification {
                ok: false,
                first_failure: Some(v),
            };
        }
    }
    Verification {
        ok: true,
        first_failure: None,
    }
}

struct Branch {
    cubes: Vec<HilbertCube>,
    best: usize,
    nodes: u64,
}

struct Walker<'a> {
    cap: Option<u32>,
    distinct: bool,
    min_dim: usize,
    prune_4ap: bool,
    base: u64,
    gens: Vec<u64>,
    /// cand_stack[d] holds the candidate set at depth d; buffers are reused
    /// across siblings.
    cand_stack: Vec<Vec<u64>>,
    /// layer_stack[d] is the expansion after d generators (kept only when
    /// pruning needs it).
    layer_stack: Vec<Vec<u64>>,
    out: &'a mut Branch,
}

impl Walker<'_> {
    fn run(&mut self, depth: usize) {
        self.out.nodes += 1;
        self.out.best = self.out.best.max(depth);

        let cand = std::mem::take(&mut self.cand_stack[depth]);
        let last = self.gens.last().copied().unwrap_or(0);
        let mut extendable = false;

        for &a in &cand {
            if !self.admissible(a) {
                continue;
            }
            if self.prune_4ap && self.layer_would_carry_4ap(depth, a) {
                // Treated as inadmissible. Over 4-progression-free hosts
                // this never fires, which tests pin down.
                continue;
            }
            extendable = true;
            if a < last {
                // A valid extension (so the cube is not maximal), but its
                // multiset is enumerated on the branch where it is sorted.
                continue;
            }
            self.descend(depth, &cand, a);
        }

        if !extendable && depth >= self.min_dim {
            self.out.cubes.push(
                HilbertCube::new(self.base, self.gens.clone())
                    .expect("generators are nonzero by construction"),
            );
        }
        self.cand_stack[depth] = cand;
    }

    /// Mode filter: may `a` extend the current multiset?
    fn admissible(&self, a: u64) -> bool {
        if self.distinct {
            return !self.gens.contains(&a);
        }
        match self.cap {
            Some(cap) => (self.gens.iter().filter(|&&g| g == a).count() as u32) < cap,
            None => true,
        }
    }

    fn descend(&mut self, depth: usize, cand: &[u64], a: u64) {
        if self.cand_stack.len() <= depth + 1 {
            self.cand_stack.push(Vec::new());
        }
        // Child candidates: x with both x and x + a still extendable.
        let mut child = std::mem::take(&mut self.cand_stack[depth + 1]);
        child.clear();
        let mut j = 0;
        for &x in cand {
            let target = x + a;
            while j < cand.len() && cand[j] < target {
                j += 1;
            }
            if j < cand.len() && cand[j] == target {
                child.push(x);
            }
        }
        self.cand_stack[depth + 1] = child;

        if self.prune_4ap {
            if self.layer_stack.len() <= depth + 1 {
                self.layer_stack.push(Vec::new());
            }
            let merged = merge_shift(&self.layer_stack[depth], a);
            self.layer_stack[depth + 1] = merged;
        }

        self.gens.push(a);
        self.run(depth + 1);
        self.gens.pop();
    }

    fn layer_would_carry_4ap(&self, depth: usize, a: u64) -> bool {
        let merged = merge_shift(&self.layer_stack[depth], a);
        progression::find_ap_of_length(&merged, 4).is_some()
    }
}

fn merge_shift(layer: &[u64], a: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(layer.len() * 2);
    let (mut i, mut j) = (0, 0);
    while i < layer.len() && j < layer.len() {
        let x = layer[i];
        let y = layer[j] + a;
        if x < y {
            out.push(x);
            i += 1;
        } else if y < x {
            out.push(y);
            j += 1;
        } else {
            out.push(x);
            i += 1;
            j += 1;
        }
    }
    out.extend_from_slice(&layer[i..]);
    out.extend(layer[j..].iter().map(|&v| v + a));
    out
}

fn explore_base(config: &SearchConfig, elems: &[u64], base: u64) -> Branch {
    let mut branch = Branch {
        cubes: Vec::new(),
        best: 0,
        nodes: 0,
    };
    let first = elems.partition_point(|&s| s <= base);
    let root_cand: Vec<u64> = elems[first..].iter().map(|&s| s - base).collect();
    let mut walker = Walker {
        cap: config.multiplicity_cap(),
        distinct: matches!(config.mode, SearchMode::Distinct),
        min_dim: config.min_dim,
        prune_4ap: config.prune_layer_4ap,
        base,
        gens: Vec::new(),
        cand_stack: vec![root_cand],
        layer_stack: vec![vec![base]],
        out: &mut branch,
    };
    walker.run(0);
    branch
}

/// Exhaustive maximal-cube search. The report's `best_dimension` is the
/// exact maximum over all admissible cubes in the window; `cubes` lists the
/// maximal ones at `min_dim` or deeper.
pub fn search_max_cubes(config: &SearchConfig) -> Result<SearchReport, SearchError> {
    if config.min_dim == 0 {
        return Err(SearchError::ZeroMinDim);
    }
    let empty_report = |bc| SearchReport {
        best_dimension: 0,
        cubes: Vec::new(),
        nodes_explored: 0,
        truncated: false,
        bound_comparison: bc,
    };
    // Gate on the same resource class the sieve budget env var caps; the
    // element list and greedy scratch are within a word-size factor of it.
    if let Err(source) = BitSieve::budget_for(config.n) {
        return Err(SearchError::Resource {
            source,
            partial: Box::new(empty_report(dim_bounds(config.n, config.mode))),
        });
    }

    let elems = config.oracle.enumerate(config.n)?;
    let mut bases: Vec<u64> = Vec::new();
    if config.include_zero_base && config.oracle.contains(0) {
        bases.push(0);
    }
    bases.extend(&elems);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| SearchError::Threads(e.to_string()))?;
    let branches: Vec<Branch> = pool.install(|| {
        bases
            .par_iter()
            .map(|&base| {
                let branch = explore_base(config, &elems, base);
                if config.progress {
                    eprintln!(
                        "base {base}: depth {}, {} nodes, {} maximal",
                        branch.best,
                        branch.nodes,
                        branch.cubes.len()
                    );
                }
                branch
            })
            .collect()
    });

    let mut report = empty_report(dim_bounds(config.n, config.mode));
    for branch in branches {
        report.best_dimension = report.best_dimension.max(branch.best);
        report.nodes_explored += branch.nodes;
        report.cubes.extend(branch.cubes);
    }
    report.cubes.sort_by(|a, b| {
        b.dimension()
            .cmp(&a.dimension())
            .then_with(|| a.base().cmp(&b.base()))
            .then_with(|| a.generators().cmp(b.generators()))
    });
    if config.max_results > 0 && report.cubes.len() > config.max_results {
        report.cubes.truncate(config.max_results);
        report.truncated = true;
    }

    debug_assert!(report.cubes.iter().all(|c| {
        verify_cube_in_window(c, &config.oracle, config.n, c.base() == 0).ok
    }));
    Ok(report)
}
