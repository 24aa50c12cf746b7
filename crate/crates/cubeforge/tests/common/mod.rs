//! Shared generators for the acceptance suite: seeded randomness, random
//! cubes living inside a given set, admissible growth factors, and a
//! brute-force search oracle that shares nothing with the library's
//! candidate-set machinery except the multiplicity rule.

use std::collections::HashSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use cubeforge::cube::HilbertCube;
use cubeforge::rational::Rational;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random cube contained in the set `elems` (sorted, all >= 1), grown by
/// repeatedly picking a uniform admissible generator, up to `max_d`. The
/// candidate set is refined exactly as its definition reads: `x` stays a
/// candidate iff `x + a` was one too.
pub fn random_cube_in(rng: &mut ChaCha8Rng, elems: &[u64], max_d: usize) -> HilbertCube {
    let base = elems[rng.gen_range(0..elems.len())];
    let first = elems.partition_point(|&s| s <= base);
    let mut cand: Vec<u64> = elems[first..].iter().map(|&s| s - base).collect();
    let mut gens = Vec::new();
    let target = rng.gen_range(0..=max_d);
    while gens.len() < target && !cand.is_empty() {
        let a = cand[rng.gen_range(0..cand.len())];
        gens.push(a);
        let mut next = Vec::with_capacity(cand.len());
        let mut j = 0;
        for &x in &cand {
            let want = x + a;
            while j < cand.len() && cand[j] < want {
                j += 1;
            }
            if j < cand.len() && cand[j] == want {
                next.push(x);
            }
            if j == cand.len() {
                break;
            }
        }
        cand = next;
    }
    HilbertCube::new(base, gens).expect("generators are positive")
}

/// A uniform-ish exact rational in (1, k/(k−1)]: c = 1 + r/q with
/// q ∈ [50, 400] and r ≤ q/(k−1).
pub fn random_admissible_c(rng: &mut ChaCha8Rng, k: u32) -> Rational {
    let q = rng.gen_range(50u128..=400);
    let r_max = q / (k as u128 - 1);
    let r = rng.gen_range(1..=r_max);
    Rational::new(q + r, q).expect("q > 0")
}

/// Brute-force maximal-cube search over an explicit element list. Expands
/// every sorted generator multiset by literal subset-sum evaluation and set
/// membership; maximality tries every integer up to the span. Only the
/// multiplicity cap is shared with the real search (`None` = distinct
/// generators).
pub fn brute_force_search(
    elems: &[u64],
    min_dim: usize,
    cap: Option<u32>,
) -> (usize, Vec<HilbertCube>) {
    let set: HashSet<u64> = elems.iter().copied().collect();
    let top = elems.iter().copied().max().unwrap_or(0);
    let fits = |base: u64, gens: &[u64]| -> bool {
        let mut all = vec![base];
        for &g in gens {
            let shifted: Vec<u64> = all.iter().map(|&v| v + g).collect();
            all.extend(shifted);
        }
        all.iter().all(|v| set.contains(v))
    };
    let admissible = |gens: &[u64], g: u64| -> bool {
        let count = gens.iter().filter(|&&x| x == g).count() as u32;
        match cap {
            None => count == 0,
            Some(cap) => count < cap,
        }
    };

    let mut best = 0;
    let mut maximal = Vec::new();
    for &base in elems {
        let mut stack: Vec<Vec<u64>> = vec![vec![]];
        while let Some(gens) = stack.pop() {
            best = best.max(gens.len());
            let low = gens.last().copied().unwrap_or(1);
            let mut extended = false;
            for g in 1..=top.saturating_sub(base) {
                if !admissible(&gens, g) {
                    continue;
                }
                let mut next = gens.clone();
                next.push(g);
                if !fits(base, &next) {
                    continue;
                }
                extended = true;
                if g >= low {
                    next.sort_unstable();
                    stack.push(next);
                }
            }
            if !extended && gens.len() >= min_dim {
                maximal.push(HilbertCube::new(base, gens).unwrap());
            }
        }
    }
    maximal.sort_by(|a, b| {
        b.dimension()
            .cmp(&a.dimension())
            .then_with(|| a.base().cmp(&b.base()))
            .then_with(|| a.generators().cmp(b.generators()))
    });
    (best, maximal)
}
