//! Acceptance suite: one test per numbered criterion, each printing a
//! `criterion N: PASS — measurement` line on success (run with
//! `--nocapture` to see them). Failures panic with the offending values;
//! a dimension-bound counterexample in criterion 6 is labeled CRITICAL.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use rand::prelude::*;

use common::{brute_force_search, random_admissible_c, random_cube_in, seeded_rng};
use cubeforge::cube::HilbertCube;
use cubeforge::growth::{certify_growth, verify_power_growth_3apfree};
use cubeforge::oracle::{greedy_apfree, SetOracle};
use cubeforge::progression::{
    extract_ap_from_shift_overlap, longest_ap, longest_ap_with_difference, scan_squares_4ap,
    shift_overlap,
};
use cubeforge::rational::Rational;
use cubeforge::report::to_canonical_json;
use cubeforge::search::{search_max_cubes, verify_cube, SearchConfig, SearchMode};
use cubeforge::sumset::{split_cube, squares_sumset_check, squares_sumset_sweep};
use cubeforge::transform::{transform_cube, QuadraticForm};

fn squares_multiset_2500() -> SearchConfig {
    SearchConfig::new(
        SetOracle::squares(2500).unwrap(),
        2500,
        SearchMode::Multiset,
        3,
    )
}

#[test]
fn criterion_1_square_cube_reproduction() {
    let started = Instant::now();
    let report = search_max_cubes(&squares_multiset_2500()).unwrap();
    let elapsed = started.elapsed();

    let want = HilbertCube::new(1, vec![528, 840, 840]).unwrap();
    assert!(
        report.cubes.contains(&want),
        "expected cube missing from {:?}",
        report.cubes
    );
    let expansion = want.expand().unwrap();
    assert_eq!(
        expansion.distinct_elements(),
        [1, 529, 841, 1369, 1681, 2209]
    );
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    println!(
        "criterion 1: PASS — H(1; 528,840,840) found among {} maximal cubes in {elapsed:?}",
        report.cubes.len()
    );
}

#[test]
fn criterion_2_no_4ap_among_squares_to_1e6() {
    let started = Instant::now();
    let hit = scan_squares_4ap(1_000_000).unwrap();
    let elapsed = started.elapsed();
    assert_eq!(hit, None, "supposed 4-term progression: {hit:?}");
    assert!(elapsed.as_secs() < 30, "took {elapsed:?}");

    // The scanner is not vacuous: squares do carry 3-term progressions.
    let squares: Vec<u64> = (1..=7u64).map(|r| r * r).collect();
    let three = longest_ap(&squares).unwrap();
    assert_eq!((three.start, three.difference, three.length), (1, 24, 3));
    println!(
        "criterion 2: PASS — no 4-term progression below 10⁶ ({elapsed:?}); {{1,25,49}} detected"
    );
}

#[test]
fn criterion_3_growth_dichotomy_over_apfree_fixtures() {
    let mut rng = seeded_rng(0xC3);
    let mut checked = 0u32;
    for (k, limit, samples) in [(3u32, 30_000u64, 5_000u32), (4, 20_000, 5_000)] {
        let oracle = greedy_apfree(k, limit).unwrap();
        let elems = oracle.enumerate(limit).unwrap();
        for _ in 0..samples {
            let cube = random_cube_in(&mut rng, &elems, 10);
            let c = random_admissible_c(&mut rng, k);
            let cert = certify_growth(&cube, k, c).unwrap();
            assert!(
                cert.is_certified(),
                "violation inside a {k}-progression-free set: {cube:?}, c = {c}"
            );
            // The exact size bound, recomputed from scratch.
            let d = cube.dimension() as u32;
            let expected = if d == 0 {
                Rational::one()
            } else {
                Rational::from_integer(2)
                    .checked_mul(&c.checked_pow(d - 1).unwrap())
                    .unwrap()
            };
            let expansion = cube.expand().unwrap();
            let size = Rational::from_integer(expansion.distinct_count() as u128);
            assert!(size >= expected, "{cube:?}: |H| = {size} < {expected}");
            if k == 3 {
                assert_eq!(
                    expansion.distinct_count() as u128,
                    expansion.multiset_size(),
                    "collision inside a 3-progression-free set: {cube:?}"
                );
            }
            checked += 1;
        }
        // The full-power check through the public API on a sample.
        if k == 3 {
            for _ in 0..20 {
                let cube = random_cube_in(&mut rng, &elems, 8);
                assert_eq!(verify_power_growth_3apfree(&cube, &oracle), Ok(true));
            }
        }
    }
    println!("criterion 3: PASS — {checked} random cubes certified, zero violations");
}

#[test]
fn criterion_4_violation_golden() {
    let cube = HilbertCube::new(0, vec![2, 1, 1]).unwrap();
    let cert = certify_growth(&cube, 4, Rational::new(4, 3).unwrap()).unwrap();
    assert_eq!(cert.layer_sizes, [1, 2, 4, 5]);
    let json = to_canonical_json(&cert).unwrap();
    assert_eq!(
        json,
        r#"{"c":"4/3","k":4,"layer_sizes":[1,2,4,5],"verdict":{"violation":{"ap":{"difference":1,"length":4,"start":0},"layer":2}}}"#
    );
    println!("criterion 4: PASS — violation at layer 2 with witness (0,1,4), exact golden");
}

#[test]
fn criterion_5_extraction_property_suite() {
    let mut rng = seeded_rng(0xC5);
    let mut done = 0u32;
    while done < 10_000 {
        let size = rng.gen_range(1usize..=60);
        let b: Vec<u64> = (0..size)
            .map(|_| rng.gen_range(0u64..500))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let h = rng.gen_range(1u64..=20);
        let n = b.len() as u128;
        let o = shift_overlap(&b, h) as u128;
        if o == 0 {
            continue;
        }
        // α = ((n−o) + r/2)/n satisfies the strict overlap precondition
        // o > (1−α)n for every r in [1, 2o−1], and stays below 1.
        let r = rng.gen_range(1..=2 * o - 1);
        let alpha = Rational::new(2 * (n - o) + r, 2 * n).unwrap();
        let witness = extract_ap_from_shift_overlap(&b, h, alpha).unwrap();
        let guarantee = alpha.denom() / alpha.numer() + 1;
        assert!(
            witness.length as u128 >= guarantee,
            "length {} < ⌊1/α⌋+1 = {guarantee} for α = {alpha}, h = {h}, B = {b:?}",
            witness.length
        );
        assert!(witness.contained_in(&b), "{witness:?} escapes {b:?}");
        let longest = longest_ap_with_difference(&b, h).unwrap();
        assert_eq!(
            (witness.start, witness.length),
            (longest.start, longest.length),
            "extraction disagrees with the run-decomposition oracle on {b:?}, h = {h}"
        );
        done += 1;
    }
    println!("criterion 5: PASS — 10000 extractions met the ⌊1/α⌋+1 guarantee exactly");
}

#[test]
fn criterion_6_sumset_chain_and_dimension_bound() {
    let report = search_max_cubes(&squares_multiset_2500()).unwrap();
    assert!(!report.cubes.is_empty());
    for cube in &report.cubes {
        // split_cube verifies C + D = expand(cube) internally (eager
        // recombination check); the sumset report re-adds every pair.
        let split = split_cube(cube).unwrap();
        let check = squares_sumset_check(&split.c, &split.d, 2500);
        assert!(check.contained, "C+D left the squares for {cube:?}");
        assert!(
            check.satisfied,
            "min(|C|,|D|) = {} > 8·ln 2500 = {} for {cube:?}",
            check.min_size, check.bound_ln
        );
        assert_eq!(check.min_size, split.min_size());
    }

    let distinct = SearchConfig::new(
        SetOracle::squares(10_000).unwrap(),
        10_000,
        SearchMode::Distinct,
        1,
    );
    let exhaustive = search_max_cubes(&distinct).unwrap();
    let cap = 7.0 * (10_000f64).ln().ln();
    assert!(
        (exhaustive.best_dimension as f64) <= cap,
        "CRITICAL: dimension {} exceeds 7·ln ln 10⁴ ≈ {cap:.2}; \
         a counterexample to the distinct-generator bound",
        exhaustive.best_dimension
    );
    println!(
        "criterion 6: PASS — {} cubes satisfy the sumset chain; exhaustive max dimension {} ≤ {cap:.2}",
        report.cubes.len(),
        exhaustive.best_dimension
    );
}

#[test]
fn criterion_7_quadratic_transport() {
    let mut rng = seeded_rng(0xC7);
    let n = 100_000u64;
    let mut transported = 0u32;
    for _ in 0..1_000 {
        let form = QuadraticForm::new(
            rng.gen_range(1u64..=50),
            rng.gen_range(-50i64..=50),
            rng.gen_range(-50i64..=50),
        )
        .unwrap();
        let oracle = SetOracle::quadratic(form, n).unwrap();
        let elems = oracle.enumerate(n).unwrap();
        assert!(!elems.is_empty(), "empty window for {form}");
        let cube = random_cube_in(&mut rng, &elems, 4);
        assert!(verify_cube(&cube, &oracle, n).ok, "premise broken: {cube:?}");

        let image = transform_cube(&cube, &form).unwrap();
        let shift = form.shift();
        let bound = u64::try_from(4 * form.a() as i128 * n as i128 + shift).unwrap();
        let squares = SetOracle::squares(bound).unwrap();
        let verdict = verify_cube(&image, &squares, bound);
        assert!(
            verdict.ok,
            "transport failed for {form}, {cube:?} -> {image:?}: offender {:?}",
            verdict.first_failure
        );
        transported += 1;
    }
    println!("criterion 7: PASS — {transported} random forms transported with zero failures");
}

#[test]
fn criterion_8_toy_scale_completeness() {
    let mut windows = 0u32;
    for n in 1..=200u64 {
        let oracle = SetOracle::squares(n).unwrap();
        let elems = oracle.enumerate(n).unwrap();
        for (mode, cap) in [(SearchMode::Distinct, None), (SearchMode::Multiset, Some(3))] {
            let config = SearchConfig::new(oracle.clone(), n, mode, 1);
            let report = search_max_cubes(&config).unwrap();
            let (best, maximal) = brute_force_search(&elems, 1, cap);
            assert_eq!(
                report.best_dimension, best,
                "best dimension mismatch at n = {n}, {mode:?}"
            );
            assert_eq!(report.cubes, maximal, "cube list mismatch at n = {n}, {mode:?}");
        }
        windows += 1;
    }
    println!("criterion 8: PASS — search matches brute force on {windows} windows × 2 modes");
}

#[test]
fn criterion_9_reports_byte_identical_across_threads() {
    let mut configs = vec![squares_multiset_2500()];
    configs.push(SearchConfig::new(
        SetOracle::squares(10_000).unwrap(),
        10_000,
        SearchMode::Distinct,
        1,
    ));
    for (i, config) in configs.iter().enumerate() {
        let mut texts = Vec::new();
        for threads in [1usize, 4, 8] {
            let mut config = config.clone();
            config.threads = threads;
            let report = search_max_cubes(&config).unwrap();
            texts.push(to_canonical_json(&report).unwrap());
        }
        assert_eq!(texts[0], texts[1], "config {i}: 1 vs 4 threads differ");
        assert_eq!(texts[0], texts[2], "config {i}: 1 vs 8 threads differ");
    }
    println!("criterion 9: PASS — reports byte-identical across 1/4/8 threads");
}

#[test]
#[ignore = "nightly: full-width scan at 10⁸"]
fn nightly_no_4ap_among_squares_to_1e8() {
    let hit = scan_squares_4ap(100_000_000).unwrap();
    assert_eq!(hit, None, "supposed 4-term progression: {hit:?}");
}

#[test]
#[ignore = "nightly: wide sumset sweep"]
fn nightly_sumset_sweep_stays_under_bound() {
    let rows = squares_sumset_sweep(50, 100_000).unwrap();
    assert_eq!(rows.len(), (51 * 50) / 2);
    let unsatisfied: Vec<_> = rows.iter().filter(|r| !r.satisfied).collect();
    assert!(unsatisfied.is_empty(), "{unsatisfied:?}");
}
