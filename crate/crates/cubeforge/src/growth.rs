//! Layer-growth certification for cubes in progression-free sets.
//!
//! The dichotomy being made executable: fix `k >= 3` and a rational `c` with
//! `1 < c < k/(k−1)`. Either every consecutive layer of the cube grows by a
//! factor of at least `c` — which compounds to `|H| >= 2·c^{d−1}` — or some
//! layer `H_i` barely moves when shifted by the next generator, and then
//! `|H_i ∩ (H_i + a_{i+1})| > (2−c)·|H_i|` forces, via the shift-overlap
//! extraction with `α = c−1`, a progression of length `⌊1/(c−1)⌋+1 >= k`
//! inside that layer. Every quantity is exact: sizes are integers, `c` is a
//! rational, and no comparison goes through floating point.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cube::{CubeError, HilbertCube};
use crate::oracle::SetOracle;
use crate::progression::{self, APWitness, ProgressionError};
use crate::rational::{Rational, RationalError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrowthError {
    #[error("growth factor must satisfy 1 < c < k/(k-1); got c = {c}, k = {k}")]
    FactorOutOfRange { c: Rational, k: u32 },
    #[error("progression length k must be >= 3, got {0}")]
    InvalidK(u32),
    #[error("cube expansion failed: {0}")]
    Cube(#[from] CubeError),
    #[error("extraction failed on a slow layer: {0}")]
    Extraction(#[from] ProgressionError),
    #[error("certified bound overflowed exact arithmetic: {0}")]
    Bound(#[from] RationalError),
    #[error("cube element {element} is not in the oracle set")]
    NotContained { element: u64 },
    #[error("oracle set is not progression-free: contains {ap}")]
    OracleNotApFree { ap: APWitness },
    #[error(transparent)]
    Oracle(#[from] crate::oracle::OracleError),
}

/// Outcome of certification: either the exact lower bound `2c^{d−1}` on the
/// distinct-element count, or the layer index and progression that block it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified { bound: Rational },
    Violation { layer: usize, ap: APWitness },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthCertificate {
    pub layer_sizes: Vec<u64>,
    pub c: Rational,
    pub k: u32,
    pub verdict: Verdict,
}

impl GrowthCertificate {
    pub fn is_certified(&self) -> bool {
        matches!(self.verdict, Verdict::Certified { .. })
    }
}

/// Exact admissibility check `1 < c <= k/(k−1)` (requires `k >= 2`).
///
/// The right endpoint is included: at `c = k/(k−1)` the extraction
/// guarantee `⌊1/(c−1)⌋ + 1 >= k` holds with equality, exactly.
pub fn factor_is_admissible(c: &Rational, k: u32) -> bool {
    let upper = Rational::new(k as u128, (k - 1) as u128).expect("k >= 2");
    *c > Rational::one() && *c <= upper
}

/// Run the dichotomy on one cube. Ratio indices run over `i = 1..d−1`
/// (`|H_1|/|H_0| = 2` always, so index 0 can never violate); on several slow
/// layers the smallest index is reported. `d <= 1` certifies trivially.
pub fn certify_growth(
    cube: &HilbertCube,
    k: u32,
    c: Rational,
) -> Result<GrowthCertificate, GrowthError> {
    if k < 3 {
        return Err(GrowthError::InvalidK(k));
    }
    if !factor_is_admissible(&c, k) {
        return Err(GrowthError::FactorOutOfRange { c, k });
    }
    let expansion = cube.expand()?;
    let sizes = expansion.layer_sizes();
    let layers = expansion.layers();
    let d = cube.dimension();

    for i in 1..d {
        let grows = Rational::new(sizes[i + 1] as u128, sizes[i] as u128)
            .expect("layer sizes are positive");
        if grows < c {
            // |H_{i+1}| < c|H_i| ⟹ |H_i ∩ (H_i+a)| = 2|H_i| − |H_{i+1}|
            //                      > (2−c)|H_i| = (1−(c−1))|H_i|.
            let h = cube.generators()[i];
            let alpha = c.checked_sub(&Rational::one())?;
            let ap = progression::extract_ap_from_shift_overlap(&layers[i], h, alpha)?;
            debug_assert!(ap.length >= k as u64);
            return Ok(GrowthCertificate {
                layer_sizes: sizes,
                c,
                k,
                verdict: Verdict::Violation { layer: i, ap },
            });
        }
    }

    let bound = if d == 0 {
        Rational::one()
    } else {
        Rational::from_integer(2).checked_mul(&c.checked_pow(d as u32 - 1)?)?
    };
    debug_assert!(Rational::from_integer(*sizes.last().unwrap() as u128) >= bound);
    Ok(GrowthCertificate {
        layer_sizes: sizes,
        c,
        k,
        verdict: Verdict::Certified { bound },
    })
}

/// The strengthening available in 3-progression-free sets: layers can never
/// overlap their shifts at all, so `|H| = 2^d` exactly. Checks that the
/// cube lies in the oracle set and that the set really is 3-progression-free
/// (by the brute-force scan over the oracle window), then compares counts.
pub fn verify_power_growth_3apfree(
    cube: &HilbertCube,
    oracle: &SetOracle,
) -> Result<bool, GrowthError> {
    let expansion = cube.expand()?;
    for &v in expansion.distinct_elements() {
        if !oracle.contains(v) {
            return Err(GrowthError::NotContained { element: v });
        }
    }
    let mut members = oracle.enumerate(oracle.limit())?;
    if oracle.contains(0) {
        members.insert(0, 0);
    }
    let longest = progression::longest_ap(&members)?;
    if longest.length >= 3 {
        return Err(GrowthError::OracleNotApFree { ap: longest });
    }
    Ok(expansion.distinct_count() as u128 == expansion.multiset_size())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: u128, q: u128) -> Rational {
        Rational::new(p, q).unwrap()
    }

    fn cube(base: u64, gens: &[u64]) -> HilbertCube {
        HilbertCube::new(base, gens.to_vec()).unwrap()
    }

    #[test]
    fn violation_on_slow_cube() {
        let cert = certify_growth(&cube(0, &[2, 1, 1]), 4, r(4, 3)).unwrap();
        assert_eq!(cert.layer_sizes, [1, 2, 4, 5]);
        assert_eq!(
            cert.verdict,
            Verdict::Violation {
                layer: 2,
                ap: APWitness {
                    start: 0,
                    difference: 1,
                    length: 4
                }
            }
        );
    }

    #[test]
    fn certified_on_fast_cube() {
        let cert = certify_growth(&cube(0, &[1, 3, 9]), 4, r(4, 3)).unwrap();
        assert_eq!(cert.layer_sizes, [1, 2, 4, 8]);
        assert_eq!(cert.verdict, Verdict::Certified { bound: r(32, 9) });
    }

    #[test]
    fn one_generator_certifies_trivially() {
        let cert = certify_growth(&cube(7, &[5]), 3, r(5, 4)).unwrap();
        assert_eq!(cert.verdict, Verdict::Certified { bound: r(2, 1) });
    }

    #[test]
    fn point_cube_certifies_with_unit_bound() {
        let cert = certify_growth(&HilbertCube::point(3), 3, r(5, 4)).unwrap();
        assert_eq!(cert.verdict, Verdict::Certified { bound: r(1, 1) });
        assert_eq!(cert.layer_sizes, [1]);
    }

    #[test]
    fn parameter_validation() {
        // The endpoint c = k/(k−1) is admissible (the length guarantee is
        // exact there); anything above it is not, nor is c <= 1.
        assert!(certify_growth(&cube(0, &[1]), 4, r(4, 3)).is_ok());
        assert!(certify_growth(&cube(0, &[1]), 3, r(3, 2)).is_ok());
        assert!(matches!(
            certify_growth(&cube(0, &[1]), 4, r(134, 100)),
            Err(GrowthError::FactorOutOfRange { .. })
        ));
        assert!(matches!(
            certify_growth(&cube(0, &[1]), 3, r(8, 5)),
            Err(GrowthError::FactorOutOfRange { .. })
        ));
        assert!(matches!(
            certify_growth(&cube(0, &[1]), 3, Rational::one()),
            Err(GrowthError::FactorOutOfRange { .. })
        ));
        assert!(matches!(
            certify_growth(&cube(0, &[1]), 2, r(5, 4)),
            Err(GrowthError::InvalidK(2))
        ));
        assert!(certify_growth(&cube(0, &[1]), 3, r(149, 100)).is_ok());
    }

    #[test]
    fn violation_index_is_smallest() {
        // Layer sizes 1,2,4,5,6: ratios 2, 5/4, 6/5 — both 5/4 and 6/5 sit
        // below 13/10, and the earlier index must be named.
        let c = cube(0, &[2, 1, 1, 1]);
        let exp = c.expand().unwrap();
        assert_eq!(exp.layer_sizes(), [1, 2, 4, 5, 6]);
        let cert = certify_growth(&c, 4, r(13, 10)).unwrap();
        match cert.verdict {
            Verdict::Violation { layer, ap } => {
                assert_eq!(layer, 2);
                assert!(ap.contained_in(&exp.layers()[2]));
                assert!(ap.length >= 4);
            }
            v => panic!("expected violation, got {v:?}"),
        }
    }

    #[test]
    fn power_growth_inside_3apfree_set() {
        let oracle = SetOracle::explicit(vec![0, 1, 3, 4, 9, 10, 12, 13], 13).unwrap();
        assert!(verify_power_growth_3apfree(&cube(0, &[1, 3, 9]), &oracle).unwrap());
        assert!(verify_power_growth_3apfree(&HilbertCube::point(4), &oracle).unwrap());
    }

    #[test]
    fn containment_failure_reports_smallest_offender() {
        let oracle = SetOracle::explicit(vec![0, 1, 3, 4, 9, 10, 12, 13], 13).unwrap();
        let err = verify_power_growth_3apfree(&cube(0, &[1, 5]), &oracle).unwrap_err();
        assert_eq!(err, GrowthError::NotContained { element: 5 });
    }

    #[test]
    fn progression_rich_oracle_is_rejected() {
        // The squares contain {1,25,49}; the 2^d check refuses to run.
        let oracle = SetOracle::squares(2209).unwrap();
        let err =
            verify_power_growth_3apfree(&cube(1, &[528, 840, 840]), &oracle).unwrap_err();
        assert_eq!(
            err,
            GrowthError::OracleNotApFree {
                ap: APWitness {
                    start: 1,
                    difference: 24,
                    length: 3
                }
            }
        );
    }

    #[test]
    fn certificate_json_shape() {
        let cert = certify_growth(&cube(0, &[2, 1, 1]), 4, r(4, 3)).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        assert_eq!(
            json,
            r#"{"layer_sizes":[1,2,4,5],"c":"4/3","k":4,"verdict":{"violation":{"layer":2,"ap":{"start":0,"difference":1,"length":4}}}}"#
        );
        let back: GrowthCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);

        let cert = certify_growth(&cube(0, &[1, 3, 9]), 4, r(4, 3)).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        assert_eq!(
            json,
            r#"{"layer_sizes":[1,2,4,8],"c":"4/3","k":4,"verdict":{"certified":{"bound":"32/9"}}}"#
        );
    }
}
