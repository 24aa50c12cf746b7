//! Hilbert cubes in structured integer sets.
//!
//! A cube `H(a₀; a₁, …, a_d)` is the set of subset sums
//! `a₀ + Σ_{i ∈ I} aᵢ`. This crate builds and expands such cubes, decides
//! membership against set oracles (perfect squares, quadratic images,
//! greedy progression-free sets, explicit lists), certifies a growth
//! dichotomy — every layer grows by a factor `c` or a long arithmetic
//! progression falls out — and searches windows `[1, N]` exhaustively for
//! maximal cubes, comparing what it finds against closed-form bounds.
//!
//! Modules:
//! - [`cube`]: cube values, expansion, layers.
//! - [`oracle`]: membership, enumeration, and bit-table construction.
//! - [`sieve`]: the shared bit table with shifted word kernels.
//! - [`progression`]: progression extraction and detection.
//! - [`growth`]: the layer-growth dichotomy certificate.
//! - [`sumset`]: cube factorization `C + D` and sumset measurements.
//! - [`transform`]: transport between quadratic images and squares.
//! - [`search`]: exhaustive maximal-cube search.
//! - [`bounds`]: closed-form reference bounds.
//! - [`rational`]: exact u128 fractions for growth factors.
//! - [`report`]: canonical JSON, CSV, experiment records.

pub mod bounds;
pub mod cube;
pub mod growth;
pub mod oracle;
pub mod progression;
pub mod rational;
pub mod report;
pub mod search;
pub mod sieve;
pub mod sumset;
pub mod transform;

pub use bounds::{evaluate_bounds, BoundReport};
pub use cube::{CubeError, CubeExpansion, HilbertCube};
pub use growth::{certify_growth, verify_power_growth_3apfree, GrowthCertificate, Verdict};
pub use oracle::{OracleError, OracleKind, SetOracle};
pub use progression::{
    extract_ap_from_shift_overlap, find_ap_of_length, longest_ap, APWitness,
};
pub use rational::Rational;
pub use search::{
    search_max_cubes, verify_cube, SearchConfig, SearchMode, SearchReport, Verification,
};
pub use sumset::{split_cube, squares_sumset_check, squares_sumset_sweep, CubeSplit};
pub use transform::{transform_ap, transform_cube, QuadraticForm};
