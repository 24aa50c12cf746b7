//! Transport of additive structure through quadratic polynomials.
//!
//! For `f(x) = ax² + bx + c` with `a >= 1`, completing the square gives
//! `4a·f(x) + b² − 4ac = (2ax + b)²`. The affine map `y ↦ 4a·y + b² − 4ac`
//! therefore carries subsets of the image of `f` into perfect squares, and
//! it sends cubes to cubes and progressions to progressions. Anything ruled
//! out inside the squares is ruled out inside every quadratic image.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cube::HilbertCube;
use crate::oracle::{self, OracleError, SetOracle};
use crate::progression::{self, APWitness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("leading coefficient must be >= 1")]
    NonPositiveLeading,
    #[error("coefficient magnitude exceeds 2^31")]
    CoefficientTooLarge,
    #[error("transformed value {value} is negative; the image lies outside u64")]
    NegativeImage { value: i128 },
    #[error("transformed value exceeds u64")]
    Overflow,
    #[error(transparent)]
    Oracle(Box<OracleError>),
}

impl From<OracleError> for TransformError {
    fn from(e: OracleError) -> Self {
        TransformError::Oracle(Box::new(e))
    }
}

/// Magnitude cap on coefficients. Keeps every intermediate—discriminants,
/// transformed cube spans—inside i128 with room to spare.
pub const COEFF_LIMIT: u64 = 1 << 31;

/// `f(x) = a·x² + b·x + c` with `a >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawForm")]
pub struct QuadraticForm {
    a: u64,
    b: i64,
    c: i64,
}

#[derive(Deserialize)]
struct RawForm {
    a: u64,
    b: i64,
    c: i64,
}

impl TryFrom<RawForm> for QuadraticForm {
    type Error = TransformError;

    fn try_from(raw: RawForm) -> Result<Self, TransformError> {
        QuadraticForm::new(raw.a, raw.b, raw.c)
    }
}

impl QuadraticForm {
    pub fn new(a: u64, b: i64, c: i64) -> Result<Self, TransformError> {
        if a == 0 {
            return Err(TransformError::NonPositiveLeading);
        }
        if a > COEFF_LIMIT || b.unsigned_abs() > COEFF_LIMIT || c.unsigned_abs() > COEFF_LIMIT {
            return Err(TransformError::CoefficientTooLarge);
        }
        Ok(QuadraticForm { a, b, c })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn eval(&self, x: u64) -> i128 {
        let x = x as i128;
        self.a as i128 * x * x + self.b as i128 * x + self.c as i128
    }

    /// Multiplier of the square-completing map, `4a`.
    pub fn scale(&self) -> u64 {
        4 * self.a
    }

    /// Constant of the square-completing map, `b² − 4ac`.
    pub fn shift(&self) -> i128 {
        self.b as i128 * self.b as i128 - 4 * self.a as i128 * self.c as i128
    }

    /// `4a·y + b² − 4ac`; equals `(2ax+b)²` exactly when `y = f(x)`.
    pub fn complete_square(&self, y: u64) -> i128 {
        self.scale() as i128 * y as i128 + self.shift()
    }
}

impl std::fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x^2{:+}x{:+}", self.a, self.b, self.c)
    }
}

fn to_u64(v: i128) -> Result<u64, TransformError> {
    if v < 0 {
        return Err(TransformError::NegativeImage { value: v });
    }
    u64::try_from(v).map_err(|_| TransformError::Overflow)
}

/// Image of a cube under `y ↦ 4a·y + b² − 4ac`: base moves affinely,
/// generators scale by `4a`. The result must fit u64 end to end.
pub fn transform_cube(cube: &HilbertCube, form: &QuadraticForm) -> Result<HilbertCube, TransformError> {
    let base = to_u64(form.complete_square(cube.base()))?;
    let scale = form.scale();
    let generators = cube
        .generators()
        .iter()
        .map(|&g| g.checked_mul(scale).ok_or(TransformError::Overflow))
        .collect::<Result<Vec<_>, _>>()?;
    let out = HilbertCube::new(base, generators).expect("scaled generators stay nonzero");
    // The whole expansion must stay in range, not just the base.
    out.span_end().map_err(|_| TransformError::Overflow)?;
    Ok(out)
}

/// Image of a progression under the same map: start moves affinely,
/// difference scales by `4a`, length is preserved.
pub fn transform_ap(ap: &APWitness, form: &QuadraticForm) -> Result<APWitness, TransformError> {
    let start = to_u64(form.complete_square(ap.start))?;
    let difference = ap
        .difference
        .checked_mul(form.scale())
        .ok_or(TransformError::Overflow)?;
    // The far end has to stay inside u64 as well.
    ap.length
        .saturating_sub(1)
        .checked_mul(difference)
        .and_then(|d| d.checked_add(start))
        .ok_or(TransformError::Overflow)?;
    Ok(APWitness {
        start,
        difference,
        length: ap.length,
    })
}

/// Search the image `{f(x) : x, f(x) ∈ [1, n]}` for a 4-term progression.
/// Returns the corresponding progression *of squares* if one exists — which
/// would contradict the four-squares theorem, so `None` is the expected
/// outcome on any genuine quadratic.
pub fn check_no_4ap_in_quadratic_image(
    form: &QuadraticForm,
    n: u64,
) -> Result<Option<APWitness>, TransformError> {
    let image = SetOracle::quadratic(*form, n)?.enumerate(n)?;
    match progression::find_ap_of_length(&image, 4) {
        None => Ok(None),
        Some(ap) => {
            let squares_ap = transform_ap(&ap, form)?;
            debug_assert!(squares_ap.elements().all(oracle::is_square));
            Ok(Some(squares_ap))
        }
    }
}
