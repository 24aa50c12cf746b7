//! Exact non-negative rationals on `u128`.
//!
//! Growth certification compares layer-size ratios against thresholds like
//! `4/3` where any rounding can flip a verdict, so every value is kept as a
//! reduced `p/q` pair, comparisons are performed exactly (continued-fraction
//! descent, immune to cross-multiplication overflow), and arithmetic is
//! checked: a product that no longer fits is an error, never a wrap and
//! never a float.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("denominator must be nonzero")]
    ZeroDenominator,
    #[error("rational arithmetic overflowed u128")]
    Overflow,
    #[error("malformed rational literal `{0}`: expected `p/q` or a bare integer")]
    Malformed(String),
}

/// Reduced fraction `num/den`, `den >= 1`. Construction reduces, so derived
/// equality and hashing see one representative per value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: u128,
    den: u128,
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub fn new(num: u128, den: u128) -> Result<Self, RationalError> {
        if den == 0 {
            return Err(RationalError::ZeroDenominator);
        }
        if num == 0 {
            return Ok(Rational { num: 0, den: 1 });
        }
        let g = gcd(num, den);
        Ok(Rational {
            num: num / g,
            den: den / g,
        })
    }

    pub fn from_integer(n: u128) -> Self {
        Rational { num: n, den: 1 }
    }

    pub fn one() -> Self {
        Rational { num: 1, den: 1 }
    }

    pub fn numer(&self) -> u128 {
        self.num
    }

    pub fn denom(&self) -> u128 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn checked_mul(&self, rhs: &Rational) -> Result<Rational, RationalError> {
        // Cross-reduce first so intermediate products stay as small as possible.
        let g1 = gcd(self.num, rhs.den);
        let g2 = gcd(rhs.num, self.den);
        let num = (self.num / g1)
            .checked_mul(rhs.num / g2)
            .ok_or(RationalError::Overflow)?;
        let den = (self.den / g2)
            .checked_mul(rhs.den / g1)
            .ok_or(RationalError::Overflow)?;
        Rational::new(num, den)
    }

    /// `self - rhs`, failing on a negative result: this domain has no
    /// negative quantities.
    pub fn checked_sub(&self, rhs: &Rational) -> Result<Rational, RationalError> {
        let g = gcd(self.den, rhs.den);
        let scale_l = rhs.den / g;
        let scale_r = self.den / g;
        let left = self.num.checked_mul(scale_l).ok_or(RationalError::Overflow)?;
        let right = rhs.num.checked_mul(scale_r).ok_or(RationalError::Overflow)?;
        let den = self.den.checked_mul(scale_l).ok_or(RationalError::Overflow)?;
        let num = left.checked_sub(right).ok_or(RationalError::Overflow)?;
        Rational::new(num, den)
    }

    pub fn checked_pow(&self, exp: u32) -> Result<Rational, RationalError> {
        let num = self.num.checked_pow(exp).ok_or(RationalError::Overflow)?;
        let den = self.den.checked_pow(exp).ok_or(RationalError::Overflow)?;
        // Already reduced: powers of a reduced fraction stay reduced.
        Ok(Rational { num, den })
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// Exact comparison by synchronized continued-fraction expansion. Never
/// overflows, unlike cross-multiplication.
fn cmp_frac(mut an: u128, mut ad: u128, mut bn: u128, mut bd: u128) -> Ordering {
    let mut flipped = false;
    loop {
        let (qa, ra) = (an / ad, an % ad);
        let (qb, rb) = (bn / bd, bn % bd);
        let ord = match qa.cmp(&qb) {
            Ordering::Equal => match (ra == 0, rb == 0) {
                (true, true) => Ordering::Equal,
                (true, false) => Ordering::Less,
                (false, true) => Ordering::Greater,
                (false, false) => {
                    // Compare ra/ad vs rb/bd by comparing reciprocals reversed.
                    (an, ad, bn, bd) = (ad, ra, bd, rb);
                    flipped = !flipped;
                    continue;
                }
            },
            other => other,
        };
        return if flipped { ord.reverse() } else { ord };
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        cmp_frac(self.num, self.den, other.num, other.den)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Rational {
    type Err = RationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || RationalError::Malformed(s.to_string());
        match s.split_once('/') {
            Some((p, q)) => {
                let num: u128 = p.trim().parse().map_err(|_| bad())?;
                let den: u128 = q.trim().parse().map_err(|_| bad())?;
                if den == 0 {
                    return Err(RationalError::ZeroDenominator);
                }
                Rational::new(num, den)
            }
            None => {
                let num: u128 = s.parse().map_err(|_| bad())?;
                Ok(Rational::from_integer(num))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
