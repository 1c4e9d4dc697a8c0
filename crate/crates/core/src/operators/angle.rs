//! Angles as exact rationals: `k/m` stands for 2πk/m. Keeping the fraction
//! instead of a float makes order and fixed-point questions decidable.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 2πk/m with gcd(|k|, m) = 1 and m ≥ 1. Full turns are deliberately not
/// normalized away: 3/2 and 1/2 are the same rotation matrix but different
/// total angles, and some invariants are statements about the total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "(i64, i64)", try_from = "(i64, i64)")]
pub struct ExactAngle {
    numerator: i64,
    denominator: i64,
}

impl From<ExactAngle> for (i64, i64) {
    fn from(a: ExactAngle) -> Self {
        (a.numerator, a.denominator)
    }
}

impl TryFrom<(i64, i64)> for ExactAngle {
    type Error = Error;

    fn try_from(pair: (i64, i64)) -> Result<Self> {
        ExactAngle::new(pair.0, pair.1)
    }
}

impl ExactAngle {
    pub fn new(numerator: i64, denominator: i64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::InvalidArgument("angle denominator is zero".into()));
        }
        let (mut n, mut d) = (numerator, denominator);
        if d < 0 {
            n = n.checked_neg().ok_or(Error::AngleOverflow)?;
            d = d.checked_neg().ok_or(Error::AngleOverflow)?;
        }
        let g = n.unsigned_abs().gcd(&d.unsigned_abs());
        if g > 1 {
            n /= g as i64;
            d /= g as i64;
        }
        if n == 0 {
            d = 1;
        }
        Ok(ExactAngle {
            numerator: n,
            denominator: d,
        })
    }

    pub fn zero() -> Self {
        ExactAngle {
            numerator: 0,
            denominator: 1,
        }
    }

    pub fn half_turn() -> Self {
        ExactAngle {
            numerator: 1,
            denominator: 2,
        }
    }

    pub fn numerator(&self) -> i64 {
        self.numerator
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    pub fn add(&self, other: &ExactAngle) -> Result<ExactAngle> {
        let n = i128::from(self.numerator) * i128::from(other.denominator)
            + i128::from(other.numerator) * i128::from(self.denominator);
        let d = i128::from(self.denominator) * i128::from(other.denominator);
        Self::from_i128(n, d)
    }

    pub fn scale(&self, factor: i64) -> Result<ExactAngle> {
        let n = i128::from(self.numerator) * i128::from(factor);
        Self::from_i128(n, i128::from(self.denominator))
    }

    fn from_i128(n: i128, d: i128) -> Result<ExactAngle> {
        debug_assert!(d > 0);
        let g = n.unsigned_abs().gcd(&d.unsigned_abs());
        let n = n / g as i128;
        let d = d / g as i128;
        let numerator = i64::try_from(n).map_err(|_| Error::AngleOverflow)?;
        let denominator = i64::try_from(d).map_err(|_| Error::AngleOverflow)?;
        ExactAngle::new(numerator, denominator)
    }

    /// Whole number of turns, i.e. the rotation is the identity.
    pub fn is_integral(&self) -> bool {
        self.denominator == 1
    }

    /// Order of the rotation by this angle: least n ≥ 1 with n·θ integral.
    pub fn order(&self) -> u64 {
        self.denominator as u64
    }

    /// The representative in [0, 1) as a reduced fraction.
    pub fn reduced_mod_one(&self) -> ExactAngle {
        ExactAngle {
            numerator: self.numerator.rem_euclid(self.denominator),
            denominator: self.denominator,
        }
    }

    /// (cos θ, sin θ). Quarter-turn multiples produce exact ±1/0 values so
    /// that the rotations of order 1, 2, 4 are exact matrices.
    pub fn cos_sin(&self) -> (f64, f64) {
        let k = self.numerator.rem_euclid(self.denominator);
        match (k, self.denominator) {
            (0, _) => (1.0, 0.0),
            (1, 4) => (0.0, 1.0),
            (1, 2) => (-1.0, 0.0),
            (3, 4) => (0.0, -1.0),
            _ => {
                let theta = 2.0 * std::f64::consts::PI * (k as f64) / (self.denominator as f64);
                (theta.cos(), theta.sin())
            }
        }
    }
}

impl std::fmt::Display for ExactAngle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "2π·{}/{}", self.numerator, self.denominator)
    }
}
