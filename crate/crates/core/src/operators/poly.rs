//! Integer polynomials with exact arithmetic, enough to build cyclotomic
//! polynomials by the recursion Π_{d|m} Φ_d(t) = tᵐ − 1 and evaluate them
//! on square matrices.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};

/// Polynomial with arbitrary-precision integer coefficients, constant term
/// first. The zero polynomial is the empty list; otherwise the leading
/// coefficient is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coefficients: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coefficients: Vec<BigInt>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        IntPolynomial { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial {
            coefficients: Vec::new(),
        }
    }

    pub fn one() -> Self {
        IntPolynomial {
            coefficients: vec![BigInt::one()],
        }
    }

    /// tⁿ − 1.
    pub fn power_minus_one(n: usize) -> Self {
        let mut coefficients = vec![BigInt::zero(); n + 1];
        coefficients[0] = -BigInt::one();
        coefficients[n] = BigInt::one();
        IntPolynomial { coefficients }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    /// Exact division: errors unless `divisor` divides `self` with integer
    /// coefficients and no remainder.
    pub fn exact_div(&self, divisor: &IntPolynomial) -> Result<IntPolynomial> {
        if divisor.is_zero() {
            return Err(Error::InvalidArgument("division by zero polynomial".into()));
        }
        if self.is_zero() {
            return Ok(IntPolynomial::zero());
        }
        let n = self.coefficients.len();
        let d = divisor.coefficients.len();
        if n < d {
            return Err(Error::InvalidArgument(
                "polynomial division leaves a remainder".into(),
            ));
        }
        let lead = divisor.coefficients.last().unwrap();
        let mut rem = self.coefficients.clone();
        let mut quot = vec![BigInt::zero(); n - d + 1];
        for k in (0..quot.len()).rev() {
            let top = rem[k + d - 1].clone();
            if top.is_zero() {
                continue;
            }
            let (q, r) = num_integer::div_rem(top, lead.clone());
            if !r.is_zero() {
                return Err(Error::InvalidArgument(
                    "polynomial division leaves a remainder".into(),
                ));
            }
            for (i, c) in divisor.coefficients.iter().enumerate() {
                let delta = &q * c;
                rem[k + i] -= delta;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::InvalidArgument(
                "polynomial division leaves a remainder".into(),
            ));
        }
        Ok(IntPolynomial::new(quot))
    }

    /// Horner evaluation p(M) for a square matrix M.
    pub fn eval_matrix(&self, m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        if !m.is_square() {
            return Err(Error::InvalidArgument(
                "polynomial evaluation needs a square matrix".into(),
            ));
        }
        let n = m.nrows();
        let mut acc = DMatrix::<f64>::zeros(n, n);
        for c in self.coefficients.iter().rev() {
            let c = c
                .to_f64()
                .ok_or_else(|| Error::InvalidArgument("coefficient out of f64 range".into()))?;
            acc = m * acc + DMatrix::identity(n, n) * c;
        }
        Ok(acc)
    }

    /// Coefficients as i64, erroring when any is out of range.
    pub fn coefficients_i64(&self) -> Result<Vec<i64>> {
        self.coefficients
            .iter()
            .map(|c| {
                c.to_i64().ok_or_else(|| {
                    Error::InvalidArgument(format!("coefficient {c} exceeds 64 bits"))
                })
            })
            .collect()
    }
}

impl std::fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (power, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            match power {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    if power == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{power}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// The m-th cyclotomic polynomial, by dividing tᵐ − 1 by all Φ_d for proper
/// divisors d. Results are memoized process-wide; the recursion touches
/// every divisor, so a warm cache makes sweeps over m cheap.
pub fn cyclotomic_poly(m: u64) -> Result<IntPolynomial> {
    static CACHE: Mutex<Option<HashMap<u64, IntPolynomial>>> = Mutex::new(None);

    if m == 0 {
        return Err(Error::InvalidArgument(
            "cyclotomic index must be positive".into(),
        ));
    }
    let mut guard = CACHE.lock().unwrap();
    let cache = guard.get_or_insert_with(HashMap::new);
    fill_cyclotomic(m, cache)?;
    Ok(cache[&m].clone())
}

fn fill_cyclotomic(m: u64, cache: &mut HashMap<u64, IntPolynomial>) -> Result<()> {
    if cache.contains_key(&m) {
        return Ok(());
    }
    let mut divisor_product = IntPolynomial::one();
    for d in 1..=m / 2 {
        if m.is_multiple_of(d) {
            fill_cyclotomic(d, cache)?;
            divisor_product = divisor_product.mul(&cache[&d]);
        }
    }
    let n = usize::try_from(m)
        .map_err(|_| Error::InvalidArgument("cyclotomic index exceeds usize".into()))?;
    let phi = IntPolynomial::power_minus_one(n).exact_div(&divisor_product)?;
    cache.insert(m, phi);
    Ok(())
}

/// Euler's totient, used to cross-check cyclotomic degrees.
pub fn euler_totient(m: u64) -> u64 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_strips_leading_zeros() {
        let p = IntPolynomial::from_i64(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(IntPolynomial::from_i64(&[0, 0]).is_zero());
        assert_eq!(IntPolynomial::zero().degree(), None);
    }

    #[test]
    fn multiplication_matches_hand_expansion() {
        // (1 + t)(1 - t) = 1 - t^2
        let p = IntPolynomial::from_i64(&[1, 1]);
        let q = IntPolynomial::from_i64(&[1, -1]);
        assert_eq!(p.mul(&q), IntPolynomial::from_i64(&[1, 0, -1]));
    }

    #[test]
    fn exact_division_round_trips() {
        let p = IntPolynomial::from_i64(&[2, -3, 1, 5]);
        let q = IntPolynomial::from_i64(&[-1, 4, 2]);
        let product = p.mul(&q);
        assert_eq!(product.exact_div(&q).unwrap(), p);
        assert_eq!(product.exact_div(&p).unwrap(), q);
    }

    #[test]
    fn inexact_division_is_rejected() {
        let p = IntPolynomial::from_i64(&[1, 0, 1]); // t^2 + 1
        let q = IntPolynomial::from_i64(&[1, 1]); // t + 1
        assert!(p.exact_div(&q).is_err());
        // 2t over t fits, 2t+1 over 2 does not (integer quotient exists for
        // the lead but the remainder is nonzero)
        assert!(IntPolynomial::from_i64(&[1, 2])
            .exact_div(&IntPolynomial::from_i64(&[2]))
            .is_err());
    }

    #[test]
    fn first_cyclotomics_match_known_tables() {
        assert_eq!(
            cyclotomic_poly(1).unwrap(),
            IntPolynomial::from_i64(&[-1, 1])
        );
        assert_eq!(
            cyclotomic_poly(2).unwrap(),
            IntPolynomial::from_i64(&[1, 1])
        );
        assert_eq!(
            cyclotomic_poly(3).unwrap(),
            IntPolynomial::from_i64(&[1, 1, 1])
        );
        assert_eq!(
            cyclotomic_poly(4).unwrap(),
            IntPolynomial::from_i64(&[1, 0, 1])
        );
        assert_eq!(
            cyclotomic_poly(6).unwrap(),
            IntPolynomial::from_i64(&[1, -1, 1])
        );
        assert_eq!(
            cyclotomic_poly(12).unwrap(),
            IntPolynomial::from_i64(&[1, 0, -1, 0, 1])
        );
    }

    #[test]
    fn cyclotomic_degrees_are_totients() {
        for m in 1..=40 {
            let phi = cyclotomic_poly(m).unwrap();
            assert_eq!(phi.degree(), Some(euler_totient(m) as usize), "m = {m}");
        }
    }

    #[test]
    fn divisor_product_reconstructs_power_minus_one() {
        for m in [1u64, 2, 6, 12, 30, 64, 105] {
            let mut product = IntPolynomial::one();
            for d in 1..=m {
                if m % d == 0 {
                    product = product.mul(&cyclotomic_poly(d).unwrap());
                }
            }
            assert_eq!(
                product,
                IntPolynomial::power_minus_one(m as usize),
                "m = {m}"
            );
        }
    }

    #[test]
    fn coefficient_two_first_appears_at_105() {
        let phi = cyclotomic_poly(105).unwrap();
        let max_abs = phi.coefficients().iter().map(|c| c.abs()).max().unwrap();
        assert_eq!(max_abs, BigInt::from(2));
        for m in 1..105 {
            let phi = cyclotomic_poly(m).unwrap();
            assert!(
                phi.coefficients().iter().all(|c| c.abs() <= BigInt::one()),
                "m = {m}"
            );
        }
    }

    #[test]
    fn matrix_evaluation_matches_scalar() {
        // p(t) = t^2 - 2 on the 2x2 swap matrix: swap^2 = I, so p = -I
        let p = IntPolynomial::from_i64(&[-2, 0, 1]);
        let swap = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let result = p.eval_matrix(&swap).unwrap();
        assert_eq!(
            result,
            DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, -1.0])
        );
    }

    #[test]
    fn display_renders_sparse_terms() {
        let p = IntPolynomial::from_i64(&[1, 0, -1, 0, 1]);
        assert_eq!(p.to_string(), "t^4 - t^2 + 1");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
        assert_eq!(IntPolynomial::from_i64(&[-1, 1]).to_string(), "t - 1");
    }
}
