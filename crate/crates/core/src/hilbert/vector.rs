use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::ball::BallDescriptor;
use crate::hilbert::summation::{exact_dot, exact_sum_of_squares};
use crate::hilbert::Ball;

/// A finitely supported vector over a ball's basis slice of l2(G).
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedVector {
    ball: Arc<Ball>,
    coefficients: Vec<f64>,
}

/// Wire form: coefficients alongside the ball descriptor.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorDocument {
    pub ball: BallDescriptor,
    pub coefficients: Vec<f64>,
}

impl TruncatedVector {
    pub fn zeros(ball: Arc<Ball>) -> Self {
        let coefficients = vec![0.0; ball.len()];
        TruncatedVector { ball, coefficients }
    }

    /// The basis vector e_h for the element at `position`.
    pub fn basis(ball: Arc<Ball>, position: usize) -> Self {
        let mut v = Self::zeros(ball);
        v.coefficients[position] = 1.0;
        v
    }

    /// Build from (position, coefficient) entries; insertion order is
    /// irrelevant because storage is dense and indexed by ball position.
    /// Duplicate positions overwrite.
    pub fn from_entries<I>(ball: Arc<Ball>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, f64)>,
    {
        let mut v = Self::zeros(ball);
        for (position, value) in entries {
            if position >= v.coefficients.len() {
                return Err(Error::DimensionMismatch {
                    expected: v.coefficients.len(),
                    got: position + 1,
                });
            }
            v.coefficients[position] = value;
        }
        Ok(v)
    }

    pub fn from_coefficients(ball: Arc<Ball>, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() != ball.len() {
            return Err(Error::DimensionMismatch {
                expected: ball.len(),
                got: coefficients.len(),
            });
        }
        Ok(TruncatedVector { ball, coefficients })
    }

    pub fn ball(&self) -> &Arc<Ball> {
        &self.ball
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn coefficients_mut(&mut self) -> &mut [f64] {
        &mut self.coefficients
    }

    /// <x, y> = sum over the ball of x(g) y(g); order-independent.
    pub fn inner_product(&self, other: &TruncatedVector) -> Result<f64> {
        if !self.ball.same_space(&other.ball) {
            return Err(Error::BallMismatch);
        }
        Ok(exact_dot(&self.coefficients, &other.coefficients))
    }

    pub fn norm_squared(&self) -> f64 {
        exact_sum_of_squares(&self.coefficients)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Scale onto the unit sphere; the zero vector has no direction.
    pub fn normalize(&self) -> Result<TruncatedVector> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        let coefficients = self.coefficients.iter().map(|c| c / norm).collect();
        Ok(TruncatedVector {
            ball: self.ball.clone(),
            coefficients,
        })
    }

    /// x o phi for a position bijection phi: result(i) = x(phi(i)).
    pub fn composed_with(&self, phi: &[usize]) -> Result<TruncatedVector> {
        if phi.len() != self.coefficients.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coefficients.len(),
                got: phi.len(),
            });
        }
        let coefficients = phi.iter().map(|&j| self.coefficients[j]).collect();
        Ok(TruncatedVector {
            ball: self.ball.clone(),
            coefficients,
        })
    }

    pub fn distance(&self, other: &TruncatedVector) -> Result<f64> {
        if !self.ball.same_space(&other.ball) {
            return Err(Error::BallMismatch);
        }
        Ok(exact_sum_of_squares(
            &self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a - b)
                .collect::<Vec<_>>(),
        )
        .sqrt())
    }

    pub fn scaled(&self, factor: f64) -> TruncatedVector {
        TruncatedVector {
            ball: self.ball.clone(),
            coefficients: self.coefficients.iter().map(|c| c * factor).collect(),
        }
    }

    /// Divide every coefficient by `norm` (exact where the quotient is
    /// representable, unlike multiplying by a rounded reciprocal).
    pub(crate) fn normalize_by(&self, norm: f64) -> TruncatedVector {
        TruncatedVector {
            ball: self.ball.clone(),
            coefficients: self.coefficients.iter().map(|c| c / norm).collect(),
        }
    }

    pub fn to_document(&self) -> VectorDocument {
        VectorDocument {
            ball: self.ball.descriptor(),
            coefficients: self.coefficients.clone(),
        }
    }

    pub fn from_document(doc: &VectorDocument) -> Result<TruncatedVector> {
        let ball = Ball::enumerate(doc.ball.kind.clone(), doc.ball.radius)?;
        Self::from_coefficients(ball, doc.coefficients.clone())
    }
}
