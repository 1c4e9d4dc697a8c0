//! The isometries of the constructed sphere actions: basis translations
//! induced by group multiplication, exact planar rotations on paired
//! coordinates, block-diagonal inflation of finite orthogonal matrices, and
//! their compositions — plus the polynomial and spectral machinery used to
//! analyze them.

mod angle;
mod isometry;
mod poly;
pub mod spectral;

pub use angle::ExactAngle;
pub use isometry::{
    combined_action, inflate, right_translation, rotation, torsion_action, ExactDomain,
    OperatorDescriptor, OrderResult, SphereIsometry,
};
pub use poly::{cyclotomic_poly, euler_totient, IntPolynomial};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hilbert::summation::ExactSum;
use crate::hilbert::{Ball, TruncatedVector};

/// An element of the doubled space H ⊕ H: two truncated vectors over the
/// same ball. Rotations act on the pair; translations act componentwise.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedVector {
    x: TruncatedVector,
    y: TruncatedVector,
}

impl PairedVector {
    pub fn new(x: TruncatedVector, y: TruncatedVector) -> Result<Self> {
        if !x.ball().same_space(y.ball()) {
            return Err(Error::BallMismatch);
        }
        Ok(PairedVector { x, y })
    }

    pub fn zeros(ball: Arc<Ball>) -> Self {
        PairedVector {
            x: TruncatedVector::zeros(ball.clone()),
            y: TruncatedVector::zeros(ball),
        }
    }

    /// Projection onto the first component.
    pub fn first(&self) -> &TruncatedVector {
        &self.x
    }

    /// Projection onto the second component.
    pub fn second(&self) -> &TruncatedVector {
        &self.y
    }

    pub fn ball(&self) -> &Arc<Ball> {
        self.x.ball()
    }

    pub fn inner_product(&self, other: &PairedVector) -> Result<f64> {
        if !self.ball().same_space(other.ball()) {
            return Err(Error::BallMismatch);
        }
        let mut acc = ExactSum::new();
        for (a, b) in self.x.coefficients().iter().zip(other.x.coefficients()) {
            acc.add(a * b);
        }
        for (a, b) in self.y.coefficients().iter().zip(other.y.coefficients()) {
            acc.add(a * b);
        }
        Ok(acc.value())
    }

    pub fn norm_squared(&self) -> f64 {
        let mut acc = ExactSum::new();
        for &a in self.x.coefficients() {
            acc.add(a * a);
        }
        for &a in self.y.coefficients() {
            acc.add(a * a);
        }
        acc.value()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn normalize(&self) -> Result<PairedVector> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        // divide, do not multiply by the reciprocal: x/‖x‖ is exact when
        // the quotient is representable (3/5 must come out as 0.6)
        Ok(PairedVector {
            x: self.x.normalize_by(n),
            y: self.y.normalize_by(n),
        })
    }

    pub fn scaled(&self, factor: f64) -> PairedVector {
        PairedVector {
            x: self.x.scaled(factor),
            y: self.y.scaled(factor),
        }
    }

    pub fn distance(&self, other: &PairedVector) -> Result<f64> {
        if !self.ball().same_space(other.ball()) {
            return Err(Error::BallMismatch);
        }
        let mut acc = ExactSum::new();
        for (a, b) in self.x.coefficients().iter().zip(other.x.coefficients()) {
            let d = a - b;
            acc.add(d * d);
        }
        for (a, b) in self.y.coefficients().iter().zip(other.y.coefficients()) {
            let d = a - b;
            acc.add(d * d);
        }
        Ok(acc.value().sqrt())
    }

    /// Flat layout: the first component's coefficients, then the second's.
    pub fn flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * self.x.coefficients().len());
        out.extend_from_slice(self.x.coefficients());
        out.extend_from_slice(self.y.coefficients());
        out
    }

    pub fn from_flat(ball: Arc<Ball>, flat: &[f64]) -> Result<Self> {
        let n = ball.len();
        if flat.len() != 2 * n {
            return Err(Error::DimensionMismatch {
                expected: 2 * n,
                got: flat.len(),
            });
        }
        let x = TruncatedVector::from_coefficients(ball.clone(), flat[..n].to_vec())?;
        let y = TruncatedVector::from_coefficients(ball, flat[n..].to_vec())?;
        Ok(PairedVector { x, y })
    }

    /// Largest word length carrying a nonzero coefficient in either
    /// component; `None` for the zero vector.
    pub fn support_radius(&self) -> Option<u32> {
        let ball = self.ball();
        let mut radius = None;
        for v in [&self.x, &self.y] {
            for (i, &c) in v.coefficients().iter().enumerate() {
                if c != 0.0 {
                    let l = ball.length_at(i);
                    radius = Some(radius.map_or(l, |r: u32| r.max(l)));
                }
            }
        }
        radius
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::GroupKind;

    fn small_ball() -> Arc<Ball> {
        Ball::enumerate(GroupKind::FreeAbelian(1), 2).unwrap()
    }

    #[test]
    fn components_project_back() {
        let ball = small_ball();
        let x = TruncatedVector::basis(ball.clone(), 0);
        let y = TruncatedVector::basis(ball.clone(), 1);
        let p = PairedVector::new(x.clone(), y.clone()).unwrap();
        assert_eq!(p.first(), &x);
        assert_eq!(p.second(), &y);
        assert_eq!(p.norm_squared(), 2.0);
    }

    #[test]
    fn mismatched_balls_are_rejected() {
        let a = Ball::enumerate(GroupKind::FreeAbelian(1), 2).unwrap();
        let b = Ball::enumerate(GroupKind::FreeAbelian(1), 3).unwrap();
        let x = TruncatedVector::basis(a, 0);
        let y = TruncatedVector::basis(b, 0);
        assert!(matches!(PairedVector::new(x, y), Err(Error::BallMismatch)));
    }

    #[test]
    fn flat_round_trip() {
        let ball = small_ball();
        let p = PairedVector::new(
            TruncatedVector::basis(ball.clone(), 2),
            TruncatedVector::basis(ball.clone(), 3).scaled(-0.5),
        )
        .unwrap();
        let flat = p.flat();
        assert_eq!(flat.len(), 2 * ball.len());
        let back = PairedVector::from_flat(ball, &flat).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn support_radius_tracks_word_length() {
        let ball = small_ball();
        // ball order over Z: 0, 1, -1, 2, -2
        let zero = PairedVector::zeros(ball.clone());
        assert_eq!(zero.support_radius(), None);
        let p = PairedVector::new(
            TruncatedVector::basis(ball.clone(), 0),
            TruncatedVector::basis(ball.clone(), 1),
        )
        .unwrap();
        assert_eq!(p.support_radius(), Some(1));
        let q = PairedVector::new(
            TruncatedVector::zeros(ball.clone()),
            TruncatedVector::basis(ball, 4),
        )
        .unwrap();
        assert_eq!(q.support_radius(), Some(2));
    }

    #[test]
    fn normalization_gives_unit_norm() {
        let ball = small_ball();
        let p = PairedVector::new(
            TruncatedVector::basis(ball.clone(), 0).scaled(3.0),
            TruncatedVector::basis(ball, 1).scaled(4.0),
        )
        .unwrap();
        let unit = p.normalize().unwrap();
        assert_eq!(unit.norm(), 1.0);
        assert_eq!(unit.first().coefficients()[0], 0.6);
        assert_eq!(unit.second().coefficients()[1], 0.8);
        assert!(PairedVector::zeros(small_ball()).normalize().is_err());
    }
}
