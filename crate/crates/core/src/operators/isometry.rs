//! The operator variants making up a constructed action and their exact
//! bookkeeping: where a truncated translation is a genuine permutation, the
//! total rotation angle of a composition, orders, dense realizations, and
//! JSON descriptors.

use nalgebra::DMatrix;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

use super::angle::ExactAngle;
use super::PairedVector;
use crate::error::{Error, Result};
use crate::groups::is_prime_u64;
use crate::hilbert::{Ball, BallDescriptor, GroupElement, TruncatedVector};

const ORTHOGONALITY_TOLERANCE: f64 = 1e-10;
const DEFAULT_ORDER_CAP: u64 = 512;
const DEFAULT_ORDER_TOLERANCE: f64 = 1e-9;

/// An isometry of (a truncation of) the doubled space H ⊕ H.
#[derive(Debug, Clone, PartialEq)]
pub enum SphereIsometry {
    /// e_h ↦ e_{hg⁻¹} on both components; a partial permutation of the
    /// ball's basis, with images falling outside the ball recorded as
    /// dropped.
    BasisPermutation {
        ball: Arc<Ball>,
        element: GroupElement,
        /// Image position of each basis vector; `None` when it leaves the ball.
        images: Vec<Option<usize>>,
        /// Word length of `element`, bounding how far supports move.
        shift_length: u32,
    },
    /// (x, y) ↦ (cos θ·x − sin θ·y, sin θ·x + cos θ·y), diagonally across
    /// all paired coordinates.
    PlanarRotation(ExactAngle),
    /// b copies of a fixed orthogonal matrix along the diagonal, acting on
    /// flat coordinates chunked by the base dimension.
    BlockDiagonal { base: DMatrix<f64>, blocks: usize },
    /// Factors applied in list order (the first factor acts first).
    Composition(Vec<SphereIsometry>),
}

/// e_h ↦ e_{hg⁻¹}: the isometric action induced by right translation
/// h ↦ hg, truncated to the ball. Vectors supported within radius
/// R − |g| are moved without loss.
pub fn right_translation(g: &GroupElement, ball: &Arc<Ball>) -> Result<SphereIsometry> {
    let kind = ball.kind();
    if !kind.contains(g) {
        return Err(Error::ElementMismatch(format!("{g:?} is not in {kind}")));
    }
    let g_inv = kind.inverse(g)?;
    let images = ball
        .elements()
        .iter()
        .map(|h| Ok(ball.position(&kind.compose(h, &g_inv)?)))
        .collect::<Result<Vec<Option<usize>>>>()?;
    Ok(SphereIsometry::BasisPermutation {
        ball: ball.clone(),
        element: g.clone(),
        images,
        shift_length: kind.word_length(g)?,
    })
}

/// The planar rotation by an exact angle.
pub fn rotation(angle: ExactAngle) -> SphereIsometry {
    SphereIsometry::PlanarRotation(angle)
}

/// The torsion part of a constructed action: the product over i of the
/// rotation by 2π·kᵢ/pᵢ^{αᵢ} taken to the power sᵢ. Validates that each
/// pᵢ is prime and each kᵢ primitive; deliberately does **not** require
/// the primes to be distinct, so inadmissible tuples can be built for
/// negative testing.
pub fn torsion_action(
    prime_powers: &[(u64, u32)],
    exponents: &[i64],
    primitive_ks: &[i64],
) -> Result<SphereIsometry> {
    if prime_powers.len() != exponents.len() || prime_powers.len() != primitive_ks.len() {
        return Err(Error::InvalidArgument(format!(
            "mismatched lengths: {} prime powers, {} exponents, {} roots",
            prime_powers.len(),
            exponents.len(),
            primitive_ks.len()
        )));
    }
    let mut factors = Vec::with_capacity(prime_powers.len());
    for ((&(p, alpha), &s), &k) in prime_powers.iter().zip(exponents).zip(primitive_ks) {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if alpha == 0 {
            return Err(Error::InvalidArgument(
                "prime-power exponent must be at least 1".into(),
            ));
        }
        let modulus = p
            .checked_pow(alpha)
            .and_then(|m| i64::try_from(m).ok())
            .ok_or(Error::AngleOverflow)?;
        let g = k.rem_euclid(modulus).gcd(&modulus);
        if g != 1 {
            return Err(Error::NotPrimitive { k, modulus, gcd: g });
        }
        let unit_angle = ExactAngle::new(k, modulus)?;
        factors.push(SphereIsometry::PlanarRotation(unit_angle.scale(s)?));
    }
    Ok(SphereIsometry::Composition(factors))
}

/// A full group element of the construction: translate both components by
/// g, then rotate by the torsion tuple. The two parts commute, so the
/// order of application is a convention, not a choice.
pub fn combined_action(
    g: &GroupElement,
    ball: &Arc<Ball>,
    prime_powers: &[(u64, u32)],
    exponents: &[i64],
    primitive_ks: &[i64],
) -> Result<SphereIsometry> {
    let translation = right_translation(g, ball)?;
    let torsion = torsion_action(prime_powers, exponents, primitive_ks)?;
    let mut factors = vec![translation];
    if let SphereIsometry::Composition(rotations) = torsion {
        factors.extend(rotations);
    }
    Ok(SphereIsometry::Composition(factors))
}

/// Block-diagonal inflation: b copies of the base along the diagonal.
/// The base must be orthogonal to within max |BᵀB − I| ≤ 1e−10.
pub fn inflate(base: &DMatrix<f64>, blocks: usize) -> Result<SphereIsometry> {
    if !base.is_square() || base.nrows() == 0 {
        return Err(Error::InvalidArgument(
            "inflation base must be square and nonempty".into(),
        ));
    }
    if blocks == 0 {
        return Err(Error::InvalidArgument(
            "inflation needs at least one block".into(),
        ));
    }
    let gram = base.transpose() * base;
    let defect = (gram - DMatrix::identity(base.nrows(), base.ncols()))
        .abs()
        .max();
    if defect > ORTHOGONALITY_TOLERANCE {
        return Err(Error::NotOrthogonal {
            defect,
            tolerance: ORTHOGONALITY_TOLERANCE,
        });
    }
    Ok(SphereIsometry::BlockDiagonal {
        base: base.clone(),
        blocks,
    })
}

/// The sub-ball on which a truncated operator matches the untruncated
/// action exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactDomain {
    /// No truncation anywhere: rotations and block operators.
    Unrestricted,
    /// Supports within this word-length radius are moved without loss.
    WithinRadius(u32),
    /// Every basis vector is displaced out of the ball.
    Empty,
}

impl ExactDomain {
    /// The usable support radius inside a ball of the given radius.
    pub fn usable_radius(&self, ball_radius: u32) -> Option<u32> {
        match self {
            ExactDomain::Unrestricted => Some(ball_radius),
            ExactDomain::WithinRadius(r) => Some(*r),
            ExactDomain::Empty => None,
        }
    }
}

/// Result of an order computation: exact where the structure allows,
/// otherwise an explanation of why the order could not be pinned down.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderResult {
    Finite(u64),
    Undetermined(String),
}

impl OrderResult {
    pub fn finite(&self) -> Option<u64> {
        match self {
            OrderResult::Finite(m) => Some(*m),
            OrderResult::Undetermined(_) => None,
        }
    }
}

impl SphereIsometry {
    /// Total rotation angle when the operator is built purely from
    /// rotations; `None` as soon as a translation or block enters.
    pub fn total_angle(&self) -> Option<ExactAngle> {
        match self {
            SphereIsometry::PlanarRotation(a) => Some(*a),
            SphereIsometry::Composition(factors) => {
                let mut total = ExactAngle::zero();
                for f in factors {
                    total = total.add(&f.total_angle()?).ok()?;
                }
                Some(total)
            }
            _ => None,
        }
    }

    /// Positions of basis vectors whose image leaves the ball, for the
    /// translation parts of the operator.
    pub fn dropped_positions(&self) -> Vec<usize> {
        match self {
            SphereIsometry::BasisPermutation { images, .. } => images
                .iter()
                .enumerate()
                .filter_map(|(i, im)| im.is_none().then_some(i))
                .collect(),
            SphereIsometry::Composition(factors) => {
                let mut out: Vec<usize> =
                    factors.iter().flat_map(|f| f.dropped_positions()).collect();
                out.sort_unstable();
                out.dedup();
                out
            }
            _ => Vec::new(),
        }
    }

    /// Where the operator agrees with its untruncated counterpart:
    /// vectors supported within the returned radius lose nothing. The
    /// domain is empty when a shift is longer than the ball radius, and
    /// unrestricted when there is no translation part at all.
    pub fn exact_domain(&self) -> ExactDomain {
        match self {
            SphereIsometry::BasisPermutation {
                ball, shift_length, ..
            } => {
                if *shift_length > ball.radius() {
                    ExactDomain::Empty
                } else {
                    ExactDomain::WithinRadius(ball.radius() - shift_length)
                }
            }
            SphereIsometry::Composition(factors) => {
                let mut domain = ExactDomain::Unrestricted;
                for f in factors {
                    domain = match (domain, f.exact_domain()) {
                        (ExactDomain::Empty, _) | (_, ExactDomain::Empty) => ExactDomain::Empty,
                        (ExactDomain::Unrestricted, d) | (d, ExactDomain::Unrestricted) => d,
                        (ExactDomain::WithinRadius(a), ExactDomain::WithinRadius(b)) => {
                            ExactDomain::WithinRadius(a.min(b))
                        }
                    };
                }
                domain
            }
            _ => ExactDomain::Unrestricted,
        }
    }

    /// The ball underlying the translation parts, when there is one.
    pub fn ball(&self) -> Option<&Arc<Ball>> {
        match self {
            SphereIsometry::BasisPermutation { ball, .. } => Some(ball),
            SphereIsometry::Composition(factors) => factors.iter().find_map(|f| f.ball()),
            _ => None,
        }
    }

    /// Apply to a paired vector. Coefficients whose basis vector is
    /// dropped by a translation are lost — callers wanting exactness keep
    /// supports within [`Self::exact_support_radius`].
    pub fn apply(&self, v: &PairedVector) -> Result<PairedVector> {
        match self {
            SphereIsometry::BasisPermutation { .. } => {
                let x = self.apply_component(v.first())?;
                let y = self.apply_component(v.second())?;
                PairedVector::new(x, y)
            }
            SphereIsometry::PlanarRotation(angle) => {
                let (c, s) = angle.cos_sin();
                let xs = v.first().coefficients();
                let ys = v.second().coefficients();
                let mut new_x = Vec::with_capacity(xs.len());
                let mut new_y = Vec::with_capacity(ys.len());
                for (&x, &y) in xs.iter().zip(ys) {
                    new_x.push(c * x - s * y);
                    new_y.push(s * x + c * y);
                }
                PairedVector::new(
                    TruncatedVector::from_coefficients(v.ball().clone(), new_x)?,
                    TruncatedVector::from_coefficients(v.ball().clone(), new_y)?,
                )
            }
            SphereIsometry::BlockDiagonal { .. } => Err(Error::IncompatibleOperator(
                "block-diagonal operators act on flat coordinate vectors".into(),
            )),
            SphereIsometry::Composition(factors) => {
                let mut current = v.clone();
                for f in factors {
                    current = f.apply(&current)?;
                }
                Ok(current)
            }
        }
    }

    /// Apply the translation part to a single component vector.
    pub fn apply_component(&self, v: &TruncatedVector) -> Result<TruncatedVector> {
        match self {
            SphereIsometry::BasisPermutation { ball, images, .. } => {
                if !ball.same_space(v.ball()) {
                    return Err(Error::BallMismatch);
                }
                let mut out = vec![0.0; ball.len()];
                for (i, &c) in v.coefficients().iter().enumerate() {
                    if let Some(j) = images[i] {
                        out[j] = c;
                    }
                }
                TruncatedVector::from_coefficients(v.ball().clone(), out)
            }
            SphereIsometry::Composition(factors) => {
                let mut current = v.clone();
                for f in factors {
                    current = f.apply_component(&current)?;
                }
                Ok(current)
            }
            _ => Err(Error::IncompatibleOperator(
                "rotations act on paired vectors, not single components".into(),
            )),
        }
    }

    /// Apply to a flat coordinate vector (paired layout: first component's
    /// coefficients, then the second's; block-diagonal layout: chunks of
    /// the base dimension).
    pub fn apply_flat(&self, v: &[f64]) -> Result<Vec<f64>> {
        match self {
            SphereIsometry::BlockDiagonal { base, blocks } => {
                let n = base.nrows();
                let expected = n * blocks;
                if v.len() != expected {
                    return Err(Error::DimensionMismatch {
                        expected,
                        got: v.len(),
                    });
                }
                let mut out = Vec::with_capacity(v.len());
                for chunk in v.chunks(n) {
                    let w = base * DMatrix::from_column_slice(n, 1, chunk);
                    out.extend(w.column(0).iter().copied());
                }
                Ok(out)
            }
            SphereIsometry::PlanarRotation(angle) => {
                if !v.len().is_multiple_of(2) {
                    return Err(Error::DimensionMismatch {
                        expected: v.len() + 1,
                        got: v.len(),
                    });
                }
                let (c, s) = angle.cos_sin();
                let n = v.len() / 2;
                let mut out = vec![0.0; v.len()];
                for i in 0..n {
                    out[i] = c * v[i] - s * v[n + i];
                    out[n + i] = s * v[i] + c * v[n + i];
                }
                Ok(out)
            }
            SphereIsometry::BasisPermutation { ball, images, .. } => {
                let n = ball.len();
                if v.len() != 2 * n {
                    return Err(Error::DimensionMismatch {
                        expected: 2 * n,
                        got: v.len(),
                    });
                }
                let mut out = vec![0.0; v.len()];
                for (i, &im) in images.iter().enumerate() {
                    if let Some(j) = im {
                        out[j] = v[i];
                        out[n + j] = v[n + i];
                    }
                }
                Ok(out)
            }
            SphereIsometry::Composition(factors) => {
                let mut current = v.to_vec();
                for f in factors {
                    current = f.apply_flat(&current)?;
                }
                Ok(current)
            }
        }
    }

    /// Dense matrix on the paired space of `pairs` coordinates per
    /// component (2·pairs × 2·pairs). Translation parts require the ball
    /// length to equal `pairs`.
    pub fn dense_paired(&self, pairs: usize) -> Result<DMatrix<f64>> {
        let dim = 2 * pairs;
        match self {
            SphereIsometry::BasisPermutation { ball, images, .. } => {
                if ball.len() != pairs {
                    return Err(Error::DimensionMismatch {
                        expected: ball.len(),
                        got: pairs,
                    });
                }
                let mut m = DMatrix::zeros(dim, dim);
                for (i, &im) in images.iter().enumerate() {
                    if let Some(j) = im {
                        m[(j, i)] = 1.0;
                        m[(pairs + j, pairs + i)] = 1.0;
                    }
                }
                Ok(m)
            }
            SphereIsometry::PlanarRotation(angle) => {
                let (c, s) = angle.cos_sin();
                let mut m = DMatrix::zeros(dim, dim);
                for i in 0..pairs {
                    m[(i, i)] = c;
                    m[(i, pairs + i)] = -s;
                    m[(pairs + i, i)] = s;
                    m[(pairs + i, pairs + i)] = c;
                }
                Ok(m)
            }
            SphereIsometry::BlockDiagonal { .. } => Err(Error::IncompatibleOperator(
                "block-diagonal operators have their own flat realization".into(),
            )),
            SphereIsometry::Composition(factors) => {
                let mut m = DMatrix::identity(dim, dim);
                for f in factors {
                    m = f.dense_paired(pairs)? * m;
                }
                Ok(m)
            }
        }
    }

    /// Dense matrix in the operator's own flat layout.
    pub fn dense_flat(&self) -> Result<DMatrix<f64>> {
        match self {
            SphereIsometry::BlockDiagonal { base, blocks } => {
                let n = base.nrows();
                let dim = n * blocks;
                let mut m = DMatrix::zeros(dim, dim);
                for b in 0..*blocks {
                    m.view_mut((b * n, b * n), (n, n)).copy_from(base);
                }
                Ok(m)
            }
            SphereIsometry::PlanarRotation(angle) => {
                let (c, s) = angle.cos_sin();
                Ok(DMatrix::from_row_slice(2, 2, &[c, -s, s, c]))
            }
            SphereIsometry::BasisPermutation { ball, .. } => self.dense_paired(ball.len()),
            SphereIsometry::Composition(factors) => {
                let mut m: Option<DMatrix<f64>> = None;
                for f in factors {
                    let fm = f.dense_flat()?;
                    m = Some(match m {
                        None => fm,
                        Some(acc) => {
                            if acc.nrows() != fm.nrows() {
                                return Err(Error::DimensionMismatch {
                                    expected: acc.nrows(),
                                    got: fm.nrows(),
                                });
                            }
                            fm * acc
                        }
                    });
                }
                m.ok_or_else(|| {
                    Error::IncompatibleOperator("empty composition has no dimension".into())
                })
            }
        }
    }

    /// The order of the operator: exact for rotations (reduced denominator
    /// of the total angle) and for drop-free basis permutations (lcm of
    /// cycle lengths); iterated powers up to a cap for block diagonals.
    /// Compositions combine factor orders by lcm — valid because every
    /// composition this crate constructs has pairwise commuting factors.
    pub fn order(&self) -> OrderResult {
        self.order_with(DEFAULT_ORDER_CAP, DEFAULT_ORDER_TOLERANCE)
    }

    pub fn order_with(&self, cap: u64, tolerance: f64) -> OrderResult {
        match self {
            SphereIsometry::PlanarRotation(angle) => OrderResult::Finite(angle.order()),
            SphereIsometry::BasisPermutation { images, .. } => permutation_order(images),
            SphereIsometry::BlockDiagonal { base, .. } => {
                // blocks repeat the base, so the order is the base's
                matrix_order(base, cap, tolerance)
            }
            SphereIsometry::Composition(factors) => {
                if let Some(total) = self.total_angle() {
                    return OrderResult::Finite(total.order());
                }
                let mut order = 1u64;
                for f in factors {
                    match f.order_with(cap, tolerance) {
                        OrderResult::Finite(m) => order = order.lcm(&m),
                        undetermined => return undetermined,
                    }
                }
                OrderResult::Finite(order)
            }
        }
    }

    pub fn to_descriptor(&self) -> OperatorDescriptor {
        match self {
            SphereIsometry::BasisPermutation { ball, element, .. } => {
                OperatorDescriptor::BasisPermutation {
                    ball: ball.descriptor(),
                    element: element.clone(),
                }
            }
            SphereIsometry::PlanarRotation(angle) => {
                OperatorDescriptor::PlanarRotation { angle: *angle }
            }
            SphereIsometry::BlockDiagonal { base, blocks } => OperatorDescriptor::BlockDiagonal {
                dimension: base.nrows(),
                blocks: *blocks,
                base_column_major: base.as_slice().to_vec(),
            },
            SphereIsometry::Composition(factors) => OperatorDescriptor::Composition {
                factors: factors.iter().map(|f| f.to_descriptor()).collect(),
            },
        }
    }

    pub fn from_descriptor(descriptor: &OperatorDescriptor, cap: usize) -> Result<SphereIsometry> {
        match descriptor {
            OperatorDescriptor::BasisPermutation { ball, element } => {
                let ball = Ball::enumerate_with_cap(ball.kind.clone(), ball.radius, cap)?;
                right_translation(element, &ball)
            }
            OperatorDescriptor::PlanarRotation { angle } => {
                Ok(SphereIsometry::PlanarRotation(*angle))
            }
            OperatorDescriptor::BlockDiagonal {
                dimension,
                blocks,
                base_column_major,
            } => {
                if base_column_major.len() != dimension * dimension {
                    return Err(Error::MalformedInput(format!(
                        "base matrix needs {} entries, got {}",
                        dimension * dimension,
                        base_column_major.len()
                    )));
                }
                let base = DMatrix::from_column_slice(*dimension, *dimension, base_column_major);
                inflate(&base, *blocks)
            }
            OperatorDescriptor::Composition { factors } => Ok(SphereIsometry::Composition(
                factors
                    .iter()
                    .map(|f| SphereIsometry::from_descriptor(f, cap))
                    .collect::<Result<Vec<_>>>()?,
            )),
        }
    }
}

/// Order of a partial permutation: undetermined when any index is dropped,
/// otherwise the lcm of its cycle lengths.
fn permutation_order(images: &[Option<usize>]) -> OrderResult {
    let mut resolved = Vec::with_capacity(images.len());
    for im in images {
        match im {
            Some(j) => resolved.push(*j),
            None => {
                return OrderResult::Undetermined(
                    "translation is truncated: some basis images leave the ball".into(),
                )
            }
        }
    }
    let mut seen = vec![false; resolved.len()];
    let mut order = 1u64;
    for start in 0..resolved.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut at = start;
        while !seen[at] {
            seen[at] = true;
            at = resolved[at];
            len += 1;
        }
        order = order.lcm(&len);
    }
    OrderResult::Finite(order)
}

pub(crate) fn matrix_order(m: &DMatrix<f64>, cap: u64, tolerance: f64) -> OrderResult {
    let n = m.nrows();
    let identity = DMatrix::<f64>::identity(n, n);
    let mut power = m.clone();
    for k in 1..=cap {
        if (&power - &identity).abs().max() <= tolerance {
            return OrderResult::Finite(k);
        }
        power = m * power;
    }
    OrderResult::Undetermined(format!(
        "no power within {tolerance:.1e} of the identity up to exponent {cap}"
    ))
}

/// JSON-facing form of an operator: variant tag plus the parameters needed
/// to rebuild it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorDescriptor {
    BasisPermutation {
        ball: BallDescriptor,
        element: GroupElement,
    },
    PlanarRotation {
        angle: ExactAngle,
    },
    BlockDiagonal {
        dimension: usize,
        blocks: usize,
        base_column_major: Vec<f64>,
    },
    Composition {
        factors: Vec<OperatorDescriptor>,
    },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{GroupKind, DEFAULT_BALL_CAP};

    fn z_ball(radius: u32) -> Arc<Ball> {
        Ball::enumerate(GroupKind::FreeAbelian(1), radius).unwrap()
    }

    fn position_of(ball: &Ball, value: i64) -> usize {
        ball.position(&GroupElement::free_abelian(vec![value]))
            .unwrap()
    }

    #[test]
    fn shift_moves_basis_vectors_backwards() {
        // e_h ↦ e_{hg⁻¹}: with g = 1 the basis vector at 0 lands at -1
        let ball = z_ball(3);
        let op = right_translation(&GroupElement::free_abelian(vec![1]), &ball).unwrap();
        let e0 = TruncatedVector::basis(ball.clone(), position_of(&ball, 0));
        let moved = op.apply_component(&e0).unwrap();
        let expect = TruncatedVector::basis(ball.clone(), position_of(&ball, -1));
        assert_eq!(moved, expect);
    }

    #[test]
    fn identity_translation_has_no_drops() {
        let ball = z_ball(3);
        let op = right_translation(&GroupElement::free_abelian(vec![0]), &ball).unwrap();
        assert!(op.dropped_positions().is_empty());
        assert_eq!(op.order().finite(), Some(1));
        assert_eq!(op.exact_domain(), ExactDomain::WithinRadius(3));
    }

    #[test]
    fn drops_are_exactly_the_far_boundary() {
        // g = 1 on radius-3 ball: h g⁻¹ = h − 1 leaves iff h = −3
        let ball = z_ball(3);
        let op = right_translation(&GroupElement::free_abelian(vec![1]), &ball).unwrap();
        let dropped = op.dropped_positions();
        assert_eq!(dropped, vec![position_of(&ball, -3)]);
        assert_eq!(op.exact_domain(), ExactDomain::WithinRadius(2));
        assert!(matches!(op.order(), OrderResult::Undetermined(_)));
    }

    #[test]
    fn oversized_shift_has_empty_exact_domain() {
        let ball = z_ball(2);
        let op = right_translation(&GroupElement::free_abelian(vec![3]), &ball).unwrap();
        assert_eq!(op.exact_domain(), ExactDomain::Empty);
        assert_eq!(op.exact_domain().usable_radius(2), None);
    }

    #[test]
    fn norm_is_bitwise_preserved_on_the_exact_domain() {
        let ball = z_ball(4);
        let op = right_translation(&GroupElement::free_abelian(vec![2]), &ball).unwrap();
        // support within radius 2 = 4 − |g|
        let mut v = TruncatedVector::zeros(ball.clone());
        for value in -2..=2i64 {
            v.coefficients_mut()[position_of(&ball, value)] = 0.1 + value as f64 * 0.3;
        }
        let moved = op.apply_component(&v).unwrap();
        assert_eq!(moved.norm(), v.norm());
    }

    #[test]
    fn translation_on_finite_group_is_a_permutation_of_full_order() {
        let ball = Ball::enumerate(GroupKind::FiniteCyclicProduct(vec![6]), 3).unwrap();
        assert_eq!(ball.len(), 6);
        let op = right_translation(&GroupElement::cyclic(vec![1]), &ball).unwrap();
        assert!(op.dropped_positions().is_empty());
        assert_eq!(op.order().finite(), Some(6));
    }

    #[test]
    fn half_turn_rotation_negates_pairs() {
        let ball = z_ball(2);
        let op = rotation(ExactAngle::half_turn());
        let v = PairedVector::new(
            TruncatedVector::basis(ball.clone(), 0),
            TruncatedVector::basis(ball.clone(), 1),
        )
        .unwrap();
        let moved = op.apply(&v).unwrap();
        assert_eq!(moved, v.scaled(-1.0));
    }

    #[test]
    fn rotation_composition_adds_angles() {
        let quarter = rotation(ExactAngle::new(1, 4).unwrap());
        let composed = SphereIsometry::Composition(vec![quarter.clone(), quarter]);
        assert_eq!(composed.total_angle(), Some(ExactAngle::half_turn()));
        assert_eq!(composed.order().finite(), Some(2));
        let ball = z_ball(1);
        let v = PairedVector::new(
            TruncatedVector::basis(ball.clone(), 0),
            TruncatedVector::zeros(ball.clone()),
        )
        .unwrap();
        let moved = composed.apply(&v).unwrap();
        assert_eq!(moved, v.scaled(-1.0));
    }

    #[test]
    fn torsion_action_accumulates_the_expected_total() {
        // 2/4 + 3/3 = 3/2
        let op = torsion_action(&[(2, 2), (3, 1)], &[2, 3], &[1, 1]).unwrap();
        let total = op.total_angle().unwrap();
        assert_eq!((total.numerator(), total.denominator()), (3, 2));
        assert_eq!(op.order().finite(), Some(2));
    }

    #[test]
    fn torsion_action_rejects_bad_parameters() {
        assert!(matches!(
            torsion_action(&[(4, 1)], &[1], &[1]),
            Err(Error::NotPrime(4))
        ));
        assert!(matches!(
            torsion_action(&[(2, 2)], &[1], &[2]),
            Err(Error::NotPrimitive {
                k: 2,
                modulus: 4,
                gcd: 2
            })
        ));
        assert!(torsion_action(&[(2, 1)], &[1, 2], &[1]).is_err());
        // same prime twice is allowed here; the decision layer rejects it
        assert!(torsion_action(&[(2, 1), (2, 1)], &[1, 1], &[1, 1]).is_ok());
    }

    #[test]
    fn combined_action_shifts_then_rotates() {
        let ball = z_ball(3);
        let g = GroupElement::free_abelian(vec![1]);
        let op = combined_action(&g, &ball, &[(2, 1)], &[1], &[1]).unwrap();
        let v = PairedVector::new(
            TruncatedVector::basis(ball.clone(), position_of(&ball, 0)),
            TruncatedVector::zeros(ball.clone()),
        )
        .unwrap();
        let moved = op.apply(&v).unwrap();
        // (e_0, 0) → (e_{−1}, 0) → (−e_{−1}, 0)
        let expect = PairedVector::new(
            TruncatedVector::basis(ball.clone(), position_of(&ball, -1)).scaled(-1.0),
            TruncatedVector::zeros(ball.clone()),
        )
        .unwrap();
        assert_eq!(moved, expect);
    }

    #[test]
    fn inflation_requires_orthogonality() {
        let skewed = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(matches!(
            inflate(&skewed, 2),
            Err(Error::NotOrthogonal { .. })
        ));
        let (c, s) = ExactAngle::new(1, 3).unwrap().cos_sin();
        let r = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        let op = inflate(&r, 3).unwrap();
        assert_eq!(op.order().finite(), Some(3));
        let m = op.dense_flat().unwrap();
        assert_eq!(m.nrows(), 6);
        // T³ = I at working precision
        let cube = &m * &m * &m;
        assert!((cube - DMatrix::<f64>::identity(6, 6)).abs().max() < 1e-12);
    }

    #[test]
    fn negated_identity_inflation() {
        let neg = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, -1.0]);
        let op = inflate(&neg, 2).unwrap();
        let m = op.dense_flat().unwrap();
        assert_eq!(m, -DMatrix::<f64>::identity(4, 4));
        assert_eq!(op.order().finite(), Some(2));
    }

    #[test]
    fn dense_paired_agrees_with_apply() {
        let ball = z_ball(2);
        let g = GroupElement::free_abelian(vec![1]);
        let op = combined_action(&g, &ball, &[(3, 1)], &[1], &[1]).unwrap();
        let n = ball.len();
        let m = op.dense_paired(n).unwrap();
        let v = PairedVector::new(
            TruncatedVector::basis(ball.clone(), 0),
            TruncatedVector::basis(ball.clone(), 1).scaled(0.5),
        )
        .unwrap();
        let via_apply = op.apply(&v).unwrap().flat();
        let via_dense = &m * DMatrix::from_column_slice(2 * n, 1, &v.flat());
        for (a, b) in via_apply.iter().zip(via_dense.column(0).iter()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn flat_application_matches_paired() {
        let op = rotation(ExactAngle::new(1, 6).unwrap());
        let ball = z_ball(1);
        let v = PairedVector::new(
            TruncatedVector::basis(ball.clone(), 0),
            TruncatedVector::basis(ball.clone(), 2),
        )
        .unwrap();
        let flat = op.apply_flat(&v.flat()).unwrap();
        let paired = op.apply(&v).unwrap().flat();
        assert_eq!(flat, paired);
    }

    #[test]
    fn descriptor_round_trip() {
        let ball = z_ball(2);
        let g = GroupElement::free_abelian(vec![1]);
        let op = combined_action(&g, &ball, &[(2, 1), (3, 1)], &[1, 2], &[1, 1]).unwrap();
        let descriptor = op.to_descriptor();
        let json = serde_json::to_string(&descriptor).unwrap();
        let parsed: OperatorDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, descriptor);
        let rebuilt = SphereIsometry::from_descriptor(&parsed, DEFAULT_BALL_CAP).unwrap();
        assert_eq!(rebuilt, op);
    }

    #[test]
    fn order_cap_reports_undetermined() {
        // rotation by an irrational-looking float angle: never returns to I
        let t = 1.0f64;
        let m = DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()]);
        let op = inflate(&m, 1).unwrap();
        assert!(matches!(
            op.order_with(64, 1e-9),
            OrderResult::Undetermined(_)
        ));
    }
}
