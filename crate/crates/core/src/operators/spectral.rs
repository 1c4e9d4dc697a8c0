//! Fixed spaces, kernels, and the eigenspace decomposition of finite-order
//! orthogonal operators. Exact criteria are used whenever the operator's
//! structure supports them; numerics enter only through singular-value
//! thresholds on explicit matrices.

use nalgebra::DMatrix;

use super::angle::ExactAngle;
use super::isometry::{matrix_order, OrderResult, SphereIsometry};
use super::poly::{cyclotomic_poly, IntPolynomial};
use crate::error::{Error, Result};

/// Singular values at or below this count toward kernels. Every operator
/// built by this crate keeps its nonzero spectrum at trigonometric
/// distance ≥ |1 − cos(2π/m)| from zero, far above the threshold.
pub const KERNEL_THRESHOLD: f64 = 1e-8;

const ORDER_CAP: u64 = 512;
const ORDER_TOLERANCE: f64 = 1e-9;

/// Kernel of a matrix by singular-value thresholding.
#[derive(Debug, Clone)]
pub struct KernelReport {
    pub dimension: usize,
    /// Orthonormal kernel basis, one column per dimension.
    pub basis: DMatrix<f64>,
    pub threshold: f64,
    /// Smallest singular value above the threshold divided by the largest
    /// at or below it; `None` when either side is empty. Large ratios mean
    /// the threshold sits in a genuine spectral gap.
    pub gap_ratio: Option<f64>,
    pub singular_values: Vec<f64>,
}

pub fn kernel(m: &DMatrix<f64>, threshold: f64) -> KernelReport {
    let svd = m.clone().svd(false, true);
    let mut singular_values: Vec<f64> = svd.singular_values.iter().copied().collect();
    singular_values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let v_t = svd.v_t.expect("svd computed with right singular vectors");
    let n = m.ncols();

    // pair each singular value with its right singular vector, small last
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap()
    });
    let kernel_indices: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| svd.singular_values[i] <= threshold)
        .collect();
    // a wide matrix has cols > singular values; the missing directions are
    // also kernel, but every operator here is square, so basis columns come
    // from v_t rows alone
    let mut basis = DMatrix::zeros(n, kernel_indices.len());
    for (col, &i) in kernel_indices.iter().enumerate() {
        basis.set_column(col, &v_t.row(i).transpose());
    }

    let above = singular_values
        .iter()
        .copied()
        .filter(|&s| s > threshold)
        .fold(None::<f64>, |acc, s| Some(acc.map_or(s, |a| a.min(s))));
    let below = singular_values
        .iter()
        .copied()
        .filter(|&s| s <= threshold)
        .fold(None::<f64>, |acc, s| Some(acc.map_or(s, |a| a.max(s))));
    let gap_ratio = match (above, below) {
        (Some(a), Some(b)) if b > 0.0 => Some(a / b),
        _ => None,
    };

    KernelReport {
        dimension: kernel_indices.len(),
        basis,
        threshold,
        gap_ratio,
        singular_values,
    }
}

/// Kernel of (M − I): the numerically detected fixed space of M.
pub fn fixed_space_matrix(m: &DMatrix<f64>, threshold: f64) -> KernelReport {
    let n = m.nrows();
    kernel(&(m - DMatrix::<f64>::identity(n, n)), threshold)
}

/// How a fixed-space dimension was established.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixedSpaceMethod {
    /// Rational total angle: fixed space is everything or nothing.
    ExactAngle,
    /// Complete cycles of a basis permutation.
    CycleStructure,
    /// Singular-value kernel of (M − I).
    NumericalKernel,
}

#[derive(Debug, Clone)]
pub struct FixedSpaceReport {
    /// Dimension within the paired truncation of 2·`pairs` coordinates.
    pub dimension: usize,
    pub method: FixedSpaceMethod,
    pub gap_ratio: Option<f64>,
}

/// Fixed space of an operator on the paired truncation with `pairs`
/// coordinates per component. Exact methods are preferred: rotation
/// compositions decide by integrality of the total angle, drop-free basis
/// permutations by their cycle structure; everything else falls back to
/// the numerical kernel of (M − I).
pub fn fixed_space(op: &SphereIsometry, pairs: usize, threshold: f64) -> Result<FixedSpaceReport> {
    if let Some(total) = op.total_angle() {
        return Ok(FixedSpaceReport {
            dimension: if total.is_integral() { 2 * pairs } else { 0 },
            method: FixedSpaceMethod::ExactAngle,
            gap_ratio: None,
        });
    }
    if let SphereIsometry::BasisPermutation { images, .. } = op {
        if !images.contains(&None) {
            let cycles = complete_cycles(images);
            return Ok(FixedSpaceReport {
                dimension: 2 * cycles,
                method: FixedSpaceMethod::CycleStructure,
                gap_ratio: None,
            });
        }
    }
    let m = op.dense_paired(pairs)?;
    let report = fixed_space_matrix(&m, threshold);
    Ok(FixedSpaceReport {
        dimension: report.dimension,
        method: FixedSpaceMethod::NumericalKernel,
        gap_ratio: report.gap_ratio,
    })
}

fn complete_cycles(images: &[Option<usize>]) -> usize {
    let mut seen = vec![false; images.len()];
    let mut cycles = 0;
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        let mut at = start;
        loop {
            seen[at] = true;
            match images[at] {
                Some(next) if next == start => {
                    cycles += 1;
                    break;
                }
                Some(next) if !seen[next] => at = next,
                // hit a drop, or merged into a path already visited
                _ => break,
            }
        }
    }
    cycles
}

/// Embed a real operator into the complexification: block-diagonal action
/// on stacked (real, imaginary) coordinates.
pub fn complexified(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(m);
    out.view_mut((n, n), (n, n)).copy_from(m);
    out
}

/// Multiplication by i on stacked (real, imaginary) coordinates.
pub fn j_operator(n: usize) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        out[(i, n + i)] = -1.0;
        out[(n + i, i)] = 1.0;
    }
    out
}

/// The real form of the complex matrix A + iB on stacked coordinates.
pub fn complex_pair_matrix(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((n, n), (n, n)).copy_from(a);
    out.view_mut((0, n), (n, n)).copy_from(&(-b));
    out.view_mut((n, 0), (n, n)).copy_from(b);
    out
}

/// One root-of-unity eigenspace of a finite-order operator: the projection
/// onto Ker(T − ξ_j I) in the complexification, stored as the real pair
/// (A, B) with P = A + iB.
#[derive(Debug, Clone)]
pub struct EigenspaceComponent {
    pub root_index: u64,
    /// arg(ξ_j) as the exact fraction j/m of a full turn.
    pub angle: ExactAngle,
    pub complex_dimension: usize,
    pub projection_real: DMatrix<f64>,
    pub projection_imag: DMatrix<f64>,
}

impl EigenspaceComponent {
    /// Real form of the projection on stacked (re, im) coordinates.
    pub fn real_projection(&self) -> DMatrix<f64> {
        complex_pair_matrix(&self.projection_real, &self.projection_imag)
    }

    /// Orthonormal basis of the eigenspace in stacked coordinates, one
    /// column per real dimension (twice the complex dimension).
    pub fn stacked_basis(&self) -> DMatrix<f64> {
        let p = self.real_projection();
        let svd = p.clone().svd(true, false);
        let u = svd.u.expect("svd computed with left singular vectors");
        let keep: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&i| svd.singular_values[i] > 0.5)
            .collect();
        let mut basis = DMatrix::zeros(p.nrows(), keep.len());
        for (col, &i) in keep.iter().enumerate() {
            basis.set_column(col, &u.column(i));
        }
        basis
    }
}

#[derive(Debug, Clone)]
pub struct EigenspaceDecomposition {
    pub order: u64,
    pub components: Vec<EigenspaceComponent>,
    /// max |Σ_j P_j − I| over entries, in the complexification.
    pub reconstruction_residual: f64,
    /// max over j of |T P_j − ξ_j P_j| entries.
    pub eigen_relation_residual: f64,
}

impl EigenspaceDecomposition {
    /// Components carrying a nonzero eigenspace.
    pub fn nontrivial(&self) -> impl Iterator<Item = &EigenspaceComponent> {
        self.components.iter().filter(|c| c.complex_dimension > 0)
    }
}

/// Split the complexified space into root-of-unity eigenspaces of a
/// finite-order orthogonal operator by averaging powers against each
/// character: P_j = (1/m) Σ_k ξ_j^{−k} T^k. Errors when T^m is not the
/// identity or when the projections fail to reconstruct it.
pub fn eigenspace_decomposition(
    m: &DMatrix<f64>,
    order: u64,
    tolerance: f64,
) -> Result<EigenspaceDecomposition> {
    if order == 0 {
        return Err(Error::InvalidArgument("order must be positive".into()));
    }
    if !m.is_square() {
        return Err(Error::InvalidArgument(
            "eigenspace decomposition needs a square matrix".into(),
        ));
    }
    let n = m.nrows();
    let identity = DMatrix::<f64>::identity(n, n);

    // powers T^0 .. T^{m-1}, and the closure check T^m = I
    let mut powers = Vec::with_capacity(order as usize);
    powers.push(identity.clone());
    for _ in 1..order {
        powers.push(m * powers.last().unwrap());
    }
    let closure = (m * powers.last().unwrap() - &identity).abs().max();
    if closure > tolerance {
        return Err(Error::NotFiniteOrder(format!(
            "T^{order} differs from the identity by {closure:.3e}"
        )));
    }

    let mut components = Vec::with_capacity(order as usize);
    let mut sum_real = DMatrix::<f64>::zeros(n, n);
    let mut sum_imag = DMatrix::<f64>::zeros(n, n);
    let mut eigen_relation_residual = 0.0f64;
    for j in 0..order {
        let mut a = DMatrix::<f64>::zeros(n, n);
        let mut b = DMatrix::<f64>::zeros(n, n);
        for (k, power) in powers.iter().enumerate() {
            // ξ_j^{−k} = cos(2πjk/m) − i sin(2πjk/m)
            let phase = ExactAngle::new((j as i64) * (k as i64), order as i64)?;
            let (c, s) = phase.cos_sin();
            a += power * (c / order as f64);
            b += power * (-s / order as f64);
        }
        sum_real += &a;
        sum_imag += &b;

        // T P_j = ξ_j P_j, split into real and imaginary parts
        let angle = ExactAngle::new(j as i64, order as i64)?;
        let (c, s) = angle.cos_sin();
        let relation_re = (m * &a - (&a * c - &b * s)).abs().max();
        let relation_im = (m * &b - (&a * s + &b * c)).abs().max();
        eigen_relation_residual = eigen_relation_residual.max(relation_re).max(relation_im);

        let real_rank = kernel_complement_rank(&complex_pair_matrix(&a, &b));
        components.push(EigenspaceComponent {
            root_index: j,
            angle,
            complex_dimension: real_rank / 2,
            projection_real: a,
            projection_imag: b,
        });
    }

    let reconstruction_residual = (&sum_real - &identity)
        .abs()
        .max()
        .max(sum_imag.abs().max());
    if reconstruction_residual > tolerance {
        return Err(Error::DefectiveDecomposition {
            residual: reconstruction_residual,
        });
    }

    Ok(EigenspaceDecomposition {
        order,
        components,
        reconstruction_residual,
        eigen_relation_residual,
    })
}

fn kernel_complement_rank(p: &DMatrix<f64>) -> usize {
    let svd = p.clone().svd(false, false);
    svd.singular_values.iter().filter(|&&s| s > 0.5).count()
}

/// Evaluate an integer polynomial on a matrix.
pub fn apply_polynomial(p: &IntPolynomial, m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    p.eval_matrix(m)
}

/// Largest singular value of Φ_index(T), after confirming T has finite
/// order at all (any order up to the search cap qualifies — the
/// interesting case is evaluating Φ_m on operators whose order differs
/// from m, where the residual stays away from zero).
pub fn check_cyclotomic_condition(m: &DMatrix<f64>, index: u64) -> Result<f64> {
    match matrix_order(m, ORDER_CAP, ORDER_TOLERANCE) {
        OrderResult::Finite(_) => {}
        OrderResult::Undetermined(reason) => return Err(Error::NotFiniteOrder(reason)),
    }
    let phi = cyclotomic_poly(index)?;
    let value = phi.eval_matrix(m)?;
    Ok(value.singular_values().max())
}
