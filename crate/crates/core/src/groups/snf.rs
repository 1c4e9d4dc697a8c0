use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::groups::matrix::IntMatrix;

/// Smith normal form of an integer matrix.
///
/// `left * input * right == diagonal` holds exactly, both transforms are
/// unimodular, and the diagonal entries are nonnegative with d1 | d2 | ...
#[derive(Debug, Clone)]
pub struct SmithNormalForm {
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub matrix: IntMatrix,
}

/// Reduce `input` to diagonal divisor-chain form by unimodular row and
/// column operations. Pivots are chosen by smallest nonzero absolute value,
/// ties broken by row-major position, which makes the output deterministic.
pub fn smith_normal_form(input: &IntMatrix) -> SmithNormalForm {
    let rows = input.rows();
    let cols = input.cols();
    let mut m = input.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);

    let steps = rows.min(cols);
    for k in 0..steps {
        // pivot until the column, the row, and the divisor chain are all clean;
        // a missing pivot means the trailing submatrix is zero
        while let Some((pi, pj)) = m.min_abs_pivot(k) {
            m.swap_rows(k, pi);
            left.swap_rows(k, pi);
            m.swap_cols(k, pj);
            right.swap_cols(k, pj);

            // clear column k below the pivot
            let mut dirty = false;
            for i in k + 1..rows {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let q = &m[(i, k)] / &m[(k, k)];
                m.add_row_multiple(i, k, &(-&q));
                left.add_row_multiple(i, k, &(-q));
                if !m[(i, k)].is_zero() {
                    dirty = true; // remainder left; re-pivot on it
                }
            }
            if dirty {
                continue;
            }
            // clear row k right of the pivot
            for j in k + 1..cols {
                if m[(k, j)].is_zero() {
                    continue;
                }
                let q = &m[(k, j)] / &m[(k, k)];
                m.add_col_multiple(j, k, &(-&q));
                right.add_col_multiple(j, k, &(-q));
                if !m[(k, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisor-chain fix-up: fold any non-divisible entry into row k
            if let Some((i, _)) = first_non_divisible(&m, k) {
                m.add_row_multiple(k, i, &BigInt::from(1));
                left.add_row_multiple(k, i, &BigInt::from(1));
                continue;
            }
            break;
        }
    }

    // normalize signs so every invariant factor is nonnegative
    for k in 0..steps {
        if m[(k, k)].is_negative() {
            m.negate_row(k);
            left.negate_row(k);
        }
    }

    let diagonal = (0..steps).map(|k| m[(k, k)].clone()).collect();
    SmithNormalForm {
        diagonal,
        left,
        right,
        matrix: m,
    }
}

fn first_non_divisible(m: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let d = &m[(k, k)];
    if d.is_zero() {
        return None;
    }
    for i in k + 1..m.rows() {
        for j in k + 1..m.cols() {
            if !(&m[(i, j)] % d).is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}
