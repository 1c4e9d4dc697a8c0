use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Dense row-major matrix of arbitrary-precision integers.
///
/// Smith reduction drives entries through unimodular transforms that can
/// blow up quickly, so fixed-width arithmetic is never used here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(
            rows.iter().all(|r| r.len() == ncols),
            "ragged rows in matrix construction"
        );
        IntMatrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = BigInt::from(d);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    pub fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let term = factor * &self[(source, j)];
            self[(target, j)] += term;
        }
    }

    /// col[target] += factor * col[source]
    pub fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let term = factor * &self[(i, source)];
            self[(i, target)] += term;
        }
    }

    pub fn negate_row(&mut self, row: usize) {
        for j in 0..self.cols {
            let v = -self[(row, j)].clone();
            self[(row, j)] = v;
        }
    }

    pub fn multiply(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let term = a * &other[(k, j)];
                    out[(i, j)] += term;
                }
            }
        }
        out
    }

    /// Pivot search over the trailing submatrix starting at (from, from):
    /// smallest nonzero absolute value, ties broken by row-major position.
    pub fn min_abs_pivot(&self, from: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in from..self.rows {
            for j in from..self.cols {
                let v = &self[(i, j)];
                if v.is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some(b) => {
                        if v.abs() < self[b].abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        best
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiply_identity() {
        let a = IntMatrix::from_i64_rows(&[vec![1, 2], vec![3, 4]]);
        let id = IntMatrix::identity(2);
        assert_eq!(a.multiply(&id), a);
        assert_eq!(id.multiply(&a), a);
    }

    #[test]
    fn pivot_prefers_smallest_absolute_value() {
        let a = IntMatrix::from_i64_rows(&[vec![4, -7], vec![0, 2]]);
        assert_eq!(a.min_abs_pivot(0), Some((1, 1)));
    }

    #[test]
    fn pivot_tie_breaks_row_major() {
        let a = IntMatrix::from_i64_rows(&[vec![2, -2], vec![2, 2]]);
        assert_eq!(a.min_abs_pivot(0), Some((0, 0)));
    }
}
