//! Order-independent floating-point summation.
//!
//! Accumulates addends as a list of nonoverlapping partials via error-free
//! transformations (the scheme behind Python's `math.fsum`). Every two-sum
//! is exact, so the partials represent the true sum exactly and the rounded
//! result depends only on the multiset of addends, never on their order.

/// Exact accumulator over `f64` addends.
///
/// The final [`value`](ExactSum::value) is the true sum rounded once to the
/// nearest double, so two accumulators fed the same addends in different
/// orders return bit-identical results.
#[derive(Debug, Clone, Default)]
pub struct ExactSum {
    partials: Vec<f64>,
}

impl ExactSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add one (finite) addend.
    pub fn add(&mut self, mut x: f64) {
        debug_assert!(x.is_finite(), "ExactSum expects finite addends");
        let mut kept = 0;
        for j in 0..self.partials.len() {
            let mut y = self.partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            // two-sum: hi + lo == x + y exactly
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                self.partials[kept] = lo;
                kept += 1;
            }
            x = hi;
        }
        self.partials.truncate(kept);
        self.partials.push(x);
    }

    /// Round the exact sum of all partials to the nearest double.
    pub fn value(&self) -> f64 {
        let p = &self.partials;
        if p.is_empty() {
            return 0.0;
        }
        let mut n = p.len() - 1;
        let mut hi = p[n];
        let mut lo = 0.0;
        while n > 0 {
            let x = hi;
            n -= 1;
            let y = p[n];
            hi = x + y;
            let yr = hi - x;
            lo = y - yr;
            if lo != 0.0 {
                break;
            }
        }
        // round-half-even: if the discarded tail and the next partial agree
        // in sign, the midpoint must round away from hi
        if n > 0 && ((lo < 0.0 && p[n - 1] < 0.0) || (lo > 0.0 && p[n - 1] > 0.0)) {
            let y = lo * 2.0;
            let x = hi + y;
            if y == x - hi {
                hi = x;
            }
        }
        hi
    }
}

/// Sum of an iterator of addends, order-independent and correctly rounded.
pub fn exact_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = ExactSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Dot product with rounded term products and exact accumulation.
pub fn exact_dot(xs: &[f64], ys: &[f64]) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    exact_sum(xs.iter().zip(ys).map(|(x, y)| x * y))
}

/// Sum of squares, order-independent.
pub fn exact_sum_of_squares(xs: &[f64]) -> f64 {
    exact_sum(xs.iter().map(|x| x * x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ill_conditioned_cancellation() {
        // naive summation loses the 1.0 entirely
        assert_eq!(exact_sum([1e16, 1.0, -1e16]), 1.0);
        assert_eq!(exact_sum([1e100, 1.0, -1e100, 0.1]), 1.1);
    }

    #[test]
    fn order_independence_bitwise() {
        let xs = [0.1, 0.2, 0.3, 1e-9, -0.3, 7.5, 1e15, -1e15, 0.7];
        let forward = exact_sum(xs.iter().copied());
        let backward = exact_sum(xs.iter().rev().copied());
        assert_eq!(forward.to_bits(), backward.to_bits());
    }

    #[test]
    fn matches_plain_sum_on_exact_inputs() {
        assert_eq!(exact_sum([1.0, 2.0, 4.0]), 7.0);
        assert_eq!(exact_sum_of_squares(&[3.0, 4.0]), 25.0);
        assert_eq!(exact_dot(&[1.0, 2.0], &[3.0, 4.0]), 11.0);
    }

    #[test]
    fn empty_sum_is_zero() {
        assert_eq!(exact_sum([]), 0.0);
    }
}
