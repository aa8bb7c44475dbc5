//! Series acceleration for sequences of partial sums.

use crate::scalar::Real;

/// Wynn's epsilon algorithm applied to a sequence of partial sums.
///
/// Returns the last even-column entry of the table together with the
/// difference to the previous even-column estimate, which serves as an
/// error estimate. With fewer than three partial sums the last sum is
/// returned unchanged.
pub fn wynn_epsilon<T: Real>(partial_sums: &[T]) -> (T, T) {
    let n = partial_sums.len();
    match n {
        0 => return (T::zero(), T::infinity()),
        1 | 2 => {
            let last = partial_sums[n - 1];
            let err = if n == 2 {
                (last - partial_sums[0]).abs()
            } else {
                T::infinity()
            };
            return (last, err);
        }
        _ => {}
    }

    // eps[k] holds column k for the current anti-diagonal.
    let mut prev: Vec<T> = Vec::new();
    let mut best = partial_sums[n - 1];
    let mut best_err = T::infinity();
    let mut estimates: Vec<T> = Vec::new();
    for &s in partial_sums {
        let mut cur = vec![s];
        // column -1 is implicitly zero
        for k in 1..=prev.len() {
            let left_below = if k >= 2 { prev[k - 2] } else { T::zero() };
            let diff = cur[k - 1] - prev[k - 1];
            if diff == T::zero() || !diff.is_finite() {
                break;
            }
            cur.push(left_below + T::one() / diff);
        }
        // highest even column of this anti-diagonal
        let top = if (cur.len() - 1) % 2 == 0 {
            cur.len() - 1
        } else {
            cur.len() - 2
        };
        if cur[top].is_finite() {
            estimates.push(cur[top]);
        }
        prev = cur;
    }
    if let [.., a, b] = estimates.as_slice() {
        best = *b;
        best_err = (*b - *a).abs();
    }
    (best, best_err)
}
