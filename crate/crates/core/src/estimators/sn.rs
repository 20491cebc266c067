//! Sn = lomed_i himed_j |x_i - x_j|.

use super::{rank, RawScaleEstimate, Sample};
use crate::error::Result;
use crate::order_stats::{self, Rank};

/// Direct O(n^2) evaluation. The inner high median runs over all `j`,
/// including `j = i`.
pub fn sn_raw_naive(x: &Sample) -> Result<RawScaleEstimate> {
    let n = x.require_scale()?;
    let values = x.as_slice();
    let mut row = vec![0.0; n];
    let mut inner = Vec::with_capacity(n);
    for &xi in values {
        for (d, &xj) in row.iter_mut().zip(values) {
            *d = (xi - xj).abs();
        }
        inner.push(order_stats::high_median(&mut row)?);
    }
    Ok(RawScaleEstimate::new(order_stats::low_median(&mut inner)?))
}

/// O(n log n) evaluation on a sorted copy.
///
/// For a sorted point `a[i]` the `k` values closest to it (itself included)
/// occupy a contiguous window `a[l..l + k]`, so the inner high median is the
/// smallest window radius `max(a[i] - a[l], a[l + k - 1] - a[i])` over the
/// admissible `l`. The radius is unimodal in `l`, which a binary search finds.
pub fn sn_fast(x: &Sample) -> Result<RawScaleEstimate> {
    x.require_scale()?;
    Ok(RawScaleEstimate::new(sn_sorted(&x.sorted_copy())))
}

/// Sn of an ascending slice with at least two elements.
pub(crate) fn sn_sorted(a: &[f64]) -> f64 {
    let n = a.len();
    debug_assert!(n >= 2);
    let k = Rank::high_median(n).expect("n >= 2").get();
    let mut inner: Vec<f64> = (0..n).map(|i| kth_nearest_distance(a, i, k)).collect();
    order_stats::select_index(&mut inner, rank((n + 1) / 2).get() - 1)
}

/// k-th smallest `|a[i] - a[j]|` over all j (j = i counts), `a` sorted,
/// `1 <= k <= a.len()`.
fn kth_nearest_distance(a: &[f64], i: usize, k: usize) -> f64 {
    let n = a.len();
    let left_gap = |l: usize| a[i] - a[l];
    let right_gap = |l: usize| a[l + k - 1] - a[i];

    let radius = |l: usize| left_gap(l).max(right_gap(l));

    // first l in [lo, hi] with right_gap(l) >= left_gap(l), or hi if none
    let first = (i + 1).saturating_sub(k);
    let mut lo = first;
    let mut hi = i.min(n - k);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if right_gap(mid) >= left_gap(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    if lo > first {
        radius(lo).min(radius(lo - 1))
    } else {
        radius(lo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(values: &[f64]) -> Sample {
        Sample::new(values.to_vec()).unwrap()
    }

    /// Double loop with full sorts.
    fn brute_force(values: &[f64]) -> f64 {
        let n = values.len();
        let mut inner: Vec<f64> = values
            .iter()
            .map(|xi| {
                let mut d: Vec<f64> = values.iter().map(|xj| (xi - xj).abs()).collect();
                d.sort_by(f64::total_cmp);
                d[n / 2]
            })
            .collect();
        inner.sort_by(f64::total_cmp);
        inner[(n + 1) / 2 - 1]
    }

    #[test]
    fn three_points() {
        let x = sample(&[1.0, 2.0, 3.0]);
        assert_eq!(sn_raw_naive(&x).unwrap().value(), 1.0);
        assert_eq!(sn_fast(&x).unwrap().value(), 1.0);
    }

    #[test]
    fn constant_is_zero() {
        let x = sample(&[2.5; 4]);
        assert_eq!(sn_raw_naive(&x).unwrap().value(), 0.0);
        assert_eq!(sn_fast(&x).unwrap().value(), 0.0);
    }

    #[test]
    fn two_points() {
        let x = sample(&[5.0, 2.0]);
        assert_eq!(sn_raw_naive(&x).unwrap().value(), 3.0);
        assert_eq!(sn_fast(&x).unwrap().value(), 3.0);
    }

    #[test]
    fn too_small() {
        let x = sample(&[1.0]);
        assert!(sn_raw_naive(&x).is_err());
        assert!(sn_fast(&x).is_err());
    }

    #[test]
    fn kth_nearest_matches_scan() {
        let a: [f64; 8] = [0.0, 0.0, 1.0, 3.0, 3.0, 3.5, 7.0, 20.0];
        for i in 0..a.len() {
            let mut d: Vec<f64> = a.iter().map(|x| (a[i] - x).abs()).collect();
            d.sort_by(f64::total_cmp);
            for k in 1..=a.len() {
                assert_eq!(kth_nearest_distance(&a, i, k), d[k - 1], "i={i} k={k}");
            }
        }
    }

    proptest! {
        #[test]
        fn naive_matches_brute_force(values in prop::collection::vec(
            prop_oneof![(-4i32..4).prop_map(f64::from), -3.0f64..3.0], 2..=12)
        ) {
            prop_assert_eq!(sn_raw_naive(&sample(&values)).unwrap().value(), brute_force(&values));
        }

        #[test]
        fn fast_matches_naive(values in prop::collection::vec(
            prop_oneof![(-6i32..6).prop_map(f64::from), -1e3f64..1e3], 2..=150)
        ) {
            let x = sample(&values);
            prop_assert_eq!(sn_fast(&x).unwrap(), sn_raw_naive(&x).unwrap());
        }
    }
}
