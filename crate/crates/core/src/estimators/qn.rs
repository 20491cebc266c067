//! Qn = k-th smallest of { |x_i - x_j| : i < j }, with h = floor(n/2) + 1 and
//! k = h(h - 1)/2.

use super::{rank, RawScaleEstimate, Sample};
use crate::error::Result;
use crate::order_stats::{self, PivotSource, WeightedValue};

fn qn_rank(n: usize) -> usize {
    let h = n / 2 + 1;
    h * (h - 1) / 2
}

/// Materializes all n(n-1)/2 differences and selects from them.
pub fn qn_raw_naive(x: &Sample) -> Result<RawScaleEstimate> {
    let n = x.require_scale()?;
    let values = x.as_slice();
    let mut diffs = Vec::with_capacity(n * (n - 1) / 2);
    for (i, &xi) in values.iter().enumerate() {
        for &xj in &values[i + 1..] {
            diffs.push((xi - xj).abs());
        }
    }
    let q = order_stats::select_kth(&mut diffs, rank(qn_rank(n)))?;
    Ok(RawScaleEstimate::new(q))
}

/// O(n log n) time, O(n) space selection over the implicit matrix
/// `d(i, j) = a[j] - a[i]`, `i < j`, of a sorted copy `a`.
///
/// Every row is increasing in `j`. Each row keeps a half-open window
/// `[lo_i, hi_i)` of columns that may still hold the answer, and each round
/// narrows all windows to a value bracket `[v_lo, v_hi]` after counting the
/// matrix entries below `v_lo` and at-or-below `v_hi` with a two-pointer
/// sweep. Brackets normally come from a stratified sample of the remaining
/// candidates, which leaves a few rounds in total. After a round that removes
/// less than a quarter of the candidates, the next trial is the weighted high
/// median of the window midpoints (weights = window widths), which always
/// removes at least a quarter. Once at most n candidates remain they are
/// gathered and selected directly.
pub fn qn_fast(x: &Sample) -> Result<RawScaleEstimate> {
    x.require_scale()?;
    Ok(RawScaleEstimate::new(qn_sorted(&x.sorted_copy())))
}

/// Qn of an ascending slice with at least two elements.
pub(crate) fn qn_sorted(a: &[f64]) -> f64 {
    select_pairwise(a, true)
}

/// With `sampling` off every round uses the weighted-median trial.
fn select_pairwise(a: &[f64], sampling: bool) -> f64 {
    let n = a.len();
    debug_assert!(n >= 2);
    let target = qn_rank(n) as u64;
    let mut m = Windows::new(a);
    let mut rng = PivotSource::new(n);
    let mut sampled = sampling;
    while m.remaining > n as u64 {
        let before = m.remaining;
        let (v_lo, v_hi) = if sampled {
            m.sample_bracket(target, n, &mut rng)
        } else {
            let t = m.midpoint_median();
            (t, t)
        };
        if let Some(v) = m.narrow(target, v_lo, v_hi) {
            return v;
        }
        sampled = sampling && m.remaining * 4 <= before * 3;
    }
    m.gather_select(target)
}

/// Candidate windows over the rows of the difference matrix. Column indices
/// are stored as u32 to halve the working set.
struct Windows<'a> {
    a: &'a [f64],
    lo: Vec<u32>,
    hi: Vec<u32>,
    first_ge: Vec<u32>,
    first_gt: Vec<u32>,
    remaining: u64,
}

impl<'a> Windows<'a> {
    fn new(a: &'a [f64]) -> Self {
        let n = a.len();
        assert!(n < u32::MAX as usize, "sample too large");
        Windows {
            a,
            lo: (1..=n as u32).collect(),
            hi: vec![n as u32; n],
            first_ge: vec![0; n],
            first_gt: vec![0; n],
            remaining: (n as u64) * (n as u64 - 1) / 2,
        }
    }

    /// Entries left of the windows; all of them rank below the answer.
    fn discarded_low(&self) -> u64 {
        self.lo.iter().enumerate().map(|(i, &l)| u64::from(l) - i as u64 - 1).sum()
    }

    fn midpoint_median(&self) -> f64 {
        let mut mids: Vec<WeightedValue> = Vec::new();
        for (i, (&l, &h)) in self.lo.iter().zip(&self.hi).enumerate() {
            if l < h {
                let width = h - l;
                let mid = (l + width / 2) as usize;
                mids.push(WeightedValue::new(self.a[mid] - self.a[i], u64::from(width)));
            }
        }
        order_stats::weighted_high_median(&mut mids).expect("at least one open row")
    }

    /// Two order statistics of a systematic sample of about `size` remaining
    /// candidates, placed a few standard errors either side of the target.
    fn sample_bracket(&self, target: u64, size: usize, rng: &mut PivotSource) -> (f64, f64) {
        let total = self.remaining;
        let size = (size as u64).min(total);
        let step = total as f64 / size as f64;
        let mut next = rng.next_index(1 << 20) as f64 / f64::from(1 << 20) * step;
        let mut sample = Vec::with_capacity(size as usize);
        let mut offset = 0u64;
        for (i, (&l, &h)) in self.lo.iter().zip(&self.hi).enumerate() {
            let width = u64::from(h - l);
            let end = (offset + width) as f64;
            while next < end && sample.len() < size as usize {
                let j = l as usize + (next as u64 - offset) as usize;
                sample.push(self.a[j] - self.a[i]);
                next += step;
            }
            offset += width;
        }
        let s = sample.len();
        if s == 0 {
            let t = self.midpoint_median();
            return (t, t);
        }
        let rank = (target - self.discarded_low()) as f64 / total as f64 * s as f64;
        let q = (rank / s as f64).clamp(0.0, 1.0);
        let spread = 3.0 * (s as f64 * q * (1.0 - q)).sqrt() + 2.0;
        let lo_idx = (rank - spread).floor().max(0.0) as usize;
        let hi_idx = ((rank + spread).ceil() as usize).min(s - 1);
        let v_lo = order_stats::select_index(&mut sample, lo_idx);
        let v_hi = order_stats::select_index(&mut sample[lo_idx..], hi_idx - lo_idx);
        (v_lo, v_hi)
    }

    /// Counts entries `< v_lo` and `<= v_hi` and shrinks the windows to the
    /// side holding the answer. Returns the answer if it is pinned down.
    fn narrow(&mut self, target: u64, v_lo: f64, v_hi: f64) -> Option<f64> {
        let a = self.a;
        let n = a.len();
        let mut count_lt: u64 = 0;
        let mut count_le: u64 = 0;
        let mut jl = 1;
        let mut jg = 1;
        for i in 0..n {
            jl = jl.max(i + 1);
            while jl < n && a[jl] - a[i] < v_lo {
                jl += 1;
            }
            jg = jg.max(jl);
            while jg < n && a[jg] - a[i] <= v_hi {
                jg += 1;
            }
            self.first_ge[i] = jl as u32;
            self.first_gt[i] = jg as u32;
            count_lt += (jl - i - 1) as u64;
            count_le += (jg - i - 1) as u64;
        }

        let (lo, hi) = (&mut self.lo, &mut self.hi);
        if target <= count_lt {
            for i in 0..n {
                hi[i] = hi[i].min(self.first_ge[i]).max(lo[i]);
            }
        } else if target > count_le {
            for i in 0..n {
                lo[i] = lo[i].max(self.first_gt[i]).min(hi[i]);
            }
        } else if v_lo == v_hi {
            return Some(v_lo);
        } else {
            for i in 0..n {
                lo[i] = lo[i].max(self.first_ge[i]).min(hi[i]);
                hi[i] = hi[i].min(self.first_gt[i]).max(lo[i]);
            }
        }
        self.remaining = lo.iter().zip(hi.iter()).map(|(&l, &h)| u64::from(h - l)).sum();
        None
    }

    fn gather_select(&self, target: u64) -> f64 {
        let mut candidates = Vec::with_capacity(self.remaining as usize);
        for (i, (&l, &h)) in self.lo.iter().zip(&self.hi).enumerate() {
            for &aj in &self.a[l as usize..h as usize] {
                candidates.push(aj - self.a[i]);
            }
        }
        let k = (target - self.discarded_low()) as usize;
        order_stats::select_index(&mut candidates, k - 1)
    }
}
