//! Order-statistic selection.
//!
//! Everything here works on multisets of finite reals: duplicates are ordinary
//! members and no index-based tie breaking happens. Selection is an iterative
//! three-way-partition quickselect whose pivots come from a fixed-seed
//! SplitMix64 sequence, so a given input always takes the same path.

use std::num::NonZeroUsize;

use crate::error::{Error, Result};

/// 1-based position in ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rank(NonZeroUsize);

impl Rank {
    pub fn new(k: usize) -> Option<Self> {
        NonZeroUsize::new(k).map(Rank)
    }

    pub fn get(self) -> usize {
        self.0.get()
    }

    /// Rank of the low median, `floor((n + 1) / 2)`.
    pub fn low_median(n: usize) -> Option<Self> {
        Self::new((n + 1) / 2)
    }

    /// Rank of the high median, `floor(n / 2) + 1`.
    pub fn high_median(n: usize) -> Option<Self> {
        if n == 0 {
            None
        } else {
            Self::new(n / 2 + 1)
        }
    }
}

/// A value that occurs `weight` times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedValue {
    pub value: f64,
    pub weight: u64,
}

impl WeightedValue {
    pub fn new(value: f64, weight: u64) -> Self {
        Self { value, weight }
    }
}

/// Returns the element that would sit at position `k` after an ascending sort.
///
/// The slice is reordered in the process.
pub fn select_kth(values: &mut [f64], k: Rank) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    if k.get() > values.len() {
        return Err(Error::RankOutOfRange {
            k: k.get(),
            n: values.len(),
        });
    }
    Ok(select_index(values, k.get() - 1))
}

pub fn low_median(values: &mut [f64]) -> Result<f64> {
    let k = Rank::low_median(values.len()).ok_or(Error::EmptySample)?;
    select_kth(values, k)
}

pub fn high_median(values: &mut [f64]) -> Result<f64> {
    let k = Rank::high_median(values.len()).ok_or(Error::EmptySample)?;
    select_kth(values, k)
}

/// Sample median with the even-size convention of averaging the two central
/// order statistics.
pub fn mean_median(values: &mut [f64]) -> Result<f64> {
    let n = values.len();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let lower = select_index(values, (n - 1) / 2);
    if n % 2 == 1 {
        return Ok(lower);
    }
    // after selection everything right of the pivot position is >= lower
    let upper = values[n / 2..]
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Ok((lower + upper) / 2.0)
}

/// High median of the multiset in which every `value` appears `weight` times:
/// the smallest value whose cumulative weight exceeds half the total.
///
/// The slice is reordered in the process.
pub fn weighted_high_median(items: &mut [WeightedValue]) -> Result<f64> {
    if items.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut total: u128 = 0;
    for (index, item) in items.iter().enumerate() {
        if item.weight == 0 {
            return Err(Error::NonPositiveWeight { index });
        }
        total += u128::from(item.weight);
    }

    let mut rng = PivotSource::new(items.len());
    let mut lo = 0;
    let mut hi = items.len();
    // weight of everything already discarded to the left of `lo`
    let mut below: u128 = 0;
    loop {
        let span = &mut items[lo..hi];
        if span.len() == 1 {
            return Ok(span[0].value);
        }
        let pivot = span[rng.next_index(span.len())].value;
        let (lt, gt) = partition3(span, |item| item.value, pivot);
        let w_lt: u128 = span[..lt].iter().map(|w| u128::from(w.weight)).sum();
        let w_eq: u128 = span[lt..gt].iter().map(|w| u128::from(w.weight)).sum();
        if 2 * (below + w_lt) > total {
            hi = lo + lt;
        } else if 2 * (below + w_lt + w_eq) > total {
            return Ok(pivot);
        } else {
            below += w_lt + w_eq;
            lo += gt;
        }
    }
}

/// 0-based selection without argument checks. `index < values.len()`.
/// Leaves `values[..index]` <= the result <= `values[index + 1..]`.
pub(crate) fn select_index(values: &mut [f64], index: usize) -> f64 {
    debug_assert!(index < values.len());
    let mut rng = PivotSource::new(values.len());
    let mut lo = 0;
    let mut hi = values.len();
    let mut target = index;
    loop {
        let span = &mut values[lo..hi];
        if span.len() <= SMALL {
            insertion_sort(span);
            return span[target];
        }
        let pivot = span[rng.next_index(span.len())];
        let (lt, gt) = partition3(span, |v| *v, pivot);
        if target < lt {
            hi = lo + lt;
        } else if target < gt {
            return pivot;
        } else {
            lo += gt;
            target -= gt;
        }
    }
}

const SMALL: usize = 16;

fn insertion_sort(span: &mut [f64]) {
    for i in 1..span.len() {
        let mut j = i;
        while j > 0 && span[j - 1] > span[j] {
            span.swap(j - 1, j);
            j -= 1;
        }
    }
}

/// Dutch-flag partition around `pivot`. Returns `(lt, gt)` such that
/// `span[..lt] < pivot`, `span[lt..gt] == pivot`, `span[gt..] > pivot`.
fn partition3<T, F>(span: &mut [T], key: F, pivot: f64) -> (usize, usize)
where
    F: Fn(&T) -> f64,
{
    let mut lt = 0;
    let mut i = 0;
    let mut gt = span.len();
    while i < gt {
        let v = key(&span[i]);
        if v < pivot {
            span.swap(lt, i);
            lt += 1;
            i += 1;
        } else if v > pivot {
            gt -= 1;
            span.swap(i, gt);
        } else {
            i += 1;
        }
    }
    (lt, gt)
}

/// Deterministic pivot positions (SplitMix64 seeded from the input length).
pub(crate) struct PivotSource(u64);

impl PivotSource {
    pub(crate) fn new(len: usize) -> Self {
        PivotSource(0x9E37_79B9_7F4A_7C15 ^ len as u64)
    }

    /// Uniform index in `0..len`.
    pub(crate) fn next_index(&mut self, len: usize) -> usize {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        ((u128::from(z) * len as u128) >> 64) as usize
    }
}
