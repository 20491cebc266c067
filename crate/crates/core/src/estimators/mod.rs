//! Raw and bias-corrected scale estimators.
//!
//! The `*_raw*` and `*_fast` functions return uncorrected statistics. The
//! consistency constant and the finite-sample factor are applied by
//! [`estimate`], which looks both up in [`crate::correction`].

mod qn;
mod sn;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use libm::lgamma;

use crate::correction::{self, CorrectionModel};
use crate::error::{Error, Result};
use crate::order_stats::{self, Rank};

pub use qn::{qn_fast, qn_raw_naive};
pub use sn::{sn_fast, sn_raw_naive};
pub(crate) use qn::qn_sorted;
pub(crate) use sn::sn_sorted;

/// Finite real observations, at least one.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { values })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.values
    }

    /// Errors unless the sample is large enough for a scale estimate.
    pub(crate) fn require_scale(&self) -> Result<usize> {
        let n = self.values.len();
        if n < 2 {
            Err(Error::TooFewObservations { n })
        } else {
            Ok(n)
        }
    }

    pub(crate) fn sorted_copy(&self) -> Vec<f64> {
        let mut sorted = self.values.clone();
        sorted.sort_unstable_by(f64::total_cmp);
        sorted
    }
}

impl TryFrom<Vec<f64>> for Sample {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Sample::new(values)
    }
}

impl TryFrom<&[f64]> for Sample {
    type Error = Error;

    fn try_from(values: &[f64]) -> Result<Self> {
        Sample::new(values.to_vec())
    }
}

/// An uncorrected scale statistic, in the units of the sample.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct RawScaleEstimate(f64);

impl RawScaleEstimate {
    pub(crate) fn new(value: f64) -> Self {
        debug_assert!(value >= 0.0);
        Self(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<RawScaleEstimate> for f64 {
    fn from(raw: RawScaleEstimate) -> f64 {
        raw.0
    }
}

impl fmt::Display for RawScaleEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EstimatorKind {
    #[serde(rename = "MAD")]
    Mad,
    #[serde(rename = "SN")]
    Sn,
    #[serde(rename = "QN")]
    Qn,
    #[serde(rename = "SD")]
    Sd,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 4] = [
        EstimatorKind::Mad,
        EstimatorKind::Sn,
        EstimatorKind::Qn,
        EstimatorKind::Sd,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EstimatorKind::Mad => "MAD",
            EstimatorKind::Sn => "SN",
            EstimatorKind::Qn => "QN",
            EstimatorKind::Sd => "SD",
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EstimatorKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mad" | "madn" => Ok(EstimatorKind::Mad),
            "sn" => Ok(EstimatorKind::Sn),
            "qn" => Ok(EstimatorKind::Qn),
            "sd" | "sdn" => Ok(EstimatorKind::Sd),
            other => Err(format!("unknown estimator '{other}' (expected mad, sn, qn or sd)")),
        }
    }
}

/// `med_i |x_i - med_j x_j|`, both medians averaging the two central values
/// for even n.
pub fn mad_raw(x: &Sample) -> Result<RawScaleEstimate> {
    x.require_scale()?;
    let mut work = x.as_slice().to_vec();
    let center = order_stats::mean_median(&mut work)?;
    for (dst, &v) in work.iter_mut().zip(x.as_slice()) {
        *dst = (v - center).abs();
    }
    Ok(RawScaleEstimate::new(order_stats::mean_median(&mut work)?))
}

/// MAD of an ascending slice; `scratch` is overwritten.
pub(crate) fn mad_sorted(a: &[f64], scratch: &mut Vec<f64>) -> f64 {
    let n = a.len();
    let center = if n % 2 == 1 {
        a[n / 2]
    } else {
        (a[n / 2 - 1] + a[n / 2]) / 2.0
    };
    scratch.clear();
    scratch.extend(a.iter().map(|v| (v - center).abs()));
    order_stats::mean_median(scratch).expect("nonempty")
}

/// `c4(n) = sqrt(2 / (n - 1)) * Gamma(n / 2) / Gamma((n - 1) / 2)`, evaluated
/// through log-gamma.
pub fn c4(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewObservations { n });
    }
    let n = n as f64;
    let log_ratio = lgamma(n / 2.0) - lgamma((n - 1.0) / 2.0);
    Ok((2.0 / (n - 1.0)).sqrt() * log_ratio.exp())
}

/// Sample standard deviation with the `n - 1` divisor, before the c4 correction.
pub fn sd_raw(x: &Sample) -> Result<f64> {
    x.require_scale()?;
    Ok(sd_slice(x.as_slice()))
}

pub(crate) fn sd_slice(values: &[f64]) -> f64 {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (ss / (n - 1) as f64).sqrt()
}

/// Mean-unbiased standard deviation under normality: `sd_raw / c4(n)`.
pub fn sd_unbiased(x: &Sample) -> Result<f64> {
    Ok(sd_raw(x)? / c4(x.len())?)
}

/// Uncorrected statistic for `kind`, using the O(n log n) paths for Sn and Qn.
/// For SD this is the `n - 1` sample standard deviation.
pub fn raw(x: &Sample, kind: EstimatorKind) -> Result<f64> {
    match kind {
        EstimatorKind::Mad => mad_raw(x).map(f64::from),
        EstimatorKind::Sn => sn_fast(x).map(f64::from),
        EstimatorKind::Qn => qn_fast(x).map(f64::from),
        EstimatorKind::Sd => sd_raw(x),
    }
}

/// Full multiplier applied to the raw statistic: asymptotic constant times
/// finite-sample factor (for SD, `1 / c4(n)`).
pub fn multiplier(kind: EstimatorKind, n: usize, model: CorrectionModel) -> Result<f64> {
    match kind {
        EstimatorKind::Sd => Ok(1.0 / c4(n)?),
        _ => Ok(correction::asymptotic_constant(kind) * correction::factor(kind, n, model)?),
    }
}

/// Consistent estimate of sigma under normality.
pub fn estimate(x: &Sample, kind: EstimatorKind, model: CorrectionModel) -> Result<f64> {
    let n = x.require_scale()?;
    let scale = multiplier(kind, n, model)?;
    Ok(raw(x, kind)? * scale)
}

pub(crate) fn rank(k: usize) -> Rank {
    Rank::new(k).expect("rank is positive")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn sample(values: &[f64]) -> Sample {
        Sample::new(values.to_vec()).unwrap()
    }

    #[test]
    fn sample_validation() {
        assert_eq!(Sample::new(vec![]), Err(Error::EmptySample));
        assert_eq!(
            Sample::new(vec![1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        );
        assert_eq!(
            Sample::new(vec![f64::NEG_INFINITY]),
            Err(Error::NonFinite { index: 0 })
        );
        assert_eq!(
            mad_raw(&sample(&[1.0])),
            Err(Error::TooFewObservations { n: 1 })
        );
        assert_eq!(
            sd_unbiased(&sample(&[1.0])),
            Err(Error::TooFewObservations { n: 1 })
        );
    }

    #[test]
    fn mad_examples() {
        assert_eq!(mad_raw(&sample(&[1.0, 2.0, 4.0])).unwrap().value(), 1.0);
        assert_eq!(mad_raw(&sample(&[3.0, 3.0])).unwrap().value(), 0.0);
        // median 2.5, deviations {1.5, 0.5, 0.5, 1.5}
        assert_eq!(mad_raw(&sample(&[1.0, 2.0, 3.0, 4.0])).unwrap().value(), 1.0);
    }

    fn mad_by_sorting(values: &[f64]) -> f64 {
        fn median(v: &mut Vec<f64>) -> f64 {
            v.sort_by(f64::total_cmp);
            let n = v.len();
            if n % 2 == 1 {
                v[n / 2]
            } else {
                (v[n / 2 - 1] + v[n / 2]) / 2.0
            }
        }
        let mut v = values.to_vec();
        let m = median(&mut v);
        let mut dev: Vec<f64> = values.iter().map(|x| (x - m).abs()).collect();
        median(&mut dev)
    }

    #[test]
    fn c4_values() {
        assert_relative_eq!(c4(2).unwrap(), (2.0 / std::f64::consts::PI).sqrt(), epsilon = 1e-14);
        assert_relative_eq!(c4(2).unwrap(), 0.7978846, epsilon = 1e-7);
        // c4(3) = sqrt(pi) / 2
        assert_relative_eq!(c4(3).unwrap(), std::f64::consts::PI.sqrt() / 2.0, epsilon = 1e-14);
        let big = c4(10_000).unwrap();
        assert!((big - 1.0).abs() < 1e-4);
        assert_relative_eq!(big, 1.0 - 1.0 / 40_000.0, epsilon = 1e-8);
        assert!(c4(1).is_err());
    }

    #[test]
    fn sd_examples() {
        assert_eq!(sd_unbiased(&sample(&[0.0; 5])).unwrap(), 0.0);
        // n = 2: s = |x1 - x2| / sqrt(2)
        let s = sd_unbiased(&sample(&[1.0, 3.0])).unwrap();
        assert_relative_eq!(s, 2.0 / 2f64.sqrt() / c4(2).unwrap(), epsilon = 1e-14);
    }

    #[test]
    fn estimate_composes_constant_and_factor() {
        let x = sample(&[1.0, 2.0]);
        let qn = estimate(&x, EstimatorKind::Qn, CorrectionModel::Refined).unwrap();
        assert_relative_eq!(qn, 2.21914446598508 * 0.3995, epsilon = 1e-12);
        assert!((qn - 0.88655).abs() < 5e-5);
        // Sn n = 2 uses the reference-implementation factor 0.7430
        let sn = estimate(&x, EstimatorKind::Sn, CorrectionModel::Refined).unwrap();
        assert_relative_eq!(sn, 1.19259855312321 * 0.7430, epsilon = 1e-12);
        let sd = estimate(&x, EstimatorKind::Sd, CorrectionModel::Croux1992).unwrap();
        assert_relative_eq!(sd, sd_unbiased(&x).unwrap(), epsilon = 1e-15);
    }

    #[test]
    fn constant_samples_estimate_zero() {
        let x = sample(&[4.2; 7]);
        for kind in EstimatorKind::ALL {
            for model in CorrectionModel::ALL {
                match estimate(&x, kind, model) {
                    Ok(v) => assert_eq!(v, 0.0, "{kind} {model}"),
                    Err(Error::UndefinedModel { .. }) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn undefined_combinations() {
        let x = sample(&[1.0, 2.0, 3.0]);
        assert!(matches!(
            estimate(&x, EstimatorKind::Sn, CorrectionModel::Robustbase),
            Err(Error::UndefinedModel { .. })
        ));
        assert!(matches!(
            estimate(&x, EstimatorKind::Mad, CorrectionModel::Croux1992),
            Err(Error::UndefinedModel { .. })
        ));
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("qn".parse::<EstimatorKind>().unwrap(), EstimatorKind::Qn);
        assert_eq!(" MAD ".parse::<EstimatorKind>().unwrap(), EstimatorKind::Mad);
        assert!("iqr".parse::<EstimatorKind>().is_err());
    }

    proptest! {
        #[test]
        fn mad_matches_sorting(values in prop::collection::vec(
            prop_oneof![(-5i32..5).prop_map(f64::from), -10.0f64..10.0], 2..=10)
        ) {
            let got = mad_raw(&sample(&values)).unwrap().value();
            prop_assert_eq!(got, mad_by_sorting(&values));
        }
    }
}
