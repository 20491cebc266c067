//! Least-squares fits of the factor-decay curve `1 + alpha/n + beta/n^2`.
//!
//! Odd and even sample sizes follow different curves, so every fit is
//! restricted to one parity.

use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::EstimatorKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn matches(self, n: usize) -> bool {
        Parity::of(n) == self
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        })
    }
}

impl FromStr for Parity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "odd" => Ok(Parity::Odd),
            "even" => Ok(Parity::Even),
            other => Err(format!("unknown parity '{other}' (expected odd or even)")),
        }
    }
}

/// Inclusive range of sample sizes used for a fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FitWindow {
    pub min_n: usize,
    pub max_n: usize,
}

impl FitWindow {
    pub fn new(min_n: usize, max_n: usize) -> Self {
        Self { min_n, max_n }
    }

    pub fn contains(&self, n: usize) -> bool {
        (self.min_n..=self.max_n).contains(&n)
    }

    pub fn filter(&self, points: &[(usize, f64)]) -> Vec<(usize, f64)> {
        points.iter().copied().filter(|&(n, _)| self.contains(n)).collect()
    }
}

impl Default for FitWindow {
    /// `100 < n <= 1000`
    fn default() -> Self {
        Self::new(101, 1000)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub alpha: f64,
    pub beta: f64,
    pub parity: Parity,
    pub residual_rms: f64,
    pub n_points: usize,
}

impl FitResult {
    pub fn predict(&self, n: usize) -> f64 {
        let x = n as f64;
        1.0 + self.alpha / x + self.beta / (x * x)
    }
}

/// Unweighted least squares of `factor - 1` on `(1/n, 1/n^2)` over the points
/// of the given parity.
///
/// The two regressors are nearly collinear over typical windows, so the
/// system is solved through a re-orthogonalized Gram-Schmidt QR rather than
/// the raw normal equations.
pub fn fit_inverse_poly(points: &[(usize, f64)], parity: Parity) -> Result<FitResult> {
    let selected: Vec<(usize, f64)> = points.iter().copied().filter(|&(n, _)| parity.matches(n)).collect();
    if selected.len() < 2 {
        return Err(Error::UnderdeterminedFit {
            points: selected.len(),
        });
    }
    if let Some(&(n, _)) = selected.iter().find(|&&(n, _)| n == 0) {
        return Err(Error::InvalidConfig(format!("sample size must be positive, got {n}")));
    }
    let first_n = selected[0].0;
    if selected.iter().all(|&(n, _)| n == first_n) {
        return Err(Error::SingularDesign);
    }

    let u: Vec<f64> = selected.iter().map(|&(n, _)| 1.0 / n as f64).collect();
    let v: Vec<f64> = selected.iter().map(|&(n, _)| 1.0 / (n as f64 * n as f64)).collect();
    let y: Vec<f64> = selected.iter().map(|&(_, f)| f - 1.0).collect();

    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let norm = |a: &[f64]| dot(a, a).sqrt();

    let r11 = norm(&u);
    let q1: Vec<f64> = u.iter().map(|x| x / r11).collect();
    let mut w = v.clone();
    let mut r12 = 0.0;
    for _ in 0..2 {
        let c = dot(&q1, &w);
        r12 += c;
        for (wi, qi) in w.iter_mut().zip(&q1) {
            *wi -= c * qi;
        }
    }
    let r22 = norm(&w);
    if r22 <= 1e-12 * norm(&v) {
        return Err(Error::SingularDesign);
    }
    let q2: Vec<f64> = w.iter().map(|x| x / r22).collect();

    let beta = dot(&q2, &y) / r22;
    let alpha = (dot(&q1, &y) - r12 * beta) / r11;

    let ss: f64 = (0..y.len())
        .map(|i| {
            let r = y[i] - alpha * u[i] - beta * v[i];
            r * r
        })
        .sum();
    Ok(FitResult {
        alpha,
        beta,
        parity,
        residual_rms: (ss / y.len() as f64).sqrt(),
        n_points: y.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PredictionError {
    pub max_abs_diff: f64,
    /// `None` when no point had the fit's parity.
    pub n_at_max: Option<usize>,
}

/// Largest |factor - fit(n)| over the points sharing the fit's parity.
pub fn prediction_error(points: &[(usize, f64)], fit: &FitResult) -> PredictionError {
    max_deviation(
        points.iter().copied().filter(|&(n, _)| fit.parity.matches(n)),
        |n| fit.predict(n),
    )
}

pub(crate) fn max_deviation(
    points: impl IntoIterator<Item = (usize, f64)>,
    predict: impl Fn(usize) -> f64,
) -> PredictionError {
    let mut worst = PredictionError {
        max_abs_diff: 0.0,
        n_at_max: None,
    };
    for (n, f) in points {
        let d = (f - predict(n)).abs();
        if worst.n_at_max.is_none() || d > worst.max_abs_diff {
            worst = PredictionError {
                max_abs_diff: d,
                n_at_max: Some(n),
            };
        }
    }
    worst
}

/// One row of a factor CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorPoint {
    pub n: usize,
    pub factor: f64,
    pub se: Option<f64>,
    pub estimator: Option<EstimatorKind>,
}

/// Reads any CSV with `n` and `factor` columns (optionally `estimator` and
/// `se`), such as calibration output or factor-table exports. Lines starting
/// with `#` are ignored. With `estimator` set, rows for other estimators are
/// skipped.
pub fn read_factor_csv<R: Read>(input: R, estimator: Option<EstimatorKind>) -> Result<Vec<FactorPoint>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(input);
    let header_err = |message: String| Error::Parse { line: 1, message };
    let headers = reader.headers().map_err(|e| header_err(e.to_string()))?.clone();
    let column = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let n_col = column("n").ok_or_else(|| header_err("missing 'n' column".into()))?;
    let f_col = column("factor").ok_or_else(|| header_err("missing 'factor' column".into()))?;
    let se_col = column("se");
    let est_col = column("estimator");

    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| record.get(i).unwrap_or("");
        let bad = |what: &str, value: &str| Error::Parse {
            line,
            message: format!("invalid {what} '{value}'"),
        };
        let kind = match est_col {
            Some(c) => Some(field(c).parse::<EstimatorKind>().map_err(|_| bad("estimator", field(c)))?),
            None => None,
        };
        if let (Some(want), Some(have)) = (estimator, kind) {
            if want != have {
                continue;
            }
        }
        let n = field(n_col).parse::<usize>().map_err(|_| bad("n", field(n_col)))?;
        let factor = field(f_col)
            .parse::<f64>()
            .ok()
            .filter(|f| f.is_finite())
            .ok_or_else(|| bad("factor", field(f_col)))?;
        let se = match se_col {
            Some(c) => Some(field(c).parse::<f64>().map_err(|_| bad("se", field(c)))?),
            None => None,
        };
        out.push(FactorPoint {
            n,
            factor,
            se,
            estimator: kind,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correction::PUBLISHED_FACTORS;
    use proptest::prelude::*;

    fn synthetic(alpha: f64, beta: f64, ns: impl Iterator<Item = usize>) -> Vec<(usize, f64)> {
        ns.map(|n| (n, 1.0 + alpha / n as f64 + beta / (n as f64).powi(2))).collect()
    }

    #[test]
    fn recovers_exact_model() {
        let points = synthetic(-1.594, 3.22, 101..=1000);
        let fit = fit_inverse_poly(&points, Parity::Odd).unwrap();
        assert!((fit.alpha + 1.594).abs() < 1e-10);
        assert!((fit.beta - 3.22).abs() < 1e-10, "{}", fit.beta);
        assert_eq!(fit.n_points, 450);
        assert!(fit.residual_rms < 1e-15);
        let err = prediction_error(&points, &fit);
        assert!(err.max_abs_diff < 1e-15);
    }

    #[test]
    fn published_qn_odd_rows() {
        let points: Vec<(usize, f64)> = PUBLISHED_FACTORS.iter().map(|r| (r.0, r.2)).collect();
        let fit = fit_inverse_poly(&FitWindow::default().filter(&points), Parity::Odd).unwrap();
        assert!((fit.alpha + 1.594).abs() < 0.05, "{}", fit.alpha);
        assert!((fit.beta - 3.22).abs() < 10.0, "{}", fit.beta);
    }

    #[test]
    fn published_sn_even_rows() {
        let points: Vec<(usize, f64)> = PUBLISHED_FACTORS.iter().map(|r| (r.0, r.1)).collect();
        let fit = fit_inverse_poly(&FitWindow::default().filter(&points), Parity::Even).unwrap();
        assert!((fit.alpha - 0.043).abs() < 0.05, "{}", fit.alpha);
    }

    #[test]
    fn published_equations_track_large_n_rows() {
        let qn: Vec<(usize, f64)> = PUBLISHED_FACTORS.iter().filter(|r| r.0 > 100).map(|r| (r.0, r.2)).collect();
        let odd = FitResult { alpha: -1.594, beta: 3.22, parity: Parity::Odd, residual_rms: 0.0, n_points: 0 };
        let even = FitResult { alpha: -3.672, beta: 11.087, parity: Parity::Even, residual_rms: 0.0, n_points: 0 };
        assert!(prediction_error(&qn, &odd).max_abs_diff <= 2e-4);
        assert!(prediction_error(&qn, &even).max_abs_diff <= 2e-4);
    }

    #[test]
    fn error_cases() {
        assert_eq!(
            fit_inverse_poly(&[(101, 1.0)], Parity::Odd),
            Err(Error::UnderdeterminedFit { points: 1 })
        );
        assert_eq!(
            fit_inverse_poly(&[(101, 1.0), (102, 1.0), (104, 1.0)], Parity::Odd),
            Err(Error::UnderdeterminedFit { points: 1 })
        );
        assert_eq!(
            fit_inverse_poly(&[(101, 1.0), (101, 1.01)], Parity::Odd),
            Err(Error::SingularDesign)
        );
        let none = prediction_error(&[(102, 1.0)], &fit_inverse_poly(&synthetic(1.0, 1.0, [3, 5].into_iter()), Parity::Odd).unwrap());
        assert_eq!(none.n_at_max, None);
    }

    #[test]
    fn reads_calibration_and_table_formats() {
        let calib = "n,estimator,factor,se,mean_raw,reps,seed\n2,QN,0.399,0.001,1.1,100,1\n2,SN,0.743,0.001,1.1,100,1\n#truncated\n";
        let rows = read_factor_csv(calib.as_bytes(), Some(EstimatorKind::Qn)).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].factor, 0.399);
        assert_eq!(rows[0].se, Some(0.001));
        let table = "n,factor,model,estimator\n3,0.9939,refined,QN\n";
        let rows = read_factor_csv(table.as_bytes(), None).unwrap();
        assert_eq!(rows[0].n, 3);
        let broken = "n,factor\n3,abc\n";
        assert!(matches!(read_factor_csv(broken.as_bytes(), None), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(read_factor_csv("x,y\n1,2\n".as_bytes(), None), Err(Error::Parse { line: 1, .. })));
    }

    fn noisy_points() -> impl Strategy<Value = Vec<(usize, f64)>> {
        prop::collection::btree_map(101usize..2000, -1e-3f64..1e-3, 4..80)
            .prop_map(|m| m.into_iter().map(|(n, e)| (n, 1.0 + 0.5 / n as f64 + e)).collect())
    }

    proptest! {
        #[test]
        fn residuals_orthogonal_to_regressors(points in noisy_points(), odd in any::<bool>()) {
            let parity = if odd { Parity::Odd } else { Parity::Even };
            let sel: Vec<_> = points.iter().copied().filter(|&(n, _)| parity.matches(n)).collect();
            prop_assume!(sel.len() >= 2);
            let fit = fit_inverse_poly(&points, parity).unwrap();
            let (mut gu, mut gv) = (0.0, 0.0);
            for &(n, f) in &sel {
                let r = f - fit.predict(n);
                gu += r / n as f64;
                gv += r / (n as f64).powi(2);
            }
            prop_assert!(gu.abs() < 1e-8 && gv.abs() < 1e-8);
        }

        #[test]
        fn refit_on_own_predictions(points in noisy_points()) {
            let sel: Vec<_> = points.iter().copied().filter(|&(n, _)| n % 2 == 1).collect();
            prop_assume!(sel.len() >= 3);
            let fit = fit_inverse_poly(&points, Parity::Odd).unwrap();
            let predicted: Vec<_> = sel.iter().map(|&(n, _)| (n, fit.predict(n))).collect();
            let refit = fit_inverse_poly(&predicted, Parity::Odd).unwrap();
            prop_assert!((refit.alpha - fit.alpha).abs() < 1e-10 * fit.alpha.abs().max(1.0));
            prop_assert!((refit.beta - fit.beta).abs() < 1e-10 * fit.beta.abs().max(1.0));
        }

        #[test]
        fn adding_point_on_curve_changes_nothing(points in noisy_points(), extra in 2001usize..5000) {
            let sel = points.iter().filter(|&&(n, _)| n % 2 == 1).count();
            prop_assume!(sel >= 2);
            let fit = fit_inverse_poly(&points, Parity::Odd).unwrap();
            let extra = extra | 1;
            let mut more = points.clone();
            more.push((extra, fit.predict(extra)));
            let refit = fit_inverse_poly(&more, Parity::Odd).unwrap();
            prop_assert!((refit.alpha - fit.alpha).abs() < 1e-10 * fit.alpha.abs().max(1.0));
            prop_assert!((refit.beta - fit.beta).abs() < 1e-10 * fit.beta.abs().max(1.0));
        }
    }
}
