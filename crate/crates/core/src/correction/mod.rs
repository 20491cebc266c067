//! Consistency constants and finite-sample bias-correction factors.
//!
//! A consistent estimate of sigma is `raw * constant * factor(n)`, where the
//! constant is the asymptotic value (`B_inf`, `C_inf`, `D_inf`) and the factor
//! (`b_n`, `c_n`, `d_n`) removes the remaining finite-sample bias. Factors come
//! from a table for small n and from a parity-dependent prediction equation
//! beyond it.

mod mad;
mod normal;
mod tables;

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{self, EstimatorKind};

pub use mad::{mad_calibration_rows, mad_factor, MAD_FACTORS_CSV};
pub use normal::{normal_cdf, normal_pdf, normal_quantile};
pub use tables::PUBLISHED_FACTORS;

/// `1 / Phi^-1(3/4)`
pub const B_INF: f64 = 1.4826022185056;
/// Root of `Phi(q + 1/C) - Phi(q - 1/C) = 1/2` with `q = Phi^-1(3/4)`.
pub const C_INF: f64 = 1.19259855312321;
/// `1 / (sqrt(2) * Phi^-1(5/8))`
pub const D_INF: f64 = 2.21914446598508;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticConstants {
    pub b_inf: f64,
    pub c_inf: f64,
    pub d_inf: f64,
}

pub const ASYMPTOTIC: AsymptoticConstants = AsymptoticConstants {
    b_inf: B_INF,
    c_inf: C_INF,
    d_inf: D_INF,
};

/// Asymptotic consistency constant; 1 for SD, whose correction lives
/// entirely in its factor.
pub fn asymptotic_constant(kind: EstimatorKind) -> f64 {
    match kind {
        EstimatorKind::Mad => B_INF,
        EstimatorKind::Sn => C_INF,
        EstimatorKind::Qn => D_INF,
        EstimatorKind::Sd => 1.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrectionModel {
    /// Refined Monte-Carlo factors (Sn, Qn); locally calibrated table for MAD.
    Refined,
    /// Croux & Rousseeuw (1992) small-n table and prediction equations.
    Croux1992,
    /// robustbase 0.95-0 (Qn only).
    Robustbase,
    /// Factor fixed at 1.
    AsymptoticOnly,
}

impl CorrectionModel {
    pub const ALL: [CorrectionModel; 4] = [
        CorrectionModel::Refined,
        CorrectionModel::Croux1992,
        CorrectionModel::Robustbase,
        CorrectionModel::AsymptoticOnly,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CorrectionModel::Refined => "refined",
            CorrectionModel::Croux1992 => "croux1992",
            CorrectionModel::Robustbase => "robustbase",
            CorrectionModel::AsymptoticOnly => "asymptotic",
        }
    }
}

impl fmt::Display for CorrectionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CorrectionModel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "refined" => Ok(CorrectionModel::Refined),
            "croux1992" | "croux" => Ok(CorrectionModel::Croux1992),
            "robustbase" => Ok(CorrectionModel::Robustbase),
            "asymptotic" | "asymptoticonly" | "none" => Ok(CorrectionModel::AsymptoticOnly),
            other => Err(format!(
                "unknown correction model '{other}' (expected refined, croux1992, robustbase or asymptotic)"
            )),
        }
    }
}

/// Large-n form of a factor, chosen by the parity of n.
#[derive(Debug, Clone, PartialEq)]
pub enum PredictionEquation {
    /// `1 + alpha / n + beta / n^2`, coefficients as `[alpha, beta]`.
    InversePoly { odd: [f64; 2], even: [f64; 2] },
    /// `n / (n + shift)`.
    Shifted { odd: f64, even: f64 },
    /// `1 / (1 + c_1 / n + c_2 / n^2 + ...)`.
    ReciprocalPoly { odd: Vec<f64>, even: Vec<f64> },
    /// Constant 1.
    Unity,
}

impl PredictionEquation {
    pub fn eval(&self, n: usize) -> f64 {
        let odd = n % 2 == 1;
        let x = n as f64;
        match self {
            PredictionEquation::InversePoly { odd: o, even: e } => {
                let [alpha, beta] = if odd { o } else { e };
                1.0 + alpha / x + beta / (x * x)
            }
            PredictionEquation::Shifted { odd: o, even: e } => {
                let shift = if odd { o } else { e };
                x / (x + shift)
            }
            PredictionEquation::ReciprocalPoly { odd: o, even: e } => {
                let coeffs = if odd { o } else { e };
                let mut acc = 0.0;
                for c in coeffs.iter().rev() {
                    acc = (acc + c) / x;
                }
                1.0 / (1.0 + acc)
            }
            PredictionEquation::Unity => 1.0,
        }
    }
}

/// Factors for one estimator under one model: tabulated from n = 2 upward,
/// then the prediction equation.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorTable {
    estimator: EstimatorKind,
    model: CorrectionModel,
    entries: Vec<f64>,
    tail: PredictionEquation,
}

impl FactorTable {
    pub fn new(
        estimator: EstimatorKind,
        model: CorrectionModel,
        entries: Vec<f64>,
        tail: PredictionEquation,
    ) -> Self {
        Self {
            estimator,
            model,
            entries,
            tail,
        }
    }

    pub fn estimator(&self) -> EstimatorKind {
        self.estimator
    }

    pub fn model(&self) -> CorrectionModel {
        self.model
    }

    pub fn tail(&self) -> &PredictionEquation {
        &self.tail
    }

    /// Largest tabulated n, or `None` when the table is equation-only.
    pub fn max_tabulated_n(&self) -> Option<usize> {
        (!self.entries.is_empty()).then(|| self.entries.len() + 1)
    }

    /// `(n, factor)` for every tabulated n.
    pub fn entries(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().enumerate().map(|(i, &f)| (i + 2, f))
    }

    pub fn get(&self, n: usize) -> Result<f64> {
        if n < 2 {
            return Err(Error::TooFewObservations { n });
        }
        Ok(self.entries.get(n - 2).copied().unwrap_or_else(|| self.tail.eval(n)))
    }
}

struct Tables {
    refined_sn: FactorTable,
    refined_qn: FactorTable,
    croux_sn: FactorTable,
    croux_qn: FactorTable,
    robustbase_qn: FactorTable,
    asymptotic: [FactorTable; 3],
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        use CorrectionModel::*;
        use EstimatorKind::*;
        Tables {
            refined_sn: FactorTable::new(
                Sn,
                Refined,
                tables::REFINED_SN.to_vec(),
                PredictionEquation::InversePoly {
                    odd: [0.707, -7.181],
                    even: [0.043, -6.288],
                },
            ),
            refined_qn: FactorTable::new(
                Qn,
                Refined,
                tables::REFINED_QN.to_vec(),
                PredictionEquation::InversePoly {
                    odd: [-1.594, 3.22],
                    even: [-3.672, 11.087],
                },
            ),
            croux_sn: FactorTable::new(
                Sn,
                Croux1992,
                tables::CROUX_SN.to_vec(),
                PredictionEquation::Shifted {
                    odd: -0.9,
                    even: 0.0,
                },
            ),
            croux_qn: FactorTable::new(
                Qn,
                Croux1992,
                tables::CROUX_QN.to_vec(),
                PredictionEquation::Shifted {
                    odd: 1.4,
                    even: 3.8,
                },
            ),
            robustbase_qn: FactorTable::new(
                Qn,
                Robustbase,
                tables::ROBUSTBASE_QN.to_vec(),
                PredictionEquation::ReciprocalPoly {
                    odd: vec![1.60188, -2.1284, -5.172],
                    even: vec![3.67561, 1.9654, 6.987, -77.0],
                },
            ),
            asymptotic: [Mad, Sn, Qn]
                .map(|kind| FactorTable::new(kind, AsymptoticOnly, vec![], PredictionEquation::Unity)),
        }
    })
}

/// Table backing `(kind, model)`. SD has no table: its factor is `1 / c4(n)`
/// under every model.
pub fn factor_table(kind: EstimatorKind, model: CorrectionModel) -> Result<&'static FactorTable> {
    use CorrectionModel::*;
    use EstimatorKind::*;
    let t = tables();
    match (kind, model) {
        (Sn, Refined) => Ok(&t.refined_sn),
        (Qn, Refined) => Ok(&t.refined_qn),
        (Sn, Croux1992) => Ok(&t.croux_sn),
        (Qn, Croux1992) => Ok(&t.croux_qn),
        (Qn, Robustbase) => Ok(&t.robustbase_qn),
        (Mad, Refined) => Ok(mad::mad_table()),
        (Mad, AsymptoticOnly) => Ok(&t.asymptotic[0]),
        (Sn, AsymptoticOnly) => Ok(&t.asymptotic[1]),
        (Qn, AsymptoticOnly) => Ok(&t.asymptotic[2]),
        _ => Err(Error::UndefinedModel { kind, model }),
    }
}

/// Finite-sample factor for `kind` at sample size `n` under `model`.
pub fn factor(kind: EstimatorKind, n: usize, model: CorrectionModel) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewObservations { n });
    }
    if kind == EstimatorKind::Sd {
        return Ok(1.0 / estimators::c4(n)?);
    }
    factor_table(kind, model)?.get(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub n: usize,
    pub factor_a: f64,
    pub factor_b: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelComparison {
    pub estimator: EstimatorKind,
    pub model_a: CorrectionModel,
    pub model_b: CorrectionModel,
    pub max_abs_diff: f64,
    /// Smallest n attaining the maximum.
    pub n_at_max: usize,
    pub rows: Vec<ComparisonRow>,
}

impl ModelComparison {
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["n", "estimator", "model_a", "model_b", "factor_a", "factor_b", "abs_diff"])?;
        for row in &self.rows {
            w.write_record([
                row.n.to_string(),
                self.estimator.to_string(),
                self.model_a.to_string(),
                self.model_b.to_string(),
                crate::format_sig(row.factor_a),
                crate::format_sig(row.factor_b),
                crate::format_sig(row.abs_diff),
            ])?;
        }
        w.flush()
    }
}

/// Scans `ns` and reports the largest |factor_a - factor_b|.
pub fn compare_models(
    kind: EstimatorKind,
    model_a: CorrectionModel,
    model_b: CorrectionModel,
    ns: impl IntoIterator<Item = usize>,
) -> Result<ModelComparison> {
    let mut rows = Vec::new();
    for n in ns {
        let factor_a = factor(kind, n, model_a)?;
        let factor_b = factor(kind, n, model_b)?;
        rows.push(ComparisonRow {
            n,
            factor_a,
            factor_b,
            abs_diff: (factor_a - factor_b).abs(),
        });
    }
    let best = rows
        .iter()
        .fold(None::<&ComparisonRow>, |best, row| match best {
            Some(b) if b.abs_diff >= row.abs_diff => Some(b),
            _ => Some(row),
        })
        .ok_or_else(|| Error::InvalidConfig("empty n range".into()))?;
    Ok(ModelComparison {
        estimator: kind,
        model_a,
        model_b,
        max_abs_diff: best.abs_diff,
        n_at_max: best.n,
        rows,
    })
}

/// Writes `n,factor,model,estimator` rows for the given sizes.
pub fn write_factor_csv<W: Write>(
    kind: EstimatorKind,
    model: CorrectionModel,
    ns: impl IntoIterator<Item = usize>,
    out: W,
) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io = |e: csv::Error| Error::Output(e.to_string());
    w.write_record(["n", "factor", "model", "estimator"]).map_err(io)?;
    for n in ns {
        let f = factor(kind, n, model)?;
        w.write_record([n.to_string(), crate::format_sig(f), model.to_string(), kind.to_string()])
            .map_err(io)?;
    }
    Ok(w.flush()?)
}

/// Writes the published Monte-Carlo rows for Sn (c_n) or Qn (d_n) in the
/// `n,factor,model,estimator` format.
pub fn write_published_csv<W: Write>(kind: EstimatorKind, out: W) -> Result<()> {
    let column = match kind {
        EstimatorKind::Sn => |row: &(usize, f64, f64)| row.1,
        EstimatorKind::Qn => |row: &(usize, f64, f64)| row.2,
        _ => {
            return Err(Error::UndefinedModel {
                kind,
                model: CorrectionModel::Refined,
            })
        }
    };
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io = |e: csv::Error| Error::Output(e.to_string());
    w.write_record(["n", "factor", "model", "estimator"]).map_err(io)?;
    for row in PUBLISHED_FACTORS.iter() {
        w.write_record([row.0.to_string(), format!("{:.4}", column(row)), "published".into(), kind.to_string()])
            .map_err(io)?;
    }
    Ok(w.flush()?)
}
