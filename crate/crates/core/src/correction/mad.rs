//! Finite-sample MAD factors b_n.
//!
//! The table is a committed calibration run of this crate's own Monte-Carlo
//! engine (`data/mad_factors.csv`, regenerated with
//! `robust-scale calibrate --estimators mad`; the exact command lives in the
//! manifest next to it). Sizes up to the last contiguous n are looked up
//! directly; beyond that a `1 + alpha/n + beta/n^2` curve is fitted per parity
//! on the calibrated rows with `100 < n <= 1000`.

use std::sync::OnceLock;

use super::{CorrectionModel, FactorTable, PredictionEquation};
use crate::error::{Error, Result};
use crate::estimators::EstimatorKind;
use crate::fitting::{self, FitWindow, Parity};

pub const MAD_FACTORS_CSV: &str = include_str!("../../data/mad_factors.csv");

/// `(n, factor, mc_standard_error)` rows of the committed MAD calibration.
pub fn mad_calibration_rows() -> &'static [(usize, f64, f64)] {
    static ROWS: OnceLock<Vec<(usize, f64, f64)>> = OnceLock::new();
    ROWS.get_or_init(|| parse_rows(MAD_FACTORS_CSV).expect("embedded MAD factor table is well-formed"))
}

fn parse_rows(text: &str) -> Result<Vec<(usize, f64, f64)>> {
    let rows = fitting::read_factor_csv(text.as_bytes(), Some(EstimatorKind::Mad))?;
    let mut out: Vec<(usize, f64, f64)> = rows.into_iter().map(|r| (r.n, r.factor, r.se.unwrap_or(0.0))).collect();
    out.sort_by_key(|r| r.0);
    out.dedup_by_key(|r| r.0);
    Ok(out)
}

pub(super) fn mad_table() -> &'static FactorTable {
    static TABLE: OnceLock<FactorTable> = OnceLock::new();
    TABLE.get_or_init(|| build_table(mad_calibration_rows()))
}

fn build_table(rows: &[(usize, f64, f64)]) -> FactorTable {
    let mut entries = Vec::new();
    for &(n, f, _) in rows {
        if n == entries.len() + 2 {
            entries.push(f);
        } else if n > entries.len() + 2 {
            break;
        }
    }
    let window = FitWindow::new(101, 1000);
    let points: Vec<(usize, f64)> = rows.iter().map(|&(n, f, _)| (n, f)).collect();
    let fit = |parity| fitting::fit_inverse_poly(&window.filter(&points), parity).ok();
    let tail = match (fit(Parity::Odd), fit(Parity::Even)) {
        (Some(odd), Some(even)) => PredictionEquation::InversePoly {
            odd: [odd.alpha, odd.beta],
            even: [even.alpha, even.beta],
        },
        _ => PredictionEquation::Unity,
    };
    FactorTable::new(EstimatorKind::Mad, CorrectionModel::Refined, entries, tail)
}

/// b_n for the MAD. Falls back to 1.0, with a warning, for sizes the committed
/// calibration does not cover.
pub fn mad_factor(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewObservations { n });
    }
    let table = mad_table();
    let covered = table.max_tabulated_n().is_some_and(|max| n <= max);
    if !covered && *table.tail() == PredictionEquation::Unity {
        log::warn!("no calibrated MAD factor for n = {n}; using 1.0");
    }
    table.get(n)
}
