//! Monte-Carlo calibration of finite-sample factors and efficiency studies
//! under the standard normal model.
//!
//! Work for each sample size is cut into shards of [`SHARD_REPS`] repetitions.
//! Every shard draws from its own substream and the per-shard summaries are
//! merged in shard order, so results depend only on the seed and the
//! repetition count, never on the number of worker threads.

mod moments;
mod rng;

use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;

use crate::correction::{asymptotic_constant, CorrectionModel};
use crate::error::{Error, Result};
use crate::estimators::{self, EstimatorKind};

pub use moments::Moments;
pub use rng::{sample_normal, NormalStream};

pub const SHARD_REPS: u64 = 10_000;
pub const MIN_REPETITIONS: u64 = 100;
pub const DEFAULT_SEED: u64 = 42;

const CANCEL_CHECK_EVERY: u64 = 256;

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub n_values: Vec<usize>,
    pub repetitions: u64,
    pub seed: u64,
    pub estimators: Vec<EstimatorKind>,
    pub workers: usize,
}

impl SimulationConfig {
    /// Sn and Qn, all available cores.
    pub fn new(n_values: Vec<usize>, repetitions: u64, seed: u64) -> Self {
        Self {
            n_values,
            repetitions,
            seed,
            estimators: vec![EstimatorKind::Sn, EstimatorKind::Qn],
            workers: default_workers(),
        }
    }

    pub fn with_estimators(mut self, estimators: Vec<EstimatorKind>) -> Self {
        self.estimators = estimators;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn validate(&self, study: StudyKind) -> Result<()> {
        if self.repetitions < MIN_REPETITIONS {
            return Err(Error::InvalidConfig(format!(
                "repetitions must be at least {MIN_REPETITIONS}, got {}",
                self.repetitions
            )));
        }
        if self.repetitions.div_ceil(SHARD_REPS) > 1 << rng::SHARD_BITS {
            return Err(Error::InvalidConfig("too many repetitions".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("workers must be at least 1".into()));
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| n < 2) {
            return Err(Error::TooFewObservations { n });
        }
        if study == StudyKind::Factors {
            if self.estimators.is_empty() {
                return Err(Error::InvalidConfig("no estimators selected".into()));
            }
            if self.estimators.contains(&EstimatorKind::Sd) {
                return Err(Error::SdNeedsNoCalibration);
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudyKind {
    Factors,
    Efficiency,
}

/// Distribution summary of one raw estimator at one sample size.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub n: usize,
    pub estimator: EstimatorKind,
    pub mean: f64,
    pub variance: f64,
    /// `n * variance / mean^2`
    pub std_variance: f64,
    pub count: u64,
    pub seed: u64,
}

impl SimulationResult {
    /// Factor that makes the constant-scaled estimator unbiased.
    pub fn factor(&self) -> f64 {
        1.0 / (self.mean * asymptotic_constant(self.estimator))
    }

    /// Delta-method standard error of [`factor`](Self::factor).
    pub fn factor_se(&self) -> f64 {
        (self.variance / self.count as f64).sqrt()
            / (self.mean * self.mean * asymptotic_constant(self.estimator))
    }
}

/// Finite-sample efficiencies relative to the bias-corrected SD.
#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyRow {
    pub n: usize,
    pub e_mad: f64,
    pub e_sn: f64,
    pub e_qn: f64,
    pub se_mad: f64,
    pub se_sn: f64,
    pub se_qn: f64,
    pub reps: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StudyRow {
    Factor(SimulationResult),
    Efficiency(EfficiencyRow),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StudyOutcome {
    pub rows: usize,
    pub truncated: bool,
}

pub fn standardized_variance(mean: f64, variance: f64, n: usize) -> Result<f64> {
    if mean == 0.0 {
        return Err(Error::DegenerateDistribution);
    }
    Ok(n as f64 * variance / (mean * mean))
}

/// Runs `study` for every sample size in ascending order, passing each
/// finished row to `sink`.
///
/// When `cancel` becomes set the sample size in progress is abandoned and
/// the outcome is marked truncated; rows already passed to `sink` stay valid.
pub fn run_study<F>(
    config: &SimulationConfig,
    study: StudyKind,
    cancel: Option<&AtomicBool>,
    mut sink: F,
) -> Result<StudyOutcome>
where
    F: FnMut(StudyRow) -> Result<()>,
{
    config.validate(study)?;
    let mut n_values = config.n_values.clone();
    n_values.sort_unstable();
    n_values.dedup();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;

    let never = AtomicBool::new(false);
    let cancel = cancel.unwrap_or(&never);
    let mut outcome = StudyOutcome { rows: 0, truncated: false };

    for n in n_values {
        let rows = match study {
            StudyKind::Factors => pool
                .install(|| factor_rows(n, config, cancel))
                .map(|r| r.map(|rows| rows.into_iter().map(StudyRow::Factor).collect::<Vec<_>>())),
            StudyKind::Efficiency => {
                let multipliers = default_multipliers(n)?;
                pool.install(|| {
                    efficiency_row(n, config.repetitions, config.seed, multipliers, cancel)
                })
                .map(|r| r.map(|row| vec![StudyRow::Efficiency(row)]))
            }
        };
        let Some(rows) = rows.transpose()? else {
            outcome.truncated = true;
            break;
        };
        for row in rows {
            sink(row)?;
            outcome.rows += 1;
        }
        if cancel.load(Ordering::Relaxed) {
            outcome.truncated = true;
            break;
        }
    }
    Ok(outcome)
}

/// Calibrates one estimator at one sample size using all available cores.
pub fn calibrate_factor(
    kind: EstimatorKind,
    n: usize,
    repetitions: u64,
    seed: u64,
) -> Result<SimulationResult> {
    let config =
        SimulationConfig::new(vec![n], repetitions, seed).with_estimators(vec![kind]);
    let mut out = None;
    run_study(&config, StudyKind::Factors, None, |row| {
        if let StudyRow::Factor(r) = row {
            out = Some(r);
        }
        Ok(())
    })?;
    Ok(out.expect("one row per sample size"))
}

/// Efficiencies of the MAD, Sn and Qn estimators (refined factors) at `n`.
pub fn efficiency_run(n: usize, repetitions: u64, seed: u64) -> Result<EfficiencyRow> {
    efficiency_run_with(n, repetitions, seed, default_workers(), default_multipliers(n)?)
}

/// Like [`efficiency_run`] with explicit multipliers applied to the raw MAD,
/// Sn, Qn and SD statistics, in that order.
pub fn efficiency_run_with(
    n: usize,
    repetitions: u64,
    seed: u64,
    workers: usize,
    multipliers: [f64; 4],
) -> Result<EfficiencyRow> {
    let config = SimulationConfig::new(vec![n], repetitions, seed).with_workers(workers);
    config.validate(StudyKind::Efficiency)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let never = AtomicBool::new(false);
    pool.install(|| efficiency_row(n, repetitions, seed, multipliers, &never))
        .expect("not cancelled")
}

fn default_multipliers(n: usize) -> Result<[f64; 4]> {
    let m = |kind| estimators::multiplier(kind, n, CorrectionModel::Refined);
    Ok([
        m(EstimatorKind::Mad)?,
        m(EstimatorKind::Sn)?,
        m(EstimatorKind::Qn)?,
        m(EstimatorKind::Sd)?,
    ])
}

fn shard_sizes(repetitions: u64) -> Vec<(u64, u64)> {
    let shards = repetitions.div_ceil(SHARD_REPS);
    (0..shards)
        .map(|s| (s, SHARD_REPS.min(repetitions - s * SHARD_REPS)))
        .collect()
}

/// Sorted normal samples of size `n` for one shard. Returns `None` if cancelled.
fn for_each_sample(
    n: usize,
    seed: u64,
    shard: u64,
    reps: u64,
    cancel: &AtomicBool,
    mut f: impl FnMut(&[f64]),
) -> Option<()> {
    let mut stream = NormalStream::new(seed, n, shard);
    let mut buf = vec![0.0; n];
    for r in 0..reps {
        if r % CANCEL_CHECK_EVERY == 0 && cancel.load(Ordering::Relaxed) {
            return None;
        }
        stream.fill(&mut buf);
        buf.sort_unstable_by(f64::total_cmp);
        f(&buf);
    }
    Some(())
}

fn raw_sorted(kind: EstimatorKind, a: &[f64], scratch: &mut Vec<f64>) -> f64 {
    match kind {
        EstimatorKind::Mad => estimators::mad_sorted(a, scratch),
        EstimatorKind::Sn => estimators::sn_sorted(a),
        EstimatorKind::Qn => estimators::qn_sorted(a),
        EstimatorKind::Sd => estimators::sd_slice(a),
    }
}

fn factor_rows(
    n: usize,
    config: &SimulationConfig,
    cancel: &AtomicBool,
) -> Option<Result<Vec<SimulationResult>>> {
    let kinds = &config.estimators;
    let shards: Option<Vec<Vec<Moments>>> = shard_sizes(config.repetitions)
        .into_par_iter()
        .map(|(shard, reps)| {
            let mut acc = vec![Moments::new(); kinds.len()];
            let mut scratch = Vec::with_capacity(n);
            for_each_sample(n, config.seed, shard, reps, cancel, |a| {
                for (m, &kind) in acc.iter_mut().zip(kinds) {
                    m.push(raw_sorted(kind, a, &mut scratch));
                }
            })?;
            Some(acc)
        })
        .collect();
    let shards = shards?;

    let rows = kinds
        .iter()
        .enumerate()
        .map(|(k, &kind)| {
            let mut total = Moments::new();
            for shard in &shards {
                total.merge(&shard[k]);
            }
            Ok(SimulationResult {
                n,
                estimator: kind,
                mean: total.mean(),
                variance: total.variance(),
                std_variance: standardized_variance(total.mean(), total.variance(), n)?,
                count: total.count(),
                seed: config.seed,
            })
        })
        .collect();
    Some(rows)
}

struct EfficiencyShard {
    moments: [Moments; 4],
    /// Sum of squared influence values of log(e) for MAD, Sn, Qn.
    psi_sq: [f64; 3],
}

fn efficiency_row(
    n: usize,
    repetitions: u64,
    seed: u64,
    multipliers: [f64; 4],
    cancel: &AtomicBool,
) -> Option<Result<EfficiencyRow>> {
    let shards: Option<Vec<EfficiencyShard>> = shard_sizes(repetitions)
        .into_par_iter()
        .map(|(shard, reps)| {
            let mut values: Vec<[f64; 4]> = Vec::with_capacity(reps as usize);
            let mut scratch = Vec::with_capacity(n);
            for_each_sample(n, seed, shard, reps, cancel, |a| {
                let mut row = [0.0; 4];
                for (slot, (kind, m)) in row.iter_mut().zip(EstimatorKind::ALL.iter().zip(multipliers)) {
                    *slot = m * raw_sorted(*kind, a, &mut scratch);
                }
                values.push(row);
            })?;
            Some(efficiency_shard(&values))
        })
        .collect();
    let shards = shards?;
    Some(combine_efficiency(n, repetitions, seed, &shards))
}

fn efficiency_shard(values: &[[f64; 4]]) -> EfficiencyShard {
    let moments: [Moments; 4] =
        std::array::from_fn(|k| values.iter().map(|row| row[k]).collect());
    // influence of log(n var / mean^2) for a single observation
    let influence = |k: usize, x: f64| {
        let m = &moments[k];
        let d = x - m.mean();
        (d * d / m.variance() - 1.0) - 2.0 * d / m.mean()
    };
    let mut psi_sq = [0.0; 3];
    for row in values {
        let sd = influence(3, row[3]);
        for (k, acc) in psi_sq.iter_mut().enumerate() {
            let psi = sd - influence(k, row[k]);
            *acc += psi * psi;
        }
    }
    EfficiencyShard { moments, psi_sq }
}

fn combine_efficiency(
    n: usize,
    repetitions: u64,
    seed: u64,
    shards: &[EfficiencyShard],
) -> Result<EfficiencyRow> {
    let mut total = [Moments::new(); 4];
    let mut psi_sq = [0.0; 3];
    for shard in shards {
        for (t, m) in total.iter_mut().zip(&shard.moments) {
            t.merge(m);
        }
        for (acc, v) in psi_sq.iter_mut().zip(shard.psi_sq) {
            *acc += v;
        }
    }
    let count = total[3].count() as f64;
    let v_sd = standardized_variance(total[3].mean(), total[3].variance(), n)?;
    let mut e = [0.0; 3];
    let mut se = [0.0; 3];
    for k in 0..3 {
        let v = standardized_variance(total[k].mean(), total[k].variance(), n)?;
        e[k] = v_sd / v;
        se[k] = e[k] * (psi_sq[k] / count).sqrt() / count.sqrt();
    }
    Ok(EfficiencyRow {
        n,
        e_mad: e[0],
        e_sn: e[1],
        e_qn: e[2],
        se_mad: se[0],
        se_sn: se[1],
        se_qn: se[2],
        reps: repetitions,
        seed,
    })
}
