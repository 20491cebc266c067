use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Once;

use clap::Parser;
use robust_scale::correction::{self, asymptotic_constant};
use robust_scale::fitting::{self, Parity};
use robust_scale::montecarlo::{
    self, default_workers, SimulationConfig, StudyKind, StudyOutcome, StudyRow,
};
use robust_scale::{estimators, format_sig, EstimatorKind, Sample};

use crate::manifest::{default_manifest_path, now, HashingWriter, RunManifest};
use crate::{
    input, CalibrateArgs, Cli, CliError, Command, CompareArgs, EfficiencyArgs, EstimateArgs,
    FitArgs, ReplayArgs, SimulationArgs, TableArgs,
};

pub fn run(cli: Cli, argv: &[String]) -> Result<(), CliError> {
    match &cli.command {
        Command::Estimate(a) => estimate(a),
        Command::Calibrate(a) => simulate(Simulation::Calibrate(a), argv),
        Command::Efficiency(a) => simulate(Simulation::Efficiency(a), argv),
        Command::Fit(a) => fit(a),
        Command::CompareModels(a) => compare(a),
        Command::Table(a) => table(a),
        Command::Replay(a) => replay(a),
    }
}

fn read_input(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) if p != Path::new("-") => std::fs::read_to_string(p)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display()))),
        _ => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text)?;
            Ok(text)
        }
    }
}

fn estimate(a: &EstimateArgs) -> Result<(), CliError> {
    let text = read_input(a.input.as_deref())?;
    let values = input::parse_values(&text, a.drop_missing)?;
    if values.len() < 2 {
        return Err(CliError::Usage(format!(
            "need at least 2 observations, got {}",
            values.len()
        )));
    }
    let n = values.len();
    let sample = Sample::new(values)?;
    let kinds: Vec<EstimatorKind> = match &a.estimators {
        Some(k) => k.clone(),
        None => EstimatorKind::ALL
            .into_iter()
            .filter(|&k| correction::factor(k, n, a.model).is_ok())
            .collect(),
    };

    let mut out = io::stdout().lock();
    writeln!(out, "estimator,n,raw,factor,constant,estimate")?;
    for kind in kinds {
        let raw = estimators::raw(&sample, kind)?;
        let factor = correction::factor(kind, n, a.model)?;
        let estimate = estimators::estimate(&sample, kind, a.model)?;
        writeln!(
            out,
            "{kind},{n},{raw},{},{},{estimate}",
            format_sig(factor),
            format_sig(asymptotic_constant(kind))
        )?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Clone, Copy)]
enum Simulation<'a> {
    Calibrate(&'a CalibrateArgs),
    Efficiency(&'a EfficiencyArgs),
}

impl Simulation<'_> {
    fn sim(&self) -> &SimulationArgs {
        match self {
            Simulation::Calibrate(a) => &a.sim,
            Simulation::Efficiency(a) => &a.sim,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Simulation::Calibrate(_) => "calibrate",
            Simulation::Efficiency(_) => "efficiency",
        }
    }

    fn study(&self) -> StudyKind {
        match self {
            Simulation::Calibrate(_) => StudyKind::Factors,
            Simulation::Efficiency(_) => StudyKind::Efficiency,
        }
    }

    fn moments_out(&self) -> Option<&Path> {
        match self {
            Simulation::Calibrate(a) => a.moments_out.as_deref(),
            Simulation::Efficiency(_) => None,
        }
    }

    fn config(&self) -> SimulationConfig {
        let sim = self.sim();
        let mut config = SimulationConfig::new(sim.n.0.clone(), sim.reps, sim.seed)
            .with_workers(sim.workers.unwrap_or_else(default_workers));
        if let Simulation::Calibrate(a) = self {
            config = config.with_estimators(a.estimators.clone());
        }
        config
    }

    fn config_json(&self, config: &SimulationConfig) -> serde_json::Value {
        let mut v = serde_json::json!({
            "n": config.n_values,
            "reps": config.repetitions,
            "seed": config.seed,
            "workers": config.workers,
        });
        match self {
            Simulation::Calibrate(_) => {
                v["estimators"] = config.estimators.iter().map(|k| k.as_str()).collect();
            }
            Simulation::Efficiency(_) => {
                v["model"] = "refined".into();
            }
        }
        v
    }
}

fn interrupt_flag() -> &'static AtomicBool {
    static FLAG: AtomicBool = AtomicBool::new(false);
    static INSTALL: Once = Once::new();
    INSTALL.call_once(|| {
        let installed = ctrlc::set_handler(|| {
            // a second interrupt skips the orderly shutdown
            if FLAG.swap(true, Ordering::SeqCst) {
                std::process::exit(130);
            }
        });
        if let Err(e) = installed {
            log::warn!("cannot install interrupt handler: {e}");
        }
    });
    &FLAG
}

fn create(path: &Path) -> Result<Box<dyn Write>, CliError> {
    let file = File::create(path)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", path.display())))?;
    Ok(Box::new(BufWriter::new(file)))
}

fn simulate(job: Simulation, argv: &[String]) -> Result<(), CliError> {
    let sim = job.sim();
    let config = job.config();
    config.validate(job.study())?;
    let cancel = interrupt_flag();
    let started_at = now();

    let main: Box<dyn Write> = match &sim.out {
        Some(p) => create(p)?,
        None => Box::new(io::stdout().lock()),
    };
    let mut main = HashingWriter::new(main);
    let mut moments = job.moments_out().map(create).transpose()?.map(HashingWriter::new);

    let outcome = write_study(
        job,
        &config,
        &mut main,
        moments.as_mut().map(|m| m as &mut dyn Write),
        Some(cancel),
        sim.quiet,
    )?;
    let (_, output_sha256) = main.finish()?;
    let moments_sha256 = moments.map(|m| m.finish().map(|(_, d)| d)).transpose()?;

    let manifest_path = sim
        .manifest
        .clone()
        .or_else(|| sim.out.as_deref().map(default_manifest_path));
    if let Some(path) = manifest_path {
        let mut args = argv.to_vec();
        if !args.iter().any(|a| a == "--seed" || a.starts_with("--seed=")) {
            args.extend(["--seed".to_string(), config.seed.to_string()]);
        }
        RunManifest {
            command: job.name().into(),
            args,
            config: job.config_json(&config),
            version: env!("CARGO_PKG_VERSION").into(),
            started_at,
            finished_at: now(),
            output_sha256,
            moments_sha256,
            truncated: outcome.truncated,
        }
        .write(&path)?;
    }
    if outcome.truncated {
        return Err(CliError::Interrupted);
    }
    Ok(())
}

/// Streams the study as CSV, flushing after every row so an interrupted run
/// leaves complete lines behind.
fn write_study(
    job: Simulation,
    config: &SimulationConfig,
    out: &mut dyn Write,
    mut moments: Option<&mut dyn Write>,
    cancel: Option<&AtomicBool>,
    quiet: bool,
) -> Result<StudyOutcome, CliError> {
    match job.study() {
        StudyKind::Factors => writeln!(out, "n,estimator,factor,se,mean_raw,reps,seed")?,
        StudyKind::Efficiency => {
            writeln!(out, "n,e_mad,e_sn,e_qn,se_mad,se_sn,se_qn,reps,seed")?
        }
    }
    if let Some(m) = moments.as_deref_mut() {
        writeln!(m, "n,estimator,mean,variance,std_variance,factor,se")?;
    }

    let sizes: BTreeSet<usize> = config.n_values.iter().copied().collect();
    let per_n = match job.study() {
        StudyKind::Factors => config.estimators.len(),
        StudyKind::Efficiency => 1,
    };
    let mut emitted = 0usize;
    let outcome = montecarlo::run_study(config, job.study(), cancel, |row| {
        let n = match &row {
            StudyRow::Factor(r) => {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.n,
                    r.estimator,
                    format_sig(r.factor()),
                    format_sig(r.factor_se()),
                    format_sig(r.mean),
                    r.count,
                    r.seed
                )?;
                if let Some(m) = moments.as_deref_mut() {
                    writeln!(
                        m,
                        "{},{},{},{},{},{},{}",
                        r.n,
                        r.estimator,
                        r.mean,
                        r.variance,
                        r.std_variance,
                        format_sig(r.factor()),
                        format_sig(r.factor_se())
                    )?;
                    m.flush()?;
                }
                r.n
            }
            StudyRow::Efficiency(r) => {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    r.n,
                    format_sig(r.e_mad),
                    format_sig(r.e_sn),
                    format_sig(r.e_qn),
                    format_sig(r.se_mad),
                    format_sig(r.se_sn),
                    format_sig(r.se_qn),
                    r.reps,
                    r.seed
                )?;
                r.n
            }
        };
        out.flush()?;
        emitted += 1;
        if !quiet && emitted % per_n == 0 {
            eprintln!(
                "{}: n = {n} done ({}/{})",
                job.name(),
                emitted / per_n,
                sizes.len()
            );
        }
        Ok(())
    })?;

    if outcome.truncated {
        writeln!(out, "#truncated")?;
        out.flush()?;
        if let Some(m) = moments.as_deref_mut() {
            writeln!(m, "#truncated")?;
            m.flush()?;
        }
    }
    Ok(outcome)
}

fn replay(a: &ReplayArgs) -> Result<(), CliError> {
    let manifest = RunManifest::read(&a.manifest).map_err(|e| {
        CliError::Usage(format!("cannot read manifest {}: {e}", a.manifest.display()))
    })?;
    if manifest.truncated {
        return Err(CliError::Usage(
            "manifest records an interrupted run; nothing to compare".into(),
        ));
    }
    let argv = std::iter::once("robust-scale".to_string()).chain(manifest.args.iter().cloned());
    let cli = Cli::try_parse_from(argv)
        .map_err(|e| CliError::Usage(format!("manifest arguments: {e}")))?;
    let job = match &cli.command {
        Command::Calibrate(a) => Simulation::Calibrate(a),
        Command::Efficiency(a) => Simulation::Efficiency(a),
        _ => {
            return Err(CliError::Usage(
                "manifest does not describe a simulation".into(),
            ))
        }
    };
    let config = job.config();
    config.validate(job.study())?;

    let mut main = HashingWriter::new(io::sink());
    let mut moments = manifest
        .moments_sha256
        .as_ref()
        .map(|_| HashingWriter::new(io::sink()));
    write_study(
        job,
        &config,
        &mut main,
        moments.as_mut().map(|m| m as &mut dyn Write),
        None,
        true,
    )?;
    let (_, digest) = main.finish()?;
    if digest != manifest.output_sha256 {
        return Err(CliError::Internal(format!(
            "output digest mismatch: recorded {}, replayed {digest}",
            manifest.output_sha256
        )));
    }
    if let (Some(m), Some(recorded)) = (moments, &manifest.moments_sha256) {
        let (_, digest) = m.finish()?;
        if &digest != recorded {
            return Err(CliError::Internal(format!(
                "moments digest mismatch: recorded {recorded}, replayed {digest}"
            )));
        }
    }
    println!("ok: {} output reproduced (sha256 {digest})", manifest.command);
    Ok(())
}

fn fit(a: &FitArgs) -> Result<(), CliError> {
    let text = read_input(Some(&a.input))?;
    let rows = fitting::read_factor_csv(text.as_bytes(), a.estimator)?;
    if a.estimator.is_none() {
        let kinds: BTreeSet<EstimatorKind> = rows.iter().filter_map(|r| r.estimator).collect();
        if kinds.len() > 1 {
            return Err(CliError::Usage(
                "input holds several estimators; choose one with --estimator".into(),
            ));
        }
    }
    let points: Vec<(usize, f64)> = rows.iter().map(|r| (r.n, r.factor)).collect();
    let points = a.window.filter(&points);

    let json = match a.parity {
        Some(p) => serde_json::to_value(fitting::fit_inverse_poly(&points, p)?),
        None => {
            let odd = fitting::fit_inverse_poly(&points, Parity::Odd)?;
            let even = fitting::fit_inverse_poly(&points, Parity::Even)?;
            serde_json::to_value(serde_json::json!({ "odd": odd, "even": even }))
        }
    }
    .map_err(|e| CliError::Internal(e.to_string()))?;
    let text = serde_json::to_string_pretty(&json).map_err(|e| CliError::Internal(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn compare(a: &CompareArgs) -> Result<(), CliError> {
    let [model_a, model_b] = a.models[..] else {
        return Err(CliError::Usage(format!(
            "--models takes exactly two models, got {}",
            a.models.len()
        )));
    };
    let report = correction::compare_models(a.estimator, model_a, model_b, a.n.0.iter().copied())?;
    let mut out = io::stdout().lock();
    report.write_csv(&mut out)?;
    writeln!(
        out,
        "# max_abs_diff={},n_at_max={}",
        format_sig(report.max_abs_diff),
        report.n_at_max
    )?;
    out.flush()?;
    Ok(())
}

fn table(a: &TableArgs) -> Result<(), CliError> {
    let out = io::stdout().lock();
    if a.published {
        correction::write_published_csv(a.estimator, out)?;
    } else {
        correction::write_factor_csv(a.estimator, a.model, a.n.0.iter().copied(), out)?;
    }
    Ok(())
}
