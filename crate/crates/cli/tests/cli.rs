use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_robust-scale"));
    c.env_remove("ROBUST_SCALE_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn field(csv: &str, estimator: &str, column: usize) -> f64 {
    csv.lines()
        .find(|l| l.starts_with(&format!("{estimator},")))
        .unwrap_or_else(|| panic!("no {estimator} row in {csv}"))
        .split(',')
        .nth(column)
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn estimate_two_points() {
    let o = run_stdin(&["estimate"], "1\n2\n");
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().next().unwrap(), "estimator,n,raw,factor,constant,estimate");
    assert!((field(&out, "QN", 5) - 0.88655).abs() < 5e-5, "{out}");
    assert!((field(&out, "SD", 5) - (std::f64::consts::PI / 4.0).sqrt()).abs() < 1e-12);
}

#[test]
fn estimate_constant_sample_is_zero() {
    let o = run_stdin(&["estimate", "--estimators", "mad,sn,qn,sd"], "5\n5\n5\n");
    assert!(o.status.success());
    let out = stdout(&o);
    for kind in ["MAD", "SN", "QN", "SD"] {
        assert_eq!(field(&out, kind, 5), 0.0);
    }
}

#[test]
fn estimate_reads_file_with_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.csv");
    fs::write(&path, "value\n3\n1\n4\n1\n5\n").unwrap();
    let o = run(&["estimate", "--estimators", "qn", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(field(&stdout(&o), "QN", 1), 5.0);
}

#[test]
fn estimate_input_errors_exit_2() {
    let o = run_stdin(&["estimate"], "1\n2\nabc\n4\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let o = run_stdin(&["estimate"], "1\n");
    assert_eq!(o.status.code(), Some(2));

    let o = run_stdin(&["estimate"], "1\nNA\n2\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"));

    let o = run_stdin(&["estimate", "--drop-missing"], "1\nNA\n2\n");
    assert!(o.status.success());

    let o = run_stdin(&["estimate", "--estimators", "mad", "--model", "croux1992"], "1\n2\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("model not defined"));

    let o = run(&["estimate", "/nonexistent/input"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["calibrate", "--n", "2..5", "--estimators", "sd", "--reps", "100"],
        vec!["calibrate", "--n", "2..5", "--reps", "50"],
        vec!["calibrate", "--n", "1..5", "--reps", "100"],
        vec!["calibrate", "--n", "5..2"],
        vec!["efficiency"],
        vec!["compare-models", "--estimator", "sn", "--models", "refined"],
        vec!["frobnicate"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

fn calibrate_bytes(dir: &Path, name: &str, extra: &[&str]) -> Vec<u8> {
    let out = dir.join(name);
    let mut args = vec!["calibrate", "--quiet", "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    fs::read(out).unwrap()
}

#[test]
fn calibrate_rows_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let common = ["--n", "2..20", "--reps", "2000", "--seed", "42"];
    let one = calibrate_bytes(dir.path(), "w1.csv", &[&common[..], &["--workers", "1"]].concat());
    let eight = calibrate_bytes(dir.path(), "w8.csv", &[&common[..], &["--workers", "8"]].concat());
    assert_eq!(one, eight);
    let text = String::from_utf8(one).unwrap();
    assert_eq!(text.lines().count(), 1 + 19 * 2);
    assert!(!text.contains('\r'));
    assert!(dir.path().join("w1.csv.manifest.json").exists());

    let other = calibrate_bytes(dir.path(), "s7.csv", &["--n", "2..20", "--reps", "2000", "--seed", "7"]);
    assert_ne!(text.as_bytes(), other.as_slice());
}

#[test]
fn seed_from_environment_only_without_flag() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["calibrate", "--quiet", "--n", "5", "--reps", "500"];
    let with_env = |extra: &[&str]| {
        let o = bin()
            .args(args)
            .args(extra)
            .env("ROBUST_SCALE_SEED", "99")
            .current_dir(dir.path())
            .output()
            .unwrap();
        assert!(o.status.success());
        stdout(&o)
    };
    let explicit = stdout(&run(&[&args[..], &["--seed", "99"]].concat()));
    assert_eq!(with_env(&[]), explicit);
    let flag_wins = with_env(&["--seed", "3"]);
    assert_eq!(flag_wins, stdout(&run(&[&args[..], &["--seed", "3"]].concat())));
    assert!(flag_wins.contains(",3\n"));
}

#[test]
fn calibrate_output_feeds_fit() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("qn.csv");
    let o = run(&[
        "calibrate", "--quiet", "--estimators", "qn", "--n", "2..40", "--reps", "500",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let o = run(&["fit", out.to_str().unwrap(), "--window", "10..40", "--parity", "odd"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["parity"], "odd");
    assert_eq!(v["n_points"], 15);
    assert!(v["alpha"].as_f64().unwrap().is_finite());
}

#[test]
fn fit_published_table() {
    let o = run(&["table", "--published", "--estimator", "qn"]);
    assert!(o.status.success());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("published.csv");
    fs::write(&path, o.stdout).unwrap();
    let o = run(&["fit", path.to_str().unwrap(), "--parity", "odd"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["alpha"].as_f64().unwrap() + 1.594).abs() < 0.05, "{v}");

    let o = run(&["fit", path.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["odd"]["alpha"].is_number() && v["even"]["alpha"].is_number());
}

#[test]
fn fit_with_too_few_points_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    fs::write(&path, "n,factor\n101,1.01\n103,1.009\n").unwrap();
    let o = run(&["fit", path.to_str().unwrap(), "--parity", "odd", "--window", "102..1000"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("underdetermined"));

    fs::write(&path, "n,estimator,factor\n101,SN,1.01\n103,QN,1.009\n").unwrap();
    let o = run(&["fit", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn efficiency_at_two_is_one() {
    let o = run(&["efficiency", "--quiet", "--n", "2", "--reps", "1000"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().next().unwrap(), "n,e_mad,e_sn,e_qn,se_mad,se_sn,se_qn,reps,seed");
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    for e in &row[1..4] {
        assert!((e.parse::<f64>().unwrap() - 1.0).abs() < 1e-9, "{out}");
    }
}

#[test]
fn compare_and_table_outputs() {
    let o = run(&["compare-models", "--estimator", "sn", "--models", "refined,croux1992"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("n,estimator,model_a,model_b,factor_a,factor_b,abs_diff\n"));
    assert!(out.trim_end().ends_with("n_at_max=25"), "{out}");

    let o = run(&["table", "--estimator", "qn", "--n", "2..3"]);
    assert_eq!(stdout(&o), "n,factor,model,estimator\n2,0.399500,refined,QN\n3,0.993900,refined,QN\n");
}

#[test]
fn replay_checks_the_digest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.csv");
    let o = run(&[
        "efficiency", "--quiet", "--n", "3,5", "--reps", "300", "--workers", "2",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let manifest = dir.path().join("e.csv.manifest.json");
    let o = run(&["replay", manifest.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));

    let text = fs::read_to_string(&manifest).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["output_sha256"] = "0".repeat(64).into();
    fs::write(&manifest, v.to_string()).unwrap();
    let o = run(&["replay", manifest.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("mismatch"));
}

#[cfg(unix)]
#[test]
fn interrupt_leaves_truncated_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("slow.csv");
    let mut child = bin()
        .args([
            "efficiency", "--quiet", "--workers", "1", "--reps", "2000000", "--n", "2,3,400",
            "--out", out.to_str().unwrap(),
        ])
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();

    // wait for the first completed row
    let start = Instant::now();
    while fs::read_to_string(&out).map_or(0, |s| s.lines().count()) < 2 {
        assert!(start.elapsed() < Duration::from_secs(120), "no progress");
        std::thread::sleep(Duration::from_millis(20));
    }
    let killed = Command::new("kill")
        .args(["-INT", &child.id().to_string()])
        .status()
        .unwrap();
    assert!(killed.success());
    let status = child.wait().unwrap();
    assert_eq!(status.code(), Some(130));

    let text = fs::read_to_string(&out).unwrap();
    assert!(text.ends_with("#truncated\n"), "{text}");
    assert!(text.lines().count() < 5);
    let manifest = fs::read_to_string(dir.path().join("slow.csv.manifest.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&manifest).unwrap();
    assert_eq!(v["truncated"], true);
}
