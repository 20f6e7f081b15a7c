//! End-to-end checks of the binary: flag/file precedence, validation, exit
//! codes, and byte-identical artifacts across thread counts.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn msle() -> Command {
    Command::new(env!("CARGO_BIN_EXE_msle"))
}

fn run(args: &[&str]) -> Output {
    msle().args(args).output().expect("binary runs")
}

#[test]
fn usage_error_on_bad_beta() {
    let out = run(&["sample", "--beta", "3"]);
    assert_eq!(
        out.status.code(),
        Some(64),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn usage_error_on_unknown_flag() {
    let out = run(&["locallaw", "--does-not-exist", "1"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn usage_error_on_empty_n_list_before_compute() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "n =\n").unwrap();
    let out = run(&["locallaw", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn usage_error_on_unknown_config_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "bogus_key = 3\n").unwrap();
    let out = run(&["identities", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(64));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bogus_key"), "stderr: {err}");
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    // File asks for 20 trials; the flag forces 5. Echoed config proves it.
    fs::write(&cfg, "trials = 20\nseed = 9 # comment\n").unwrap();
    let outdir = dir.path().join("out");
    let out = run(&[
        "locallaw",
        "--config",
        cfg.to_str().unwrap(),
        "--trials",
        "5",
        "--n",
        "16,32",
        "-o",
        outdir.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(outdir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["config"]["trials"], "5");
    assert_eq!(summary["config"]["seed"], "9");
    assert_eq!(summary["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn identities_run_passes_and_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let outdir = dir.path().join("out");
    let out = run(&["identities", "--seed", "1", "-o", outdir.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(outdir.join("summary.json")).unwrap()).unwrap();
    let criteria = summary["criteria"].as_array().unwrap();
    assert!(criteria.len() >= 6);
    assert!(criteria.iter().all(|c| c["pass"].as_bool().unwrap()));
    for key in ["config", "criteria", "slopes", "elapsed_seconds", "version"] {
        assert!(summary.get(key).is_some(), "missing key {key}");
    }
}

#[test]
fn criterion_failure_exits_one_with_summary_written() {
    // The stability cluster contains a known-red criterion (the positive-time
    // perturbation exponent window); the run must exit 1 and still write its
    // summary.
    let dir = tempfile::tempdir().unwrap();
    let outdir = dir.path().join("out");
    let out = run(&["stability", "--seed", "3", "-o", outdir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stdout));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(outdir.join("summary.json")).unwrap()).unwrap();
    let criteria = summary["criteria"].as_array().unwrap();
    assert!(criteria.iter().any(|c| !c["pass"].as_bool().unwrap()));
    assert!(criteria.iter().filter(|c| c["pass"].as_bool().unwrap()).count() >= 4);
}

#[test]
fn io_failure_exits_two() {
    // Output directory path collides with an existing file.
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("blocked");
    fs::write(&blocker, "file in the way").unwrap();
    let outdir = blocker.join("out");
    let out = run(&["identities", "-o", outdir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn seed_env_fallback_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let outdir = dir.path().join("out");
    let out = msle()
        .args(["identities", "-o", outdir.to_str().unwrap()])
        .env("MSLE_SEED", "12345")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(outdir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["config"]["seed"], "12345");
}

fn locallaw_csv(dir: &Path, threads: &str) -> Vec<u8> {
    let outdir = dir.join(format!("out-{threads}"));
    let out = run(&[
        "locallaw",
        "--n",
        "16,32,64",
        "--trials",
        "12",
        "--seed",
        "7",
        "--threads",
        threads,
        "-o",
        outdir.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    fs::read(outdir.join("locallaw.csv")).unwrap()
}

#[test]
fn csv_is_byte_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = locallaw_csv(dir.path(), "1");
    let b = locallaw_csv(dir.path(), "2");
    assert_eq!(a, b, "thread count changed the artifact bytes");
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,trial,sup_error,param"));
    // 3 sizes x 12 trials data rows.
    assert_eq!(text.lines().count(), 1 + 36);
}

#[test]
fn remaining_subcommands_write_expected_artifacts() {
    let dir = tempfile::tempdir().unwrap();

    let sample_out = dir.path().join("sample");
    let out = run(&[
        "sample", "--n", "16,64", "--trials", "6", "--seed", "2", "-o",
        sample_out.to_str().unwrap(),
    ]);
    // Small n makes the edge-frequency criterion unreliable; only the exit
    // contract and artifacts are checked here.
    assert!(matches!(out.status.code(), Some(0 | 1)));
    assert!(sample_out.join("path.csv").exists());
    assert!(sample_out.join("summary.json").exists());

    let conv_out = dir.path().join("converge");
    let out = run(&[
        "converge", "--n", "16,32,64", "--T", "0.1", "--trials", "10", "--seed", "5", "-o",
        conv_out.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = fs::read_to_string(conv_out.join("converge.csv")).unwrap();
    assert_eq!(text.lines().next().unwrap(), "n,trial,sup_error,param");

    let tu_out = dir.path().join("timeuniform");
    let out = run(&[
        "timeuniform", "--n", "64", "--T", "0.5", "--trials", "5", "--seed", "6", "-o",
        tu_out.to_str().unwrap(),
    ]);
    assert!(matches!(out.status.code(), Some(0 | 1)));
    assert!(tu_out.join("timeuniform.csv").exists());

    let flow_out = dir.path().join("flow");
    let out = run(&[
        "flow", "--n", "32", "--trials", "3", "--seed", "7", "-o",
        flow_out.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = fs::read_to_string(flow_out.join("flow.csv")).unwrap();
    assert_eq!(text.lines().next().unwrap(), "t,re_z0,im_z0,re_g,im_g,alive");

    let conc_out = dir.path().join("concentration");
    let out = run(&[
        "concentration", "--n", "32,64,128", "--trials", "60", "--seed", "8", "-o",
        conc_out.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(conc_out.join("concentration.csv").exists());
}

#[test]
fn locallaw_rows_match_spec_shape() {
    let dir = tempfile::tempdir().unwrap();
    let outdir = dir.path().join("out");
    let out = run(&[
        "locallaw",
        "--n",
        "32,64,128",
        "--t",
        "1",
        "--trials",
        "20",
        "--seed",
        "3",
        "-o",
        outdir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(outdir.join("locallaw.csv")).unwrap();
    assert_eq!(
        text.lines().count(),
        1 + 60,
        "20 trials x 3 sizes plus header"
    );
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(outdir.join("summary.json")).unwrap()).unwrap();
    assert!(summary["slopes"]["locallaw"].as_f64().unwrap() < 0.0);
}
