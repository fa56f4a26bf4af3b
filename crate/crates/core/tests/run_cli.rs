//! End-to-end runs of the `hermite-vlasov` binary.

use std::path::Path;
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hermite-vlasov"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    let mut all = vec!["run", "--out-dir", dir.to_str().unwrap()];
    all.extend_from_slice(args);
    cli(&all)
}

/// Header and rows of `diagnostics.csv`.
fn diagnostics(dir: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut reader = csv::Reader::from_path(dir.join("diagnostics.csv")).unwrap();
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn two_stream_run_conserves_mass_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["--scenario", "two_stream", "--nx", "32", "--nh", "32", "--t-final", "5", "--snapshot-times", "2.5,5"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = diagnostics(dir.path());
    let dev = column(&header, "mass_rel_dev");
    assert!(rows.iter().all(|r| r[dev] < 1e-12));
    let time = column(&header, "time");
    assert_eq!(rows[0][time], 0.0);
    assert!((rows.last().unwrap()[time] - 5.0).abs() < 1e-12);
    let alpha = column(&header, "electrons_alpha");
    assert!(rows.windows(2).all(|w| w[1][alpha] <= w[0][alpha] && w[1][alpha] > 0.0));
    for t in ["2.5", "5"] {
        let snap = std::fs::read_to_string(dir.path().join(format!("snapshot_electrons_t{t}.txt"))).unwrap();
        assert!(snap.contains("nx 128") && snap.lines().count() > 128);
    }
}

#[test]
fn zero_final_time_emits_initial_state_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["--scenario", "landau", "--nx", "8", "--nh", "8", "--t-final", "0"]);
    assert!(out.status.success());
    let (_, rows) = diagnostics(dir.path());
    assert_eq!(rows.len(), 1);
    let mut files: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    files.sort();
    assert_eq!(files, ["diagnostics.csv", "manifest.toml", "snapshot_electrons_t0.txt"]);
}

#[test]
fn invalid_input_fails_without_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out");
    let out = run_in(&target, &["--scenario", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope"));
    assert!(!target.exists());
    let out = run_in(&target, &["--scenario", "landau", "--nh", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!target.exists());
}

#[test]
fn oversized_step_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["--scenario", "landau", "--nx", "8", "--nh", "8", "--dt", "1", "--t-final", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("CFL"));
}

#[test]
fn runs_are_deterministic() {
    let args = ["--scenario", "ion_acoustic", "--nx", "8", "--nh", "8", "--t-final", "0.5"];
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert!(run_in(a.path(), &args).status.success());
    assert!(run_in(b.path(), &args).status.success());
    let read = |d: &Path| std::fs::read(d.join("diagnostics.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

#[test]
fn manifest_records_the_resolved_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["--scenario", "landau", "--method", "fourier", "--poisson", "spectral", "--nx", "8", "--nh", "16", "--t-final", "0.2"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest: toml::Table = std::fs::read_to_string(dir.path().join("manifest.toml")).unwrap().parse().unwrap();
    for key in ["scenario", "method", "poisson", "n_x", "t_final", "dt_used", "steps", "gamma", "filter", "version"] {
        assert!(manifest.contains_key(key), "missing {key}");
    }
    assert_eq!(manifest["method"].as_str(), Some("fourier"));
    let steps = manifest["steps"].as_integer().unwrap() as f64;
    assert!((steps * manifest["dt_used"].as_float().unwrap() - 0.2).abs() < 1e-12);
    assert_eq!(manifest["species"]["electrons"]["n_h"].as_integer(), Some(16));
}

#[test]
fn printed_config_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let printed = cli(&["print-config", "--scenario", "two_stream", "--nx", "8", "--nh", "8", "--t-final", "0.2"]);
    assert!(printed.status.success());
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, &printed.stdout).unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(run_in(&a, &["--config", cfg.to_str().unwrap()]).status.success());
    assert!(run_in(&b, &["--scenario", "two_stream", "--nx", "8", "--nh", "8", "--t-final", "0.2"]).status.success());
    let read = |d: &Path| std::fs::read(d.join("diagnostics.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn lists_every_scenario() {
    let out = cli(&["list-scenarios"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["landau", "two_stream", "bump_on_tail", "ion_acoustic"] {
        assert!(text.contains(name));
    }
}
