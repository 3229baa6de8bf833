use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_qst-design");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env("RUST_LOG", "off").output().unwrap()
}

fn data_rows(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(str::to_owned)
        .collect()
}

fn write_profile(dir: &Path, n: usize, j: &[f64]) -> String {
    let path = dir.join(format!("profile_{n}.json"));
    let text = serde_json::json!({ "n": n, "couplings": j }).to_string();
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn single_generation_campaign_writes_one_trace_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = run(&[
        "design", "--n", "7", "--runs", "1", "--max-generations", "1", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let traces: Vec<_> = fs::read_dir(out.join("traces")).unwrap().collect();
    assert_eq!(traces.len(), 1);
    let rows = data_rows(&out.join("traces/n7_run000.csv"));
    assert_eq!(rows.len(), 1);
    assert!(rows[0].starts_with("1,"));

    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(summary.contains("seed=0"));
    assert!(summary.contains("config_hash="));
    assert!(summary.contains("version="));
    assert!(out.join("best_profile_n7.json").exists());
    assert!(out.join("runs_n7.json").exists());
    assert_eq!(data_rows(&out.join("timings.csv")).len(), 1);
}

#[test]
fn design_replay_is_byte_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let go = |tag: &str, workers: &str| {
        let out = dir.path().join(tag);
        let o = run(&[
            "design", "--n", "9", "--runs", "3", "--seed", "5", "--max-generations", "30", "--fitness", "fit2",
            "--workers", workers, "--out", out.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        out
    };
    let a = go("a", "1");
    let b = go("b", "4");
    for f in ["summary.csv", "runs_n9.json", "best_profile_n9.json", "traces/n9_run002.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn zero_disorder_reproduces_design_probability() {
    let dir = tempfile::tempdir().unwrap();
    let profile = write_profile(dir.path(), 5, &[0.5, 0.8, 0.8, 0.5]);
    let out = dir.path().join("o");
    let o = run(&["disorder", "--profile", &profile, "--sigmas", "0", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let rows = data_rows(&out.join("disorder_curve.csv"));
    assert_eq!(rows.len(), 1);
    let cols: Vec<f64> = rows[0].split(',').map(|s| s.parse().unwrap()).collect();
    let p = qst_design::dynamics::end_to_end_probability(&[0.5, 0.8, 0.8, 0.5], 10.0).unwrap();
    assert_eq!(cols[0], 0.0);
    assert_eq!(cols[1], p);
    assert_eq!(cols[2], 0.0);
    assert!(!out.join("decay_fit.json").exists());
}

#[test]
fn full_disorder_sweep_writes_fit() {
    let dir = tempfile::tempdir().unwrap();
    let profile = write_profile(dir.path(), 5, &[0.5, 0.8, 0.8, 0.5]);
    let out = dir.path().join("o");
    let o = run(&["disorder", "--profile", &profile, "--realizations", "100", "--out", out.to_str().unwrap()]);
    assert!(matches!(o.status.code(), Some(0) | Some(2)));
    assert_eq!(data_rows(&out.join("disorder_curve.csv")).len(), 11);
    let fit: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("decay_fit.json")).unwrap()).unwrap();
    assert_eq!(fit["accepted"].as_bool().unwrap(), o.status.code() == Some(0));
    assert!(fit["meta"]["config_hash"].is_string());
}

#[test]
fn corrupt_profile_names_field_and_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"n": 4, "couplings": [1.0, 2.0]}"#).unwrap();
    let o = run(&["disorder", "--profile", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("couplings"));

    fs::write(&path, "{not json").unwrap();
    let o = run(&["spectra", "--profile", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn missing_profile_exits_one() {
    assert_eq!(run(&["disorder", "--profile", "/no/such/file.json"]).status.code(), Some(1));
    assert_eq!(run(&["spectra"]).status.code(), Some(1));
    assert_eq!(run(&["design"]).status.code(), Some(1));
    assert_eq!(run(&["design", "--n", "1"]).status.code(), Some(1));
    assert_eq!(run(&["design", "--n", "5", "--fitness", "fit1", "--beta", "0.5"]).status.code(), Some(1));
}

#[test]
fn three_site_spectrum_has_one_ratio_and_unit_mass() {
    let dir = tempfile::tempdir().unwrap();
    let profile = write_profile(dir.path(), 3, &[0.7, 1.3]);
    let out = dir.path().join("o");
    let o = run(&["spectra", "--profile", &profile, "--k-max", "1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(out.join("gap_ratio_histogram.csv")).unwrap();
    assert!(text.contains("n_ratios=1 "));
    let rows = data_rows(&out.join("gap_ratio_histogram.csv"));
    assert_eq!(rows.len(), 200);
    let (mass, reference): (f64, f64) = rows.iter().fold((0.0, 0.0), |(m, r), row| {
        let c: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
        (m + c[2], r + c[3])
    });
    assert!((mass - 1.0).abs() < 1e-12);
    assert!((reference - 1.0).abs() < 1e-3);
    let kay: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("kay_report.json")).unwrap()).unwrap();
    assert_eq!(kay["levels"].as_array().unwrap().len(), 3);
}

#[test]
fn oversized_sector_reports_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let j = vec![1.0; 29];
    let profile = write_profile(dir.path(), 30, &j);
    let o = run(&["spectra", "--profile", &profile, "--k-max", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("C(30,4)") && err.contains("27405"), "{err}");
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(
        &cfg,
        r#"{"chain_lengths": [5], "n_runs": 2, "master_seed": 3,
            "fitness": {"kind": "fit2", "beta": 0.5},
            "hyperparameters": {"max_generations": 5}}"#,
    )
    .unwrap();
    let out = dir.path().join("o");
    let o = run(&["design", "--config", cfg.to_str().unwrap(), "--runs", "1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(data_rows(&out.join("timings.csv")).len(), 1);
    let runs: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("runs_n5.json")).unwrap()).unwrap();
    assert_eq!(runs["meta"]["seed"], 3);
    assert!(runs["records"][0]["generations"].as_u64().unwrap() <= 5);

    fs::write(&cfg, r#"{"chain_lengths": [5], "bogus": 1}"#).unwrap();
    assert_eq!(run(&["design", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
}
