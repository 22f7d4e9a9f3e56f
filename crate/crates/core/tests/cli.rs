use std::io::Write;

use pbk_core::cli::run_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["pbk"];
    full.extend_from_slice(args);
    let code = run_with(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn config(json: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(json.as_bytes()).unwrap();
    f
}

#[test]
fn kloosterman_trivial_level_matches_classical() {
    let cfg = config(r#"{"schema_version": 1, "command": "kloosterman", "m_list": [1, 2, 5], "n_list": [1, 3, 10], "c_max": 50}"#);
    let (code, out, _) = run(&["--config", cfg.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema_version"], 1);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 9 * 50);
    for r in rows {
        let (re, cl) = (r["re"].as_f64().unwrap(), r["classical"].as_f64().unwrap());
        assert!((re - cl).abs() < 1e-9, "{r}");
        assert!(r["weil_slack"].as_f64().unwrap() >= -1e-9);
    }
}

#[test]
fn kloosterman_level11_vanishes_off_multiples() {
    let cfg = config(r#"{"schema_version": 1, "command": "kloosterman", "level": {"11": 1}, "m_list": [1, 3], "c_max": 40}"#);
    let (code, out, _) = run(&["--config", cfg.path().to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code, 0);
    for line in out.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let c: u64 = cols[2].parse().unwrap();
        let re: f64 = cols[3].parse().unwrap();
        if c % 11 != 0 {
            assert!(re.abs() < 1e-9, "{line}");
        }
    }
}

#[test]
fn empty_m_list_is_an_empty_table() {
    let cfg = config(r#"{"schema_version": 1, "command": "kloosterman", "m_list": [], "c_max": 10}"#);
    let (code, out, _) = run(&["--config", cfg.path().to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 1);
}

#[test]
fn invalid_family_is_a_config_error() {
    let cfg = config(r#"{"schema_version": 1, "command": "bk-geometric", "family": {"family": "family1", "T": 100, "delta": 1}}"#);
    let (code, _, err) = run(&["--config", cfg.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("1 <= Δ < T/100"), "{err}");
    let rec: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(rec["exit_code"], 2);
}

#[test]
fn schema_and_unknown_fields_rejected() {
    let cfg = config(r#"{"schema_version": 2, "command": "transforms"}"#);
    assert_eq!(run(&["--config", cfg.path().to_str().unwrap()]).0, 2);
    let cfg = config(r#"{"schema_version": 1, "command": "transforms", "bogus": 3}"#);
    assert_eq!(run(&["--config", cfg.path().to_str().unwrap()]).0, 2);
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["--command", "transforms", "--threads", "0"]).0, 2);
}

#[test]
fn verify_tolerance_failure_exit_code() {
    let cfg = config(r#"{"schema_version": 1, "command": "verify-petersson2", "m_list": [2], "c_max": 20000, "tolerance": 1e-12}"#);
    let (code, out, _) = run(&["--config", cfg.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["pass"], false);
    assert!(v["rows"][0]["lambda_computed"].as_f64().unwrap() < 0.0);
}

#[test]
fn transforms_pass() {
    let (code, out, _) = run(&["--command", "transforms", "--format", "csv"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn output_file_and_thread_invariance() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, threads) in [(&a, "1"), (&b, "3")] {
        let (code, out, _) = run(&["--command", "bk-geometric", "--threads", threads, "--out", path.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert!(out.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn ill_conditioned_ratio_is_a_numerical_failure() {
    let cfg = config(r#"{"schema_version": 1, "command": "verify-petersson2", "m_list": [2], "c_max": 2000}"#);
    let (code, _, err) = run(&["--config", cfg.path().to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(err.contains("ill-conditioned"), "{err}");
}
