use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn vertexq(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_vertexq"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("VERTEXQ_THREADS", t),
        None => cmd.env_remove("VERTEXQ_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn run_config(dir: &Path, json: &str, extra: &[&str]) -> Output {
    let cfg = dir.join("config.json");
    fs::write(&cfg, json).unwrap();
    let out = dir.join("out");
    let mut args = vec!["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    vertexq(&args, None)
}

fn read_report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn strip_timings(mut v: Value) -> Value {
    for r in v["records"].as_array_mut().unwrap() {
        r["wall_time"] = Value::from(0.0);
    }
    v
}

#[test]
fn theta_only_on_defaults_exits_zero() {
    let d = tempfile::tempdir().unwrap();
    let o = run_config(d.path(), r#"{"n": 2, "two_l": 1, "r": 5, "checks": ["theta"]}"#, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rep = read_report(&d.path().join("out"));
    assert_eq!(rep["schema"], 1);
    let recs = rep["records"].as_array().unwrap();
    assert!(!recs.is_empty() && recs.iter().all(|r| r["pass"] == true && r["id"].as_str().unwrap().starts_with("theta.")));
    let csv = fs::read_to_string(d.path().join("out/report.csv")).unwrap();
    assert!(csv.starts_with("id,anchor,residual,tolerance,pass,seconds\n"));
    assert_eq!(csv.lines().count(), recs.len() + 1);
}

#[test]
fn odd_sites_with_fabricius_is_a_config_error() {
    let d = tempfile::tempdir().unwrap();
    let o = run_config(d.path(), r#"{"n": 3, "two_l": 2, "r": 4, "method": "fabricius"}"#, &[]);
    assert_eq!(o.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "config");
    assert!(err["message"].as_str().unwrap().contains("even number of sites"));
}

#[test]
fn half_spin_with_odd_sites_is_a_config_error() {
    let d = tempfile::tempdir().unwrap();
    let o = run_config(d.path(), r#"{"n": 3, "two_l": 1, "r": 5, "method": "baxter"}"#, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("N l must be an integer"));
}

#[test]
fn malformed_and_unknown_inputs_are_config_errors() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run_config(d.path(), r#"{"n": 2, "two_l": 1"#, &[]).status.code(), Some(2));
    assert_eq!(run_config(d.path(), r#"{"n": 2, "two_l": 1, "r": 5, "colour": 1}"#, &[]).status.code(), Some(2));
    let o = run_config(d.path(), r#"{"n": 2, "two_l": 1, "r": 5}"#, &["--checks", "theta,bogus"]);
    assert_eq!(o.status.code(), Some(2));
    let o = vertexq(&["run", "--config", "/nonexistent/config.json"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn budget_overrun_is_a_computational_failure() {
    let d = tempfile::tempdir().unwrap();
    let o = run_config(d.path(), r#"{"n": 4, "two_l": 2, "r": 4, "method": "baxter", "dense_budget": 27, "checks": ["theta"]}"#, &[]);
    assert_eq!(o.status.code(), Some(3));
    let rep = read_report(&d.path().join("out"));
    assert_eq!(rep["records"][0]["pass"], false);
    assert!(rep["records"][0]["error"].as_str().unwrap().contains("budget"));
}

#[test]
fn checks_flag_overrides_config() {
    let d = tempfile::tempdir().unwrap();
    let o = run_config(d.path(), r#"{"n": 2, "two_l": 1, "r": 5, "checks": ["theta"]}"#, &["--checks", "tt,rll"]);
    assert_eq!(o.status.code(), Some(0));
    let rep = read_report(&d.path().join("out"));
    let ids: Vec<&str> = rep["records"].as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    assert!(ids.iter().all(|id| id.starts_with("rll.") || id.starts_with("tt.")));
    assert!(ids.first().unwrap().starts_with("rll."), "groups keep their fixed order");
}

#[test]
fn eight_vertex_preset_passes_everything() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("ev");
    let o = vertexq(&["preset", "eight-vertex", "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let cfg: Value = serde_json::from_str(&fs::read_to_string(out.join("config.json")).unwrap()).unwrap();
    assert_eq!((cfg["n"].as_u64(), cfg["two_l"].as_u64(), cfg["r"].as_u64()), (Some(2), Some(1), Some(5)));
    let rep = read_report(&out);
    assert!(rep["records"].as_array().unwrap().iter().any(|r| r["id"] == "q.baxter.eigen_tq" && r["pass"] == true));
}

#[test]
fn degenerate_q_is_reported_with_status_three() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("fab");
    let o = vertexq(&["preset", "fabricius-spin1", "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(3));
    let rep = read_report(&out);
    let recs = rep["records"].as_array().unwrap();
    for r in recs {
        let id = r["id"].as_str().unwrap();
        if id.starts_with("q.") {
            assert!(r["error"].as_str().unwrap().contains("degenerate"), "{id}");
        } else {
            assert_eq!(r["pass"], true, "{id}");
        }
    }
}

#[test]
fn reports_are_identical_across_runs_and_thread_counts() {
    let d = tempfile::tempdir().unwrap();
    let a = d.path().join("a");
    let b = d.path().join("b");
    vertexq(&["preset", "baxter-odd-N", "--out", a.to_str().unwrap()], Some("1"));
    vertexq(&["preset", "baxter-odd-N", "--out", b.to_str().unwrap()], Some("4"));
    assert_eq!(strip_timings(read_report(&a)), strip_timings(read_report(&b)));
}

#[test]
fn bad_thread_count_is_a_config_error() {
    let o = vertexq(&["preset", "eight-vertex", "--out", "/tmp/unused-vertexq"], Some("zero"));
    assert_eq!(o.status.code(), Some(2));
}
