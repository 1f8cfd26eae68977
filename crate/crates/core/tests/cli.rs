//! End-to-end runs of the `holevo` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn holevo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holevo")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn matrix(re: &[f64], im: &[f64], n: usize) -> Value {
    json!({ "rows": n, "cols": n, "re": re, "im": im })
}

fn write_bb84(dir: &Path) -> String {
    let path = dir.join("bb84.json");
    let ensemble = json!({
        "probs": [0.5, 0.5],
        "states": [
            matrix(&[1.0, 0.0, 0.0, 0.0], &[0.0; 4], 2),
            matrix(&[0.5, 0.5, 0.5, 0.5], &[0.0; 4], 2),
        ],
    });
    fs::write(&path, ensemble.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn chi_prints_the_bb84_value() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_bb84(dir.path());
    let o = holevo(&["chi", &file]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("chi = 0.600876\n"));

    let o = holevo(&["chi", &file, "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["chi"].as_f64().unwrap() - 0.600_876_036_692_856).abs() < 1e-12);
    assert_eq!(v["member_entropies"].as_array().unwrap().len(), 2);
}

#[test]
fn apply_writes_the_output_state() {
    let dir = tempfile::tempdir().unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    // amplitude damping with γ = 1/2
    let channel = json!({
        "dim_in": 2,
        "dim_out": 2,
        "kraus": [
            matrix(&[1.0, 0.0, 0.0, h], &[0.0; 4], 2),
            matrix(&[0.0, h, 0.0, 0.0], &[0.0; 4], 2),
        ],
    });
    let ch = dir.path().join("channel.json");
    let rho = dir.path().join("rho.json");
    let out = dir.path().join("out.json");
    fs::write(&ch, channel.to_string()).unwrap();
    fs::write(&rho, matrix(&[0.0, 0.0, 0.0, 1.0], &[0.0; 4], 2).to_string()).unwrap();

    let o = holevo(&["apply", ch.to_str().unwrap(), rho.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let re: Vec<f64> = serde_json::from_value(v["re"].clone()).unwrap();
    for (got, want) in re.iter().zip([0.5, 0.0, 0.0, 0.5]) {
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn malformed_inputs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    // trace 2
    fs::write(&bad, json!({"probs": [1.0], "states": [matrix(&[2.0, 0.0, 0.0, 0.0], &[0.0; 4], 2)]}).to_string())
        .unwrap();
    let o = holevo(&["chi", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());

    assert_eq!(holevo(&["chi", "/nonexistent/ensemble.json"]).status.code(), Some(2));
    assert_eq!(holevo(&["verify", "--check", "bogus"]).status.code(), Some(2));
    assert_eq!(holevo(&["verify", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(holevo(&["demo", "nope"]).status.code(), Some(2));
}

#[test]
fn optimize_povm_reports_a_complete_measurement() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_bb84(dir.path());
    let o = holevo(&["optimize-povm", &file, "--restarts", "4", "--iters", "300", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let mi = v["best_mutual_info"].as_f64().unwrap();
    assert!(mi > 0.35 && mi <= v["chi_upper_bound"].as_f64().unwrap());
    assert_eq!(v["restarts_used"], 4);
    assert_eq!(v["povm"]["elements"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_merges_config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let report = dir.path().join("report.json");
    fs::write(&cfg, json!({"check": "concavity", "dim": 3, "trials": 20, "seed": 11}).to_string()).unwrap();
    let o = holevo(&["verify", "--config", cfg.to_str().unwrap(), "--trials", "7", "--out", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("concavity"));
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["config"]["dim"], 3);
    assert_eq!(v["config"]["seed"], 11);
    assert_eq!(v["checks"][0]["trials"], 7);
    assert_eq!(v["total_violations"], 0);

    fs::write(&cfg, json!({"check": "ssa", "dimension": 3}).to_string()).unwrap();
    assert_eq!(holevo(&["verify", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn demo_lists_every_reference_value() {
    let o = holevo(&["demo"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for key in [
        "bb84_chi",
        "bb84_accessible_info",
        "depolarizing_0.5_slack",
        "bb84_cloning_gain",
        "disentangle_gain_0.9",
        "cnot_on_|+>",
    ] {
        assert!(text.contains(key), "missing {key} in\n{text}");
    }
}
