use std::path::Path;
use std::process::Command;

use cliffload::circuit::qasm::parse_qasm;
use cliffload::cli::{run_with, EXIT_INPUT, EXIT_OK, EXIT_TOO_LARGE, EXIT_VERIFY_FAILED};
use cliffload::sim::{self, index_of};
use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("cliffload").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write_identity(dir: &Path, rows: usize, cols: usize) -> String {
    let data: Vec<f64> = (0..rows * cols).map(|k| if k / cols == k % cols { 1.0 } else { 0.0 }).collect();
    let path = dir.join("m.json");
    std::fs::write(&path, serde_json::json!({"rows": rows, "cols": cols, "data": data}).to_string()).unwrap();
    path.display().to_string()
}

#[test]
fn synth_identity_prepares_filled_state() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_identity(dir.path(), 4, 2);
    let out = dir.path().join("out");
    let (code, _, err) = cli(&["synth", "--matrix", &m, "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    let c = parse_qasm(&std::fs::read_to_string(out.join("circuit.qasm")).unwrap()).unwrap();
    let psi = sim::run(&c, None).unwrap();
    assert!((psi.amplitude(index_of("1100").unwrap()).norm() - 1.0).abs() < 1e-10);
}

#[test]
fn synth_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let (code, _, _) = cli(&["synth", "--random", "8,2", "--seed", "42", "--out", out.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
        outputs.push((
            std::fs::read(out.join("circuit.qasm")).unwrap(),
            std::fs::read(out.join("plan.json")).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn synth_plan_lists_loaders_and_sublayers() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = cli(&["synth", "--random", "8,2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let plan: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("plan.json")).unwrap()).unwrap();
    let columns = plan["columns"].as_array().unwrap();
    assert_eq!(columns.len(), 2);
    for col in columns {
        let layers = col["layers"].as_array().unwrap();
        assert_eq!(layers.len(), 3);
        assert_eq!(layers.iter().map(|l| l.as_array().unwrap().len()).collect::<Vec<_>>(), [4, 2, 1]);
    }
    assert_eq!(plan["n_qubits"], 8);
    assert_eq!(plan["L"], 1);
}

#[test]
fn verify_report_schema() {
    let (code, out, _) = cli(&["verify", "--random", "6,2", "--seed", "3"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    for key in ["n_qubits", "L", "passed", "fidelity", "max_amp_error", "global_phase", "support"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["passed"], true);
    assert!(v["fidelity"].as_f64().unwrap() > 1.0 - 1e-9);
    assert_eq!(v["support"].as_array().unwrap().len(), 15);
}

#[test]
fn verify_corrupted_angle_fails() {
    let (code, out, _) = cli(&["verify", "--random", "6,2", "--corrupt-angle", "0.3"]);
    assert_eq!(code, EXIT_VERIFY_FAILED);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], false);
    assert!(v["fidelity"].as_f64().unwrap() < 1.0 - 1e-6);
}

#[test]
fn verify_pair_support() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let (code, _, _) = cli(&["verify", "--random", "4,2", "--L", "2", "--seed", "9", "--out", report.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    let mut support: Vec<&str> = v["support"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
    support.sort();
    assert_eq!(support, ["0011", "1100"]);
}

#[test]
fn verify_size_guard() {
    let (code, _, err) = cli(&["verify", "--random", "22,2"]);
    assert_eq!(code, EXIT_TOO_LARGE, "{err}");
}

#[test]
fn bad_inputs_exit_2() {
    let (code, _, err) = cli(&["vqe", "/no/such/file.fcidump"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("/no/such/file.fcidump"), "{err}");

    assert_eq!(cli(&["synth"]).0, EXIT_INPUT);
    assert_eq!(cli(&["verify", "--random", "5,2", "--L", "2"]).0, EXIT_INPUT);
    assert_eq!(cli(&["depth", "--ladder", "spiral"]).0, EXIT_INPUT);
}

#[test]
fn depth_table() {
    let (code, out, err) = cli(&["depth", "--n", "4,8,16,32,64", "--d", "2"]);
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("N,d,L,measured,analytic,baseline,ratio"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|f| f.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 5);
    for r in &rows {
        assert!(r[3] <= r[4], "measured above bound: {r:?}");
    }
    let n16 = rows.iter().find(|r| r[0] == 16.0).unwrap();
    assert_eq!(n16[4], 80.0);
    assert!(err.contains("d=2 L=1"));
}

#[test]
fn depth_cancel_column() {
    let (code, out, _) = cli(&["depth", "--n", "8", "--d", "2", "--L", "2", "--cancel"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("N,d,L,measured,analytic,baseline,ratio,cancelled\n"));
    assert_eq!(out.lines().count(), 2);
}

#[test]
fn vqe_h2_reaches_fci() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, err) = cli(&["vqe", &data("h2_sto3g_1.4bohr.fcidump"), "--L", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("fraction"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("result.json")).unwrap()).unwrap();
    assert!(v["fraction"].as_f64().unwrap() >= 0.99);
    let trace = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert!(trace.starts_with("iter,energy,grad_norm\n"));
}

#[test]
fn vqe_h4_fraction_in_range() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = cli(&["vqe", &data("h4_sto3g_1.4bohr.fcidump"), "--L", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("result.json")).unwrap()).unwrap();
    let f = v["fraction"].as_f64().unwrap();
    assert!(f > 0.0 && f <= 1.0 + 1e-6, "{f}");
    assert!(v["energy"].as_f64().unwrap() <= v["e_hf"].as_f64().unwrap() + 1e-9);
}

#[test]
fn binary_runs() {
    let exe = env!("CARGO_BIN_EXE_cliffload");
    let ok = Command::new(exe).args(["verify", "--random", "4,2", "--L", "2"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["passed"], true);

    let bad = Command::new(exe).args(["vqe", "missing.fcidump"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_INPUT));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("missing.fcidump"));

    let help = Command::new(exe).arg("--help").output().unwrap();
    let text = String::from_utf8_lossy(&help.stdout);
    for sub in ["synth", "verify", "depth", "vqe"] {
        assert!(text.contains(sub));
    }
}
