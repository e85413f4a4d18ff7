use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sturmint")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn labeled<'a>(rows: &'a Value, label: &str) -> &'a Value {
    rows.as_array().unwrap().iter().find(|r| r["label"] == label).unwrap_or_else(|| panic!("no row {label}"))
}

fn matrix(v: &Value) -> Vec<Vec<f64>> {
    v["rows"].as_array().unwrap().iter().map(|r| r.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()).collect()
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("sturmint-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn integrals_report_exchange_and_table1_diagonal() {
    let h2 = data("h2.mol");
    let doc = json(&run(&["integrals", h2.to_str().unwrap(), "--table1-convention"]));
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["command"], "integrals");
    let r = &doc["results"];
    let k = labeled(&r["atomic_exchange"], "1212")["value"].as_f64().unwrap();
    assert!((k - 0.720716).abs() < 2e-5, "1212 = {k}");
    for (label, zeta) in [("1111", 1.042999), ("2222", 1.599999), ("3333", 1.615), ("4444", 1.784059)] {
        let row = labeled(&r["coulomb"], label);
        assert_eq!(row["unit"], "dimensionless");
        assert!((row["value"].as_f64().unwrap() - zeta).abs() < 1e-9, "{label}");
    }
    let two = &r["two_center_exchange"];
    assert!((labeled(two, "1515")["value"].as_f64().unwrap() - 0.319902).abs() < 1e-4);
    assert_eq!(labeled(two, "1525")["equal_to"], "1516");
}

#[test]
fn results_are_byte_identical_across_runs() {
    let h2 = data("h2.mol");
    let a = json(&run(&["integrals", h2.to_str().unwrap()]));
    let b = json(&run(&["integrals", h2.to_str().unwrap()]));
    assert_eq!(serde_json::to_string(&a["results"]).unwrap(), serde_json::to_string(&b["results"]).unwrap());
    assert_eq!(a["inputs_digest"], b["inputs_digest"]);
    let c = json(&run(&["integrals", h2.to_str().unwrap(), "--eps", "1e-5"]));
    assert_ne!(a["inputs_digest"], c["inputs_digest"]);
}

#[test]
fn scf_energy_and_pretty_output() {
    let h2 = data("h2.mol");
    let doc = json(&run(&["scf", h2.to_str().unwrap()]));
    let scf = &doc["results"]["scf"];
    let e = scf["energy_total"]["value"].as_f64().unwrap();
    assert!((e + 1.1284436).abs() < 5e-4, "E = {e}");
    assert_eq!(scf["converged"], true);
    let pretty = run(&["scf", h2.to_str().unwrap(), "--pretty"]);
    assert!(pretty.status.success());
    assert!(String::from_utf8_lossy(&pretty.stdout).contains("energy_total"));
}

#[test]
fn input_errors_exit_with_two() {
    let missing = run(&["integrals", "/nonexistent/h2.mol"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(!missing.stderr.is_empty());
    assert!(missing.stdout.is_empty());

    let odd = temp_file("odd.mol", "center H 0 0 0\nbasis H sto 1 0 0 1.0\n");
    let out = run(&["scf", odd.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd electron count"));

    let bad = temp_file("bad.mol", "center H 0 0 0\nbasis H sto 1 1 0 1.0\n");
    assert_eq!(run(&["integrals", bad.to_str().unwrap()]).status.code(), Some(2));
    let h2 = data("h2.mol");
    assert_eq!(run(&["integrals", h2.to_str().unwrap(), "--eps", "-1"]).status.code(), Some(2));
}

#[test]
fn scf_non_convergence_exits_with_three() {
    let h2 = data("h2.mol");
    let out = run(&["scf", h2.to_str().unwrap(), "--max-iter", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["results"]["scf"]["converged"], false);
}

#[test]
fn benchmark_trace_and_eps() {
    let h2 = data("h2.mol");
    let p = h2.to_str().unwrap();
    let tight = json(&run(&["benchmark", p, "--quartet", "1,5,1,5", "--eps", "1e-6"]));
    let loose = json(&run(&["benchmark", p, "--quartet", "1,5,1,5", "--eps", "1e-1"]));
    let trace = tight["results"]["trace"].as_array().unwrap();
    assert_eq!(trace.len(), 5);
    let closed = tight["results"]["closed_form"]["value"].as_f64().unwrap();
    let last = trace.last().unwrap()["value"].as_f64().unwrap();
    assert!((last - closed).abs() < 1e-4);
    let terms = |d: &Value| d["results"]["terms_used"].as_u64().unwrap();
    assert!(terms(&loose) < terms(&tight));
}

#[test]
fn nmr_collinear_s_case_and_rotation() {
    let h2 = data("h2.mol");
    let p = h2.to_str().unwrap();
    let doc = json(&run(&["nmr", p, "--nucleus", "Ha", "--pair", "1,5", "--pair", "2,6"]));
    let tensors = doc["results"]["tensors"].as_array().unwrap();
    assert_eq!(tensors.len(), 2);
    let t = matrix(&tensors[0]["real"]);
    for a in 0..3 {
        for b in 0..3 {
            if a != b {
                assert!(t[a][b].abs() < 1e-9);
            }
        }
    }
    assert!((t[0][0] - t[1][1]).abs() < 1e-9);

    let rotated = json(&run(&["nmr", p, "--nucleus", "Ha", "--pair", "1,5", "--rotate", "1,1,0,30"]));
    let row = &rotated["results"]["tensors"][0];
    let back = matrix(&row["real_input_frame"]);
    let turned = matrix(&row["real"]);
    assert!(turned[0][2].abs() > 1e-3, "rotation should populate off-diagonals");
    for a in 0..3 {
        for b in 0..3 {
            assert!((back[a][b] - t[a][b]).abs() < 1e-5, "[{a}][{b}]");
        }
    }
    assert_eq!(run(&["nmr", p, "--nucleus", "Hz"]).status.code(), Some(2));
}
