use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torusgreen")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn invariants_square_lattice() {
    let v = json(&["invariants", "--b", "1", "--json"]);
    assert!((v["eta1"].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-12);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    let mut want = vec!["b", "e1", "e2", "e3", "g2", "g3", "eta1", "eta2_im", "legendre_residual"];
    want.sort();
    let mut got = keys.clone();
    got.sort();
    assert_eq!(got, want);
    let raw = String::from_utf8(run(&["invariants", "--b", "1", "--json"]).stdout).unwrap();
    assert!(raw.starts_with("{\"b\":1.0000000000000000e0,\"e1\":"), "{raw}");
}

#[test]
fn thresholds_square_lattice() {
    let v = json(&["thresholds", "--b", "1", "--json"]);
    let d: Vec<f64> = v["d"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(d.len(), 8);
    assert!((d[2] + std::f64::consts::PI).abs() < 1e-12);
    assert!((d[5] - std::f64::consts::PI).abs() < 1e-12);
    assert_eq!(v["landmark"].as_array().unwrap().len(), 7);
}

#[test]
fn census_quarter_period() {
    let v = json(&["census", "--b", "1", "--p", "0.25,0", "--json"]);
    let recs = v.as_array().unwrap();
    assert_eq!(recs.len(), 6);
    for r in recs {
        for k in ["r", "s", "trivial", "hessian_det", "kind", "degree", "residual"] {
            assert!(r.get(k).is_some(), "missing {k}");
        }
    }
    assert_eq!(recs.iter().filter(|r| r["trivial"] == Value::Bool(false)).count(), 2);
}

#[test]
fn json_output_is_deterministic() {
    let args = ["census", "--b", "1.3", "--p", "0.21,0.07", "--json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["stability", "--b", "1", "--p", "0.3,0", "--n", "101", "--json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn figure1_has_all_pieces() {
    let v = json(&["figure1", "--b", "0.8", "--json"]);
    assert_eq!(v["circles"].as_array().unwrap().len(), 4);
    assert_eq!(v["d"].as_array().unwrap().len(), 8);
    assert_eq!(v["landmark"].as_array().unwrap().len(), 7);
}

#[test]
fn csv_output_has_header() {
    let out = run(&["census", "--b", "1", "--p", "0.25,0", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,s,trivial,hessian_det,kind,degree,residual"));
    assert_eq!(lines.count(), 6);
}

#[test]
fn hitchin_special_value() {
    let h = json(&["hitchin", "--b", "1", "--r", "0.25", "--s", "0.5", "--json"]);
    let e = json(&["eval", "--b", "1", "--z", "0.25,0", "--json"]);
    assert!((h["wp_re"].as_f64().unwrap() - e["wp_re"].as_f64().unwrap()).abs() < 1e-9);
}

#[test]
fn signsurvey_and_corners() {
    let v = json(&["signsurvey", "--b", "2", "--n", "3", "--json"]);
    assert_eq!(v.as_array().unwrap().len(), 2 * 9 + 7 * 3);
    let c = json(&["corners", "--b", "1", "--p", "0.3,0", "--json"]);
    assert_eq!(c.as_array().unwrap().len(), 4);
}

#[test]
fn writes_to_file() {
    let path = std::env::temp_dir().join(format!("torusgreen-cli-{}.json", std::process::id()));
    let out = run(&["invariants", "--b", "2", "--json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["b"].as_f64(), Some(2.0));
    std::fs::remove_file(path).ok();
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["invariants", "--b", "0"]).status.code(), Some(1));
    assert_eq!(run(&["invariants", "--b", "-1"]).status.code(), Some(1));
    assert_eq!(run(&["census", "--b", "1", "--p", "0.25"]).status.code(), Some(1));
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["census", "--b", "1", "--p", "0.5,0"]).status.code(), Some(2));
    assert_eq!(run(&["hitchin", "--b", "1", "--r", "0.5", "--s", "0"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--b", "1", "--z", "1,0"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_single_criterion() {
    let out = run(&["verify", "--only", "1"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("PASS"));
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = ["census", "--b", "0.9", "--p", "0.1,0.3", "--json"];
    let a = Command::new(env!("CARGO_BIN_EXE_torusgreen")).args(args).env("TORUSGREEN_THREADS", "1").output().unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_torusgreen")).args(args).env("TORUSGREEN_THREADS", "3").output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
