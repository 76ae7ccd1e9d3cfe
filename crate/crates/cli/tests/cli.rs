use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("wecomp-cli");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn wecomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wecomp")).args(args).output().unwrap()
}

fn json_ok(args: &[&str]) -> Value {
    let out = wecomp(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code_file() -> String {
    fixture("c110_011.code", "3 2\n110\n011\n").display().to_string()
}

#[test]
fn gap_both_pipelines() {
    let bc = fixture("and.bc", "inputs\nguesses 2\nAND u1 u2\n");
    let v = json_ok(&["gap", bc.to_str().unwrap(), "--via", "both"]);
    assert_eq!(v["brute"], "2");
    assert_eq!(v["via_we"], "2");
    assert_eq!(v["agree"], true);
}

#[test]
fn amplitude_of_hth() {
    let qc = fixture("hth.qc", "qubits 1\nH 0\nT 0\nH 0\n");
    let v = json_ok(&["amplitude", qc.to_str().unwrap(), "--check-statevector"]);
    assert_eq!(v["exact"], "(1+1*w+0*w^2+0*w^3)/2^1");
    assert_eq!(v["agree"], true);
    let re: f64 = v["amplitude"]["re"].as_str().unwrap().parse().unwrap();
    let im: f64 = v["amplitude"]["im"].as_str().unwrap().parse().unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2 / 2.0;
    assert!((re - (0.5 + h)).abs() < 1e-9 && (im - h).abs() < 1e-9);
    let diff: f64 = v["difference_upper"].as_str().unwrap().parse().unwrap();
    assert!(diff < 1e-9);
}

#[test]
fn pack_and_unpack() {
    let c = code_file();
    assert_eq!(json_ok(&["pack", &c])["value"], "193");
    let v = json_ok(&["unpack", "193", "--n", "3"]);
    assert_eq!(v["counts"], serde_json::json!(["1", "0", "3", "0"]));
}

#[test]
fn weight_distribution_and_evaluation() {
    let c = code_file();
    let v = json_ok(&["wd", &c]);
    assert_eq!(v["counts"], serde_json::json!(["1", "0", "3", "0"]));
    assert_eq!(json_ok(&["eval", &c, "--q", "omega"])["value"], "1+0*w+3*w^2+0*w^3");
    assert_eq!(json_ok(&["eval", &c, "--q", "2"])["value"], "13");
    assert_eq!(json_ok(&["eval", &c, "--q", "1/2"])["value"], "7/4");
    assert_eq!(json_ok(&["eval", &c, "--q", "1+w"])["value"], "4+6*w+3*w^2+0*w^3");
}

#[test]
fn combinators() {
    let one = fixture("one.code", "1 1\n1\n").display().to_string();
    let v = json_ok(&["sum", "--direct", &one, &one]);
    assert_eq!(v["counts"], serde_json::json!(["1", "2", "1"]));
    let v = json_ok(&["sum", "--wreath", &one, &one]);
    assert_eq!(v["code"]["n"], 1);
    assert_eq!(v["counts"], serde_json::json!(["2", "2"]));
}

#[test]
fn compile_is_serialized() {
    let qc = fixture("hth_compile.qc", "qubits 1\nH 0\nT 0\nH 0\n");
    let v = json_ok(&["compile", qc.to_str().unwrap()]);
    assert_eq!(v["N"], 2);
    assert_eq!(v["zero"], false);
}

#[test]
fn recovery_is_exact_and_deterministic() {
    let c = code_file();
    let args = ["recover-omega", &c, "--alpha", "0.8", "--noise", "adversarial", "--seed", "7"];
    let a = wecomp(&args);
    let single: Vec<&str> = ["--threads", "1"].into_iter().chain(args).collect();
    let b = wecomp(&single);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["value"], "1+0*w+3*w^2+0*w^3");
    assert_eq!(v["correct"], true);

    let v = json_ok(&["recover-coeffs", &c, "--alpha", "0.6", "--noise", "uniform", "--seed", "3"]);
    assert_eq!(v["distribution"], serde_json::json!(["1", "0", "3", "0"]));
    assert_eq!(v["correct"], true);
}

#[test]
fn exit_codes() {
    let c = code_file();
    assert_eq!(wecomp(&["wd", "/nonexistent/code"]).status.code(), Some(2));
    let bad = fixture("bad.code", "3 2\n110\n");
    assert_eq!(wecomp(&["wd", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(wecomp(&["unpack", "1000000", "--n", "3"]).status.code(), Some(2));
    assert_eq!(wecomp(&["recover-omega", &c, "--alpha", "0.8"]).status.code(), Some(2));
    assert_eq!(wecomp(&["recover-omega", &c, "--alpha", "0.95", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(wecomp(&["bench-enum", "--k", "40"]).status.code(), Some(3));
    let hidden = fixture("c4.code", "4 2\n1100\n0111\n");
    let out = wecomp(&["recover-omega", hidden.to_str().unwrap(), "--alpha", "0.8", "--seed", "5", "--k", "1"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(!out.stderr.is_empty());
}

#[test]
fn pretty_output_is_the_same_document() {
    let c = code_file();
    let compact = json_ok(&["wd", &c]);
    let pretty = json_ok(&["--pretty", "wd", &c]);
    assert_eq!(compact, pretty);
}
