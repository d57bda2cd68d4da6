use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use melforge::files::{SpectrumFile, SystemFile};
use melforge_core::averaging::{averaged_functions, cubic_fold_example};
use melforge_core::poissonred::{mb_reduce, MBPerturbation};
use melforge_core::poly::MPoly;
use melforge_core::Rat;
use serde_json::Value;
use tempfile::TempDir;

fn melforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_melforge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn usage_and_input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    assert_eq!(melforge(&["bogus"]).status.code(), Some(2));
    assert_eq!(melforge(&["avg", "--order", "2"]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(
        melforge(&["avg", "--system", s(&missing), "--order", "2"])
            .status
            .code(),
        Some(2)
    );
    let bad = write(&dir, "bad.json", "{");
    let out = melforge(&["avg", "--system", s(&bad), "--order", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid JSON"));
}

#[test]
fn non_polynomial_reduction_exits_with_three() {
    let dir = TempDir::new().unwrap();
    let pert = write(&dir, "pert.json", r#"{"B": "1"}"#);
    let out = melforge(&["mb-reduce", "--pert", s(&pert), "--c", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-polynomial"));
}

#[test]
fn perturbed_golden_file_fails_the_theorem_check() {
    let dir = TempDir::new().unwrap();
    let golden = write(&dir, "golden.json", r#"{"xih42": "a20*a40"}"#);
    let report = dir.path().join("report.json");
    let out = melforge(&[
        "repro-theorem",
        "--order",
        "4",
        "--golden",
        s(&golden),
        "--out",
        s(&report),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("xih42"));
    // The report is still written, with the failing check recorded.
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(report["passed"], Value::Bool(false));
}

#[test]
fn classify_generic_point() {
    let dir = TempDir::new().unwrap();
    let lam = write(
        &dir,
        "lambda.json",
        r#"{"a20": 1, "a21": 0, "a30": 2, "a31": 0, "a40": 0, "a41": 0, "a50": 1, "a51": 0, "a60": 0, "a61": 0}"#,
    );
    let v = stdout_json(&melforge(&["classify", "--lambda", s(&lam)]));
    assert_eq!(v["case"], "i");
    assert_eq!(v["N"], 0);
}

#[test]
fn zero_perturbation_has_no_first_nonzero_function() {
    let dir = TempDir::new().unwrap();
    let sys = write(
        &dir,
        "zero.json",
        r#"{"format": "melforge.system.v1", "vars": ["y1", "y2"], "orientation": "thetadot_plus_one",
            "p": ["0"], "q": ["0"]}"#,
    );
    let v = stdout_json(&melforge(&["avg", "--system", s(&sys), "--order", "3"]));
    assert_eq!(v["ell"], Value::Null);
    assert_eq!(v["f"], serde_json::json!(["0", "0", "0"]));
}

#[test]
fn avg_output_matches_the_library() {
    let dir = TempDir::new().unwrap();
    let sys = cubic_fold_example();
    let path = write(
        &dir,
        "fold.json",
        &melforge::files::to_json_string(&SystemFile::from_system(&sys, None)),
    );
    let out = melforge(&["avg", "--system", s(&path), "--order", "4"]);
    let file: SpectrumFile = serde_json::from_value(stdout_json(&out)).unwrap();
    let spec = file.to_spectrum().unwrap();
    assert_eq!(spec.functions(), averaged_functions(&sys, 4).unwrap().functions());
}

#[test]
fn groebner_command_reduces_membership_queries() {
    let dir = TempDir::new().unwrap();
    let gens = write(
        &dir,
        "gens.json",
        r#"{"vars": ["x", "y", "z"], "gens": ["y - x^2", "z - x^3"]}"#,
    );
    let v = stdout_json(&melforge(&[
        "groebner",
        "--gens",
        s(&gens),
        "--order",
        "lex",
        "--reduce",
        "x*y - z",
    ]));
    assert_eq!(v["order"], "lex");
    assert_eq!(v["reduced"]["member"], Value::Bool(true));
    assert_eq!(v["reduced"]["normal_form"], "0");
    let basis: Vec<String> = serde_json::from_value(v["basis"].clone()).unwrap();
    let vars = melforge_core::poly::VarSet::new(&["x", "y", "z"]).unwrap();
    let target = MPoly::parse("y^3 - z^2", &vars).unwrap();
    assert!(basis
        .iter()
        .any(|b| MPoly::parse(b, &vars).unwrap().proportional(&target).is_some()));
}

#[test]
fn mb_reduce_matches_the_library() {
    let dir = TempDir::new().unwrap();
    let pert = write(
        &dir,
        "pert.json",
        r#"{"A": "x2^2 - x3", "B": "x1^3*x2 + x1*x3", "C": "-x1*x2^2 + x1*x3"}"#,
    );
    let out_path = dir.path().join("sys.json");
    let out = melforge(&["mb-reduce", "--pert", s(&pert), "--c", "2", "--out", s(&out_path)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let file: SystemFile = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let prov = file.provenance.as_ref().unwrap();
    assert_eq!(prov.reducer, "maxwell-bloch");
    assert_eq!(prov.details["c"], "2");

    let vars = melforge_core::poissonred::mb_vars();
    let p = |t: &str| MPoly::parse(t, &vars).unwrap();
    let lib = MBPerturbation::new(
        p("x2^2 - x3"),
        p("x1^3*x2 + x1*x3"),
        p("-x1*x2^2 + x1*x3"),
        Rat::from_int(2),
    )
    .unwrap();
    let red = mb_reduce(&lib, melforge_core::poissonred::ReductionConvention::ChainRule).unwrap();
    let sys = file.to_system().unwrap();
    assert_eq!(sys.p(), red.system.p());
    assert_eq!(sys.q(), red.system.q());
}

#[test]
fn euler_reduce_then_average() {
    let dir = TempDir::new().unwrap();
    let pert = write(&dir, "pert.json", r#"{"P": "x1", "Q": "-x1"}"#);
    let sys_path = dir.path().join("sys.json");
    let out = melforge(&[
        "euler-reduce",
        "--mu",
        "1,2,4",
        "--pert",
        s(&pert),
        "--c2",
        "1",
        "--hemisphere",
        "+",
        "--out",
        s(&sys_path),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let file: SystemFile = serde_json::from_str(&std::fs::read_to_string(&sys_path).unwrap()).unwrap();
    assert_eq!(file.provenance.as_ref().unwrap().reducer, "euler-top");
    assert_eq!(file.sqrt_rules["k13"], "3/4");
    let v = stdout_json(&melforge(&["avg", "--system", s(&sys_path), "--order", "1"]));
    assert_eq!(v["ell"], 1);
}

#[test]
fn verify_finds_the_two_fold_cycles() {
    let dir = TempDir::new().unwrap();
    let sys = write(
        &dir,
        "fold.json",
        &melforge::files::to_json_string(&SystemFile::from_system(&cubic_fold_example(), None)),
    );
    let csv_path = dir.path().join("scan.csv");
    let out = melforge(&[
        "verify",
        "--system",
        s(&sys),
        "--eps",
        "1e-3",
        "--zmin",
        "0.3",
        "--zmax",
        "1.2",
        "--grid",
        "91",
        "--rtol",
        "1e-14",
        "--atol",
        "1e-20",
        "--out",
        s(&csv_path),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let mut roots = Vec::new();
    let mut scans = 0;
    for row in reader.records() {
        let row = row.unwrap();
        match &row[0] {
            "root" => roots.push(row[1].parse::<f64>().unwrap()),
            "scan" => scans += 1,
            other => panic!("unexpected row kind {other}"),
        }
    }
    assert_eq!(scans, 91);
    assert_eq!(roots.len(), 2, "{roots:?}");
    let z0 = std::f64::consts::FRAC_1_SQRT_2;
    assert!(roots[0] < z0 && z0 < roots[1], "{roots:?}");
}
