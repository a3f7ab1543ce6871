use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use smp_core::functions::{GFunction, IncreasingFn};
use smp_core::subequation::SubequationSpec;
use smp_toolkit::csv_io;
use smp_toolkit::spec_io::SpecDocument;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_smp-toolkit"));
    c.env_remove("SMP_TOOLKIT_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_examples() {
    let v = json(&run(&["classify", "--kind", "subaffine", "--dim", "3"]));
    assert_eq!(v["case"], "Counterexample");
    assert!(v["witness"].is_object());
    let v = json(&run(&["classify", "--kind", "halfspace", "--c", "1", "--dim", "2"]));
    assert_eq!(v["case"], "Generic");
    let v = json(&run(&["classify", "--kind", "minmax-f", "--f", "sqrt", "--dim", "3"]));
    assert_eq!(v["case"], "Borderline");
}

#[test]
fn charfn_csv_and_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "charfn",
        "--kind",
        "sigma-psi-k",
        "--a",
        "1",
        "--k",
        "1",
        "--dim",
        "3",
        "--grid",
        "0,0.5,1,2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda,f"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 4);
    for (l, f) in rows {
        assert!((f - 2.0 * l).abs() < 1e-8, "{l} {f}");
    }
    assert_eq!(fs::read_to_string(dir.path().join("charfn.csv")).unwrap(), text);
    let meta: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("charfn.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["points"], 4);
}

#[test]
fn charfn_writes_infinities() {
    let out = run(&["charfn", "--kind", "subaffine", "--dim", "2", "--grid", "0.5,1"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "lambda,f\n0.5,inf\n1,inf\n");
}

#[test]
fn smp_examples() {
    let v = json(&run(&["smp", "--kind", "pos", "--dim", "3"]));
    assert_eq!(v["verdict"], "Holds");
    let v = json(&run(&["smp", "--kind", "minmax-f", "--f", "sqrt", "--dim", "3"]));
    assert_eq!(v["verdict"], "Fails");
    assert!(!v["rationale"].as_array().unwrap().is_empty());
    let v = json(&run(&["smp", "--kind", "mg", "--g", "log-family", "--g-alpha", "1", "--dim", "3", "--dual"]));
    assert_eq!(v["verdict"], "Holds");
    assert_eq!(v["upper"]["verdict"], "Divergent");
}

#[test]
fn counterexample_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["counterexample", "--f", "sqrt", "--m", "0", "--out", dir.path().to_str().unwrap()]);
    let v = json(&out);
    assert!(v["max_residual"].as_f64().unwrap() <= 1e-6);
    assert_eq!(v["smp_witness"], true);
    assert_eq!(v["monotone_up"], true);
    for f in ["s_of_y.csv", "y_of_s.csv", "psi.csv", "meta.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let rf = csv_io::read_radial(fs::File::open(dir.path().join("psi.csv")).unwrap()).unwrap();
    assert!(rf.len() > 4096);
    assert_eq!(rf.flags.iter().filter(|&&f| f).count(), 1);
}

#[test]
fn counterexample_refusal_and_hopf() {
    let out = run(&["counterexample", "--f", "linear"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Divergent"));
    let v = json(&run(&["counterexample", "--f", "hopf", "--beta", "10", "--R", "1"]));
    assert!(v["max_residual"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn counterexample_from_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    let table = |xs: Vec<f64>| {
        let ys: Vec<f64> = xs.iter().map(|x| x.sqrt()).collect();
        csv_io::write_pairs(fs::File::create(&path).unwrap(), ["lambda", "f"], &xs, &ys).unwrap();
    };
    // resolved down to 1e-30: enough octaves to certify convergence
    table(std::iter::once(0.0).chain((0..=600).map(|i| 10f64.powf(-30.0 + 30.5 * i as f64 / 600.0))).collect());
    let v = json(&run(&["counterexample", "--f-table", path.to_str().unwrap(), "--grid", "512"]));
    assert_eq!(v["smp_witness"], true);
    assert!(v["max_residual"].as_f64().unwrap() < 1e-3);
    // first positive node near 1e-5: too few octaves, refused
    table((0..=400).map(|i| (i as f64 / 400.0).powi(2) * 2.0).collect());
    let out = run(&["counterexample", "--f-table", path.to_str().unwrap(), "--grid", "512"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Inconclusive"));
}

#[test]
fn scp_examples() {
    let v = json(&run(&["scp", "--g", "log-family", "--g-alpha", "1", "--dim", "3", "--trials", "300"]));
    assert_eq!(v["scp"], "Holds");
    let v = json(&run(&["scp", "--g", "neg-rational", "--dim", "2", "--trials", "300"]));
    assert_eq!(v["scp"], "Unknown");
    // −√x is convex, so the additivity gate fails
    let v = json(&run(&["scp", "--g", "neg-sqrt", "--dim", "2", "--trials", "300"]));
    assert_eq!(v["scp"], "Unknown");
    assert_eq!(v["additivity"]["scalar_pass"], false);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["classify", "--dim", "3"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--kind", "pucci", "--dim", "3", "--lambda", "1"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--kind", "nope", "--dim", "3"]).status.code(), Some(2));
    assert_eq!(run(&["charfn", "--kind", "pos", "--dim", "2", "--grid", "2,1"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--spec", "/nonexistent/spec.json"]).status.code(), Some(2));
    let bad_env =
        bin().args(["classify", "--kind", "pos", "--dim", "2"]).env("SMP_TOOLKIT_SEED", "x").output().unwrap();
    assert_eq!(bad_env.status.code(), Some(2));
    // trace hyperplane violates positivity
    let out = run(&["charfn", "--kind", "trace-hyperplane", "--dim", "2", "--grid", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn output_is_deterministic() {
    let args = ["classify", "--kind", "diagonal-entry", "--index", "0", "--dim", "3", "--seed", "9"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let with_env = |seed: &str| {
        bin()
            .args([
                "charfn",
                "--kind",
                "diagonal-entry",
                "--index",
                "0",
                "--dim",
                "3",
                "--grid",
                "0.5,1",
                "--e-samples",
                "3",
            ])
            .env("SMP_TOOLKIT_SEED", seed)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(with_env("4"), with_env("4"));
    let flag = run(&[
        "charfn",
        "--kind",
        "diagonal-entry",
        "--index",
        "0",
        "--dim",
        "3",
        "--grid",
        "0.5,1",
        "--e-samples",
        "3",
        "--seed",
        "4",
    ]);
    assert_eq!(flag.stdout, with_env("4"));
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    for d in [&d1, &d2] {
        assert!(run(&["counterexample", "--f", "sqrt", "--grid", "256", "--out", d.path().to_str().unwrap()])
            .status
            .success());
    }
    for f in ["s_of_y.csv", "psi.csv", "meta.json"] {
        assert_eq!(fs::read(d1.path().join(f)).unwrap(), fs::read(d2.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn spec_file_round_trip() {
    let specs = [
        SubequationSpec::pucci(0.3, 1.7, 3).unwrap(),
        SubequationSpec::mg(GFunction::neg_power(0.7, 2.0).with_domain(1.5, true).unwrap(), 2).unwrap().dual(),
        SubequationSpec::min_two_f(IncreasingFn::Power { coeff: 0.1, exponent: 0.3 }, 4).unwrap().with_slack(1e-7),
        SubequationSpec::mg(GFunction::log_family(1.0 / 3.0, 0.1).unwrap(), 3).unwrap(),
        SubequationSpec::mg(GFunction::table(vec![0.0, 0.5, 1.0], vec![0.0, -0.1, -0.15], false).unwrap(), 2).unwrap(),
    ];
    for spec in specs {
        let text = SpecDocument::from_spec(&spec).to_json();
        let back = SpecDocument::from_json(&text).unwrap().to_spec().unwrap();
        assert_eq!(back, spec, "{text}");
    }
    // parameters survive to 1e-15
    let doc = SpecDocument::from_spec(&SubequationSpec::minmax_cone(0.1 + 0.2, 3).unwrap());
    let back = SpecDocument::from_json(&doc.to_json()).unwrap();
    let alpha = back.params["alpha"].as_f64().unwrap();
    assert!((alpha - 0.3).abs() <= 1e-15);
}

#[test]
fn spec_file_on_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.json");
    write(&path, r#"{"kind": "dual", "dim": 3, "params": {"inner": {"kind": "pos", "dim": 3}}}"#);
    let v = json(&run(&["classify", "--spec", path.to_str().unwrap()]));
    assert_eq!(v["case"], "Counterexample");
    write(&path, r#"{"kind": "mg", "dim": 2, "params": {"g": {"kind": "neg-power", "coeff": 1, "exponent": 0.5}}}"#);
    let v = json(&run(&["classify", "--spec", path.to_str().unwrap()]));
    assert_eq!(v["case"], "Borderline");
    write(&path, "{not json");
    assert_eq!(run(&["classify", "--spec", path.to_str().unwrap()]).status.code(), Some(2));
}

fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}
