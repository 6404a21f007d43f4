use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use ultraspec::gelfand::{BElement, GelfandTable};
use ultraspec::json::{self, IntegrateRequest, StepFunctionWire};
use ultraspec::measure::{ClopenAlgebra, ProjectionValuedMeasure, StepFunction};
use ultraspec::operator::Operator;
use ultraspec::space::WeightedSpace;
use ultraspec::theorems::Decomposition;
use ultraspec::PadicScalar;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ultraspec"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> &str {
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    std::str::from_utf8(&out.stdout).unwrap().trim_end()
}

fn error_kind(out: &Output) -> String {
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stderr).expect("error object on stderr");
    assert!(v["error"]["message"].is_string());
    v["error"]["kind"].as_str().unwrap().to_owned()
}

fn q5(n: i64) -> PadicScalar {
    PadicScalar::from_i64(5, 16, n).unwrap()
}

fn weighted() -> WeightedSpace {
    WeightedSpace::new(5, 16, vec![q5(1), q5(5), q5(25)]).unwrap()
}

#[test]
fn unknown_suite_exits_2() {
    assert_eq!(
        error_kind(&run(&["verify", "--suite", "nosuch"], "")),
        "invalid-input"
    );
}

#[test]
fn verify_single_suite() {
    let out = run(
        &[
            "verify",
            "--suite",
            "lemma-4.4",
            "--seed",
            "42",
            "--samples",
            "50",
        ],
        "",
    );
    let v: Value = serde_json::from_str(stdout(&out)).unwrap();
    assert_eq!(v["suite"], "lemma-4.4");
    assert_eq!(v["seed"], 42);
    assert_eq!(v["samples"], 50);
    assert_eq!(v["passed"], true);
    assert!(v["counterexample"].is_null());
}

#[test]
fn verify_list_and_other_prime() {
    let list = run(&["verify", "--list"], "");
    let ids: Vec<&str> = stdout(&list).lines().collect();
    assert!(ids.contains(&"thm-5.12-roundtrip") && ids.contains(&"prop-5.1-III"));
    let out = run(
        &[
            "verify",
            "--suite",
            "cor-3.6",
            "--samples",
            "30",
            "--p",
            "7",
            "--precision",
            "14",
        ],
        "",
    );
    assert!(stdout(&out).contains(r#""passed":true"#));
    let bad = run(&["verify", "--suite", "cor-3.6", "--p", "6"], "");
    assert_eq!(error_kind(&bad), "invalid-prime");
    let coarse = run(&["verify", "--suite", "cor-3.6", "--precision", "8"], "");
    assert_eq!(error_kind(&coarse), "invalid-input");
}

#[test]
fn verify_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reports.jsonl");
    let out = run(
        &[
            "verify",
            "--suite",
            "prop-5.16.1",
            "-o",
            path.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(stdout(&out), "");
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with(r#"{"suite":"prop-5.16.1","seed":42,"#));
}

#[test]
fn norm_of_zero() {
    let zero = Operator::zero(&weighted());
    let out = run(&["norm"], &json::to_string(&zero));
    assert_eq!(stdout(&out), r#"{"norm":{"exponent":"inf"}}"#);
}

#[test]
fn norm_of_weighted_operator() {
    let s = weighted();
    let u = Operator::from_i64(&s, &[0, 1, 0, 0, 0, 0, 0, 0, 0]).unwrap();
    let out = run(&["norm"], &json::to_string(&u));
    let v: Value = serde_json::from_str(stdout(&out)).unwrap();
    // |a_01| ||e_0|| / ||e_1|| = 5^(1/2)
    assert_eq!(v["norm"], serde_json::to_value(u.op_norm()).unwrap());
    assert!(u.op_norm() > ultraspec::LogNorm::ONE);
}

#[test]
fn adjoint_twice_is_identity() {
    let s = weighted();
    let u = Operator::from_i64(&s, &[1, 2, 3, 4, 5, 6, 7, 8, 10]).unwrap();
    let text = json::to_string(&u);
    let once = run(&["adjoint"], &text);
    let first: Operator = json::from_str(stdout(&once)).unwrap();
    assert_eq!(first, u.adjoint_omega());
    let twice = run(&["adjoint"], stdout(&once));
    assert_eq!(stdout(&twice), text);
}

#[test]
fn adjoint_via_files() {
    let dir = tempfile::tempdir().unwrap();
    let (input, output) = (dir.path().join("u.json"), dir.path().join("v.json"));
    let u = Operator::from_i64(&weighted(), &[0, 1, 0, 0, 0, 1, 0, 0, 0]).unwrap();
    std::fs::write(&input, json::to_string(&u)).unwrap();
    let out = run(
        &[
            "adjoint",
            "-i",
            input.to_str().unwrap(),
            "-o",
            output.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(stdout(&out), "");
    let v: Operator = json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(v, u.adjoint_omega());
}

#[test]
fn decompose_diag_2_2_7() {
    let s = WeightedSpace::orthonormal(5, 16, 3).unwrap();
    let b = Operator::from_i64(&s, &[2, 0, 0, 0, 2, 0, 0, 0, 7]).unwrap();
    let out = run(&["decompose"], &json::to_string(&b));
    let d: Decomposition = json::from_str(stdout(&out)).unwrap();
    assert_eq!(d.support, vec![q5(2), q5(7)]);
    let projectors = d.pvm.projectors();
    assert_eq!(
        projectors[0],
        Operator::from_i64(&s, &[1, 0, 0, 0, 1, 0, 0, 0, 0]).unwrap()
    );
    assert_eq!(
        projectors[1],
        Operator::from_i64(&s, &[0, 0, 0, 0, 0, 0, 0, 0, 1]).unwrap()
    );
    assert_eq!(d.reconstruct(), b);

    let full = Operator::from_i64(&s, &[2, 1, 0, 0, 2, 0, 0, 0, 7]).unwrap();
    assert_eq!(
        error_kind(&run(&["decompose"], &json::to_string(&full))),
        "unsupported"
    );
}

#[test]
fn integrate_step_function() {
    let s = WeightedSpace::orthonormal(5, 16, 3).unwrap();
    let a = ClopenAlgebra::finite(["a", "b"]).unwrap();
    let d = |v: [i64; 3]| Operator::diagonal(&s, v.iter().map(|&x| q5(x)).collect()).unwrap();
    let pvm = ProjectionValuedMeasure::new(a.clone(), s.clone(), vec![d([1, 1, 0]), d([0, 0, 1])])
        .unwrap();
    let f = StepFunction::new(&a, vec![(a.singleton(0), q5(2)), (a.singleton(1), q5(7))]).unwrap();
    let req = IntegrateRequest {
        pvm,
        function: StepFunctionWire::from_function(&f),
    };
    let out = run(&["integrate"], &json::to_string(&req));
    let u: Operator = json::from_str(stdout(&out)).unwrap();
    assert_eq!(u, d([2, 2, 7]));
}

#[test]
fn gelfand_round_trip() {
    let s = WeightedSpace::orthonormal(5, 16, 4).unwrap();
    let u = BElement::new(&s, vec![vec![0], vec![1, 2]], q5(5), vec![q5(1), q5(3)]).unwrap();
    let out = run(&["gelfand"], &json::to_string(&u));
    let table: GelfandTable = json::from_str(stdout(&out)).unwrap();
    assert_eq!(table.values, vec![q5(5), q5(6), q5(8)]);
    let back = run(&["gelfand", "--inverse"], stdout(&out));
    let v: BElement = json::from_str(stdout(&back)).unwrap();
    assert_eq!(v, u);
}

#[test]
fn malformed_input_exits_2() {
    for (cmd, input) in [
        ("norm", "not json"),
        ("adjoint", r#"{"space":{"p":5}}"#),
        ("integrate", r#"{"pvm":null}"#),
        ("gelfand", "[]"),
        ("decompose", ""),
    ] {
        let out = run(&[cmd], input);
        assert_eq!(error_kind(&out), "invalid-input", "{cmd}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn outputs_are_byte_identical() {
    let u = Operator::from_i64(&weighted(), &[3, 0, 1, 0, 5, 0, 2, 0, 0]).unwrap();
    let text = json::to_string(&u);
    assert_eq!(
        run(&["adjoint"], &text).stdout,
        run(&["adjoint"], &text).stdout
    );
    let a = run(
        &[
            "verify",
            "--suite",
            "thm-5.15.1",
            "--samples",
            "40",
            "--seed",
            "9",
        ],
        "",
    );
    let b = run(
        &[
            "verify",
            "--suite",
            "thm-5.15.1",
            "--samples",
            "40",
            "--seed",
            "9",
        ],
        "",
    );
    assert_eq!(stdout(&a), stdout(&b));
}
