use std::collections::BTreeMap;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;
use ultraspec::operator::{check_algebra_axioms, Operator};
use ultraspec::space::WeightedSpace;
use ultraspec::LogNorm;

fn verify_all(seed: u64) -> (Output, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_ultraspec"))
        .args(["verify", "--suite", "all", "--seed", &seed.to_string()])
        .output()
        .expect("binary runs");
    (out, start.elapsed())
}

struct Reports(BTreeMap<String, Value>);

impl Reports {
    fn parse(stdout: &[u8]) -> Self {
        let text = std::str::from_utf8(stdout).expect("utf-8 output");
        let map = text
            .lines()
            .map(|l| {
                let v: Value = serde_json::from_str(l).expect("one JSON object per line");
                (v["suite"].as_str().expect("suite id").to_owned(), v)
            })
            .collect();
        Reports(map)
    }

    /// Every listed suite ran with seed 42, passed and drew at least `min` samples.
    fn check(&self, suites: &[(&str, u64)]) -> Result<String, String> {
        let mut seen = Vec::new();
        for &(id, min) in suites {
            let r = self
                .0
                .get(id)
                .ok_or_else(|| format!("{id}: missing report"))?;
            let samples = r["samples"].as_u64().unwrap_or(0);
            if r["seed"] != 42 {
                return Err(format!("{id}: wrong seed {}", r["seed"]));
            }
            if r["passed"] != true {
                return Err(format!("{id}: counterexample {}", r["counterexample"]));
            }
            if samples < min {
                return Err(format!("{id}: {samples} samples < {min}"));
            }
            seen.push(format!("{id}={samples}"));
        }
        Ok(seen.join(" "))
    }
}

/// The 4x4 witness over Q_5, rebuilt from the public API.
fn note_counterexample() -> Result<String, String> {
    let space = WeightedSpace::orthonormal(5, 16, 4).map_err(|e| e.to_string())?;
    let s = |n| space.scalar(n);
    let i = s(-1).hensel_sqrt().map_err(|e| e.to_string())?;
    if i * i != s(-1) {
        return Err("i^2 != -1".into());
    }
    let (a, z, c) = (s(1), s(0), s(5));
    let u = Operator::from_rows(
        &space,
        vec![
            vec![a, i, z, z],
            vec![i, -a, z, z],
            vec![z, z, c, z],
            vec![z, z, z, z],
        ],
    )
    .map_err(|e| e.to_string())?;
    let u2 = u.compose(&u).map_err(|e| e.to_string())?;
    if !u.is_self_adjoint() {
        return Err("u is not self-adjoint".into());
    }
    if u.op_norm() != LogNorm::ONE || u.op_norm().square() != LogNorm::ONE {
        return Err(format!("||u|| = {:?}", u.op_norm()));
    }
    if u2.op_norm() != LogNorm::from_exponent(2) {
        return Err(format!("||u^2|| = {:?}", u2.op_norm()));
    }
    let report =
        check_algebra_axioms(std::slice::from_ref(&u), 1000, 42).map_err(|e| e.to_string())?;
    if report.e_holds || report.e_counterexample.as_ref() != Some(&u) {
        return Err("E failure not reported with the witness".into());
    }
    Ok("||u^2|| = 5^-2 < 1 = ||u||^2, E fails at u".into())
}

#[test]
fn acceptance() {
    let (first, t1) = verify_all(42);
    let (second, t2) = verify_all(42);
    let reports = Reports::parse(&first.stdout);

    let prop_ids: Vec<String> = ["I", "II", "III", "V", "VI", "VII", "VIII"]
        .iter()
        .map(|r| format!("prop-5.1-{r}"))
        .collect();
    let prop_5_1: Vec<(&str, u64)> = prop_ids
        .iter()
        .map(|id| (id.as_str(), 1000))
        .chain([
            ("lemma-5.7", 1000),
            ("cor-5.8", 1000),
            ("polarization", 1000),
        ])
        .collect();

    let determinism = if first.status.code() != Some(0) {
        Err(format!("exit code {:?}", first.status.code()))
    } else if first.stdout != second.stdout || first.stdout.is_empty() {
        Err("reports differ between runs".into())
    } else {
        Ok(format!(
            "{} bytes identical, runs took {:.1}s and {:.1}s",
            first.stdout.len(),
            t1.as_secs_f64(),
            t2.as_secs_f64()
        ))
    };

    let results: Vec<(&str, Result<String, String>)> = vec![
        (
            "AC1 valuation axioms",
            reports.check(&[("valuation-axioms", 10_000)]),
        ),
        ("AC2 adjoint laws", reports.check(&[("cor-3.6", 1000)])),
        (
            "AC3 adjoint oracle",
            reports.check(&[("thm-3.5-oracle", 1000)]),
        ),
        (
            "AC4 note counterexample",
            note_counterexample().and_then(|d| {
                reports
                    .check(&[("note-2.3-counterexample", 1000)])
                    .map(|s| format!("{d}; {s}"))
            }),
        ),
        (
            "AC5 projector norms",
            reports.check(&[
                ("lemma-4.4", 1000),
                ("lemma-4.5", 1000),
                ("lemma-4.8", 1000),
            ]),
        ),
        (
            "AC6 Gelfand round trip",
            reports.check(&[("cor-4.11.1", 1000)]),
        ),
        ("AC7 measure identities", reports.check(&prop_5_1)),
        (
            "AC8 representation round trip",
            reports.check(&[("thm-5.12-roundtrip", 1000)]),
        ),
        (
            "AC9 diagonal decomposition",
            reports.check(&[
                ("thm-5.17.1-diag", 1000),
                ("prop-5.14", 1000),
                ("thm-5.17.1-family", 200),
            ]),
        ),
        (
            "AC10 multiplication representation",
            reports.check(&[("thm-5.15.1", 100)]),
        ),
        ("AC11 faithfulness", reports.check(&[("prop-5.16.1", 8)])),
        ("AC12 determinism", determinism),
    ];

    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
