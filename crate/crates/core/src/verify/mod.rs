//! Seeded property suites.
//!
//! A suite is a deterministic function of `(seed, samples, params)`. Sample
//! `k` of a suite draws from an rng seeded with `sub_seed(suite_seed, k)`, so
//! a reported counterexample index can be replayed in isolation.

mod fields;
mod measures;
mod operators;
mod projectors;
mod spectral;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::sample::{self, SampleRng};
use crate::scalar::{validate_field, PadicScalar, DEFAULT_PRECISION, DEFAULT_PRIME};
use crate::space::{WeightedSpace, MAX_DIM};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 1000;
/// Working-precision floor for the sampled valuation ranges.
pub const MIN_DIGITS: u32 = 14;
pub const MIN_BITS: u32 = 30;

/// Field and size parameters shared by every suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Params {
    pub prime: u32,
    pub precision: u32,
    /// Caps the dimension of sampled spaces; each suite has its own natural
    /// range below this.
    pub dim_max: Option<usize>,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            prime: DEFAULT_PRIME,
            precision: DEFAULT_PRECISION,
            dim_max: None,
        }
    }
}

impl Params {
    pub fn validate(&self) -> Result<()> {
        validate_field(self.prime, self.precision)?;
        let bits = self.precision as f64 * (self.prime as f64).log2();
        if self.precision < MIN_DIGITS || bits < MIN_BITS as f64 {
            return Err(Error::InvalidInput(format!(
                "suites need precision >= {MIN_DIGITS} and p^precision >= 2^{MIN_BITS}"
            )));
        }
        if let Some(d) = self.dim_max {
            if d == 0 || d > MAX_DIM {
                return Err(Error::InvalidInput(format!(
                    "dim-max must lie in 1..={MAX_DIM}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    /// Index of the failing sample within the suite.
    pub sample: usize,
    pub reason: String,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub witness: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// A failed check inside a sample.
#[derive(Debug)]
pub struct Fail {
    reason: String,
    witness: Value,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail {
            reason: format!("unexpected error: {e}"),
            witness: Value::Null,
        }
    }
}

pub type Check = std::result::Result<(), Fail>;

pub fn ensure(cond: bool, reason: impl Into<String>) -> Check {
    if cond {
        Ok(())
    } else {
        Err(Fail {
            reason: reason.into(),
            witness: Value::Null,
        })
    }
}

pub fn ensure_with<W: Serialize>(cond: bool, reason: impl Into<String>, witness: &W) -> Check {
    if cond {
        Ok(())
    } else {
        Err(Fail {
            reason: reason.into(),
            witness: serde_json::to_value(witness).unwrap_or(Value::Null),
        })
    }
}

/// Running state of one suite.
pub struct Ctx {
    seed: u64,
    samples: usize,
    params: Params,
    index: usize,
}

impl Ctx {
    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn prime(&self) -> u32 {
        self.params.prime
    }

    pub fn precision(&self) -> u32 {
        self.params.precision
    }

    pub fn scalar(&self, n: i64) -> PadicScalar {
        PadicScalar::from_i64(self.prime(), self.precision(), n).expect("validated field")
    }

    /// Dimension in `lo..=hi`, capped by `dim_max`.
    pub fn dim(&self, rng: &mut SampleRng, lo: usize, hi: usize) -> usize {
        let hi = self.params.dim_max.map_or(hi, |m| hi.min(m)).max(lo);
        rng.gen_range(lo..=hi)
    }

    /// Largest dimension allowed for a fixture of natural size `n`.
    pub fn fits(&self, n: usize) -> bool {
        self.params.dim_max.is_none_or(|m| n <= m)
    }

    pub fn space(&self, rng: &mut SampleRng, dim: usize) -> WeightedSpace {
        sample::space(rng, self.prime(), self.precision(), dim)
    }

    pub fn orthonormal(&self, dim: usize) -> WeightedSpace {
        WeightedSpace::orthonormal(self.prime(), self.precision(), dim).expect("validated field")
    }

    /// Runs `count` seeded samples.
    pub fn sampled(
        &mut self,
        count: usize,
        mut body: impl FnMut(&Ctx, &mut SampleRng) -> Check,
    ) -> std::result::Result<(), Counterexample> {
        for _ in 0..count {
            let mut rng = sample::rng(sample::sub_seed(self.seed, self.index as u64));
            self.finish(body(self, &mut rng))?;
        }
        Ok(())
    }

    /// Runs one deterministic case.
    pub fn case(
        &mut self,
        body: impl FnOnce(&Ctx) -> Check,
    ) -> std::result::Result<(), Counterexample> {
        let outcome = body(self);
        self.finish(outcome)
    }

    fn finish(&mut self, outcome: Check) -> std::result::Result<(), Counterexample> {
        let sample = self.index;
        self.index += 1;
        outcome.map_err(|f| Counterexample {
            sample,
            reason: f.reason,
            witness: f.witness,
        })
    }
}

pub type SuiteFn = fn(&mut Ctx) -> std::result::Result<(), Counterexample>;

/// Every suite, sorted by id.
pub fn registry() -> Vec<(&'static str, SuiteFn)> {
    let mut suites: Vec<(&'static str, SuiteFn)> = vec![
        ("valuation-axioms", fields::valuation_axioms),
        ("hensel-sqrt", fields::hensel_sqrt),
        ("f-omega-bounds", fields::f_omega_bounds),
        ("pi-structure", fields::pi_structure),
        ("orthogonal-families", fields::orthogonal_families),
        ("operator-norm", operators::operator_norm),
        ("cor-3.6", operators::cor_3_6),
        ("thm-3.5-oracle", operators::thm_3_5_oracle),
        ("note-2.3-counterexample", operators::note_2_3),
        ("algebra-axioms", operators::algebra_axioms),
        ("nilpotent-diagonal", operators::nilpotent_diagonal),
        ("prop-4.1.1", projectors::prop_4_1_1),
        ("lemma-4.4", projectors::lemma_4_4),
        ("lemma-4.5", projectors::lemma_4_5),
        ("lemma-4.8", projectors::lemma_4_8),
        ("prop-4.10", projectors::prop_4_10),
        ("cor-4.11.1", projectors::cor_4_11_1),
        ("prop-5.1-I", measures::prop_5_1_i),
        ("prop-5.1-II", measures::prop_5_1_ii),
        ("prop-5.1-III", measures::prop_5_1_iii),
        ("prop-5.1-V", measures::prop_5_1_v),
        ("prop-5.1-VI", measures::prop_5_1_vi),
        ("prop-5.1-VII", measures::prop_5_1_vii),
        ("prop-5.1-VIII", measures::prop_5_1_viii),
        ("lemma-5.7", measures::lemma_5_7),
        ("cor-5.8", measures::cor_5_8),
        ("polarization", measures::polarization),
        ("measure-norms", measures::measure_norms),
        ("thm-5.12-roundtrip", spectral::thm_5_12_roundtrip),
        ("prop-5.14", spectral::prop_5_14),
        ("thm-5.15.1", spectral::thm_5_15_1),
        ("prop-5.16.1", spectral::prop_5_16_1),
        ("thm-5.17.1-diag", spectral::thm_5_17_1_diag),
        ("thm-5.17.1-family", spectral::thm_5_17_1_family),
    ];
    suites.sort_by_key(|(id, _)| *id);
    suites
}

pub fn suite_ids() -> Vec<&'static str> {
    registry().into_iter().map(|(id, _)| id).collect()
}

/// FNV-1a, used to derive a stable per-suite stream from its id.
fn stream_of(id: &str) -> u64 {
    id.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

fn run_one(
    id: &'static str,
    suite: SuiteFn,
    seed: u64,
    samples: usize,
    params: Params,
) -> SuiteReport {
    let start = Instant::now();
    let mut ctx = Ctx {
        seed: sample::sub_seed(seed, stream_of(id)),
        samples,
        params,
        index: 0,
    };
    let outcome = panic::catch_unwind(AssertUnwindSafe(|| suite(&mut ctx)));
    let counterexample = match outcome {
        Ok(Ok(())) => None,
        Ok(Err(c)) => Some(c),
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            Some(Counterexample {
                sample: ctx.index,
                reason: format!("panic: {msg}"),
                witness: Value::Null,
            })
        }
    };
    SuiteReport {
        suite: id.to_string(),
        seed,
        samples: ctx.index,
        passed: counterexample.is_none(),
        counterexample,
        elapsed: start.elapsed(),
    }
}

/// Runs one suite by id, or every suite for `"all"`. Reports are sorted by
/// suite id.
pub fn run(suite: &str, seed: u64, samples: usize, params: Params) -> Result<Vec<SuiteReport>> {
    params.validate()?;
    let selected: Vec<(&'static str, SuiteFn)> = if suite == "all" {
        registry()
    } else {
        let found: Vec<_> = registry()
            .into_iter()
            .filter(|(id, _)| *id == suite)
            .collect();
        if found.is_empty() {
            return Err(Error::InvalidInput(format!("unknown suite {suite:?}")));
        }
        found
    };
    let mut reports: Vec<SuiteReport> = selected
        .into_par_iter()
        .map(|(id, f)| run_one(id, f, seed, samples, params))
        .collect();
    reports.sort_by(|a, b| a.suite.cmp(&b.suite));
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(matches!(
            run("nosuch", 1, 10, Params::default()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn registry_ids_are_unique_and_sorted() {
        let ids = suite_ids();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(ids, sorted);
    }

    #[test]
    fn every_suite_passes_on_few_samples() {
        let reports = run("all", 7, 20, Params::default()).unwrap();
        for r in &reports {
            assert!(r.passed, "{} failed: {:?}", r.suite, r.counterexample);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run("all", 3, 10, Params::default()).unwrap();
        let b = run("all", 3, 10, Params::default()).unwrap();
        let text = |rs: &[SuiteReport]| {
            rs.iter()
                .map(|r| serde_json::to_string(r).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(text(&a), text(&b));
    }

    #[test]
    fn other_primes_pass() {
        for (p, prec) in [(3, 19), (7, 14), (2, 30)] {
            let params = Params {
                prime: p,
                precision: prec,
                dim_max: Some(4),
            };
            for r in run("all", 5, 8, params).unwrap() {
                assert!(
                    r.passed,
                    "p = {p}: {} failed: {:?}",
                    r.suite, r.counterexample
                );
            }
        }
    }

    #[test]
    fn bad_params_are_rejected() {
        let params = Params {
            dim_max: Some(0),
            ..Params::default()
        };
        assert!(run("all", 1, 1, params).is_err());
        let params = Params {
            prime: 4,
            ..Params::default()
        };
        assert!(run("all", 1, 1, params).is_err());
        for (prime, precision) in [(5, 13), (2, 29), (3, 18)] {
            let params = Params {
                prime,
                precision,
                dim_max: None,
            };
            assert!(
                matches!(params.validate(), Err(Error::InvalidInput(_))),
                "{prime}^{precision}"
            );
        }
        for (prime, precision) in [(5, 14), (2, 30), (3, 19), (19, 14)] {
            let params = Params {
                prime,
                precision,
                dim_max: None,
            };
            assert!(params.validate().is_ok(), "{prime}^{precision}");
        }
    }
}
