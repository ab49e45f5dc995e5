//! Named verification suites.
//!
//! A suite is a list of properties. Each property has a generator, which
//! draws inputs as a JSON object from a seeded stream, and a check, which
//! reads only those inputs. A failure therefore records everything needed to
//! re-run it: `verify --replay` feeds the recorded inputs back to the check.

mod algebra;
mod analytic;
mod codec;

use std::time::Instant;

use dirichlet::primes::PrimeTable;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

/// Shared state for checks.
pub struct Ctx {
    pub table: PrimeTable,
    pub parallel: bool,
}

impl Ctx {
    pub fn new(parallel: bool) -> CliResult<Self> {
        Ok(Ctx {
            table: PrimeTable::sieve(1 << 20)?,
            parallel,
        })
    }
}

pub enum Outcome {
    Pass,
    Fail { expected: Value, got: Value },
}

impl Outcome {
    fn from_bool(ok: bool, expected: impl FnOnce() -> Value, got: impl FnOnce() -> Value) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail {
                expected: expected(),
                got: got(),
            }
        }
    }
}

pub struct Property {
    pub name: &'static str,
    pub generate: fn(&mut ChaCha8Rng, &Ctx) -> CliResult<Value>,
    pub check: fn(&Value, &Ctx) -> CliResult<Outcome>,
}

pub struct Suite {
    pub name: &'static str,
    pub about: &'static str,
    pub default_trials: usize,
    pub properties: Vec<Property>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub property: String,
    pub inputs: Value,
    pub expected: Value,
    pub got: Value,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    /// Trials per property.
    pub trials: usize,
    pub checks: usize,
    pub failures: Vec<Failure>,
    pub seed: u64,
    /// Wall-clock seconds.
    pub elapsed: f64,
}

pub fn registry() -> Vec<Suite> {
    let mut suites = algebra::suites();
    suites.extend(analytic::suites());
    suites
}

pub fn suite_names() -> Vec<&'static str> {
    registry().iter().map(|s| s.name).collect()
}

/// Per-property stream: the run seed mixed with the property's name, so
/// adding a property never shifts the inputs of another.
fn property_rng(seed: u64, suite: &str, property: &str) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in suite.bytes().chain(*b"/").chain(property.bytes()) {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

fn run_check(p: &Property, inputs: &Value, ctx: &Ctx) -> Option<Failure> {
    let outcome = (p.check)(inputs, ctx).unwrap_or_else(|e| Outcome::Fail {
        expected: json!("no error"),
        got: json!({ "error": e.to_string() }),
    });
    match outcome {
        Outcome::Pass => None,
        Outcome::Fail { expected, got } => Some(Failure {
            property: p.name.to_string(),
            inputs: inputs.clone(),
            expected,
            got,
        }),
    }
}

pub fn run_suite(
    suite: &Suite,
    seed: u64,
    trials: Option<usize>,
    ctx: &Ctx,
) -> CliResult<SuiteResult> {
    let start = Instant::now();
    let trials = trials.unwrap_or(suite.default_trials);
    let mut failures = Vec::new();
    let mut checks = 0;
    for p in &suite.properties {
        let mut rng = property_rng(seed, suite.name, p.name);
        for _ in 0..trials {
            let inputs = (p.generate)(&mut rng, ctx)?;
            checks += 1;
            failures.extend(run_check(p, &inputs, ctx));
        }
    }
    Ok(SuiteResult {
        suite: suite.name.to_string(),
        trials,
        checks,
        failures,
        seed,
        elapsed: start.elapsed().as_secs_f64(),
    })
}

/// Re-runs recorded failures; returns those that still fail.
pub fn replay(failures: &[Failure], ctx: &Ctx) -> CliResult<Vec<Failure>> {
    let suites = registry();
    let mut still = Vec::new();
    for f in failures {
        let p = suites
            .iter()
            .flat_map(|s| s.properties.iter())
            .find(|p| p.name == f.property)
            .ok_or_else(|| {
                CliError::usage(format!("unknown property {:?} in replay file", f.property))
            })?;
        still.extend(run_check(p, &f.inputs, ctx));
    }
    Ok(still)
}

pub fn find(name: &str) -> CliResult<Vec<Suite>> {
    let all = registry();
    if name == "all" {
        return Ok(all);
    }
    let found: Vec<Suite> = all.into_iter().filter(|s| s.name == name).collect();
    if found.is_empty() {
        return Err(CliError::usage(format!(
            "unknown suite {name:?}; available: {}, all",
            suite_names().join(", ")
        )));
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn property_names_are_unique() {
        let mut names: Vec<&str> = registry()
            .iter()
            .flat_map(|s| s.properties.iter().map(|p| p.name))
            .collect();
        let total = names.len();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), total);
    }

    #[test]
    fn streams_depend_on_property() {
        use rand::Rng;
        let a = property_rng(1, "s", "p").gen::<u64>();
        let b = property_rng(1, "s", "q").gen::<u64>();
        assert_ne!(a, b);
        assert_eq!(a, property_rng(1, "s", "p").gen::<u64>());
    }

    #[test]
    fn unknown_suite_is_a_usage_error() {
        assert!(matches!(find("nope"), Err(CliError::Usage(_))));
        assert!(find("all").unwrap().len() >= 8);
    }
}
