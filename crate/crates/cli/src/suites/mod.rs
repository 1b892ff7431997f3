//! Randomized checks of every module invariant, each paired with an oracle
//! that does not go through the code path under test.

mod algebra;
mod category;
mod chain;
mod hnat;
mod k0;
mod zero_map;

use std::fmt::Display;
use std::time::Instant;

use gersten_core::algebra::AnyRing;
use gersten_core::random::Sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Sabotage, SuiteConfig};
use crate::report::{CheckReport, Report};
use crate::CliError;

/// Data of a failing instance.
pub(crate) type Outcome = Result<(), Value>;

pub(crate) struct Params<R> {
    pub ring: R,
    pub max_dim: usize,
    pub max_val: u32,
    pub level: usize,
    pub sabotage: Option<Sabotage>,
}

impl<R> Params<R> {
    pub fn sabotaged(&self, s: Sabotage) -> bool {
        self.sabotage == Some(s)
    }
}

pub(crate) struct Check<R> {
    pub anchor: &'static str,
    pub run: fn(&Params<R>, &mut ChaCha8Rng) -> Outcome,
}

pub(crate) fn fail(violated: &str, data: Value) -> Value {
    json!({ "violated": violated, "input": data })
}

pub(crate) fn ensure(cond: bool, violated: &str, data: impl FnOnce() -> Value) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(fail(violated, data()))
    }
}

pub(crate) trait OrFail<T> {
    fn or_fail(self, violated: &str, data: impl FnOnce() -> Value) -> Result<T, Value>;
}

impl<T, E: Display> OrFail<T> for Result<T, E> {
    fn or_fail(self, violated: &str, data: impl FnOnce() -> Value) -> Result<T, Value> {
        self.map_err(|e| {
            let mut v = fail(violated, data());
            v["error"] = json!(e.to_string());
            v
        })
    }
}

impl<T> OrFail<T> for Option<T> {
    fn or_fail(self, violated: &str, data: impl FnOnce() -> Value) -> Result<T, Value> {
        self.ok_or_else(|| fail(violated, data()))
    }
}

/// Every check, in no particular order; reports are sorted by anchor.
pub(crate) fn all_checks<R: Sample>() -> Vec<Check<R>> {
    let mut checks = Vec::new();
    checks.extend(algebra::checks());
    checks.extend(chain::checks());
    checks.extend(category::checks());
    checks.extend(zero_map::checks());
    checks.extend(hnat::checks());
    checks.extend(k0::checks());
    checks
}

/// Anchors of all checks.
pub fn anchors() -> Vec<&'static str> {
    let mut names: Vec<_> = all_checks::<gersten_core::algebra::ZLocal>().iter().map(|c| c.anchor).collect();
    names.sort_unstable();
    names
}

/// FNV-1a; a stable per-check stream id independent of check order.
fn stream_id(anchor: &str) -> u64 {
    anchor.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

/// The generator for one instance; replaying a counterexample only needs
/// the seed, the anchor and the instance index.
pub fn instance_rng(seed: u64, anchor: &str, instance: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ stream_id(anchor));
    rng.set_stream(instance as u64);
    rng
}

fn run_check<R: Sample>(check: &Check<R>, params: &Params<R>, config: &SuiteConfig) -> CheckReport {
    let start = Instant::now();
    let count = config.count_for(check.anchor);
    let failure = (0..count).into_par_iter().map(|i| (i, (check.run)(params, &mut instance_rng(config.seed, check.anchor, i)))).find_first(|(_, r)| r.is_err());
    let (instances, counterexample) = match failure {
        Some((i, Err(data))) => (i + 1, Some(json!({ "instance": i, "seed": config.seed, "data": data }))),
        _ => (count, None),
    };
    CheckReport {
        anchor: check.anchor.to_string(),
        instances,
        passed: counterexample.is_none(),
        counterexample,
        wall_ms: config.timings.then(|| start.elapsed().as_secs_f64() * 1e3),
    }
}

fn run_with<R: Sample>(ring: R, config: &SuiteConfig) -> Vec<CheckReport> {
    let params = Params {
        ring,
        max_dim: config.max_dim,
        max_val: config.max_val,
        level: config.level,
        sabotage: config.sabotage,
    };
    let checks: Vec<Check<R>> = all_checks().into_iter().filter(|c| config.selects(c.anchor)).collect();
    checks.par_iter().map(|c| run_check(c, &params, config)).collect()
}

/// Runs all selected checks. Checks and instances run in parallel; the
/// report does not depend on scheduling.
pub fn verify(config: &SuiteConfig) -> Result<Report, CliError> {
    let ring = config.validate()?;
    let known = anchors();
    if let Some(anchor) = config.counts.keys().find(|a| !known.contains(&a.as_str())) {
        return Err(CliError::ConfigInvalid(format!("unknown check {anchor}")));
    }
    let mut checks = match ring {
        AnyRing::Integers(r) => run_with(r, config),
        AnyRing::Polynomials(r) => run_with(r, config),
    };
    if checks.is_empty() {
        return Err(CliError::ConfigInvalid("no check matches the selection".into()));
    }
    checks.sort_by(|a, b| a.anchor.cmp(&b.anchor));
    Ok(Report { config: config.to_json(), checks })
}
