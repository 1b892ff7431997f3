//! Acceptance suite: one line per criterion, exit status 1 if any fails.
//!
//! Runs without the libtest harness so the lines are printed on every run.

use std::collections::BTreeSet;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use gersten_cli::{verify, Report, SuiteConfig};
use gersten_core::algebra::ZLocal;
use gersten_core::k0::{generator_decompose, k0_class, FLModule};
use serde_json::Value;

const Z5: &str = "Z@5";
const QT: &str = "Q[t]@t";

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Verdict { passed, detail: detail.into() }
    }
}

/// Runs exactly the listed checks with the given instance counts.
fn suites(ring: &str, checks: &[(&str, usize)], max_dim: usize) -> Result<(Report, Duration), String> {
    let config = SuiteConfig {
        ring: ring.into(),
        counts: checks.iter().map(|&(a, n)| (a.to_string(), n)).collect(),
        max_dim,
        only: checks.iter().map(|&(a, _)| a.to_string()).collect(),
        ..Default::default()
    };
    let start = Instant::now();
    let report = verify(&config).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let ran: BTreeSet<&str> = report.checks.iter().map(|c| c.anchor.as_str()).collect();
    let wanted: BTreeSet<&str> = checks.iter().map(|&(a, _)| a).collect();
    if ran != wanted {
        return Err(format!("selection ran {ran:?}, wanted {wanted:?}"));
    }
    Ok((report, elapsed))
}

/// Pass iff every check passed with its full count and within `limit`.
fn criterion(runs: &[(&str, &[(&str, usize)])], max_dim: usize, limit: Option<Duration>) -> Verdict {
    let mut parts = Vec::new();
    let mut passed = true;
    let mut total = Duration::ZERO;
    for &(ring, checks) in runs {
        let (report, elapsed) = match suites(ring, checks, max_dim) {
            Ok(r) => r,
            Err(e) => return Verdict::new(false, e),
        };
        total += elapsed;
        for &(anchor, n) in checks {
            let c = report.check(anchor).expect("selection verified");
            let ok = c.passed && c.instances == n;
            passed &= ok;
            let mark = if ok { "" } else { " FAILED" };
            parts.push(format!("{anchor}@{ring} {}/{n}{mark}", c.instances));
        }
    }
    let mut detail = parts.join(", ");
    detail.push_str(&format!("; {:.2} s", total.as_secs_f64()));
    if let Some(limit) = limit {
        passed &= total < limit;
        detail.push_str(&format!(" (limit {} s)", limit.as_secs()));
    }
    Verdict::new(passed, detail)
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn composition_oracle() -> Verdict {
    let checks: &[(&str, usize)] = &[("category/composition-oracle", 500)];
    criterion(&[(Z5, checks), (QT, checks)], 4, secs(5))
}

fn triangulation() -> Verdict {
    let checks: &[(&str, usize)] = &[("category/triangulation", 300), ("category/triangulation-of-upper", 300)];
    criterion(&[(Z5, checks)], 3, secs(5))
}

fn involution() -> Verdict {
    let checks: &[(&str, usize)] = &[("category/upside-down-functor", 300), ("category/block-invertibility", 300)];
    criterion(&[(Z5, checks)], 3, None)
}

fn classification() -> Verdict {
    let checks: &[(&str, usize)] = &[("category/classify-planted", 200), ("category/classify-rejects-g-squared", 200)];
    criterion(&[(Z5, checks)], 3, secs(10))
}

fn homotopy_calculus() -> Verdict {
    let checks: &[(&str, usize)] = &[
        ("chain/homotopy-round-trip", 200),
        ("chain/cone-contraction", 100),
        ("chain/star-contract", 200),
        ("hnat/star-associative", 200),
    ];
    criterion(&[(Z5, checks)], 3, None)
}

fn delta_suite() -> Verdict {
    let checks: &[(&str, usize)] = &[
        ("zero-map/delta-naturality", 200),
        ("zero-map/delta-equivalence", 200),
        ("zero-map/mu-data-equality", 200),
    ];
    criterion(&[(Z5, checks)], 3, None)
}

fn cylinder() -> Verdict {
    let checks: &[(&str, usize)] = &[("hnat/cylinder-coherent", 100), ("hnat/cylinder-negative-control", 100)];
    criterion(&[(Z5, checks)], 3, None)
}

fn rectification() -> Verdict {
    let checks: &[(&str, usize)] = &[
        ("zero-map/rectification", 100),
        ("zero-map/rectification-idempotent", 100),
        ("zero-map/rectification-naturality", 100),
    ];
    criterion(&[(Z5, checks)], 3, None)
}

/// `[R/π^a] = a·[R/π]` through explicit sequences, for `a ≤ 5`.
fn peel_direct() -> Result<(), String> {
    let r = ZLocal::new(5).expect("5 is prime");
    for a in 1..=5 {
        let m = FLModule::cyclic(r, a);
        let d = generator_decompose(&m).map_err(|e| format!("a = {a}: {e}"))?;
        let chain = &d.chains[0];
        let exact = chain.iter().all(|s| s.validate().is_ok() && s.length_additive() && s.k0_additive());
        if d.multiple != a || chain.len() != a as usize - 1 || !exact || k0_class(&m) != 0 {
            return Err(format!("a = {a}: multiple {}, chain length {}, exact {exact}", d.multiple, chain.len()));
        }
    }
    Ok(())
}

fn k0_desk_check() -> Verdict {
    let checks: &[(&str, usize)] = &[("k0/telescope", 50), ("k0/peel-chains", 50)];
    let v = criterion(&[(Z5, checks)], 3, None);
    match peel_direct() {
        Ok(()) => Verdict::new(v.passed, format!("{}; peel chains a = 1..=5 verified", v.detail)),
        Err(e) => Verdict::new(false, format!("{}; {e}", v.detail)),
    }
}

fn lab(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gersten-lab"))
        .args(args)
        .env("RAYON_NUM_THREADS", threads)
        .env_remove("GERSTEN_LAB_SEED")
        .output()
        .expect("binary runs")
}

const SMALL: [&str; 5] = ["verify", "--count", "10", "--check-count", "hnat/simplicial-levels=2"];

/// A sabotaged run fails, and its first counterexample replays from the
/// seed, anchor and instance alone.
fn sabotage_replays(flag: &str) -> Result<String, String> {
    let out = lab(&[&SMALL[..], &["--sabotage", flag]].concat(), "2");
    if out.status.code() != Some(1) {
        return Err(format!("{flag}: exit {:?}", out.status.code()));
    }
    let report: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let failed: Vec<&Value> = report["checks"].as_array().into_iter().flatten().filter(|c| c["passed"] == false).collect();
    let first = failed.first().ok_or(format!("{flag}: no failing check"))?;
    let cx = &first["counterexample"];
    let (Some(instance), Some(seed)) = (cx["instance"].as_u64(), cx["seed"].as_u64()) else {
        return Err(format!("{flag}: counterexample lacks instance or seed"));
    };
    if cx["data"].is_null() {
        return Err(format!("{flag}: counterexample lacks data"));
    }
    let anchor = first["anchor"].as_str().expect("anchor is a string");
    let count = (instance + 1).to_string();
    let seed = seed.to_string();
    let replay = lab(&["verify", "--only", anchor, "--count", &count, "--seed", &seed, "--sabotage", flag], "1");
    let replay: Value = serde_json::from_slice(&replay.stdout).map_err(|e| e.to_string())?;
    let again = replay["checks"].as_array().and_then(|c| c.iter().find(|c| c["anchor"] == anchor));
    if again.map(|c| &c["counterexample"]) != Some(cx) {
        return Err(format!("{flag}: {anchor} instance {instance} does not replay"));
    }
    Ok(format!("{flag} -> {} failing, replayed {anchor}#{instance}", failed.len()))
}

fn determinism() -> Verdict {
    let (a, b) = (lab(&SMALL, "1"), lab(&SMALL, "4"));
    let identical = a.stdout == b.stdout && !a.stdout.is_empty();
    let clean = a.status.code() == Some(0) && b.status.code() == Some(0);
    let mut detail = vec![format!("two runs byte-identical: {identical}, both exit 0: {clean}")];
    let mut passed = identical && clean;
    for flag in ["ut-sign", "composition-g", "star-term", "delta-sign"] {
        match sabotage_replays(flag) {
            Ok(d) => detail.push(d),
            Err(e) => {
                passed = false;
                detail.push(e);
            }
        }
    }
    Verdict::new(passed, detail.join("; "))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("composition oracle", composition_oracle),
        ("triangulation", triangulation),
        ("upside-down involution", involution),
        ("classification", classification),
        ("homotopy calculus", homotopy_calculus),
        ("delta suite", delta_suite),
        ("cylinder rectification", cylinder),
        ("triangular rectification", rectification),
        ("K0 desk check", k0_desk_check),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        failures += usize::from(!v.passed);
        println!("{} {:>2} {name}: {}", if v.passed { "PASS" } else { "FAIL" }, i + 1, v.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
