use std::collections::BTreeMap;

use gersten_core::algebra::{make_ring, AnyRing};
use serde_json::{json, Value};

use crate::CliError;

/// A deliberate defect injected into a value under test, used to show that
/// the suites can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Sabotage {
    /// Flip the sign of the correction block of the upper triangulation.
    UtSign,
    /// Drop the factor `g` from the corner term of block composition.
    CompositionG,
    /// Drop the `b'H` term of the pasting of homotopy squares.
    StarTerm,
    /// Flip the sign of the homotopy relating `δ` and a triangular morphism.
    DeltaSign,
}

impl Sabotage {
    pub fn name(self) -> &'static str {
        match self {
            Sabotage::UtSign => "ut-sign",
            Sabotage::CompositionG => "composition-g",
            Sabotage::StarTerm => "star-term",
            Sabotage::DeltaSign => "delta-sign",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub ring: String,
    pub seed: u64,
    /// Instances per check, unless overridden in `counts`.
    pub count: usize,
    /// Per-check instance counts, keyed by anchor.
    pub counts: BTreeMap<String, usize>,
    pub max_dim: usize,
    pub max_val: u32,
    /// Truncation level for simplicial checks.
    pub level: usize,
    /// Only run checks whose anchor starts with one of these prefixes.
    pub only: Vec<String>,
    pub sabotage: Option<Sabotage>,
    /// Record wall time per check. Off by default so reports stay byte-identical.
    pub timings: bool,
}

/// The simplicial check walks every composable pair of monotone maps up to
/// the truncation level, so it runs fewer instances by default.
pub const SIMPLICIAL_DEFAULT_COUNT: usize = 20;

fn default_counts() -> BTreeMap<String, usize> {
    BTreeMap::from([("hnat/simplicial-levels".to_string(), SIMPLICIAL_DEFAULT_COUNT)])
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            ring: "Z@5".into(),
            seed: 42,
            count: 200,
            counts: default_counts(),
            max_dim: 3,
            max_val: 3,
            level: 3,
            only: Vec::new(),
            sabotage: None,
            timings: false,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<AnyRing, CliError> {
        let ring = make_ring(&self.ring).map_err(|e| CliError::ConfigInvalid(e.to_string()))?;
        if self.count == 0 {
            return Err(CliError::ConfigInvalid("count must be at least 1".into()));
        }
        if let Some((anchor, _)) = self.counts.iter().find(|(_, &c)| c == 0) {
            return Err(CliError::ConfigInvalid(format!("count for {anchor} must be at least 1")));
        }
        if self.max_dim == 0 {
            return Err(CliError::ConfigInvalid("max-dim must be at least 1".into()));
        }
        Ok(ring)
    }

    /// Parses `ANCHOR=N` for a per-check count override.
    pub fn parse_count_override(text: &str) -> Result<(String, usize), CliError> {
        let (anchor, n) = text
            .split_once('=')
            .ok_or_else(|| CliError::ConfigInvalid(format!("expected ANCHOR=N, got {text:?}")))?;
        let n = n.parse().map_err(|_| CliError::ConfigInvalid(format!("bad count in {text:?}")))?;
        Ok((anchor.to_string(), n))
    }

    pub fn count_for(&self, anchor: &str) -> usize {
        self.counts.get(anchor).copied().unwrap_or(self.count)
    }

    pub fn selects(&self, anchor: &str) -> bool {
        self.only.is_empty() || self.only.iter().any(|p| anchor.starts_with(p.as_str()))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": self.ring,
            "seed": self.seed,
            "count": self.count,
            "counts": self.counts,
            "max_dim": self.max_dim,
            "max_val": self.max_val,
            "level": self.level,
            "only": self.only,
            "sabotage": self.sabotage.map(Sabotage::name),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_overrides() {
        assert_eq!(SuiteConfig::parse_count_override("k0/telescope=7"), Ok(("k0/telescope".into(), 7)));
        assert!(SuiteConfig::parse_count_override("k0/telescope").is_err());
        assert!(SuiteConfig::parse_count_override("k0/telescope=-1").is_err());
        let config = SuiteConfig::default();
        assert_eq!(config.count_for("hnat/simplicial-levels"), SIMPLICIAL_DEFAULT_COUNT);
        assert_eq!(config.count_for("k0/telescope"), 200);
    }

    #[test]
    fn validation() {
        assert!(SuiteConfig::default().validate().is_ok());
        assert!(SuiteConfig { ring: "Q[t]@t".into(), ..Default::default() }.validate().is_ok());
        assert!(SuiteConfig { ring: "Z@4".into(), ..Default::default() }.validate().is_err());
        assert!(SuiteConfig { count: 0, ..Default::default() }.validate().is_err());
        assert!(SuiteConfig { max_dim: 0, ..Default::default() }.validate().is_err());
        let mut zero_override = SuiteConfig::default();
        zero_override.counts.insert("k0/telescope".into(), 0);
        assert!(zero_override.validate().is_err());
    }

    #[test]
    fn selection_by_prefix() {
        let config = SuiteConfig { only: vec!["hnat/".into(), "k0/tele".into()], ..Default::default() };
        assert!(config.selects("hnat/star-associative") && config.selects("k0/telescope"));
        assert!(!config.selects("k0/additivity"));
        assert!(SuiteConfig::default().selects("anything"));
    }

    #[test]
    fn config_json_has_no_timings() {
        let v = SuiteConfig { timings: true, sabotage: Some(Sabotage::StarTerm), ..Default::default() }.to_json();
        assert_eq!(v["sabotage"], "star-term");
        assert!(v.get("timings").is_none());
    }
}
