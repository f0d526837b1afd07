use std::collections::BTreeMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::spec::{SeriesSpec, SCHEMA_VERSION};

/// Suite parameters. Unset fields take suite-specific defaults; reports echo
/// the resolved values.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// `(p, q, ℓ)` triples for the symbolic suites.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cases: Option<Vec<(u64, usize, usize)>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub sample: usize,
    pub check: String,
    pub series: Option<SeriesSpec>,
    pub observed: String,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: String,
    pub seed: u64,
    pub params: SuiteParams,
    pub samples: usize,
    pub pass: usize,
    pub fail: usize,
    /// Per-check tallies across all samples.
    pub checks: BTreeMap<String, Tally>,
    /// Ramification profiles tested against the congruence and lower bound.
    pub profiles_checked: usize,
    pub profile_violations: usize,
    pub first_counterexample: Option<Counterexample>,
    /// Not serialized, so reports stay byte-identical across runs.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SuiteReport {
    pub(crate) fn new(suite: &str, seed: u64, params: SuiteParams) -> Self {
        SuiteReport {
            schema: SCHEMA_VERSION,
            suite: suite.to_string(),
            seed,
            params,
            samples: 0,
            pass: 0,
            fail: 0,
            checks: BTreeMap::new(),
            profiles_checked: 0,
            profile_violations: 0,
            first_counterexample: None,
            wall_time: Duration::ZERO,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.fail == 0 && self.profile_violations == 0
    }

    pub fn check(&self, name: &str) -> Tally {
        self.checks.get(name).copied().unwrap_or_default()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One human-readable summary line.
    pub fn summary(&self) -> String {
        format!(
            "{}: {} samples, {} pass, {} fail, {} profiles checked, {} violations",
            self.suite, self.samples, self.pass, self.fail, self.profiles_checked, self.profile_violations
        )
    }
}
