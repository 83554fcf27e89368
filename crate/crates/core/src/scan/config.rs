use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classify::PrimalityPolicy;
use crate::error::{Error, Result};
use crate::sequence::{BaseSpec, SequenceKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Prime,
    Triangular,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Prime => "prime",
            Check::Triangular => "triangular",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "prime" => Ok(Check::Prime),
            "triangular" => Ok(Check::Triangular),
            other => Err(Error::Parse {
                what: "check",
                detail: format!("unknown check {other:?} (expected prime or triangular)"),
            }),
        }
    }
}

/// Parses a comma-separated check list such as `prime,triangular`.
pub fn parse_checks(list: &str) -> Result<BTreeSet<Check>> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect()
}

/// Everything that determines the content of a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanJob {
    pub kind: SequenceKind,
    pub base: BaseSpec,
    pub from_index: u64,
    pub to_index: u64,
    pub checks: BTreeSet<Check>,
    pub policy: PrimalityPolicy,
    pub store_full_values: bool,
    pub record_timings: bool,
}

impl ScanJob {
    /// Lowercase hex SHA-256 of the job's canonical JSON encoding.
    pub fn content_hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("job serializes");
        hex::encode(Sha256::digest(canonical))
    }

    pub fn validate(&self) -> Result<()> {
        if self.from_index < 1 {
            return Err(Error::invalid("from index must be >= 1"));
        }
        if self.from_index > self.to_index {
            return Err(Error::invalid(format!(
                "from index {} exceeds to index {}",
                self.from_index, self.to_index
            )));
        }
        if self.checks.is_empty() {
            return Err(Error::invalid("at least one check is required"));
        }
        self.policy.validate()
    }
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub job: ScanJob,
    pub workers: usize,
    pub queue_depth: usize,
    pub output_path: PathBuf,
    pub checkpoint_path: Option<PathBuf>,
}

impl ScanConfig {
    /// Checkpoints are written after every completed block of this many indices.
    pub const CHECKPOINT_BLOCK: u64 = 10;

    pub fn new(
        kind: SequenceKind,
        base: BaseSpec,
        from_index: u64,
        to_index: u64,
        checks: impl IntoIterator<Item = Check>,
        output_path: impl Into<PathBuf>,
    ) -> Self {
        let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
        ScanConfig {
            job: ScanJob {
                kind,
                base,
                from_index,
                to_index,
                checks: checks.into_iter().collect(),
                policy: PrimalityPolicy::default(),
                store_full_values: false,
                record_timings: false,
            },
            workers,
            queue_depth: 2 * workers,
            output_path: output_path.into(),
            checkpoint_path: None,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self.queue_depth = 2 * workers.max(1);
        self
    }

    pub fn with_checkpoint(mut self, path: impl Into<PathBuf>) -> Self {
        self.checkpoint_path = Some(path.into());
        self
    }

    pub fn with_policy(mut self, policy: PrimalityPolicy) -> Self {
        self.job.policy = policy;
        self
    }

    pub fn with_full_values(mut self, store: bool) -> Self {
        self.job.store_full_values = store;
        self
    }

    /// Builds a config from flat `key = value` lines, using the same keys as
    /// the command-line flags (`kind`, `base`, `from`, `to`, `check`,
    /// `workers`, `seed`, `mr_rounds`, `trial_bound`, `full_values`,
    /// `timings`, `out`, `checkpoint`). Blank lines and `#` comments are
    /// skipped; `kind`, `base`, `from`, `to` and `out` are required.
    pub fn from_key_values(text: &str) -> Result<Self> {
        let mut fields = std::collections::BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                what: "scan config",
                detail: format!("line {}: expected key=value", n + 1),
            })?;
            fields.insert(key.trim().replace('-', "_"), value.trim().to_string());
        }
        let mut take = |key: &str| fields.remove(key);
        let parse_err = |key: &str, value: &str| Error::Parse {
            what: "scan config",
            detail: format!("bad value {value:?} for {key}"),
        };
        let required = |key: &str, value: Option<String>| {
            value.ok_or_else(|| Error::Parse {
                what: "scan config",
                detail: format!("missing {key}"),
            })
        };
        fn number<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value.parse().map_err(|_| Error::Parse {
                what: "scan config",
                detail: format!("bad value {value:?} for {key}"),
            })
        }
        let flag = |key: &str, value: Option<String>| match value.as_deref() {
            None | Some("false" | "0" | "no") => Ok(false),
            Some("true" | "1" | "yes") => Ok(true),
            Some(other) => Err(parse_err(key, other)),
        };

        let kind: SequenceKind = required("kind", take("kind"))?.parse()?;
        let base: BaseSpec = required("base", take("base"))?.parse()?;
        let from = number("from", &required("from", take("from"))?)?;
        let to = number("to", &required("to", take("to"))?)?;
        let out = required("out", take("out"))?;
        let checks = match take("check") {
            Some(list) => parse_checks(&list)?,
            None => [Check::Prime].into(),
        };
        let mut config = ScanConfig::new(kind, base, from, to, checks, out);
        if let Some(w) = take("workers") {
            config = config.with_workers(number("workers", &w)?);
        }
        if let Some(v) = take("seed") {
            config.job.policy.seed = number("seed", &v)?;
        }
        if let Some(v) = take("mr_rounds") {
            config.job.policy.extra_mr_rounds = number("mr_rounds", &v)?;
        }
        if let Some(v) = take("trial_bound") {
            config.job.policy.trial_division_bound = number("trial_bound", &v)?;
        }
        config.job.store_full_values = flag("full_values", take("full_values"))?;
        config.job.record_timings = flag("timings", take("timings"))?;
        if let Some(path) = take("checkpoint") {
            config.checkpoint_path = Some(path.into());
        }
        if let Some(key) = fields.keys().next() {
            return Err(Error::Parse {
                what: "scan config",
                detail: format!("unknown key {key:?}"),
            });
        }
        config.validate()?;
        Ok(config)
    }

    pub fn config_hash(&self) -> String {
        self.job.content_hash()
    }

    pub fn validate(&self) -> Result<()> {
        self.job.validate()?;
        if self.workers == 0 {
            return Err(Error::invalid("workers must be >= 1"));
        }
        if self.queue_depth == 0 {
            return Err(Error::invalid("queue depth must be >= 1"));
        }
        Ok(())
    }
}
