use std::path::Path;

use super::config::Check;
use super::pipeline::ordered_map;
use super::record::{head_tail, read_report, value_digest, ScanRecord};
use crate::classify::{is_probable_prime, is_triangular, PrimalityPolicy};
use crate::error::Result;
use crate::sequence::{digits_at, Generator, Term};

/// Mixed into the report's seed when no verification seed is given.
const RESEED: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Seed for the re-run primality rounds; defaults to a value derived
    /// from, but different from, the report's seed.
    pub seed: Option<u64>,
    pub workers: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: None,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    /// Record index; 0 for problems with the header.
    pub index: u64,
    pub field: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct VerifySummary {
    pub records: u64,
    pub mismatches: Vec<Mismatch>,
    pub prime_hits: Vec<u64>,
    pub triangular_hits: Vec<u64>,
}

impl VerifySummary {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn offending_indices(&self) -> Vec<u64> {
        let mut indices: Vec<u64> = self.mismatches.iter().map(|m| m.index).collect();
        indices.dedup();
        indices
    }
}

/// Re-derives every record of a report from scratch and lists disagreements.
///
/// `prime` and `probable_prime` count as agreeing; only a flip to or from
/// `composite` is a mismatch.
pub fn verify_report(path: &Path, options: &VerifyOptions) -> Result<VerifySummary> {
    let report = read_report(path)?;
    let job = &report.header.job;
    let mut summary = VerifySummary {
        records: report.records.len() as u64,
        ..Default::default()
    };
    let mut flag = |index, field, detail: String| {
        summary.mismatches.push(Mismatch {
            index,
            field,
            detail,
        })
    };

    let recomputed = job.content_hash();
    if recomputed != report.header.config_hash {
        flag(
            0,
            "config_hash",
            format!(
                "header says {}, job hashes to {recomputed}",
                report.header.config_hash
            ),
        );
    }

    // Structural checks; records that cannot be regenerated in order are
    // reported here and skipped below.
    let mut expected = job.from_index;
    let mut ordered = Vec::with_capacity(report.records.len());
    for record in report.records {
        if record.kind != job.kind || record.base != job.base {
            flag(
                record.index,
                "kind",
                format!("record is {}/{}", record.kind, record.base),
            );
            continue;
        }
        if record.index < expected || record.index > job.to_index {
            flag(
                record.index,
                "index",
                format!("unexpected index (next expected {expected})"),
            );
            continue;
        }
        for missing in expected..record.index {
            flag(missing, "index", "record missing".into());
        }
        expected = record.index + 1;
        ordered.push(record);
    }
    if expected <= job.to_index {
        let detail = if expected == job.to_index {
            "record missing".to_string()
        } else {
            format!("records {expected}..={} missing", job.to_index)
        };
        flag(expected, "index", detail);
    }

    let policy = PrimalityPolicy {
        seed: options.seed.unwrap_or(job.policy.seed ^ RESEED),
        ..job.policy.clone()
    };
    let mut generator = Generator::new(job.kind, job.base);
    let pairs = ordered.into_iter().map(move |record| {
        generator.skip_to(record.index);
        let term = generator.advance();
        (record, term)
    });
    let checks = &job.checks;
    let mut found = Vec::new();
    ordered_map(
        pairs,
        options.workers,
        2 * options.workers.max(1),
        |(record, term)| check_record(&record, &term, checks, &policy),
        |(record_hits, problems)| {
            found.push(record_hits);
            summary.mismatches.extend(problems);
            Ok::<_, std::convert::Infallible>(())
        },
    )
    .unwrap_or_else(|never| match never {});

    for (index, prime, triangular) in found {
        if prime {
            summary.prime_hits.push(index);
        }
        if triangular {
            summary.triangular_hits.push(index);
        }
    }
    summary.mismatches.sort_by_key(|m| m.index);
    Ok(summary)
}

type RecordCheck = ((u64, bool, bool), Vec<Mismatch>);

fn check_record(
    record: &ScanRecord,
    term: &Term,
    checks: &std::collections::BTreeSet<Check>,
    policy: &PrimalityPolicy,
) -> RecordCheck {
    let index = record.index;
    let mut problems = Vec::new();
    let mut flag = |field, detail: String| {
        problems.push(Mismatch {
            index,
            field,
            detail,
        })
    };

    match digits_at(record.kind, record.base, index) {
        Ok(d) if d == record.digits => {}
        Ok(d) => flag(
            "digits",
            format!("recorded {}, expected {d}", record.digits),
        ),
        Err(e) => flag("digits", e.to_string()),
    }

    let decimal = term.value.to_decimal();
    let digest = value_digest(&decimal);
    if digest != record.value_digest {
        flag(
            "value_digest",
            format!("regenerated term hashes to {digest}"),
        );
    }
    let (head, tail) = head_tail(&decimal);
    if head != record.value_head || tail != record.value_tail {
        flag(
            "value_head",
            "head/tail differ from regenerated term".into(),
        );
    }
    if let Some(full) = &record.full_value {
        let stored = value_digest(full);
        if stored != record.value_digest {
            flag(
                "value_digest",
                format!("stored full_value hashes to {stored}"),
            );
        }
    }

    let mut prime_hit = false;
    if checks.contains(&Check::Prime) {
        let fresh = is_probable_prime(&term.value, policy);
        prime_hit = fresh.status.is_hit();
        match &record.prime_status {
            None => flag("prime_status", "missing".into()),
            Some(stored) if stored.status.is_hit() != prime_hit => flag(
                "prime_status",
                format!("recorded {}, re-run says {}", stored.status, fresh.status),
            ),
            Some(_) => {}
        }
    }

    let mut triangular_hit = false;
    if checks.contains(&Check::Triangular) {
        let fresh = is_triangular(&term.value)
            .expect("sequence terms are >= 1")
            .map(|k| k.to_decimal());
        triangular_hit = fresh.is_some();
        if fresh != record.triangular_k {
            flag(
                "triangular_k",
                format!("recorded {:?}, re-run says {fresh:?}", record.triangular_k),
            );
        }
    }

    ((index, prime_hit, triangular_hit), problems)
}
