use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::path::{Path, PathBuf};
use std::time::Instant;

use super::checkpoint::{checkpoint_load, checkpoint_save, Checkpoint};
use super::config::{Check, ScanConfig, ScanJob};
use super::pipeline::ordered_map;
use super::record::{
    head_tail, read_report_with_offsets, value_digest, ReportHeader, ReportWriter, ScanRecord,
    SCHEMA_VERSION,
};
use crate::classify::{is_probable_prime, is_triangular};
use crate::error::{Error, Result};
use crate::sequence::{Generator, Term};

/// A term that passed a check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hit {
    pub index: u64,
    pub digits: u64,
    pub value: String,
    /// Verdict status for prime hits, `k` for triangular hits.
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct ScanSummary {
    pub config_hash: String,
    pub records: u64,
    /// Index the run resumed at, when a checkpoint was picked up.
    pub resumed_at: Option<u64>,
    pub prime_hits: Vec<Hit>,
    pub triangular_hits: Vec<Hit>,
    pub report_path: PathBuf,
    pub checkpoint_path: Option<PathBuf>,
}

impl ScanSummary {
    pub fn prime_values(&self) -> Vec<&str> {
        self.prime_hits.iter().map(|h| h.value.as_str()).collect()
    }

    pub fn triangular_values(&self) -> Vec<&str> {
        self.triangular_hits
            .iter()
            .map(|h| h.value.as_str())
            .collect()
    }
}

/// Classifies one term according to `job`.
pub(crate) fn classify_term(term: &Term, job: &ScanJob) -> ScanRecord {
    let decimal = term.value.to_decimal();
    let (value_head, value_tail) = head_tail(&decimal);
    let mut elapsed = BTreeMap::new();

    let prime_status = job.checks.contains(&Check::Prime).then(|| {
        let start = Instant::now();
        let verdict = is_probable_prime(&term.value, &job.policy);
        elapsed.insert(Check::Prime, millis(start));
        verdict
    });
    let triangular_k = if job.checks.contains(&Check::Triangular) {
        let start = Instant::now();
        let k = is_triangular(&term.value)
            .expect("sequence terms are >= 1")
            .map(|k| k.to_decimal());
        elapsed.insert(Check::Triangular, millis(start));
        k
    } else {
        None
    };

    let mut record = ScanRecord {
        schema_version: SCHEMA_VERSION,
        kind: job.kind,
        base: job.base,
        index: term.index,
        digits: term.digits,
        value_digest: value_digest(&decimal),
        value_head,
        value_tail,
        full_value: None,
        prime_status,
        triangular_k,
        elapsed_ms: job.record_timings.then_some(elapsed),
    };
    if job.store_full_values || record.is_hit() {
        record.full_value = Some(decimal);
    }
    record
}

fn millis(start: Instant) -> f64 {
    (start.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

#[derive(Default)]
struct HitCollector {
    prime: Vec<Hit>,
    triangular: Vec<Hit>,
}

impl HitCollector {
    fn observe(&mut self, record: &ScanRecord) {
        let value = || record.full_value.clone().unwrap_or_default();
        if let Some(verdict) = record.prime_status.as_ref().filter(|v| v.status.is_hit()) {
            self.prime.push(Hit {
                index: record.index,
                digits: record.digits,
                value: value(),
                detail: verdict.status.to_string(),
            });
        }
        if let Some(k) = &record.triangular_k {
            self.triangular.push(Hit {
                index: record.index,
                digits: record.digits,
                value: value(),
                detail: k.clone(),
            });
        }
    }
}

/// Scans `from_index..=to_index`, writing one record per index in order.
///
/// With a checkpoint path, an existing checkpoint for the same job resumes
/// the run after its last completed index; records past that index are
/// dropped from the report and recomputed.
pub fn run_scan(config: &ScanConfig) -> Result<ScanSummary> {
    config.validate()?;
    let job = &config.job;
    let hash = job.content_hash();
    let mut hits = HitCollector::default();

    let checkpoint = match &config.checkpoint_path {
        Some(path) => checkpoint_load(path, &hash)?,
        None => None,
    };
    let (mut writer, start) = match &checkpoint {
        Some(ck) => {
            let kept = reopen_report(&config.output_path, job, &hash, ck)?;
            kept.iter().for_each(|r| hits.observe(r));
            (
                ReportWriter::append(&config.output_path)?,
                ck.resume_index(),
            )
        }
        None => (
            ReportWriter::create(&config.output_path, &ReportHeader::new(job))?,
            job.from_index,
        ),
    };

    if start <= job.to_index {
        let mut generator = Generator::new(job.kind, job.base);
        generator.skip_to(start);
        let terms = generator.take((job.to_index - start + 1) as usize);
        ordered_map(
            terms,
            config.workers,
            config.queue_depth,
            |term| classify_term(&term, job),
            |record| {
                writer.write_record(&record)?;
                hits.observe(&record);
                let done = record.index - job.from_index + 1;
                if done % ScanConfig::CHECKPOINT_BLOCK == 0 || record.index == job.to_index {
                    writer.sync()?;
                    if let Some(path) = &config.checkpoint_path {
                        checkpoint_save(path, &Checkpoint::new(hash.clone(), record.index))?;
                    }
                }
                Ok::<_, Error>(())
            },
        )?;
    }
    writer.sync()?;

    Ok(ScanSummary {
        config_hash: hash,
        records: job.to_index - job.from_index + 1,
        resumed_at: checkpoint.map(|ck| ck.resume_index()),
        prime_hits: hits.prime,
        triangular_hits: hits.triangular,
        report_path: config.output_path.clone(),
        checkpoint_path: config.checkpoint_path.clone(),
    })
}

/// Validates the report behind a checkpoint and truncates it just past the
/// checkpointed index. Returns the kept records.
fn reopen_report(
    path: &Path,
    job: &ScanJob,
    hash: &str,
    checkpoint: &Checkpoint,
) -> Result<Vec<ScanRecord>> {
    let corrupt = |detail: String| Error::Report {
        path: path.to_path_buf(),
        line: 0,
        detail,
    };
    let last = checkpoint.last_completed_index;
    let wanted = last.saturating_sub(job.from_index).saturating_add(1);
    let (header, records, header_end) =
        read_report_with_offsets(path, usize::try_from(wanted).unwrap_or(usize::MAX))?;
    if header.config_hash != hash {
        return Err(Error::CheckpointMismatch {
            path: path.to_path_buf(),
            expected: hash.to_string(),
            found: header.config_hash,
        });
    }
    if last < job.from_index || last > job.to_index {
        return Err(corrupt(format!(
            "checkpoint index {last} outside {}..={}",
            job.from_index, job.to_index
        )));
    }

    let mut kept = Vec::new();
    let mut cut = header_end;
    for (expected, (record, end)) in (job.from_index..=last).zip(records) {
        if record.index != expected {
            return Err(corrupt(format!(
                "expected record {expected}, found {}",
                record.index
            )));
        }
        cut = end;
        kept.push(record);
    }
    if kept.len() as u64 != last - job.from_index + 1 {
        return Err(corrupt(format!(
            "report holds {} records but checkpoint claims {last}",
            kept.len()
        )));
    }
    OpenOptions::new()
        .write(true)
        .open(path)
        .and_then(|f| f.set_len(cut))
        .map_err(|e| Error::io(format!("truncating report {}", path.display()), e))?;
    Ok(kept)
}
