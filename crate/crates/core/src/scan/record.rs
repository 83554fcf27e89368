//! Line-delimited JSON report: one header line, then one record per index.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::{Check, ScanJob};
use crate::classify::PrimalityVerdict;
use crate::error::{Error, Result};
use crate::sequence::{BaseSpec, SequenceKind};

pub const SCHEMA_VERSION: u32 = 1;

/// Characters kept from each end of a term's decimal rendering.
pub const HEAD_TAIL_LEN: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportHeader {
    pub schema_version: u32,
    pub config_hash: String,
    pub job: ScanJob,
}

impl ReportHeader {
    pub fn new(job: &ScanJob) -> Self {
        ReportHeader {
            schema_version: SCHEMA_VERSION,
            config_hash: job.content_hash(),
            job: job.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub schema_version: u32,
    pub kind: SequenceKind,
    pub base: BaseSpec,
    pub index: u64,
    pub digits: u64,
    pub value_digest: String,
    pub value_head: String,
    pub value_tail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full_value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime_status: Option<PrimalityVerdict>,
    /// Decimal string; `k` can be thousands of digits long.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triangular_k: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<BTreeMap<Check, f64>>,
}

impl ScanRecord {
    pub fn is_prime_hit(&self) -> bool {
        self.prime_status
            .as_ref()
            .is_some_and(|v| v.status.is_hit())
    }

    pub fn is_triangular_hit(&self) -> bool {
        self.triangular_k.is_some()
    }

    pub fn is_hit(&self) -> bool {
        self.is_prime_hit() || self.is_triangular_hit()
    }
}

pub fn value_digest(decimal: &str) -> String {
    hex::encode(Sha256::digest(decimal.as_bytes()))
}

pub fn head_tail(decimal: &str) -> (String, String) {
    // Decimal strings are ASCII, so byte slicing is safe.
    let n = decimal.len().min(HEAD_TAIL_LEN);
    (
        decimal[..n].to_string(),
        decimal[decimal.len() - n..].to_string(),
    )
}

pub struct ReportWriter {
    path: PathBuf,
    out: BufWriter<File>,
}

impl ReportWriter {
    /// Truncates `path` and writes the header line.
    pub fn create(path: &Path, header: &ReportHeader) -> Result<Self> {
        let file = File::create(path)
            .map_err(|e| Error::io(format!("creating report {}", path.display()), e))?;
        let mut writer = ReportWriter {
            path: path.to_path_buf(),
            out: BufWriter::new(file),
        };
        writer.write_line(header)?;
        Ok(writer)
    }

    /// Reopens an existing report for appending.
    pub fn append(path: &Path) -> Result<Self> {
        let file = File::options()
            .append(true)
            .open(path)
            .map_err(|e| Error::io(format!("opening report {}", path.display()), e))?;
        Ok(ReportWriter {
            path: path.to_path_buf(),
            out: BufWriter::new(file),
        })
    }

    pub fn write_record(&mut self, record: &ScanRecord) -> Result<()> {
        self.write_line(record)
    }

    fn write_line<T: Serialize>(&mut self, item: &T) -> Result<()> {
        serde_json::to_writer(&mut self.out, item).map_err(|e| {
            Error::io(
                format!("writing report {}", self.path.display()),
                std::io::Error::other(e),
            )
        })?;
        self.out
            .write_all(b"\n")
            .map_err(|e| Error::io(format!("writing report {}", self.path.display()), e))
    }

    /// Flushes buffered lines and syncs them to disk.
    pub fn sync(&mut self) -> Result<()> {
        let context = || format!("syncing report {}", self.path.display());
        self.out.flush().map_err(|e| Error::io(context(), e))?;
        self.out
            .get_ref()
            .sync_data()
            .map_err(|e| Error::io(context(), e))
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub header: ReportHeader,
    pub records: Vec<ScanRecord>,
}

fn report_error(path: &Path, line: usize, detail: impl Into<String>) -> Error {
    Error::Report {
        path: path.to_path_buf(),
        line,
        detail: detail.into(),
    }
}

/// Reads and parses a whole report. Errors carry the 1-based line number.
pub fn read_report(path: &Path) -> Result<Report> {
    let (header, records, _) = read_report_with_offsets(path, usize::MAX)?;
    Ok(Report {
        header,
        records: records.into_iter().map(|(r, _)| r).collect(),
    })
}

/// Header, records with the byte offset just past each, and the offset just
/// past the header.
pub(crate) type OffsetReport = (ReportHeader, Vec<(ScanRecord, u64)>, u64);

/// Like [`read_report`], also returning the byte offset just past each
/// record line and just past the header. Stops after `max_records` records
/// without looking at the rest of the file.
pub(crate) fn read_report_with_offsets(path: &Path, max_records: usize) -> Result<OffsetReport> {
    let file =
        File::open(path).map_err(|e| Error::io(format!("opening report {}", path.display()), e))?;
    let mut reader = BufReader::new(file);
    let mut line = String::new();
    let mut offset = 0u64;
    let mut line_no = 0usize;
    let mut header: Option<(ReportHeader, u64)> = None;
    let mut records = Vec::new();
    while records.len() < max_records {
        line.clear();
        let read = reader
            .read_line(&mut line)
            .map_err(|e| Error::io(format!("reading report {}", path.display()), e))?;
        if read == 0 {
            break;
        }
        line_no += 1;
        offset += read as u64;
        if !line.ends_with('\n') {
            return Err(report_error(path, line_no, "truncated line"));
        }
        let text = line.trim_end();
        match &header {
            None => {
                let parsed: ReportHeader = serde_json::from_str(text)
                    .map_err(|e| report_error(path, line_no, format!("bad header: {e}")))?;
                if parsed.schema_version != SCHEMA_VERSION {
                    return Err(report_error(
                        path,
                        line_no,
                        format!("unsupported schema_version {}", parsed.schema_version),
                    ));
                }
                header = Some((parsed, offset));
            }
            Some(_) => {
                let record: ScanRecord = serde_json::from_str(text)
                    .map_err(|e| report_error(path, line_no, format!("bad record: {e}")))?;
                if record.schema_version != SCHEMA_VERSION {
                    return Err(report_error(
                        path,
                        line_no,
                        format!("unsupported schema_version {}", record.schema_version),
                    ));
                }
                records.push((record, offset));
            }
        }
    }
    let (header, header_end) = header.ok_or_else(|| report_error(path, 1, "empty report"))?;
    Ok((header, records, header_end))
}
