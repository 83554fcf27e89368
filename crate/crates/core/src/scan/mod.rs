//! Range scans: sequential generation, parallel classification, ordered
//! line-delimited reports with checkpoint/resume, and report verification.

mod checkpoint;
mod config;
mod pipeline;
mod record;
mod runner;
mod verify;

pub use checkpoint::{checkpoint_load, checkpoint_save, Checkpoint};
pub use config::{parse_checks, Check, ScanConfig, ScanJob};
pub use record::{
    head_tail, read_report, value_digest, Report, ReportHeader, ReportWriter, ScanRecord,
    HEAD_TAIL_LEN, SCHEMA_VERSION,
};
pub use runner::{run_scan, Hit, ScanSummary};
pub use verify::{verify_report, Mismatch, VerifyOptions, VerifySummary};
