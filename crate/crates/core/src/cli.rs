//! Command-line front end. Exit codes: 0 success, 1 runtime or
//! verification failure, 2 usage error.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::classify::PrimalityPolicy;
use crate::error::{Error, Result};
use crate::scan::{
    parse_checks, read_report, run_scan, verify_report, Check, Hit, ScanConfig, ScanSummary,
    VerifyOptions,
};
use crate::sequence::{digits_at, BaseSpec, Generator, SequenceKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Values up to this many digits are printed in full in summaries.
const SHOW_FULL_DIGITS: u64 = 60;

#[derive(Debug, Parser)]
#[command(
    name = "smarandache",
    version,
    about = "Generate Smarandache concatenation sequences and scan them for primes and triangular numbers",
    args_override_self = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the first COUNT terms of a sequence
    Gen(GenArgs),
    /// Print the digit count of one term without building it
    Digits(DigitsArgs),
    /// Classify a range of terms and write a report
    Scan(ScanArgs),
    /// Recompute every record of a report and list disagreements
    Verify(VerifyArgs),
    /// Print the hit tables of a report
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct SequenceArgs {
    /// scs, rss, sms or sss
    #[arg(long, value_parser = parse_kind)]
    kind: SequenceKind,
    /// natural or triangular
    #[arg(long, value_parser = parse_base)]
    base: BaseSpec,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    /// Comma-separated on one line
    Plain,
    /// One term per line
    Lines,
    /// One JSON record per line
    Records,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(flatten)]
    seq: SequenceArgs,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    count: u64,
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
    /// Refuse output projected to exceed this many bytes
    #[arg(long, default_value_t = 64 << 20)]
    max_bytes: u64,
    /// Ignore the output budget
    #[arg(long)]
    force: bool,
    /// Flat key=value file supplying any of these flags
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DigitsArgs {
    #[command(flatten)]
    seq: SequenceArgs,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    index: u64,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[command(flatten)]
    seq: SequenceArgs,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    from: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    to: u64,
    /// Comma-separated: prime, triangular
    #[arg(long, default_value = "prime", value_parser = parse_check_list)]
    check: BTreeSet<Check>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Extra Miller-Rabin rounds above the deterministic range
    #[arg(long, default_value_t = PrimalityPolicy::default().extra_mr_rounds)]
    mr_rounds: u32,
    #[arg(long, default_value_t = PrimalityPolicy::default().trial_division_bound,
          value_parser = clap::value_parser!(u32).range(2..=i64::from(PrimalityPolicy::MAX_TRIAL_DIVISION_BOUND)))]
    trial_bound: u32,
    /// Store every term's full decimal value in the report
    #[arg(long)]
    full_values: bool,
    /// Record per-check timings (reports are then no longer reproducible byte for byte)
    #[arg(long)]
    timings: bool,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    report: PathBuf,
    /// Seed for the re-run primality rounds (default: derived from the report's seed)
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    report: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
}

fn parse_kind(s: &str) -> std::result::Result<SequenceKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_base(s: &str) -> std::result::Result<BaseSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_check_list(s: &str) -> std::result::Result<BTreeSet<Check>, String> {
    let checks = parse_checks(s).map_err(|e| e.to_string())?;
    if checks.is_empty() {
        return Err("at least one check is required".into());
    }
    Ok(checks)
}

/// The last `--config` value after the subcommand, if any.
fn config_flag(args: &[OsString]) -> Option<PathBuf> {
    let mut found = None;
    let mut rest = args.iter().skip(2);
    while let Some(arg) = rest.next() {
        let Some(text) = arg.to_str() else { continue };
        if text == "--" {
            break;
        }
        if text == "--config" {
            found = rest.next().map(PathBuf::from);
        } else if let Some(value) = text.strip_prefix("--config=") {
            found = Some(PathBuf::from(value));
        }
    }
    found
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Runs one invocation against the given output streams and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match config_flag(&args) {
        Some(path) => match merge_config_file(&args, &path) {
            Ok(merged) => merged,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
        },
        None => args,
    };
    let cli = match parse(&args, out, err) {
        Ok(cli) => cli,
        Err(code) => return code,
    };

    let result = match cli.command {
        Command::Gen(a) => cmd_gen(&a, out),
        Command::Digits(a) => cmd_digits(&a, out),
        Command::Scan(a) => cmd_scan(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Report(a) => cmd_report(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

fn parse(
    args: &[OsString],
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::result::Result<Cli, i32> {
    Cli::try_parse_from(args).map_err(|e| {
        if e.use_stderr() {
            let _ = write!(err, "{}", e.render());
            EXIT_USAGE
        } else {
            let _ = write!(out, "{}", e.render());
            EXIT_OK
        }
    })
}

/// Inserts `--key value` pairs from a flat key=value file right after the
/// subcommand, so that flags given on the command line (which come later)
/// take precedence.
fn merge_config_file(args: &[OsString], path: &Path) -> Result<Vec<OsString>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading config {}", path.display()), e))?;
    let subcommand = args
        .get(1)
        .and_then(|s| s.to_str())
        .ok_or_else(|| Error::invalid("missing subcommand"))?;
    let command = Cli::command();
    let sub = command
        .find_subcommand(subcommand)
        .ok_or_else(|| Error::invalid(format!("unknown subcommand {subcommand}")))?;
    let known_here: BTreeSet<String> = sub
        .get_arguments()
        .filter_map(|a| a.get_long().map(str::to_string))
        .collect();
    let known_anywhere: BTreeSet<String> = command
        .get_subcommands()
        .flat_map(|s| s.get_arguments())
        .filter_map(|a| a.get_long().map(str::to_string))
        .collect();
    let switches = ["force", "full-values", "timings"];

    let mut from_file = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            what: "config file",
            detail: format!("{}:{}: expected key=value", path.display(), n + 1),
        })?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        let value = value.trim();
        if key == "config" || !known_anywhere.contains(&key) {
            return Err(Error::Parse {
                what: "config file",
                detail: format!("{}:{}: unknown key {key:?}", path.display(), n + 1),
            });
        }
        if !known_here.contains(&key) {
            continue;
        }
        if switches.contains(&key.as_str()) {
            match value {
                "true" | "1" | "yes" => from_file.push(OsString::from(format!("--{key}"))),
                "false" | "0" | "no" => {}
                other => {
                    return Err(Error::Parse {
                        what: "config file",
                        detail: format!(
                            "{}:{}: {key} expects true or false, got {other:?}",
                            path.display(),
                            n + 1
                        ),
                    })
                }
            }
        } else {
            from_file.push(OsString::from(format!("--{key}")));
            from_file.push(OsString::from(value));
        }
    }

    let mut merged = args[..2].to_vec();
    merged.extend(from_file);
    merged.extend_from_slice(&args[2..]);
    Ok(merged)
}

fn io_err(e: io::Error) -> Error {
    Error::io("writing output", e)
}

#[derive(Serialize)]
struct GenRecord<'a> {
    index: u64,
    digits: u64,
    value: &'a str,
}

fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Result<i32> {
    let (kind, base) = (args.seq.kind, args.seq.base);
    if !args.force {
        let per_term_overhead: u64 = match args.format {
            Format::Plain | Format::Lines => 2,
            Format::Records => 64,
        };
        let mut projected: u64 = 0;
        for index in 1..=args.count {
            projected = projected.saturating_add(digits_at(kind, base, index)? + per_term_overhead);
            if projected > args.max_bytes {
                return Err(Error::invalid(format!(
                    "output for {} terms would exceed the {}-byte budget; pass --force or raise --max-bytes",
                    args.count, args.max_bytes
                )));
            }
        }
    }

    let mut out = BufWriter::new(out);
    for term in Generator::new(kind, base).take(args.count as usize) {
        let value = term.value.to_decimal();
        match args.format {
            Format::Plain => {
                if term.index > 1 {
                    out.write_all(b", ").map_err(io_err)?;
                }
                out.write_all(value.as_bytes()).map_err(io_err)?;
            }
            Format::Lines => writeln!(out, "{value}").map_err(io_err)?,
            Format::Records => {
                let record = GenRecord {
                    index: term.index,
                    digits: term.digits,
                    value: &value,
                };
                serde_json::to_writer(&mut out, &record)
                    .map_err(|e| io_err(io::Error::other(e)))?;
                out.write_all(b"\n").map_err(io_err)?;
            }
        }
    }
    if matches!(args.format, Format::Plain) {
        out.write_all(b"\n").map_err(io_err)?;
    }
    out.flush().map_err(io_err)?;
    Ok(EXIT_OK)
}

fn cmd_digits(args: &DigitsArgs, out: &mut dyn Write) -> Result<i32> {
    let digits = digits_at(args.seq.kind, args.seq.base, args.index)?;
    writeln!(out, "{digits}").map_err(io_err)?;
    Ok(EXIT_OK)
}

fn show_value(value: &str, digits: u64) -> String {
    if digits <= SHOW_FULL_DIGITS || value.len() as u64 <= SHOW_FULL_DIGITS {
        value.to_string()
    } else {
        format!("{}...{}", &value[..20], &value[value.len() - 20..])
    }
}

fn write_hits(
    out: &mut dyn Write,
    title: &str,
    detail_header: &str,
    hits: &[Hit],
) -> io::Result<()> {
    writeln!(out, "{title} hits: {}", hits.len())?;
    if hits.is_empty() {
        return Ok(());
    }
    writeln!(
        out,
        "{:>8}  {:>7}  {:<14}  value",
        "index", "digits", detail_header
    )?;
    for hit in hits {
        writeln!(
            out,
            "{:>8}  {:>7}  {:<14}  {}",
            hit.index,
            hit.digits,
            hit.detail,
            show_value(&hit.value, hit.digits)
        )?;
    }
    Ok(())
}

fn cmd_scan(args: &ScanArgs, out: &mut dyn Write) -> Result<i32> {
    let mut config = ScanConfig::new(
        args.seq.kind,
        args.seq.base,
        args.from,
        args.to,
        args.check.iter().copied(),
        &args.out,
    )
    .with_policy(PrimalityPolicy {
        trial_division_bound: args.trial_bound,
        extra_mr_rounds: args.mr_rounds,
        seed: args.seed,
    })
    .with_full_values(args.full_values);
    config.job.record_timings = args.timings;
    if let Some(workers) = args.workers {
        config = config.with_workers(workers as usize);
    }
    if let Some(path) = &args.checkpoint {
        config = config.with_checkpoint(path);
    }
    let summary = run_scan(&config)?;
    print_scan_summary(out, &config, &summary).map_err(io_err)?;
    Ok(EXIT_OK)
}

fn print_scan_summary(
    out: &mut dyn Write,
    config: &ScanConfig,
    summary: &ScanSummary,
) -> io::Result<()> {
    let job = &config.job;
    writeln!(
        out,
        "{} / {}  indices {}..={}  config {}",
        job.kind, job.base, job.from_index, job.to_index, summary.config_hash
    )?;
    if let Some(at) = summary.resumed_at {
        writeln!(out, "resumed at index {at}")?;
    }
    writeln!(
        out,
        "records: {}  report: {}",
        summary.records,
        summary.report_path.display()
    )?;
    if job.checks.contains(&Check::Prime) {
        write_hits(out, "prime", "status", &summary.prime_hits)?;
    }
    if job.checks.contains(&Check::Triangular) {
        write_hits(out, "triangular", "k", &summary.triangular_hits)?;
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let mut options = VerifyOptions {
        seed: args.seed,
        ..Default::default()
    };
    if let Some(workers) = args.workers {
        options.workers = workers as usize;
    }
    let summary = verify_report(&args.report, &options)?;
    let report = |out: &mut dyn Write| -> io::Result<()> {
        writeln!(out, "records checked: {}", summary.records)?;
        writeln!(out, "prime hits: {:?}", summary.prime_hits)?;
        writeln!(out, "triangular hits: {:?}", summary.triangular_hits)?;
        writeln!(out, "mismatches: {}", summary.mismatches.len())?;
        for m in &summary.mismatches {
            writeln!(out, "  index {}: {}: {}", m.index, m.field, m.detail)?;
        }
        if !summary.is_clean() {
            writeln!(out, "offending indices: {:?}", summary.offending_indices())?;
        }
        Ok(())
    };
    report(out).map_err(io_err)?;
    Ok(if summary.is_clean() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}

fn cmd_report(args: &ReportArgs, out: &mut dyn Write) -> Result<i32> {
    let report = read_report(&args.report)?;
    let job = &report.header.job;
    let mut prime = Vec::new();
    let mut triangular = Vec::new();
    for r in &report.records {
        let value = r
            .full_value
            .clone()
            .unwrap_or_else(|| format!("{}...{}", r.value_head, r.value_tail));
        if let Some(v) = r.prime_status.as_ref().filter(|v| v.status.is_hit()) {
            prime.push(Hit {
                index: r.index,
                digits: r.digits,
                value: value.clone(),
                detail: v.status.to_string(),
            });
        }
        if let Some(k) = &r.triangular_k {
            triangular.push(Hit {
                index: r.index,
                digits: r.digits,
                value,
                detail: k.clone(),
            });
        }
    }
    let print = |out: &mut dyn Write| -> io::Result<()> {
        writeln!(
            out,
            "{} / {}  indices {}..={}  records {}  config {}",
            job.kind,
            job.base,
            job.from_index,
            job.to_index,
            report.records.len(),
            report.header.config_hash
        )?;
        if job.checks.contains(&Check::Prime) {
            write_hits(out, "prime", "status", &prime)?;
        }
        if job.checks.contains(&Check::Triangular) {
            write_hits(out, "triangular", "k", &triangular)?;
        }
        Ok(())
    };
    print(out).map_err(io_err)?;
    Ok(EXIT_OK)
}
