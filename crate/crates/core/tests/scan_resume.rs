use std::fs;
use std::path::Path;

use smarandache::scan::{
    checkpoint_load, checkpoint_save, read_report, run_scan, verify_report, Check, Checkpoint,
    ScanConfig, VerifyOptions,
};
use smarandache::{BaseSpec, Error, SequenceKind};

fn config(dir: &Path, to: u64) -> ScanConfig {
    ScanConfig::new(
        SequenceKind::Consecutive,
        BaseSpec::Natural,
        1,
        to,
        [Check::Prime, Check::Triangular],
        dir.join("report.jsonl"),
    )
    .with_checkpoint(dir.join("report.ckpt"))
    .with_workers(2)
}

#[test]
fn resume_after_checkpoint_matches_uninterrupted_run() {
    let fresh_dir = tempfile::tempdir().unwrap();
    let fresh = config(fresh_dir.path(), 600);
    run_scan(&fresh).unwrap();
    let expected = fs::read(&fresh.output_path).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), 600);
    run_scan(&cfg).unwrap();

    // Pretend the run died after index 500 while writing a later record.
    let ckpt = cfg.checkpoint_path.clone().unwrap();
    let hash = cfg.config_hash();
    checkpoint_save(&ckpt, &Checkpoint::new(hash.clone(), 500)).unwrap();
    let text = fs::read_to_string(&cfg.output_path).unwrap();
    let cut = text.find("\"index\":553").unwrap() + 7;
    fs::write(&cfg.output_path, &text[..cut]).unwrap();

    let loaded = checkpoint_load(&ckpt, &hash).unwrap().unwrap();
    assert_eq!(loaded.resume_index(), 501);

    let summary = run_scan(&cfg).unwrap();
    assert_eq!(summary.resumed_at, Some(501));
    assert_eq!(fs::read(&cfg.output_path).unwrap(), expected);
    assert_eq!(summary.triangular_values(), ["1"]);
    let last = checkpoint_load(&ckpt, &hash).unwrap().unwrap();
    assert_eq!(last.last_completed_index, 600);
}

#[test]
fn resume_keeps_hits_from_before_the_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ScanConfig::new(
        SequenceKind::Consecutive,
        BaseSpec::Triangular,
        1,
        40,
        [Check::Prime, Check::Triangular],
        dir.path().join("r.jsonl"),
    )
    .with_checkpoint(dir.path().join("r.ckpt"));
    run_scan(&cfg).unwrap();
    checkpoint_save(
        cfg.checkpoint_path.as_ref().unwrap(),
        &Checkpoint::new(cfg.config_hash(), 20),
    )
    .unwrap();
    let summary = run_scan(&cfg).unwrap();
    assert_eq!(summary.resumed_at, Some(21));
    assert_eq!(summary.prime_values(), ["13", "136101521"]);
    assert_eq!(summary.triangular_values(), ["1", "136"]);
}

#[test]
fn edited_config_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), 50);
    run_scan(&cfg).unwrap();

    let mut edited = config(dir.path(), 50);
    edited.job.policy.seed = 7;
    let err = run_scan(&edited).unwrap_err();
    assert!(matches!(err, Error::CheckpointMismatch { .. }), "{err}");

    let longer = config(dir.path(), 60);
    assert!(matches!(
        run_scan(&longer),
        Err(Error::CheckpointMismatch { .. })
    ));
}

#[test]
fn worker_count_does_not_change_the_config_hash() {
    let dir = tempfile::tempdir().unwrap();
    let a = config(dir.path(), 50).with_workers(1);
    let b = config(dir.path(), 50).with_workers(8);
    assert_eq!(a.config_hash(), b.config_hash());
}

fn full_value_report(dir: &Path) -> ScanConfig {
    let cfg = ScanConfig::new(
        SequenceKind::Reversed,
        BaseSpec::Triangular,
        1,
        60,
        [Check::Prime, Check::Triangular],
        dir.join("full.jsonl"),
    )
    .with_full_values(true)
    .with_workers(3);
    run_scan(&cfg).unwrap();
    cfg
}

#[test]
fn verify_accepts_an_untouched_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = full_value_report(dir.path());
    let summary = verify_report(&cfg.output_path, &VerifyOptions::default()).unwrap();
    assert!(summary.is_clean(), "{:?}", summary.mismatches);
    assert_eq!(summary.records, 60);
    assert_eq!(summary.prime_hits, [2, 3, 4, 10, 12, 14]);
    assert_eq!(summary.triangular_hits, [1]);
}

#[test]
fn flipped_digit_is_reported_at_exactly_that_index() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = full_value_report(dir.path());
    let report = read_report(&cfg.output_path).unwrap();
    let target = &report.records[36];
    assert_eq!(target.index, 37);
    let value = target.full_value.clone().unwrap();
    let mut flipped = value.clone().into_bytes();
    let pos = flipped.len() / 2;
    flipped[pos] = if flipped[pos] == b'9' {
        b'8'
    } else {
        flipped[pos] + 1
    };
    let flipped = String::from_utf8(flipped).unwrap();

    let text = fs::read_to_string(&cfg.output_path).unwrap();
    let needle = format!("\"full_value\":\"{value}\"");
    assert_eq!(text.matches(&needle).count(), 1);
    fs::write(
        &cfg.output_path,
        text.replace(&needle, &format!("\"full_value\":\"{flipped}\"")),
    )
    .unwrap();

    let summary = verify_report(&cfg.output_path, &VerifyOptions::default()).unwrap();
    assert_eq!(summary.mismatches.len(), 1, "{:?}", summary.mismatches);
    assert_eq!(summary.mismatches[0].index, 37);
    assert_eq!(summary.mismatches[0].field, "value_digest");
    assert_eq!(summary.offending_indices(), [37]);
}

#[test]
fn truncated_report_fails_with_a_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = full_value_report(dir.path());
    let text = fs::read_to_string(&cfg.output_path).unwrap();
    let cut = text.find("\"index\":30,").unwrap();
    fs::write(&cfg.output_path, &text[..cut]).unwrap();
    match verify_report(&cfg.output_path, &VerifyOptions::default()) {
        Err(Error::Report { line, .. }) => assert_eq!(line, 31),
        other => panic!("expected a report error, got {other:?}"),
    }
}

#[test]
fn dropped_record_is_flagged_as_missing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = full_value_report(dir.path());
    let text = fs::read_to_string(&cfg.output_path).unwrap();
    let kept: Vec<&str> = text
        .lines()
        .filter(|l| !l.contains("\"index\":12,"))
        .collect();
    fs::write(&cfg.output_path, kept.join("\n") + "\n").unwrap();
    let summary = verify_report(&cfg.output_path, &VerifyOptions::default()).unwrap();
    assert_eq!(summary.offending_indices(), [12]);
}

#[test]
fn verify_with_another_seed_finds_the_same_hits() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = full_value_report(dir.path());
    let a = verify_report(
        &cfg.output_path,
        &VerifyOptions {
            seed: Some(1),
            workers: 1,
        },
    )
    .unwrap();
    let b = verify_report(
        &cfg.output_path,
        &VerifyOptions {
            seed: Some(99),
            workers: 4,
        },
    )
    .unwrap();
    assert!(a.is_clean() && b.is_clean());
    assert_eq!(a.prime_hits, b.prime_hits);
    assert_eq!(a.triangular_hits, b.triangular_hits);
}
