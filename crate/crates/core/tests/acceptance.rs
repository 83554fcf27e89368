//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line
//! (written past the test harness's capture so it shows in plain
//! `cargo test` output); the test fails if any criterion fails.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smarandache::classify::{is_probable_prime, is_triangular, primes_up_to, PrimalityPolicy};
use smarandache::scan::{run_scan, verify_report, Check, ScanConfig, VerifyOptions};
use smarandache::{
    bld, conc, digit_length, digits_at, term_at, BaseSpec, Generator, Nat, SequenceKind,
};

use BaseSpec::{Natural, Triangular};
use SequenceKind::{Consecutive, Mirror, Reversed, Symmetric};

const SSS_58: &str = "1361015212836455566789110512012010591786655453628211510631";
const SSS_336: &str = concat!(
    "1361015212836455566789110512013615317119021023125327630032535137840643546549652856159",
    "5630666703741780820861903946990103510811128117612251275132613781431148515401596165316",
    "5315961540148514311378132612751225117611281081103599094690386182078074170366663059556",
    "152849646543540637835132530027625323121019017115313612010591786655453628211510631",
);

fn report_line(line: &str) {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let _ = writeln!(lock, "{line}");
    let _ = lock.flush();
}

fn first_ten(kind: SequenceKind, base: BaseSpec) -> String {
    Generator::new(kind, base)
        .take(10)
        .map(|t| t.value.to_decimal())
        .collect::<Vec<_>>()
        .join(", ")
}

fn criterion_1() {
    let golden: [(SequenceKind, BaseSpec, &str); 8] = [
        (Consecutive, Natural, "1, 12, 123, 1234, 12345, 123456, 1234567, 12345678, 123456789, 12345678910"),
        (Consecutive, Triangular, "1, 13, 136, 13610, 1361015, 136101521, 13610152128, 1361015212836, 136101521283645, 13610152128364555"),
        (Reversed, Natural, "1, 21, 321, 4321, 54321, 654321, 7654321, 87654321, 987654321, 10987654321"),
        (Reversed, Triangular, "1, 31, 631, 10631, 1510631, 211510631, 28211510631, 3628211510631, 453628211510631, 55453628211510631"),
        (Mirror, Natural, "1, 212, 32123, 4321234, 543212345, 65432123456, 7654321234567, 876543212345678, 98765432123456789, 109876543212345678910"),
        (Mirror, Triangular, "1, 313, 63136, 106313610, 1510631361015, 21151063136101521, 282115106313610152128, 3628211510631361015212836, 45362821151063136101521283645, 554536282115106313610152128364555"),
        (Symmetric, Natural, "1, 11, 121, 1221, 12321, 123321, 1234321, 12344321, 123454321, 1234554321"),
        (Symmetric, Triangular, "1, 11, 131, 1331, 13631, 136631, 136110631, 1361010631, 1361011510631, 13610151510631"),
    ];
    for (kind, base, expected) in golden {
        assert_eq!(first_ten(kind, base), expected, "{kind}/{base}");
    }
}

fn criterion_2() {
    let cases = [
        (Consecutive, 1000, 5354),
        (Reversed, 1000, 5354),
        (Mirror, 1000, 10707),
        (Symmetric, 1000, 4708),
        (Mirror, 600, 5907),
    ];
    for (kind, index, expected) in cases {
        let closed = digits_at(kind, Triangular, index).unwrap();
        assert_eq!(closed, expected, "{kind} at {index}");
        let term = term_at(kind, Triangular, index).unwrap();
        assert_eq!(
            digit_length(&term.value),
            expected,
            "{kind} at {index} materialized"
        );
        assert_eq!(term.value.to_decimal().len() as u64, expected);
    }
}

fn scan(
    dir: &Path,
    kind: SequenceKind,
    to: u64,
    checks: &[Check],
) -> smarandache::scan::ScanSummary {
    let cfg = ScanConfig::new(
        kind,
        Triangular,
        1,
        to,
        checks.iter().copied(),
        dir.join(format!("{}-{to}.jsonl", kind.short_name())),
    );
    run_scan(&cfg).unwrap()
}

fn set(values: &[&str]) -> BTreeSet<String> {
    values.iter().map(|s| s.to_string()).collect()
}

fn criterion_3() {
    let dir = tempfile::tempdir().unwrap();
    let expected: [(SequenceKind, u64, BTreeSet<String>); 4] = [
        (Consecutive, 1000, set(&["13", "136101521"])),
        (
            Reversed,
            1000,
            set(&[
                "31",
                "631",
                "10631",
                "55453628211510631",
                "786655453628211510631",
                "10591786655453628211510631",
            ]),
        ),
        (Mirror, 600, set(&["313"])),
        (
            Symmetric,
            1000,
            set(&["11", "131", "136110631", SSS_58, SSS_336]),
        ),
    ];
    assert_eq!(SSS_336.len(), 336);
    for (kind, to, want) in expected {
        let started = Instant::now();
        let summary = scan(dir.path(), kind, to, &[Check::Prime]);
        let got: BTreeSet<String> = summary
            .prime_values()
            .into_iter()
            .map(String::from)
            .collect();
        report_line(&format!(
            "  {kind}/triangular 1..={to}: {} prime hits in {:.1}s",
            got.len(),
            started.elapsed().as_secs_f64()
        ));
        assert_eq!(got, want, "{kind} prime hits");
        for hit in &summary.prime_hits {
            assert_eq!(hit.value.len() as u64, hit.digits);
            assert_eq!(
                term_at(kind, Triangular, hit.index)
                    .unwrap()
                    .value
                    .to_decimal(),
                hit.value
            );
        }
    }
}

fn criterion_4() {
    let dir = tempfile::tempdir().unwrap();
    let expected = [
        (Consecutive, set(&["1", "136"])),
        (Reversed, set(&["1"])),
        (Mirror, set(&["1"])),
        (Symmetric, set(&["1"])),
    ];
    for (kind, want) in expected {
        let summary = scan(dir.path(), kind, 1000, &[Check::Triangular]);
        let got: BTreeSet<String> = summary
            .triangular_values()
            .into_iter()
            .map(String::from)
            .collect();
        assert_eq!(got, want, "{kind} triangular hits");
    }
}

fn nat(x: u64) -> Nat {
    Nat::from(x)
}

fn criterion_5() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..10_000 {
        let mut draw = || {
            let shift = rng.gen_range(0..64);
            rng.gen_range(0..=u64::MAX >> shift)
        };
        let (a, b) = (draw(), draw());
        let (na, nb) = (nat(a), nat(b));
        let c = conc(&na, &nb);
        let joined = if a == 0 {
            b.to_string()
        } else {
            format!("{a}{b}")
        };
        assert_eq!(c.to_decimal(), joined);
        if a > 0 {
            assert_eq!(digit_length(&c), digit_length(&na) + digit_length(&nb));
        }
        assert_eq!(bld(&conc(&na, &nat(b % 10))), na);
        assert_eq!(conc(&bld(&nb), &nat(b % 10)), nb);
    }

    for kind in SequenceKind::ALL {
        for base in BaseSpec::ALL {
            let mut scs = String::new();
            let mut rss = String::new();
            let mut scs_hist = Vec::new();
            let mut rss_hist = Vec::new();
            for n in 1..=200u64 {
                let u = base.term_u128(n).to_string();
                scs.push_str(&u);
                rss.insert_str(0, &u);
                scs_hist.push(scs.clone());
                rss_hist.push(rss.clone());
            }
            let mut generator = Generator::new(kind, base);
            for n in 1..=200u64 {
                let expected = match kind {
                    Consecutive => scs_hist[n as usize - 1].clone(),
                    Reversed => rss_hist[n as usize - 1].clone(),
                    Mirror => {
                        let mut s = String::new();
                        for i in (2..=n).rev() {
                            s.push_str(&base.term_u128(i).to_string());
                        }
                        s.push_str(&scs_hist[n as usize - 1]);
                        s
                    }
                    Symmetric => {
                        let k = n.div_ceil(2) as usize;
                        let left = &scs_hist[k - 1];
                        let left = if n % 2 == 1 {
                            &left[..left.len() - 1]
                        } else {
                            &left[..]
                        };
                        format!("{left}{}", rss_hist[k - 1])
                    }
                };
                assert_eq!(
                    generator.advance().value.to_decimal(),
                    expected,
                    "{kind}/{base} at {n}"
                );
            }
        }
    }

    let triangular: BTreeSet<u64> = (1..=1500u64).map(|k| k * (k + 1) / 2).collect();
    for x in 1..=1_000_000u64 {
        let got = is_triangular(&nat(x)).unwrap();
        assert_eq!(got.is_some(), triangular.contains(&x), "{x}");
        if let Some(k) = got {
            let k = k.to_u64().unwrap();
            assert_eq!(k * (k + 1) / 2, x);
        }
    }

    let primes: BTreeSet<u32> = primes_up_to(1_000_000).into_iter().collect();
    let policy = PrimalityPolicy::default();
    for x in 0..=1_000_000u32 {
        let hit = is_probable_prime(&nat(u64::from(x)), &policy)
            .status
            .is_hit();
        assert_eq!(hit, primes.contains(&x), "{x}");
    }

    let palindrome = |s: &str| s.chars().eq(s.chars().rev());
    for n in 1..=9 {
        let t = term_at(Mirror, Natural, n).unwrap().value.to_decimal();
        assert!(palindrome(&t), "mirror {n}: {t}");
    }
    for n in 1..=18 {
        let t = term_at(Symmetric, Natural, n).unwrap().value.to_decimal();
        assert!(palindrome(&t), "symmetric {n}: {t}");
    }
    let t = term_at(Symmetric, Natural, 19).unwrap().value.to_decimal();
    assert!(!palindrome(&t));
}

fn criterion_6() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for workers in [1, 8] {
        let cfg = ScanConfig::new(
            Symmetric,
            Triangular,
            1,
            150,
            [Check::Prime, Check::Triangular],
            dir.path().join(format!("w{workers}.jsonl")),
        )
        .with_workers(workers);
        run_scan(&cfg).unwrap();
        let summary = verify_report(&cfg.output_path, &VerifyOptions::default()).unwrap();
        assert!(
            summary.is_clean(),
            "workers={workers}: {:?}",
            summary.mismatches
        );
        assert_eq!(summary.prime_hits, [2, 3, 7, 30, 114]);
        reports.push(fs::read(&cfg.output_path).unwrap());
    }
    assert!(
        reports[0] == reports[1],
        "reports differ between worker counts"
    );
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn()); 6] = [
        ("1 first ten terms of all eight sequences", criterion_1),
        ("2 digit counts, closed form and materialized", criterion_2),
        ("3 prime scans over the triangular base", criterion_3),
        ("4 triangular scans over the triangular base", criterion_4),
        ("5 property suites", criterion_5),
        ("6 reports independent of worker count", criterion_6),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let started = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => report_line(&format!("PASS criterion {name} ({secs:.1}s)")),
            Err(cause) => {
                let why = cause
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| cause.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                report_line(&format!("FAIL criterion {name} ({secs:.1}s): {why}"));
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
