//! C ABI for the `smarandache` crate.
//!
//! Every fallible function returns an [`SmdStatus`]; on failure a message
//! is available from [`smd_last_error`] on the same thread. Strings handed
//! out by this library must be released with [`smd_string_free`],
//! generators with [`smd_generator_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use smarandache::classify::{is_probable_prime, is_triangular, PrimalityPolicy, PrimeStatus};
use smarandache::scan::{run_scan, verify_report, ScanConfig, VerifyOptions};
use smarandache::{conc, digits_at, term_at, BaseSpec, Error, Generator, Nat, SequenceKind};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmdStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    Parse = 3,
    Overflow = 4,
    Io = 5,
    Report = 6,
    CheckpointMismatch = 7,
    CorruptCheckpoint = 8,
    VerifyFailed = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmdKind {
    Consecutive = 0,
    Reversed = 1,
    Mirror = 2,
    Symmetric = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmdBase {
    Natural = 0,
    Triangular = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmdPrimeStatus {
    Composite = 0,
    Prime = 1,
    ProbablePrime = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SmdScanResult {
    pub records: u64,
    pub prime_hits: u64,
    pub triangular_hits: u64,
    /// First index processed by this call; 0 when nothing was resumed.
    pub resumed_at: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SmdVerifyResult {
    pub records: u64,
    pub mismatches: u64,
    pub prime_hits: u64,
    pub triangular_hits: u64,
}

/// Iterator over the terms of one sequence.
pub struct SmdGenerator {
    inner: Generator,
}

impl From<SmdKind> for SequenceKind {
    fn from(kind: SmdKind) -> Self {
        match kind {
            SmdKind::Consecutive => SequenceKind::Consecutive,
            SmdKind::Reversed => SequenceKind::Reversed,
            SmdKind::Mirror => SequenceKind::Mirror,
            SmdKind::Symmetric => SequenceKind::Symmetric,
        }
    }
}

impl From<SmdBase> for BaseSpec {
    fn from(base: SmdBase) -> Self {
        match base {
            SmdBase::Natural => BaseSpec::Natural,
            SmdBase::Triangular => BaseSpec::Triangular,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn status_of(error: &Error) -> SmdStatus {
    match error {
        Error::InvalidArgument(_) => SmdStatus::InvalidArgument,
        Error::Parse { .. } => SmdStatus::Parse,
        Error::Report { .. } => SmdStatus::Report,
        Error::CheckpointMismatch { .. } => SmdStatus::CheckpointMismatch,
        Error::CorruptCheckpoint { .. } => SmdStatus::CorruptCheckpoint,
        Error::Overflow(_) => SmdStatus::Overflow,
        Error::Io { .. } => SmdStatus::Io,
    }
}

struct Failure(SmdStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SmdStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SmdStatus {
    match panic::catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SmdStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(cause) => {
            let message = cause
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| cause.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("internal error: {message}"));
            SmdStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Failure(SmdStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn read_nat(ptr: *const c_char, what: &str) -> Result<Nat, Failure> {
    Ok(Nat::parse_decimal(read_str(ptr, what)?)?)
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s)
        .expect("decimal strings have no nul")
        .into_raw()
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn smd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn smd_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn smd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Digit count of term `index` (>= 1), without building the term.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn smd_digits_at(
    kind: SmdKind,
    base: SmdBase,
    index: u64,
    out: *mut u64,
) -> SmdStatus {
    guard(|| {
        let digits = digits_at(kind.into(), base.into(), index)?;
        write(out, digits, "out")
    })
}

/// Decimal value of term `index` (>= 1). Free `*out` with `smd_string_free`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn smd_term_at(
    kind: SmdKind,
    base: SmdBase,
    index: u64,
    out: *mut *mut c_char,
) -> SmdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let term = term_at(kind.into(), base.into(), index)?;
        write(out, into_c_string(term.value.to_decimal()), "out")
    })
}

/// Concatenation of two canonical decimal strings. Free `*out` with
/// `smd_string_free`.
///
/// # Safety
/// `a` and `b` must be NUL-terminated; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn smd_conc(
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut c_char,
) -> SmdStatus {
    guard(|| {
        let (a, b) = (read_nat(a, "a")?, read_nat(b, "b")?);
        if out.is_null() {
            return Err(null("out"));
        }
        write(out, into_c_string(conc(&a, &b).to_decimal()), "out")
    })
}

/// Sets `*is_triangular_out` to 1 when `x = k(k+1)/2` for some `k`, else 0.
/// When `k_out` is not NULL and `x` is triangular, `*k_out` receives `k`
/// (free with `smd_string_free`); otherwise it is set to NULL.
///
/// # Safety
/// `x` must be NUL-terminated; `is_triangular_out` must be valid for a write;
/// `k_out` must be NULL or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn smd_is_triangular(
    x: *const c_char,
    is_triangular_out: *mut i32,
    k_out: *mut *mut c_char,
) -> SmdStatus {
    guard(|| {
        let x = read_nat(x, "x")?;
        if is_triangular_out.is_null() {
            return Err(null("is_triangular_out"));
        }
        let k = is_triangular(&x)?;
        write(
            is_triangular_out,
            i32::from(k.is_some()),
            "is_triangular_out",
        )?;
        if !k_out.is_null() {
            k_out.write(k.map_or(ptr::null_mut(), |k| into_c_string(k.to_decimal())));
        }
        Ok(())
    })
}

/// Classifies `x` with trial division up to `trial_bound` (0 for the
/// default), then the deterministic or BPSW path plus `extra_rounds`
/// seeded Miller-Rabin rounds.
///
/// # Safety
/// `x` must be NUL-terminated; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn smd_is_probable_prime(
    x: *const c_char,
    trial_bound: u32,
    extra_rounds: u32,
    seed: u64,
    out: *mut SmdPrimeStatus,
) -> SmdStatus {
    guard(|| {
        let x = read_nat(x, "x")?;
        let defaults = PrimalityPolicy::default();
        let policy = PrimalityPolicy {
            trial_division_bound: if trial_bound == 0 {
                defaults.trial_division_bound
            } else {
                trial_bound
            },
            extra_mr_rounds: extra_rounds,
            seed,
        };
        policy.validate()?;
        let status = match is_probable_prime(&x, &policy).status {
            PrimeStatus::Composite => SmdPrimeStatus::Composite,
            PrimeStatus::Prime => SmdPrimeStatus::Prime,
            PrimeStatus::ProbablePrime => SmdPrimeStatus::ProbablePrime,
        };
        write(out, status, "out")
    })
}

/// Creates a generator positioned before term 1.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn smd_generator_new(
    kind: SmdKind,
    base: SmdBase,
    out: *mut *mut SmdGenerator,
) -> SmdStatus {
    guard(|| {
        let generator = Box::new(SmdGenerator {
            inner: Generator::new(kind.into(), base.into()),
        });
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(Box::into_raw(generator));
        Ok(())
    })
}

/// Moves the generator so that the next term produced is `index` (>= 1).
/// Moving backwards restarts from term 1.
///
/// # Safety
/// `generator` must come from `smd_generator_new`.
#[no_mangle]
pub unsafe extern "C" fn smd_generator_skip_to(
    generator: *mut SmdGenerator,
    index: u64,
) -> SmdStatus {
    guard(|| {
        let generator = generator.as_mut().ok_or_else(|| null("generator"))?;
        if index == 0 {
            return Err(Failure(
                SmdStatus::InvalidArgument,
                "index must be >= 1".into(),
            ));
        }
        if index < generator.inner.next_index() {
            generator.inner = Generator::new(generator.inner.kind(), generator.inner.base());
        }
        generator.inner.skip_to(index);
        Ok(())
    })
}

/// Produces the next term. `index` may be NULL; `*value` must be freed with
/// `smd_string_free`.
///
/// # Safety
/// `generator` must come from `smd_generator_new`; `value` must be valid
/// for a write; `index` must be NULL or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn smd_generator_next(
    generator: *mut SmdGenerator,
    index: *mut u64,
    value: *mut *mut c_char,
) -> SmdStatus {
    guard(|| {
        let generator = generator.as_mut().ok_or_else(|| null("generator"))?;
        if value.is_null() {
            return Err(null("value"));
        }
        let term = generator.inner.advance();
        if !index.is_null() {
            index.write(term.index);
        }
        value.write(into_c_string(term.value.to_decimal()));
        Ok(())
    })
}

/// Releases a generator. NULL is ignored.
///
/// # Safety
/// `generator` must come from `smd_generator_new` and must not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn smd_generator_free(generator: *mut SmdGenerator) {
    if !generator.is_null() {
        drop(Box::from_raw(generator));
    }
}

/// Runs a scan described by flat `key = value` text (keys as the command
/// line flags: `kind`, `base`, `from`, `to`, `check`, `out`, `checkpoint`,
/// `workers`, `seed`, `mr_rounds`, `trial_bound`, `full_values`, `timings`).
/// `out` may be NULL.
///
/// # Safety
/// `config_text` must be NUL-terminated; `out` must be NULL or valid for a
/// write.
#[no_mangle]
pub unsafe extern "C" fn smd_scan(
    config_text: *const c_char,
    out: *mut SmdScanResult,
) -> SmdStatus {
    guard(|| {
        let config = ScanConfig::from_key_values(read_str(config_text, "config_text")?)?;
        let summary = run_scan(&config)?;
        if !out.is_null() {
            out.write(SmdScanResult {
                records: summary.records,
                prime_hits: summary.prime_hits.len() as u64,
                triangular_hits: summary.triangular_hits.len() as u64,
                resumed_at: summary.resumed_at.unwrap_or(0),
            });
        }
        Ok(())
    })
}

/// Re-derives every record of the report at `path`. Returns
/// `SMD_STATUS_VERIFY_FAILED` when any record disagrees; `out` is filled in
/// either case. With `use_seed` zero the seed is derived from the report.
///
/// # Safety
/// `path` must be NUL-terminated; `out` must be NULL or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn smd_verify_report(
    path: *const c_char,
    use_seed: i32,
    seed: u64,
    workers: u32,
    out: *mut SmdVerifyResult,
) -> SmdStatus {
    guard(|| {
        let path = Path::new(read_str(path, "path")?);
        let mut options = VerifyOptions {
            seed: (use_seed != 0).then_some(seed),
            ..Default::default()
        };
        if workers > 0 {
            options.workers = workers as usize;
        }
        let summary = verify_report(path, &options)?;
        if !out.is_null() {
            out.write(SmdVerifyResult {
                records: summary.records,
                mismatches: summary.mismatches.len() as u64,
                prime_hits: summary.prime_hits.len() as u64,
                triangular_hits: summary.triangular_hits.len() as u64,
            });
        }
        if summary.is_clean() {
            Ok(())
        } else {
            let indices = summary.offending_indices();
            Err(Failure(
                SmdStatus::VerifyFailed,
                format!(
                    "{} mismatches at indices {indices:?}",
                    summary.mismatches.len()
                ),
            ))
        }
    })
}
