//! Decimal concatenation on arbitrary-precision naturals.
//!
//! Everything here is base 10. `conc(n, m) = n * 10^len(m) + m` and
//! `bld(n) = n / 10` (floor); with `len(0) = 1` the pair satisfies
//! `conc(0, m) = m` and `conc(bld(n), n % 10) = n` for `n >= 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use rug::Integer;

use crate::error::{Error, Result};

/// A non-negative integer of unbounded size.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Nat(Integer);

impl Nat {
    pub fn zero() -> Self {
        Nat(Integer::new())
    }

    pub fn one() -> Self {
        Nat(Integer::from(1))
    }

    /// Wraps an integer, rejecting negative values.
    pub fn from_integer(value: Integer) -> Result<Self> {
        if value < 0 {
            return Err(Error::invalid(format!("negative value {value}")));
        }
        Ok(Nat(value))
    }

    /// Callers guarantee `value >= 0`.
    pub(crate) fn from_integer_unchecked(value: Integer) -> Self {
        debug_assert!(value >= 0);
        Nat(value)
    }

    /// Parses a canonical decimal string: ASCII digits only, no sign, no
    /// leading zeros except for `"0"` itself.
    pub fn parse_decimal(text: &str) -> Result<Self> {
        let bytes = text.as_bytes();
        if bytes.is_empty() {
            return Err(Error::Parse {
                what: "natural number",
                detail: "empty string".into(),
            });
        }
        if let Some(pos) = bytes.iter().position(|b| !b.is_ascii_digit()) {
            return Err(Error::Parse {
                what: "natural number",
                detail: format!("non-digit at offset {pos}"),
            });
        }
        if bytes.len() > 1 && bytes[0] == b'0' {
            return Err(Error::Parse {
                what: "natural number",
                detail: "leading zero".into(),
            });
        }
        let value = Integer::from_str_radix(text, 10).map_err(|e| Error::Parse {
            what: "natural number",
            detail: e.to_string(),
        })?;
        Ok(Nat(value))
    }

    pub fn to_decimal(&self) -> String {
        self.0.to_string_radix(10)
    }

    pub fn as_integer(&self) -> &Integer {
        &self.0
    }

    pub fn into_integer(self) -> Integer {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0 == 0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn to_u128(&self) -> Option<u128> {
        self.0.to_u128()
    }

    pub fn significant_bits(&self) -> u64 {
        u64::from(self.0.significant_bits())
    }
}

impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Nat({})", self.0)
    }
}

impl FromStr for Nat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Nat::parse_decimal(s)
    }
}

macro_rules! nat_from_unsigned {
    ($($t:ty),*) => {$(
        impl From<$t> for Nat {
            fn from(v: $t) -> Self {
                Nat(Integer::from(v))
            }
        }

        impl PartialEq<$t> for Nat {
            fn eq(&self, other: &$t) -> bool {
                self.0 == *other
            }
        }
    )*};
}

nat_from_unsigned!(u8, u16, u32, u64, u128, usize);

/// Monotone cache of powers of ten.
///
/// Entries are never evicted. Once the cached magnitudes exceed the byte
/// budget, further misses are computed but not stored.
pub struct Pow10Cache {
    byte_budget: usize,
    inner: RwLock<CacheInner>,
}

#[derive(Default)]
struct CacheInner {
    table: BTreeMap<u64, Arc<Nat>>,
    bytes: usize,
}

impl Pow10Cache {
    pub const DEFAULT_BYTE_BUDGET: usize = 64 << 20;

    pub fn new(byte_budget: usize) -> Self {
        Pow10Cache {
            byte_budget,
            inner: RwLock::new(CacheInner::default()),
        }
    }

    /// Process-wide instance used by [`pow10`].
    pub fn global() -> &'static Pow10Cache {
        static GLOBAL: OnceLock<Pow10Cache> = OnceLock::new();
        GLOBAL.get_or_init(|| Pow10Cache::new(Self::DEFAULT_BYTE_BUDGET))
    }

    pub fn get(&self, k: u64) -> Arc<Nat> {
        if let Some(hit) = self.read().table.get(&k) {
            return Arc::clone(hit);
        }
        let exp = u32::try_from(k).expect("power of ten exponent exceeds u32");
        let value = Arc::new(Nat(Integer::from(Integer::u_pow_u(10, exp))));
        let size = value.significant_bits() as usize / 8 + 1;

        let mut inner = self.inner.write().unwrap_or_else(|e| e.into_inner());
        if let Some(raced) = inner.table.get(&k) {
            return Arc::clone(raced);
        }
        if inner.bytes + size <= self.byte_budget {
            inner.bytes += size;
            inner.table.insert(k, Arc::clone(&value));
        }
        value
    }

    pub fn cached_entries(&self) -> usize {
        self.read().table.len()
    }

    fn read(&self) -> std::sync::RwLockReadGuard<'_, CacheInner> {
        self.inner.read().unwrap_or_else(|e| e.into_inner())
    }
}

/// `10^k`, served from the global cache.
pub fn pow10(k: u64) -> Arc<Nat> {
    Pow10Cache::global().get(k)
}

/// Number of characters in the decimal rendering of `n`; `digit_length(0) == 1`.
pub fn digit_length(n: &Nat) -> u64 {
    integer_digit_length(&n.0)
}

pub(crate) fn integer_digit_length(n: &Integer) -> u64 {
    if let Some(small) = n.to_u64() {
        return u64_digit_length(small);
    }
    // n >= 2^(bits-1), so floor((bits-1) * log10 2) + 1 never overshoots;
    // start one below it to absorb float rounding.
    let bits = u64::from(n.significant_bits());
    let mut k = (((bits - 1) as f64) * std::f64::consts::LOG10_2).floor() as u64;
    k = k.max(1);
    while *n >= pow10(k).0 {
        k += 1;
    }
    k
}

pub fn u64_digit_length(n: u64) -> u64 {
    match n.checked_ilog10() {
        Some(l) => u64::from(l) + 1,
        None => 1,
    }
}

pub fn u128_digit_length(n: u128) -> u64 {
    match n.checked_ilog10() {
        Some(l) => u64::from(l) + 1,
        None => 1,
    }
}

/// `n * 10^digit_length(m) + m`.
pub fn conc(n: &Nat, m: &Nat) -> Nat {
    conc_known(n, m, digit_length(m))
}

/// [`conc`] when the caller already knows `digit_length(m)`.
pub(crate) fn conc_known(n: &Nat, m: &Nat, m_digits: u64) -> Nat {
    debug_assert_eq!(m_digits, digit_length(m));
    if n.is_zero() {
        return m.clone();
    }
    let mut out = Integer::from(&n.0 * &pow10(m_digits).0);
    out += &m.0;
    Nat(out)
}

/// "But last digit": `floor(n / 10)`.
pub fn bld(n: &Nat) -> Nat {
    Nat(Integer::from(&n.0 / 10u32))
}
