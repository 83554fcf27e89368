//! Primality pipeline: trial division, deterministic Miller-Rabin below
//! [`DETERMINISTIC_LIMIT`], and BPSW plus seeded extra rounds above it.

use std::fmt;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::integer::Order;
use rug::Integer;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::lucas::{strong_lucas_selfridge, LucasOutcome};
use super::sieve::small_primes;
use crate::concat::Nat;
use crate::error::{Error, Result};

/// Below this bound the strong test to every base in
/// [`DETERMINISTIC_BASES`] decides primality exactly.
pub const DETERMINISTIC_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

/// First thirteen primes; together they have no strong pseudoprime below
/// [`DETERMINISTIC_LIMIT`].
pub const DETERMINISTIC_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimalityPolicy {
    pub trial_division_bound: u32,
    pub extra_mr_rounds: u32,
    pub seed: u64,
}

impl Default for PrimalityPolicy {
    fn default() -> Self {
        PrimalityPolicy {
            trial_division_bound: 10_000,
            extra_mr_rounds: 16,
            seed: 0,
        }
    }
}

impl PrimalityPolicy {
    pub const MAX_TRIAL_DIVISION_BOUND: u32 = 100_000_000;

    pub fn validate(&self) -> Result<()> {
        if self.trial_division_bound < 2 {
            return Err(Error::invalid("trial division bound must be >= 2"));
        }
        if self.trial_division_bound > Self::MAX_TRIAL_DIVISION_BOUND {
            return Err(Error::invalid(format!(
                "trial division bound must be <= {}",
                Self::MAX_TRIAL_DIVISION_BOUND
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeStatus {
    Composite,
    Prime,
    ProbablePrime,
}

impl PrimeStatus {
    /// Prime or probable prime.
    pub fn is_hit(self) -> bool {
        !matches!(self, PrimeStatus::Composite)
    }
}

impl fmt::Display for PrimeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrimeStatus::Composite => "composite",
            PrimeStatus::Prime => "prime",
            PrimeStatus::ProbablePrime => "probable_prime",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimalityVerdict {
    pub status: PrimeStatus,
    pub evidence: String,
}

impl PrimalityVerdict {
    fn new(status: PrimeStatus, evidence: impl Into<String>) -> Self {
        PrimalityVerdict {
            status,
            evidence: evidence.into(),
        }
    }

    fn composite(evidence: impl Into<String>) -> Self {
        Self::new(PrimeStatus::Composite, evidence)
    }
}

pub fn is_probable_prime(x: &Nat, policy: &PrimalityPolicy) -> PrimalityVerdict {
    let n = x.as_integer();
    if *n < 2 {
        return PrimalityVerdict::composite("below 2");
    }
    if let Some(verdict) = trial_division(n, policy.trial_division_bound) {
        return verdict;
    }
    match n.to_u128() {
        Some(small) if small < DETERMINISTIC_LIMIT => deterministic(n, small),
        _ => bpsw_with_rounds(n, policy),
    }
}

fn trial_division(n: &Integer, bound: u32) -> Option<PrimalityVerdict> {
    let primes = small_primes(bound);
    let primes = &primes[..primes.partition_point(|&p| p <= bound)];

    if let Some(small) = n.to_u64() {
        for &p in primes {
            let p64 = u64::from(p);
            if p64 * p64 > small {
                return Some(PrimalityVerdict::new(
                    PrimeStatus::Prime,
                    "trial division: no factor up to sqrt",
                ));
            }
            if small % p64 == 0 {
                return Some(if small == p64 {
                    PrimalityVerdict::new(PrimeStatus::Prime, "trial division: small prime")
                } else {
                    PrimalityVerdict::composite(format!("divisible by {p}"))
                });
            }
        }
        return None;
    }

    // Reduce by products of several primes at once, then test each prime.
    let mut start = 0;
    while start < primes.len() {
        let mut product: u32 = 1;
        let mut end = start;
        while end < primes.len() {
            match product.checked_mul(primes[end]) {
                Some(next) => product = next,
                None => break,
            }
            end += 1;
        }
        let residue = n.mod_u(product);
        for &p in &primes[start..end] {
            if residue % p == 0 {
                return Some(PrimalityVerdict::composite(format!("divisible by {p}")));
            }
        }
        start = end;
    }
    None
}

/// Precomputed `n - 1 = d * 2^s` for strong-pseudoprime tests on odd `n > 3`.
struct StrongTest<'a> {
    n: &'a Integer,
    n_minus_1: Integer,
    odd_part: Integer,
    twos: u32,
}

impl<'a> StrongTest<'a> {
    fn new(n: &'a Integer) -> Self {
        let n_minus_1 = Integer::from(n - 1u32);
        let twos = n_minus_1.find_one(0).expect("n - 1 is nonzero");
        let odd_part = Integer::from(&n_minus_1 >> twos);
        StrongTest {
            n,
            n_minus_1,
            odd_part,
            twos,
        }
    }

    fn passes(&self, base: &Integer) -> bool {
        let mut y = match base.pow_mod_ref(&self.odd_part, self.n) {
            Some(incomplete) => Integer::from(incomplete),
            None => return false,
        };
        if y == 1 || y == self.n_minus_1 {
            return true;
        }
        for _ in 1..self.twos {
            y.square_mut();
            y %= self.n;
            if y == self.n_minus_1 {
                return true;
            }
            if y == 1 {
                return false;
            }
        }
        false
    }
}

/// Strong probable-prime test of odd `n > 3` to `base`.
pub fn strong_probable_prime(n: &Nat, base: &Nat) -> bool {
    let n = n.as_integer();
    assert!(n.is_odd() && *n > 3, "strong test needs odd n > 3");
    StrongTest::new(n).passes(base.as_integer())
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    (u128::from(a) * u128::from(b) % u128::from(m)) as u64
}

fn strong_u64(n: u64, base: u64) -> bool {
    let base = base % n;
    if base == 0 {
        return true;
    }
    let twos = (n - 1).trailing_zeros();
    let mut exp = (n - 1) >> twos;
    let mut acc = 1u64;
    let mut sq = base;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, sq, n);
        }
        sq = mul_mod_u64(sq, sq, n);
        exp >>= 1;
    }
    if acc == 1 || acc == n - 1 {
        return true;
    }
    for _ in 1..twos {
        acc = mul_mod_u64(acc, acc, n);
        if acc == n - 1 {
            return true;
        }
        if acc == 1 {
            return false;
        }
    }
    false
}

fn deterministic(n: &Integer, small: u128) -> PrimalityVerdict {
    debug_assert!(small > 3 && small % 2 == 1);
    let failed = match u64::try_from(small) {
        Ok(n64) => DETERMINISTIC_BASES
            .iter()
            .find(|&&b| !strong_u64(n64, u64::from(b))),
        Err(_) => {
            let test = StrongTest::new(n);
            DETERMINISTIC_BASES
                .iter()
                .find(|&&b| !test.passes(&Integer::from(b)))
        }
    };
    match failed {
        Some(base) => PrimalityVerdict::composite(format!("strong witness {base}")),
        None => PrimalityVerdict::new(PrimeStatus::Prime, "deterministic witness set"),
    }
}

/// Bases for the extra rounds, derived from the seed and the tested value
/// alone so verdicts do not depend on scheduling.
fn round_rng(n: &Integer, seed: u64) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(n.to_digits::<u8>(Order::Lsf));
    ChaCha8Rng::from_seed(hasher.finalize().into())
}

/// Uniform-ish base in `[2, n - 2]` for `n > 4`.
fn random_base(rng: &mut ChaCha8Rng, n: &Integer) -> Integer {
    let span = Integer::from(n - 3u32);
    let mut bytes = vec![0u8; (span.significant_bits() as usize).div_ceil(8) + 8];
    rng.fill_bytes(&mut bytes);
    let raw = Integer::from_digits(&bytes, Order::Lsf);
    raw % span + 2u32
}

/// Runs `rounds` seeded Miller-Rabin rounds on odd `n > 4`; returns the
/// first failing round (1-based), if any.
pub fn miller_rabin_witness_rounds(n: &Nat, rounds: u32, seed: u64) -> Option<u32> {
    let n = n.as_integer();
    assert!(n.is_odd() && *n > 4, "Miller-Rabin rounds need odd n > 4");
    let test = StrongTest::new(n);
    let mut rng = round_rng(n, seed);
    (1..=rounds).find(|_| !test.passes(&random_base(&mut rng, n)))
}

fn bpsw_with_rounds(n: &Integer, policy: &PrimalityPolicy) -> PrimalityVerdict {
    let test = StrongTest::new(n);
    if !test.passes(&Integer::from(2)) {
        return PrimalityVerdict::composite("strong witness 2");
    }
    if let LucasOutcome::Composite { reason } = strong_lucas_selfridge(n) {
        return PrimalityVerdict::composite(reason);
    }
    let mut rng = round_rng(n, policy.seed);
    for round in 1..=policy.extra_mr_rounds {
        if !test.passes(&random_base(&mut rng, n)) {
            return PrimalityVerdict::composite(format!("Miller-Rabin round {round} witness"));
        }
    }
    PrimalityVerdict::new(
        PrimeStatus::ProbablePrime,
        format!("BPSW + {} Miller-Rabin rounds", policy.extra_mr_rounds),
    )
}
