//! Primality verdicts and exact square/triangularity detection.

mod lucas;
mod primality;
mod sieve;
mod squares;

pub use lucas::{lucas_sequences, strong_lucas_selfridge, LucasOutcome};
pub use primality::{
    is_probable_prime, miller_rabin_witness_rounds, strong_probable_prime, PrimalityPolicy,
    PrimalityVerdict, PrimeStatus, DETERMINISTIC_BASES, DETERMINISTIC_LIMIT,
};
pub use sieve::primes_up_to;
pub use squares::{is_perfect_square, is_triangular, isqrt};
