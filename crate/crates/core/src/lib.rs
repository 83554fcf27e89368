//! Consecutive, reversed, mirror and symmetric Smarandache sequences over
//! the natural and triangular numbers, plus batch scans of their terms for
//! probable primes and triangular numbers.
//!
//! ```
//! use smarandache::sequence::{term_at, BaseSpec, SequenceKind};
//!
//! let t = term_at(SequenceKind::Consecutive, BaseSpec::Triangular, 4).unwrap();
//! assert_eq!(t.value.to_decimal(), "13610");
//! ```

pub mod classify;
pub mod cli;
pub mod concat;
pub mod error;
pub mod scan;
pub mod sequence;

pub use concat::{bld, conc, digit_length, pow10, Nat};
pub use error::{Error, Result};
pub use sequence::{base_term, digits_at, term_at, BaseSpec, Generator, SequenceKind, Term};
