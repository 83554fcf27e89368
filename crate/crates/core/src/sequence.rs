//! Base sequences and the four Smarandache constructions over them.
//!
//! With `u_1, u_2, ...` a base sequence and `conc` decimal concatenation:
//!
//! * consecutive: `scs_1 = u_1`, `scs_n = conc(scs_{n-1}, u_n)`
//! * reversed:    `rss_1 = u_1`, `rss_n = conc(u_n, rss_{n-1})`
//! * mirror:      `sms_1 = u_1`, `sms_n = conc(conc(u_n, sms_{n-1}), u_n)`
//! * symmetric:   `sss_{2k-1} = conc(bld(scs_k), rss_k)`, `sss_{2k} = conc(scs_k, rss_k)`
//!
//! Term lengths follow from `S_n = sum_{i<=n} len(u_i)` alone, so
//! [`digits_at`] never builds a term.

use std::fmt;
use std::str::FromStr;

use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::concat::{pow10, u128_digit_length, Nat};
use crate::error::{Error, Result};

/// The sequence whose terms get concatenated.
///
/// New bases slot in as extra variants: they need `term_u128` (every term
/// must be `>= 1`) and a `count_at_most` for the closed-form digit sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseSpec {
    /// `u_n = n`
    Natural,
    /// `u_n = n(n+1)/2`
    Triangular,
}

impl BaseSpec {
    pub const ALL: [BaseSpec; 2] = [BaseSpec::Natural, BaseSpec::Triangular];

    pub fn name(self) -> &'static str {
        match self {
            BaseSpec::Natural => "natural",
            BaseSpec::Triangular => "triangular",
        }
    }

    /// `u_n` for `n >= 1`. Fits in `u128` for every `u64` index.
    pub fn term_u128(self, n: u64) -> u128 {
        debug_assert!(n >= 1);
        let n = u128::from(n);
        match self {
            BaseSpec::Natural => n,
            BaseSpec::Triangular => n * (n + 1) / 2,
        }
    }

    pub fn term(self, n: u64) -> Result<Nat> {
        if n < 1 {
            return Err(Error::invalid("base sequence index must be >= 1"));
        }
        Ok(Nat::from(self.term_u128(n)))
    }

    pub fn term_digits(self, n: u64) -> u64 {
        u128_digit_length(self.term_u128(n))
    }

    /// Number of indices `i >= 1` with `u_i <= bound`.
    fn count_at_most(self, bound: &Integer) -> Integer {
        match self {
            BaseSpec::Natural => bound.clone(),
            BaseSpec::Triangular => {
                // t_i <= M  <=>  i <= (sqrt(8M+1) - 1) / 2
                let disc = Integer::from(bound * 8u32) + 1u32;
                (disc.sqrt() - 1u32) / 2u32
            }
        }
    }

    /// `S_n = sum_{i=1}^{n} digit_length(u_i)`, in `O(digits of u_n)` steps.
    pub fn digit_sum(self, n: u64) -> Result<u64> {
        let mut total: u64 = 0;
        let mut counted: u64 = 0;
        let mut d: u32 = 1;
        while counted < n {
            let bound = Integer::from(Integer::u_pow_u(10, d)) - 1u32;
            let upto = self.count_at_most(&bound);
            let upto = upto.to_u64().unwrap_or(u64::MAX).min(n);
            let block = upto - counted;
            total = block
                .checked_mul(u64::from(d))
                .and_then(|b| total.checked_add(b))
                .ok_or(Error::Overflow("digit sum"))?;
            counted = upto;
            d += 1;
        }
        Ok(total)
    }
}

impl fmt::Display for BaseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BaseSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "natural" | "n" => Ok(BaseSpec::Natural),
            "triangular" | "t" => Ok(BaseSpec::Triangular),
            other => Err(Error::Parse {
                what: "base",
                detail: format!("unknown base {other:?} (expected natural or triangular)"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceKind {
    Consecutive,
    Reversed,
    Mirror,
    Symmetric,
}

impl SequenceKind {
    pub const ALL: [SequenceKind; 4] = [
        SequenceKind::Consecutive,
        SequenceKind::Reversed,
        SequenceKind::Mirror,
        SequenceKind::Symmetric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SequenceKind::Consecutive => "consecutive",
            SequenceKind::Reversed => "reversed",
            SequenceKind::Mirror => "mirror",
            SequenceKind::Symmetric => "symmetric",
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            SequenceKind::Consecutive => "scs",
            SequenceKind::Reversed => "rss",
            SequenceKind::Mirror => "sms",
            SequenceKind::Symmetric => "sss",
        }
    }

    /// How many base terms the `n`-th term is built from.
    pub fn stream_index(self, n: u64) -> u64 {
        match self {
            SequenceKind::Symmetric => n / 2 + n % 2,
            _ => n,
        }
    }

    /// Digit count of term `n` given `S` at [`stream_index`](Self::stream_index)
    /// and the length of `u_1`.
    pub fn term_digits(self, n: u64, stream_sum: u64, first_len: u64) -> u64 {
        match self {
            SequenceKind::Consecutive | SequenceKind::Reversed => stream_sum,
            SequenceKind::Mirror => 2 * stream_sum - first_len,
            SequenceKind::Symmetric if n % 2 == 0 => 2 * stream_sum,
            SequenceKind::Symmetric => 2 * stream_sum - 1,
        }
    }
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SequenceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "scs" | "consecutive" => Ok(SequenceKind::Consecutive),
            "rss" | "reversed" => Ok(SequenceKind::Reversed),
            "sms" | "mirror" => Ok(SequenceKind::Mirror),
            "sss" | "symmetric" => Ok(SequenceKind::Symmetric),
            other => Err(Error::Parse {
                what: "sequence kind",
                detail: format!("unknown kind {other:?} (expected scs, rss, sms or sss)"),
            }),
        }
    }
}

/// One sequence element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub index: u64,
    pub value: Nat,
    pub digits: u64,
}

/// Running values carried between advances. `pow` is always the power of
/// ten that the next prepend has to shift by.
enum Carried {
    Start,
    Consecutive {
        value: Integer,
    },
    Reversed {
        value: Integer,
        pow: Integer,
    },
    Mirror {
        value: Integer,
        pow: Integer,
    },
    Symmetric {
        scs: Integer,
        rss: Integer,
        pow: Integer,
    },
}

/// Incremental generator; each [`advance`](Generator::advance) costs a few
/// linear-size multiplications by small powers of ten.
pub struct Generator {
    kind: SequenceKind,
    base: BaseSpec,
    next_index: u64,
    stream_len: u64,
    digit_sum: u64,
    first_len: u64,
    carried: Carried,
}

impl Generator {
    pub fn new(kind: SequenceKind, base: BaseSpec) -> Self {
        Generator {
            kind,
            base,
            next_index: 1,
            stream_len: 0,
            digit_sum: 0,
            first_len: base.term_digits(1),
            carried: Carried::Start,
        }
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn base(&self) -> BaseSpec {
        self.base
    }

    pub fn next_index(&self) -> u64 {
        self.next_index
    }

    /// `S_k` for the `k` base terms consumed so far.
    pub fn digit_sum(&self) -> u64 {
        self.digit_sum
    }

    pub fn advance(&mut self) -> Term {
        let index = self.next_index;
        self.next_index += 1;
        let value = match self.kind {
            SequenceKind::Symmetric => {
                if index % 2 == 1 {
                    self.step_stream();
                }
                let Carried::Symmetric { scs, rss, pow } = &self.carried else {
                    unreachable!("symmetric generator carries both streams")
                };
                let left = if index % 2 == 1 {
                    Integer::from(scs / 10u32)
                } else {
                    scs.clone()
                };
                left * pow + rss
            }
            _ => {
                self.step_stream();
                match &self.carried {
                    Carried::Consecutive { value }
                    | Carried::Reversed { value, .. }
                    | Carried::Mirror { value, .. } => value.clone(),
                    _ => unreachable!("stream kinds carry one value"),
                }
            }
        };
        let stream_index = self.kind.stream_index(index);
        debug_assert_eq!(stream_index, self.stream_len);
        Term {
            index,
            value: Nat::from_integer_unchecked(value),
            digits: self.kind.term_digits(index, self.digit_sum, self.first_len),
        }
    }

    /// Consumes the next base term and advances the carried values.
    fn step_stream(&mut self) {
        self.stream_len += 1;
        let k = self.stream_len;
        let u = Integer::from(self.base.term_u128(k));
        let d = self.base.term_digits(k);
        self.digit_sum += d;
        let shift = pow10(d);
        let shift = shift.as_integer();

        self.carried = match (
            self.kind,
            std::mem::replace(&mut self.carried, Carried::Start),
        ) {
            (SequenceKind::Consecutive, Carried::Start) => Carried::Consecutive { value: u },
            (SequenceKind::Consecutive, Carried::Consecutive { value }) => Carried::Consecutive {
                value: value * shift + &u,
            },
            (SequenceKind::Reversed, Carried::Start) => Carried::Reversed {
                value: u,
                pow: shift.clone(),
            },
            (SequenceKind::Reversed, Carried::Reversed { value, pow }) => {
                let value = Integer::from(&u * &pow) + value;
                Carried::Reversed {
                    value,
                    pow: pow * shift,
                }
            }
            (SequenceKind::Mirror, Carried::Start) => Carried::Mirror {
                value: u,
                pow: shift.clone(),
            },
            (SequenceKind::Mirror, Carried::Mirror { value, pow }) => {
                // (u * 10^L + sms) * 10^d + u, with pow = 10^L
                let value = (Integer::from(&u * &pow) + value) * shift + &u;
                Carried::Mirror {
                    value,
                    pow: pow * shift * shift,
                }
            }
            (SequenceKind::Symmetric, Carried::Start) => Carried::Symmetric {
                scs: u.clone(),
                rss: u,
                pow: shift.clone(),
            },
            (SequenceKind::Symmetric, Carried::Symmetric { scs, rss, pow }) => {
                let rss = Integer::from(&u * &pow) + rss;
                Carried::Symmetric {
                    scs: scs * shift + &u,
                    rss,
                    pow: pow * shift,
                }
            }
            _ => unreachable!("carried state always matches the generator kind"),
        };
    }
}

impl Iterator for Generator {
    type Item = Term;

    fn next(&mut self) -> Option<Term> {
        Some(self.advance())
    }
}

/// `u_n` of `base`.
pub fn base_term(base: BaseSpec, n: u64) -> Result<Nat> {
    base.term(n)
}

/// The `n`-th term, by replaying a fresh generator.
pub fn term_at(kind: SequenceKind, base: BaseSpec, n: u64) -> Result<Term> {
    if n < 1 {
        return Err(Error::invalid("sequence index must be >= 1"));
    }
    let mut generator = Generator::new(kind, base);
    for _ in 1..n {
        generator.step_only();
    }
    Ok(generator.advance())
}

impl Generator {
    /// Advances without materialising the emitted value.
    fn step_only(&mut self) {
        let index = self.next_index;
        self.next_index += 1;
        if self.kind != SequenceKind::Symmetric || index % 2 == 1 {
            self.step_stream();
        }
    }

    /// Moves the generator so the next emission has index `index`.
    pub fn skip_to(&mut self, index: u64) {
        while self.next_index < index {
            self.step_only();
        }
    }
}

/// Digit count of the `n`-th term without building it.
pub fn digits_at(kind: SequenceKind, base: BaseSpec, n: u64) -> Result<u64> {
    if n < 1 {
        return Err(Error::invalid("sequence index must be >= 1"));
    }
    let sum = base.digit_sum(kind.stream_index(n))?;
    let doubles = matches!(kind, SequenceKind::Mirror | SequenceKind::Symmetric);
    if doubles && sum > u64::MAX / 2 {
        return Err(Error::Overflow("term digit count"));
    }
    Ok(kind.term_digits(n, sum, base.term_digits(1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concat::digit_length;

    fn terms(kind: SequenceKind, base: BaseSpec, count: usize) -> Vec<String> {
        Generator::new(kind, base)
            .take(count)
            .map(|t| t.value.to_decimal())
            .collect()
    }

    /// Independent construction on strings.
    fn string_oracle(kind: SequenceKind, base: BaseSpec, n: u64) -> String {
        let u = |i: u64| base.term_u128(i).to_string();
        let forward = |k: u64| (1..=k).map(u).collect::<String>();
        let backward = |k: u64| (1..=k).rev().map(u).collect::<String>();
        match kind {
            SequenceKind::Consecutive => forward(n),
            SequenceKind::Reversed => backward(n),
            SequenceKind::Mirror => {
                let tail = (2..=n).map(u).collect::<String>();
                format!("{}{}", backward(n), tail)
            }
            SequenceKind::Symmetric => {
                let k = n.div_ceil(2);
                let mut head = forward(k);
                if n % 2 == 1 {
                    head.pop();
                }
                format!("{head}{}", backward(k))
            }
        }
    }

    #[test]
    fn base_term_examples() {
        assert_eq!(base_term(BaseSpec::Triangular, 20).unwrap(), 210u64);
        assert_eq!(base_term(BaseSpec::Triangular, 1).unwrap(), 1u64);
        assert_eq!(base_term(BaseSpec::Natural, 7).unwrap(), 7u64);
        assert!(base_term(BaseSpec::Natural, 0).is_err());
    }

    #[test]
    fn first_triangular_numbers() {
        let got: Vec<u128> = (1..=20)
            .map(|n| BaseSpec::Triangular.term_u128(n))
            .collect();
        assert_eq!(
            got,
            [1, 3, 6, 10, 15, 21, 28, 36, 45, 55, 66, 78, 91, 105, 120, 136, 153, 171, 190, 210]
        );
    }

    #[test]
    fn every_kind_starts_with_u1() {
        for kind in SequenceKind::ALL {
            for base in BaseSpec::ALL {
                let first = Generator::new(kind, base).advance();
                assert_eq!(
                    first,
                    Term {
                        index: 1,
                        value: Nat::one(),
                        digits: 1
                    },
                    "{kind}/{base}"
                );
            }
        }
    }

    #[test]
    fn advance_examples() {
        use BaseSpec::Triangular as T;
        assert_eq!(terms(SequenceKind::Consecutive, T, 4)[3], "13610");
        assert_eq!(terms(SequenceKind::Reversed, T, 10)[9], "55453628211510631");
        assert_eq!(terms(SequenceKind::Mirror, T, 4)[3], "106313610");
        assert_eq!(terms(SequenceKind::Symmetric, T, 7)[6], "136110631");
    }

    #[test]
    fn term_at_examples() {
        let value = |k, b, n| term_at(k, b, n).unwrap().value.to_decimal();
        assert_eq!(
            value(SequenceKind::Consecutive, BaseSpec::Natural, 10),
            "12345678910"
        );
        assert_eq!(
            value(SequenceKind::Symmetric, BaseSpec::Natural, 10),
            "1234554321"
        );
        assert_eq!(
            value(SequenceKind::Reversed, BaseSpec::Triangular, 5),
            "1510631"
        );
        assert!(term_at(SequenceKind::Mirror, BaseSpec::Natural, 0).is_err());
    }

    #[test]
    fn digits_at_examples() {
        use BaseSpec::Triangular as T;
        assert_eq!(digits_at(SequenceKind::Consecutive, T, 1000).unwrap(), 5354);
        assert_eq!(digits_at(SequenceKind::Mirror, T, 600).unwrap(), 5907);
        assert_eq!(digits_at(SequenceKind::Symmetric, T, 1000).unwrap(), 4708);
        assert_eq!(digits_at(SequenceKind::Mirror, T, 1000).unwrap(), 10707);
        assert!(digits_at(SequenceKind::Reversed, T, 0).is_err());
    }

    #[test]
    fn digit_sum_matches_direct_sum() {
        for base in BaseSpec::ALL {
            let mut running = 0;
            for n in 1..=20_000u64 {
                running += base.term_digits(n);
                if n % 97 == 0 || n < 200 {
                    assert_eq!(base.digit_sum(n).unwrap(), running, "{base} n={n}");
                }
            }
        }
    }

    #[test]
    fn digit_sum_handles_huge_indices() {
        // u_n < 10^39 for every u64 index
        let s = BaseSpec::Triangular.digit_sum(u64::MAX / 64).unwrap();
        assert!(s > 0);
        assert!(digits_at(SequenceKind::Mirror, BaseSpec::Natural, u64::MAX).is_err());
    }

    #[test]
    fn generator_matches_string_oracle() {
        for kind in SequenceKind::ALL {
            for base in BaseSpec::ALL {
                for term in Generator::new(kind, base).take(200) {
                    let expected = string_oracle(kind, base, term.index);
                    assert_eq!(
                        term.value.to_decimal(),
                        expected,
                        "{kind}/{base} n={}",
                        term.index
                    );
                    assert_eq!(term.digits, expected.len() as u64);
                    assert_eq!(digit_length(&term.value), term.digits);
                    assert_eq!(digits_at(kind, base, term.index).unwrap(), term.digits);
                }
            }
        }
    }

    #[test]
    fn skip_to_and_term_at_agree_with_streaming() {
        for kind in SequenceKind::ALL {
            let streamed: Vec<Term> = Generator::new(kind, BaseSpec::Triangular)
                .take(40)
                .collect();
            for n in [1u64, 2, 3, 17, 40] {
                assert_eq!(
                    term_at(kind, BaseSpec::Triangular, n).unwrap(),
                    streamed[n as usize - 1]
                );
                let mut g = Generator::new(kind, BaseSpec::Triangular);
                g.skip_to(n);
                assert_eq!(g.advance(), streamed[n as usize - 1]);
            }
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!(
            "sss".parse::<SequenceKind>().unwrap(),
            SequenceKind::Symmetric
        );
        assert_eq!(
            "Mirror".parse::<SequenceKind>().unwrap(),
            SequenceKind::Mirror
        );
        assert!("palindrome".parse::<SequenceKind>().is_err());
        assert_eq!(
            "triangular".parse::<BaseSpec>().unwrap(),
            BaseSpec::Triangular
        );
        assert!("square".parse::<BaseSpec>().is_err());
    }
}
