use rug::Integer;

use crate::concat::Nat;
use crate::error::{Error, Result};

/// `floor(sqrt(x))` by Newton iteration from an over-estimate.
///
/// Iterates `y = (r + x/r) / 2` and stops as soon as the sequence stops
/// decreasing; starting above the root, the last decreasing value is the floor.
pub fn isqrt(x: &Nat) -> Nat {
    Nat::from_integer_unchecked(isqrt_integer(x.as_integer()))
}

pub(crate) fn isqrt_integer(x: &Integer) -> Integer {
    if *x < 2 {
        return x.clone();
    }
    let bits = x.significant_bits();
    let mut r = Integer::from(1) << bits.div_ceil(2);
    loop {
        let mut y = Integer::from(x / &r);
        y += &r;
        y >>= 1;
        if y >= r {
            return r;
        }
        r = y;
    }
}

// Quadratic residue masks: bit i set iff i is a square modulo m.
fn residue_mask(m: u32) -> u128 {
    (0..m).fold(0u128, |mask, i| mask | 1u128 << ((i * i) % m))
}

fn could_be_square(x: &Integer) -> bool {
    use std::sync::OnceLock;
    static MASKS: OnceLock<[(u32, u128); 4]> = OnceLock::new();
    let masks = MASKS.get_or_init(|| [64, 63, 65, 11].map(|m| (m, residue_mask(m))));
    masks.iter().all(|&(m, mask)| mask >> x.mod_u(m) & 1 == 1)
}

/// The root `r` when `r * r == x`.
pub fn is_perfect_square(x: &Nat) -> Option<Nat> {
    perfect_square_root(x.as_integer()).map(Nat::from_integer_unchecked)
}

pub(crate) fn perfect_square_root(x: &Integer) -> Option<Integer> {
    if !could_be_square(x) {
        return None;
    }
    let r = isqrt_integer(x);
    (Integer::from(r.square_ref()) == *x).then_some(r)
}

/// `k` with `k(k+1)/2 == x`, via `8x + 1 = (2k + 1)^2`.
pub fn is_triangular(x: &Nat) -> Result<Option<Nat>> {
    if x.is_zero() {
        return Err(Error::invalid("triangularity is defined for x >= 1"));
    }
    let disc = Integer::from(x.as_integer() * 8u32) + 1u32;
    Ok(perfect_square_root(&disc).map(|r| Nat::from_integer_unchecked((r - 1u32) >> 1)))
}
