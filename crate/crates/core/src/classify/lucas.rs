//! Strong Lucas probable-prime test with Selfridge's parameter choice.

use rug::ops::RemRoundingAssign;
use rug::Integer;

use super::squares::perfect_square_root;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LucasOutcome {
    /// Passed with discriminant `d`.
    ProbablePrime {
        d: i64,
    },
    Composite {
        reason: String,
    },
}

fn reduce(x: &mut Integer, n: &Integer) {
    x.rem_euc_assign(n);
}

fn halve_mod(x: &mut Integer, n: &Integer) {
    if x.is_odd() {
        *x += n;
    }
    *x >>= 1;
}

/// `(U_k, V_k, Q^k)` modulo odd `n` for the Lucas sequences with
/// parameters `(p, q)`, by the binary doubling ladder.
pub fn lucas_sequences(n: &Integer, p: i64, q: i64, k: &Integer) -> (Integer, Integer, Integer) {
    assert!(n.is_odd() && *n > 1, "modulus must be odd and > 1");
    if *k == 0 {
        return (Integer::new(), Integer::from(2) % n, Integer::from(1) % n);
    }
    let d = Integer::from(p) * p - Integer::from(q) * 4;
    let mut q_mod = Integer::from(q);
    reduce(&mut q_mod, n);
    let mut p_mod = Integer::from(p);
    reduce(&mut p_mod, n);

    let mut u = Integer::from(1);
    let mut v = p_mod.clone();
    let mut qk = q_mod.clone();
    let top = k.significant_bits() - 1;
    for bit in (0..top).rev() {
        u *= &v;
        reduce(&mut u, n);
        v.square_mut();
        v -= Integer::from(&qk << 1);
        reduce(&mut v, n);
        qk.square_mut();
        reduce(&mut qk, n);

        if k.get_bit(bit) {
            let mut next_u = Integer::from(&p_mod * &u);
            next_u += &v;
            halve_mod(&mut next_u, n);
            let mut next_v = Integer::from(&d * &u);
            next_v += Integer::from(&p_mod * &v);
            reduce(&mut next_v, n);
            halve_mod(&mut next_v, n);
            u = next_u;
            reduce(&mut u, n);
            v = next_v;
            qk *= &q_mod;
            reduce(&mut qk, n);
        }
    }
    (u, v, qk)
}

/// Strong Lucas test on odd `n > 2`, taking the first `D` in
/// `5, -7, 9, -11, ...` with Jacobi symbol `(D/n) = -1`, `P = 1`,
/// `Q = (1 - D) / 4`.
pub fn strong_lucas_selfridge(n: &Integer) -> LucasOutcome {
    assert!(n.is_odd() && *n > 2, "strong Lucas test needs odd n > 2");
    if perfect_square_root(n).is_some() {
        return LucasOutcome::Composite {
            reason: "perfect square".into(),
        };
    }

    let mut d: i64 = 5;
    loop {
        let jacobi = Integer::from(d).jacobi(n);
        if jacobi == -1 {
            break;
        }
        if jacobi == 0 {
            return if *n == d.unsigned_abs() {
                LucasOutcome::ProbablePrime { d }
            } else {
                LucasOutcome::Composite {
                    reason: format!("shares a factor with D={d}"),
                }
            };
        }
        d = if d > 0 { -(d + 2) } else { -d + 2 };
    }
    let q = (1 - d) / 4;

    let delta = Integer::from(n + 1u32);
    let s = delta.find_one(0).expect("n + 1 is nonzero");
    let odd_part = Integer::from(&delta >> s);
    let (u, mut v, mut qk) = lucas_sequences(n, 1, q, &odd_part);
    if u == 0 || v == 0 {
        return LucasOutcome::ProbablePrime { d };
    }
    for _ in 1..s {
        v.square_mut();
        v -= Integer::from(&qk << 1);
        reduce(&mut v, n);
        if v == 0 {
            return LucasOutcome::ProbablePrime { d };
        }
        qk.square_mut();
        reduce(&mut qk, n);
    }
    LucasOutcome::Composite {
        reason: format!("strong Lucas witness with D={d}"),
    }
}
