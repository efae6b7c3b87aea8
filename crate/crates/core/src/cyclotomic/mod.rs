//! Cyclotomic polynomials, congruence moduli built from them, and values
//! kept in factored form over the cyclotomic basis.

mod factored;
mod modulus;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::polyring::IntPoly;

pub use factored::{CycloFrac, CycloMonomial, FactoredError};
pub use modulus::{ModFactor, Modulus, ModulusError, Sign};

fn memo() -> &'static RwLock<HashMap<u64, Arc<IntPoly>>> {
    static MEMO: OnceLock<RwLock<HashMap<u64, Arc<IntPoly>>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The `n`-th cyclotomic polynomial `Phi_n(q)`.
///
/// # Panics
/// If `n == 0`.
pub fn cyclotomic(n: u64) -> Arc<IntPoly> {
    assert!(n >= 1, "cyclotomic index must be positive");
    if let Some(p) = memo().read().unwrap().get(&n) {
        return p.clone();
    }
    let mut acc = IntPoly::q_pow(n as usize) - IntPoly::one();
    for d in divisors(n) {
        if d == n {
            break;
        }
        let phi = cyclotomic(d);
        let (quot, rem) = acc.divrem(&phi).expect("cyclotomic polynomials are monic");
        debug_assert!(rem.is_zero());
        acc = quot;
    }
    let p = Arc::new(acc);
    memo().write().unwrap().entry(n).or_insert(p).clone()
}

/// The index `j` with `Phi_n(-q) = +-Phi_j(q)`.
pub fn neg_index(n: u64) -> u64 {
    match n {
        1 => 2,
        _ if n % 2 == 1 => 2 * n,
        _ if n % 4 == 2 => n / 2,
        _ => n,
    }
}

/// `Phi_n(-q)`, scaled by `-1` when needed so the leading coefficient is
/// positive.
pub fn cyclotomic_neg(n: u64) -> IntPoly {
    let p = cyclotomic(n).negate_var();
    if p.leading_coeff()
        .is_some_and(|c| c.sign() == num_bigint::Sign::Minus)
    {
        -p
    } else {
        p
    }
}

/// Indices `j > 1` with `[m]_q = prod Phi_j(q)`.
pub fn qint_indices(m: u64) -> Vec<u64> {
    divisors(m).into_iter().filter(|&j| j > 1).collect()
}

/// Largest `e` with `Phi_j(q)^e` dividing `p`, or `None` when `p` is zero.
pub fn valuation(p: &IntPoly, j: u64) -> Option<u32> {
    if p.is_zero() {
        return None;
    }
    let phi = cyclotomic(j);
    let mut cur = p.clone();
    let mut e = 0;
    loop {
        let (quot, rem) = cur.divrem(&phi).expect("cyclotomic polynomials are monic");
        if !rem.is_zero() {
            return Some(e);
        }
        cur = quot;
        e += 1;
    }
}

/// Euler's totient, used for degree checks.
pub fn totient(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn table_values() {
        assert_eq!(*cyclotomic(1), p(&[-1, 1]));
        assert_eq!(*cyclotomic(6), p(&[1, -1, 1]));
        assert_eq!(*cyclotomic(12), p(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn negated_values() {
        assert_eq!(cyclotomic_neg(3), p(&[1, -1, 1]));
        assert_eq!(cyclotomic_neg(1), p(&[1, 1]));
        assert_eq!(cyclotomic_neg(5), p(&[1, -1, 1, -1, 1]));
        for n in 1..=40 {
            assert_eq!(cyclotomic_neg(n), *cyclotomic(neg_index(n)), "n = {n}");
        }
    }

    #[test]
    fn product_over_divisors() {
        for n in 1..=60u64 {
            let prod = IntPoly::product(divisors(n).into_iter().map(|d| (*cyclotomic(d)).clone()));
            assert_eq!(prod, IntPoly::q_pow(n as usize) - IntPoly::one());
            assert_eq!(cyclotomic(n).degree(), Some(totient(n) as usize));
        }
    }

    #[test]
    fn square_substitution_for_odd_n() {
        for n in (3..=31).step_by(2) {
            let lhs = cyclotomic(n).inflate(2);
            assert_eq!(lhs, &*cyclotomic(n) * &cyclotomic_neg(n));
        }
    }

    #[test]
    fn prime_cyclotomic_is_q_integer() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let qint = IntPoly::from_i64s(&vec![1; p as usize]);
            assert_eq!(*cyclotomic(p), qint);
        }
    }

    #[test]
    fn valuations() {
        let x = &cyclotomic(3).pow(3) * &*cyclotomic(5);
        assert_eq!(valuation(&x, 3), Some(3));
        assert_eq!(valuation(&x, 5), Some(1));
        assert_eq!(valuation(&x, 7), Some(0));
        assert_eq!(valuation(&IntPoly::zero(), 7), None);
    }
}
