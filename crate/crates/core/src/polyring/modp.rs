//! Word-size arithmetic in `F_p[q]` for the modular gcd.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::IntPoly;

/// Primes just below 2^31, so products fit a `u64` without overflow.
pub(crate) fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::new();
        let mut n: u64 = (1 << 31) - 1;
        while out.len() < 256 {
            if is_prime(n) {
                out.push(n);
            }
            n -= 2;
        }
        out
    })
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn reduce_int(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

pub(crate) fn reduce(poly: &IntPoly, p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut out: Vec<u64> = poly
        .coeffs()
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().unwrap())
        .collect();
    trim(&mut out);
    out
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// `a mod b` in place; `b` must be nonzero with a trimmed top coefficient.
fn rem_in_place(a: &mut Vec<u64>, b: &[u64], p: u64) {
    let db = b.len() - 1;
    let inv_lc = inv_mod(b[db], p);
    while a.len() > db {
        let top = a.len() - 1;
        let f = a[top] * inv_lc % p;
        if f != 0 {
            let off = top - db;
            for (j, &bc) in b[..db].iter().enumerate() {
                let s = f * bc % p;
                let x = &mut a[off + j];
                *x = if *x >= s { *x - s } else { *x + p - s };
            }
        }
        a.pop();
        trim(a);
    }
}

/// Monic gcd in `F_p[q]`; empty only when both inputs are zero.
pub(crate) fn gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        rem_in_place(&mut a, &b, p);
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&lc) = a.last() {
        let inv = inv_mod(lc, p);
        for x in &mut a {
            *x = *x * inv % p;
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_table_is_prime() {
        let ps = primes();
        assert_eq!(ps[0], 2147483647);
        assert!(ps.iter().all(|&p| is_prime(p)));
    }

    #[test]
    fn gcd_mod_p() {
        let p = primes()[0];
        // (q-1)(q+1) and (q-1)(q^2+q+1)
        let a = vec![p - 1, 0, 1];
        let b = vec![p - 1, 0, 0, 1];
        assert_eq!(gcd(a, b, p), vec![p - 1, 1]);
    }
}
