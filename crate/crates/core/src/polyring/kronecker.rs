//! Polynomial multiplication by Kronecker substitution: pack each operand
//! into one big integer at `q = 2^b`, multiply once, unpack balanced digits.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

/// Writes `|c| << offset` into a little-endian `u32` buffer. Slots never
/// overlap, so OR-ing is enough.
fn write_bits(buf: &mut [u32], offset: u64, digits: &[u32]) {
    let word = (offset / 32) as usize;
    let shift = (offset % 32) as u32;
    for (i, &d) in digits.iter().enumerate() {
        buf[word + i] |= d << shift;
        if shift > 0 {
            buf[word + i + 1] |= d >> (32 - shift);
        }
    }
}

fn pack(coeffs: &[BigInt], slot_bits: u64) -> BigInt {
    let total_words = ((coeffs.len() as u64 * slot_bits) / 32 + 2) as usize;
    let mut pos = vec![0u32; total_words];
    let mut neg = vec![0u32; total_words];
    let mut any_neg = false;
    for (i, c) in coeffs.iter().enumerate() {
        let (sign, digits) = c.to_u32_digits();
        let buf = match sign {
            Sign::NoSign => continue,
            Sign::Plus => &mut pos,
            Sign::Minus => {
                any_neg = true;
                &mut neg
            }
        };
        write_bits(buf, i as u64 * slot_bits, &digits);
    }
    let p = BigInt::from_biguint(Sign::Plus, BigUint::new(pos));
    if any_neg {
        p - BigInt::from_biguint(Sign::Plus, BigUint::new(neg))
    } else {
        p
    }
}

fn read_bits(buf: &[u32], offset: u64, bits: u64) -> BigUint {
    let nwords = bits.div_ceil(32) as usize;
    let mut out = Vec::with_capacity(nwords);
    let word = (offset / 32) as usize;
    let shift = (offset % 32) as u32;
    let at = |i: usize| buf.get(i).copied().unwrap_or(0);
    for j in 0..nwords {
        let lo = at(word + j) >> shift;
        let hi = if shift > 0 {
            at(word + j + 1) << (32 - shift)
        } else {
            0
        };
        out.push(lo | hi);
    }
    let rem = (bits % 32) as u32;
    if rem != 0 {
        if let Some(last) = out.last_mut() {
            *last &= (1u32 << rem) - 1;
        }
    }
    BigUint::new(out)
}

fn unpack(x: &BigInt, slot_bits: u64, count: usize) -> Vec<BigInt> {
    let (sign, digits) = x.to_u32_digits();
    let half = BigUint::one() << (slot_bits - 1);
    let full = BigInt::one() << slot_bits;
    let mut carry = false;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let mut v = read_bits(&digits, i as u64 * slot_bits, slot_bits);
        if carry {
            v += 1u32;
        }
        if v >= half {
            out.push(BigInt::from(v) - &full);
            carry = true;
        } else {
            out.push(BigInt::from(v));
            carry = false;
        }
    }
    if sign == Sign::Minus {
        for c in &mut out {
            *c = -std::mem::take(c);
        }
    }
    out
}

/// Product of two nonempty coefficient vectors.
pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let bits_a = a.iter().map(|c| c.bits()).max().unwrap_or(0);
    let bits_b = b.iter().map(|c| c.bits()).max().unwrap_or(0);
    if bits_a == 0 || bits_b == 0 {
        return vec![BigInt::zero(); a.len() + b.len() - 1];
    }
    let terms = a.len().min(b.len()) as u64;
    let slot_bits = bits_a + bits_b + (64 - terms.leading_zeros() as u64) + 2;
    let pa = pack(a, slot_bits);
    let pb = pack(b, slot_bits);
    unpack(&(pa * pb), slot_bits, a.len() + b.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_unpack_round_trip() {
        let coeffs: Vec<BigInt> = [5i64, -3, 0, 1 << 40, -(1 << 40), -1, 0]
            .iter()
            .map(|&c| BigInt::from(c))
            .collect();
        let packed = pack(&coeffs, 48);
        assert_eq!(unpack(&packed, 48, coeffs.len()), coeffs);
        let neg: Vec<BigInt> = coeffs.iter().map(|c| -c).collect();
        assert_eq!(unpack(&-packed, 48, coeffs.len()), neg);
    }

    #[test]
    fn small_product() {
        let a = [1, 1].map(BigInt::from);
        let b = [1, -1].map(BigInt::from);
        assert_eq!(mul(&a, &b), [1, 0, -1].map(BigInt::from).to_vec());
    }
}
