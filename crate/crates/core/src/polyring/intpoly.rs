//! Dense univariate polynomials over the integers.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{kronecker, PolyError};

/// Below this many coefficients in the shorter factor, products use the
/// schoolbook loop; above it they go through Kronecker substitution.
const KRONECKER_THRESHOLD: usize = 24;

/// A polynomial in `Z[q]`, stored densely with `coeffs[i]` the coefficient
/// of `q^i`. The coefficient vector never ends in a zero, so the zero
/// polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * q^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        IntPoly { coeffs }
    }

    /// `q^k`.
    pub fn q_pow(k: usize) -> Self {
        Self::monomial(BigInt::one(), k)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `q^i` (zero past the end).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// `None` stands for the degree of the zero polynomial (minus infinity),
    /// which conveniently orders below every finite degree.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(One::is_one)
    }

    /// Number of zero coefficients below the lowest nonzero one, i.e. the
    /// largest `k` with `q^k` dividing `self`. Zero for the zero polynomial.
    pub fn low_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Non-negative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Splits `self = unit_content * primitive` where `primitive` has
    /// content one and a positive leading coefficient. The zero polynomial
    /// splits as `0 * 0`.
    pub fn primitive_split(&self) -> (BigInt, IntPoly) {
        if self.is_zero() {
            return (BigInt::zero(), IntPoly::zero());
        }
        let mut c = self.content();
        if self.leading_coeff().unwrap().is_negative() {
            c = -c;
        }
        (c.clone(), self.div_scalar_exact(&c))
    }

    pub fn primitive_part(&self) -> IntPoly {
        self.primitive_split().1
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        if c.is_zero() {
            return IntPoly::zero();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Divides every coefficient by `c`, which must divide all of them.
    pub fn div_scalar_exact(&self, c: &BigInt) -> IntPoly {
        if c.is_one() {
            return self.clone();
        }
        IntPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|x| {
                    debug_assert!((x % c).is_zero());
                    x / c
                })
                .collect(),
        }
    }

    /// `self * q^k`.
    pub fn shift_up(&self, k: usize) -> IntPoly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    /// `self / q^k`; requires `q^k` to divide `self`.
    pub fn shift_down(&self, k: usize) -> IntPoly {
        debug_assert!(k <= self.low_order() || self.is_zero());
        if self.is_zero() {
            return IntPoly::zero();
        }
        IntPoly {
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    /// Substitutes `q -> -q`.
    pub fn negate_var(&self) -> IntPoly {
        IntPoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    /// Substitutes `q -> q^k` for `k >= 1`.
    pub fn inflate(&self, k: usize) -> IntPoly {
        assert!(k >= 1, "inflation factor must be positive");
        if k == 1 || self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        IntPoly { coeffs }
    }

    pub fn pow(&self, mut e: u32) -> IntPoly {
        let mut base = self.clone();
        let mut acc = IntPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Largest coefficient bit length.
    pub fn max_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        // Horner over a common denominator: sum c_i n^i d^(deg-i), then / d^deg.
        let (n, d) = (x.numer(), x.denom());
        if self.is_zero() {
            return BigRational::zero();
        }
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * n + c * &dpow;
            dpow *= d;
        }
        // dpow ends at d^(deg+1) while acc carries d^deg.
        BigRational::new(acc * d, dpow)
    }

    /// Division with remainder by a monic divisor, entirely inside `Z[q]`.
    pub fn divrem(&self, m: &IntPoly) -> Result<(IntPoly, IntPoly), PolyError> {
        if !m.is_monic() {
            return Err(PolyError::NonMonicDivisor);
        }
        let dm = m.coeffs.len() - 1;
        if self.coeffs.len() <= dm {
            return Ok((IntPoly::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let qlen = rem.len() - dm;
        let mut quot = vec![BigInt::zero(); qlen];
        for i in (0..qlen).rev() {
            let top = std::mem::take(&mut rem[i + dm]);
            if top.is_zero() {
                continue;
            }
            for (j, mc) in m.coeffs[..dm].iter().enumerate() {
                if !mc.is_zero() {
                    rem[i + j] -= &top * mc;
                }
            }
            quot[i] = top;
        }
        rem.truncate(dm);
        Ok((IntPoly::from_coeffs(quot), IntPoly::from_coeffs(rem)))
    }

    /// Remainder modulo a monic divisor.
    pub fn rem_monic(&self, m: &IntPoly) -> Result<IntPoly, PolyError> {
        self.divrem(m).map(|(_, r)| r)
    }

    /// Exact quotient `self / d` when `d` divides `self` in `Z[q]`, else `None`.
    pub fn exact_div(&self, d: &IntPoly) -> Option<IntPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if d.is_constant() {
            let c = &d.coeffs[0];
            return self
                .coeffs
                .iter()
                .all(|x| (x % c).is_zero())
                .then(|| IntPoly {
                    coeffs: self.coeffs.iter().map(|x| x / c).collect(),
                });
        }
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return None;
        }
        // Cheap necessary conditions on the low end before the full loop.
        let (la, ld) = (self.low_order(), d.low_order());
        if la < ld || !(&self.coeffs[la] % &d.coeffs[ld]).is_zero() {
            return None;
        }
        let lc = d.leading_coeff().unwrap();
        let unit_lc = lc.is_one();
        let mut rem = self.coeffs.clone();
        let qlen = rem.len() - dd;
        let mut quot = vec![BigInt::zero(); qlen];
        for i in (0..qlen).rev() {
            let top = std::mem::take(&mut rem[i + dd]);
            if top.is_zero() {
                continue;
            }
            let qc = if unit_lc {
                top
            } else {
                let (qc, r) = top.div_rem(lc);
                if !r.is_zero() {
                    return None;
                }
                qc
            };
            for (j, dc) in d.coeffs[..dd].iter().enumerate() {
                if !dc.is_zero() {
                    rem[i + j] -= &qc * dc;
                }
            }
            quot[i] = qc;
        }
        rem[..dd]
            .iter()
            .all(Zero::is_zero)
            .then(|| IntPoly::from_coeffs(quot))
    }

    pub fn divides(&self, other: &IntPoly) -> bool {
        other.exact_div(self).is_some()
    }

    pub(crate) fn mul_schoolbook(&self, other: &IntPoly) -> IntPoly {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        IntPoly::from_coeffs(out)
    }

    /// Product of many polynomials, balanced so the big multiplications
    /// happen between operands of similar size.
    pub fn product<I: IntoIterator<Item = IntPoly>>(factors: I) -> IntPoly {
        let mut layer: Vec<IntPoly> = factors.into_iter().collect();
        if layer.is_empty() {
            return IntPoly::one();
        }
        while layer.len() > 1 {
            layer.sort_by_key(IntPoly::len);
            let mut next = Vec::with_capacity(layer.len().div_ceil(2));
            let mut it = layer.into_iter();
            while let Some(a) = it.next() {
                match it.next() {
                    Some(b) => next.push(&a * &b),
                    None => next.push(a),
                }
            }
            layer = next;
        }
        layer.pop().unwrap()
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}*q")?,
                (_, true) => write!(f, "q^{i}")?,
                (_, false) => write!(f, "{mag}*q^{i}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for IntPoly {
    type Output = IntPoly;
    fn add(mut self, rhs: IntPoly) -> IntPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&IntPoly> for IntPoly {
    fn add_assign(&mut self, rhs: &IntPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigInt::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }
}

impl SubAssign<&IntPoly> for IntPoly {
    fn sub_assign(&mut self, rhs: &IntPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigInt::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }
}

impl<'a> Sub<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for IntPoly {
    type Output = IntPoly;
    fn sub(mut self, rhs: IntPoly) -> IntPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

impl<'a> Mul<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        if self.coeffs.len().min(rhs.coeffs.len()) < KRONECKER_THRESHOLD {
            self.mul_schoolbook(rhs)
        } else {
            IntPoly::from_coeffs(kronecker::mul(&self.coeffs, &rhs.coeffs))
        }
    }
}

impl Mul for IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: IntPoly) -> IntPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(&p(&[1, 1]) * &p(&[1, -1]), p(&[1, 0, -1]));
    }

    #[test]
    fn additive_identity() {
        let a = p(&[3, -2, 0, 7]);
        assert_eq!(&a + &IntPoly::zero(), a);
    }

    #[test]
    fn geometric_telescoping() {
        assert_eq!(&p(&[1, 1, 1]) * &p(&[-1, 1]), p(&[-1, 0, 0, 1]));
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(p(&[0, 0]).degree(), None);
        assert!(&p(&[1, 1]) - &p(&[1, 1]) == IntPoly::zero());
    }

    #[test]
    fn divrem_examples() {
        let (q, r) = p(&[-1, 0, 0, 1]).divrem(&p(&[1, 1, 1])).unwrap();
        assert_eq!((q, r), (p(&[-1, 1]), IntPoly::zero()));
        let (q, r) = p(&[0, 0, 1]).divrem(&p(&[1, 1])).unwrap();
        assert_eq!((q, r), (p(&[-1, 1]), p(&[1])));
        let (q, r) = IntPoly::zero().divrem(&p(&[1, 1])).unwrap();
        assert_eq!((q, r), (IntPoly::zero(), IntPoly::zero()));
    }

    #[test]
    fn divrem_rejects_non_monic() {
        assert_eq!(
            p(&[1, 2, 3]).divrem(&p(&[1, 2])),
            Err(PolyError::NonMonicDivisor)
        );
    }

    #[test]
    fn exact_div_detects_non_divisibility() {
        let a = p(&[-1, 0, 0, 1]);
        assert_eq!(a.exact_div(&p(&[-1, 1])), Some(p(&[1, 1, 1])));
        assert_eq!(a.exact_div(&p(&[1, 1])), None);
        assert_eq!(p(&[2, 4]).exact_div(&p(&[1, 2])), Some(p(&[2])));
        assert_eq!(p(&[1, 4]).exact_div(&p(&[2])), None);
    }

    #[test]
    fn substitutions() {
        let a = p(&[1, 1, 1]);
        assert_eq!(a.negate_var(), p(&[1, -1, 1]));
        assert_eq!(a.inflate(2), p(&[1, 0, 1, 0, 1]));
        assert_eq!(a.shift_up(2).shift_down(2), a);
    }

    #[test]
    fn evaluation() {
        let a = p(&[1, 1, 1]);
        assert_eq!(a.eval_int(&BigInt::from(1)), BigInt::from(3));
        assert_eq!(a.eval_int(&BigInt::from(-1)), BigInt::from(1));
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(a.eval(&half), BigRational::new(7.into(), 4.into()));
    }

    #[test]
    fn kronecker_matches_schoolbook() {
        let a = IntPoly::from_coeffs(
            (0..60)
                .map(|i| BigInt::from((i * 37 % 23) - 11) << (i % 70))
                .collect(),
        );
        let b = IntPoly::from_coeffs(
            (0..45)
                .map(|i| BigInt::from(5 - (i * 13 % 17)) * BigInt::from(1u64 << 40))
                .collect(),
        );
        assert_eq!(&a * &b, a.mul_schoolbook(&b));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(p(&[1, -1, 0, 2]).to_string(), "2*q^3 - q + 1");
        assert_eq!(p(&[0, -1]).to_string(), "-q");
    }
}
