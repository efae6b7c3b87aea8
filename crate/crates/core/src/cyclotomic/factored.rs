use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{cyclotomic, divisors, valuation};
use crate::polyring::{IntPoly, RatFunc};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FactoredError {
    #[error("division by a factor that vanishes identically")]
    ZeroDivision,
}

/// `coeff * q^q_exp * prod Phi_j(q)^phi[j]` with signed exponents.
///
/// Every q-integer, q-shifted factorial, `1 +- q^m` and power of `q` in the
/// engine's summands is of this shape, so products and quotients are just
/// exponent arithmetic and reduction is free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloMonomial {
    coeff: BigRational,
    q_exp: i64,
    phi: BTreeMap<u64, i64>,
}

impl CycloMonomial {
    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn zero() -> Self {
        Self::constant(BigRational::zero())
    }

    pub fn constant(c: BigRational) -> Self {
        CycloMonomial {
            coeff: c,
            q_exp: 0,
            phi: BTreeMap::new(),
        }
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into()))
    }

    pub fn q_pow(e: i64) -> Self {
        CycloMonomial {
            coeff: BigRational::one(),
            q_exp: e,
            phi: BTreeMap::new(),
        }
    }

    fn phi_product(coeff: i64, q_exp: i64, indices: impl IntoIterator<Item = u64>) -> Self {
        CycloMonomial {
            coeff: BigRational::from_integer(coeff.into()),
            q_exp,
            phi: indices.into_iter().map(|j| (j, 1)).collect(),
        }
    }

    /// `1 - q^m`; zero when `m == 0`.
    pub fn one_minus_q_pow(m: i64) -> Self {
        let am = m.unsigned_abs();
        match m.signum() {
            0 => Self::zero(),
            // 1 - q^m = -(q^m - 1) = -prod_{j | m} Phi_j
            1 => Self::phi_product(-1, 0, divisors(am)),
            // 1 - q^-m = q^-m (q^m - 1)
            _ => Self::phi_product(1, m, divisors(am)),
        }
    }

    /// `1 + q^m`.
    pub fn one_plus_q_pow(m: i64) -> Self {
        let am = m.unsigned_abs();
        if am == 0 {
            return Self::from_int(2);
        }
        // 1 + q^m = (q^2m - 1) / (q^m - 1) = prod_{j | 2m, j does not divide m} Phi_j
        let idx = divisors(2 * am).into_iter().filter(move |j| am % j != 0);
        Self::phi_product(1, m.min(0), idx)
    }

    /// `[m]_{q^base} = (1 - q^(base*m)) / (1 - q^base)` for any integer `m`
    /// and positive `base`.
    pub fn q_int(m: i64, base: i64) -> Self {
        if m == 0 {
            return Self::zero();
        }
        let num = Self::one_minus_q_pow(base * m);
        let den = Self::one_minus_q_pow(base);
        num.checked_div(&den).expect("base is nonzero")
    }

    /// `(q^a; q^step)_len = prod_{i < len} (1 - q^(a + i*step))`.
    pub fn poch(a: i64, step: i64, len: u64) -> Self {
        let mut acc = Self::one();
        for i in 0..len as i64 {
            let f = Self::one_minus_q_pow(a + i * step);
            if f.is_zero() {
                return Self::zero();
            }
            acc.mul_assign(&f);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn q_exp(&self) -> i64 {
        self.q_exp
    }

    /// Signed exponents of each `Phi_j(q)`.
    pub fn phi_exponents(&self) -> &BTreeMap<u64, i64> {
        &self.phi
    }

    /// Signed exponent of `Phi_j(q)`.
    pub fn phi_exponent(&self, j: u64) -> i64 {
        self.phi.get(&j).copied().unwrap_or(0)
    }

    pub fn mul_assign(&mut self, other: &CycloMonomial) {
        if self.is_zero() {
            return;
        }
        if other.is_zero() {
            *self = Self::zero();
            return;
        }
        self.coeff *= &other.coeff;
        self.q_exp += other.q_exp;
        for (&j, &e) in &other.phi {
            let slot = self.phi.entry(j).or_insert(0);
            *slot += e;
            if *slot == 0 {
                self.phi.remove(&j);
            }
        }
    }

    pub fn mul(&self, other: &CycloMonomial) -> Self {
        let mut out = self.clone();
        out.mul_assign(other);
        out
    }

    pub fn inv(&self) -> Result<Self, FactoredError> {
        if self.is_zero() {
            return Err(FactoredError::ZeroDivision);
        }
        Ok(CycloMonomial {
            coeff: self.coeff.recip(),
            q_exp: -self.q_exp,
            phi: self.phi.iter().map(|(&j, &e)| (j, -e)).collect(),
        })
    }

    pub fn checked_div(&self, other: &CycloMonomial) -> Result<Self, FactoredError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self, FactoredError> {
        if e == 0 {
            return Ok(Self::one());
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        if base.is_zero() {
            return Ok(Self::zero());
        }
        Ok(CycloMonomial {
            coeff: num_traits::pow(base.coeff, k as usize),
            q_exp: base.q_exp * k as i64,
            phi: base
                .phi
                .into_iter()
                .map(|(j, x)| (j, x * k as i64))
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        CycloMonomial {
            coeff: -&self.coeff,
            q_exp: self.q_exp,
            phi: self.phi.clone(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = self.clone();
        out.coeff *= c;
        if out.coeff.is_zero() {
            return Self::zero();
        }
        out
    }

    /// Polynomial part `q^max(e,0) * prod_{e_j > 0} Phi_j^e_j` and the
    /// denominator part, both monic.
    pub fn split_polys(&self) -> (IntPoly, IntPoly) {
        let mut num = Vec::new();
        let mut den = Vec::new();
        for (&j, &e) in &self.phi {
            let p = cyclotomic(j).pow(e.unsigned_abs() as u32);
            if e > 0 {
                num.push(p);
            } else {
                den.push(p);
            }
        }
        let num = IntPoly::product(num).shift_up(self.q_exp.max(0) as usize);
        let den = IntPoly::product(den).shift_up((-self.q_exp).max(0) as usize);
        (num, den)
    }

    pub fn to_ratfunc(&self) -> RatFunc {
        if self.is_zero() {
            return RatFunc::zero();
        }
        let (num, den) = self.split_polys();
        RatFunc::from_coprime(self.coeff.clone(), num, den)
    }

    /// Exact value at a rational point, or `None` at a pole.
    pub fn eval_rational(&self, x: &BigRational) -> Option<BigRational> {
        self.to_ratfunc().eval_rational(x).ok()
    }
}

/// `scalar * num / (q^den_q * prod Phi_j^den[j])`: a rational function whose
/// denominator stays factored, so sums share denominators by exponent
/// maxima and reduce by trial division.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloFrac {
    scalar: BigRational,
    num: IntPoly,
    den: BTreeMap<u64, u32>,
    den_q: u32,
}

impl CycloFrac {
    pub fn zero() -> Self {
        CycloFrac {
            scalar: BigRational::zero(),
            num: IntPoly::zero(),
            den: BTreeMap::new(),
            den_q: 0,
        }
    }

    pub fn new(scalar: BigRational, num: IntPoly, den: BTreeMap<u64, u32>, den_q: u32) -> Self {
        let mut den = den;
        den.retain(|_, e| *e > 0);
        CycloFrac {
            scalar,
            num,
            den,
            den_q,
        }
    }

    pub fn from_monomial(m: &CycloMonomial) -> Self {
        if m.is_zero() {
            return Self::zero();
        }
        let mut num_parts = Vec::new();
        let mut den = BTreeMap::new();
        for (&j, &e) in &m.phi {
            if e > 0 {
                num_parts.push(cyclotomic(j).pow(e as u32));
            } else {
                den.insert(j, (-e) as u32);
            }
        }
        CycloFrac {
            scalar: m.coeff.clone(),
            num: IntPoly::product(num_parts).shift_up(m.q_exp.max(0) as usize),
            den,
            den_q: (-m.q_exp).max(0) as u32,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero() || self.num.is_zero()
    }

    pub fn scalar(&self) -> &BigRational {
        &self.scalar
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den_factors(&self) -> &BTreeMap<u64, u32> {
        &self.den
    }

    pub fn den_q(&self) -> u32 {
        self.den_q
    }

    pub fn den_poly(&self) -> IntPoly {
        IntPoly::product(self.den.iter().map(|(&j, &e)| cyclotomic(j).pow(e)))
            .shift_up(self.den_q as usize)
    }

    fn extra_factor(have: &BTreeMap<u64, u32>, want: &BTreeMap<u64, u32>) -> IntPoly {
        IntPoly::product(want.iter().filter_map(|(&j, &e)| {
            let h = have.get(&j).copied().unwrap_or(0);
            (e > h).then(|| cyclotomic(j).pow(e - h))
        }))
    }

    pub fn add(&self, other: &CycloFrac) -> CycloFrac {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut den = self.den.clone();
        for (&j, &e) in &other.den {
            let slot = den.entry(j).or_insert(0);
            *slot = (*slot).max(e);
        }
        let den_q = self.den_q.max(other.den_q);
        let l = self.scalar.denom().lcm(other.scalar.denom());
        let ca = self.scalar.numer() * (&l / self.scalar.denom());
        let cb = other.scalar.numer() * (&l / other.scalar.denom());
        let ta = (&self.num * &Self::extra_factor(&self.den, &den))
            .shift_up((den_q - self.den_q) as usize)
            .scale(&ca);
        let tb = (&other.num * &Self::extra_factor(&other.den, &den))
            .shift_up((den_q - other.den_q) as usize)
            .scale(&cb);
        CycloFrac {
            scalar: BigRational::new(BigInt::one(), l),
            num: ta + tb,
            den,
            den_q,
        }
    }

    pub fn neg(&self) -> CycloFrac {
        let mut out = self.clone();
        out.scalar = -out.scalar;
        out
    }

    pub fn sub(&self, other: &CycloFrac) -> CycloFrac {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &CycloFrac) -> CycloFrac {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut den = self.den.clone();
        for (&j, &e) in &other.den {
            *den.entry(j).or_insert(0) += e;
        }
        CycloFrac {
            scalar: &self.scalar * &other.scalar,
            num: &self.num * &other.num,
            den,
            den_q: self.den_q + other.den_q,
        }
    }

    /// Multiplies by a monomial, cancelling its numerator factors against
    /// the factored denominator before touching the polynomial.
    pub fn mul_monomial(&self, m: &CycloMonomial) -> CycloFrac {
        if self.is_zero() || m.is_zero() {
            return Self::zero();
        }
        let mut den = self.den.clone();
        let mut num_parts = Vec::new();
        for (&j, &e) in &m.phi {
            let slot = den.entry(j).or_insert(0);
            if e < 0 {
                *slot += (-e) as u32;
            } else {
                let cancel = (*slot).min(e as u32);
                *slot -= cancel;
                let left = e as u32 - cancel;
                if left > 0 {
                    num_parts.push(cyclotomic(j).pow(left));
                }
            }
        }
        den.retain(|_, e| *e > 0);
        let mut den_q = self.den_q as i64;
        let mut shift = 0i64;
        if m.q_exp < 0 {
            den_q -= m.q_exp;
        } else {
            let cancel = den_q.min(m.q_exp);
            den_q -= cancel;
            shift = m.q_exp - cancel;
        }
        let mut num = self.num.clone();
        if !num_parts.is_empty() {
            num = &num * &IntPoly::product(num_parts);
        }
        CycloFrac {
            scalar: &self.scalar * &m.coeff,
            num: num.shift_up(shift as usize),
            den,
            den_q: den_q as u32,
        }
    }

    pub fn pow(&self, e: u32) -> CycloFrac {
        if e == 0 {
            return CycloFrac::from_monomial(&CycloMonomial::one());
        }
        CycloFrac {
            scalar: num_traits::pow(self.scalar.clone(), e as usize),
            num: self.num.pow(e),
            den: self.den.iter().map(|(&j, &x)| (j, x * e)).collect(),
            den_q: self.den_q * e,
        }
    }

    /// Cancels common factors; afterwards `num` is primitive and shares no
    /// factor with the denominator.
    pub fn reduce(&self) -> CycloFrac {
        if self.is_zero() {
            return Self::zero();
        }
        let (c, mut num) = self.num.primitive_split();
        let cancel_q = (num.low_order() as u32).min(self.den_q);
        num = num.shift_down(cancel_q as usize);
        let mut den = BTreeMap::new();
        for (&j, &e) in &self.den {
            let phi = cyclotomic(j);
            let mut left = e;
            while left > 0 {
                let (quot, rem) = num.divrem(&phi).expect("cyclotomic polynomials are monic");
                if !rem.is_zero() {
                    break;
                }
                num = quot;
                left -= 1;
            }
            if left > 0 {
                den.insert(j, left);
            }
        }
        CycloFrac {
            scalar: &self.scalar * BigRational::from_integer(c),
            num,
            den,
            den_q: self.den_q - cancel_q,
        }
    }

    pub fn to_ratfunc(&self) -> RatFunc {
        let r = self.reduce();
        if r.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::from_coprime(r.scalar.clone(), r.num.clone(), r.den_poly())
    }

    /// Valuation data `(v_j(numerator), exponent of Phi_j in denominator)` of
    /// the reduced fraction, where the numerator valuation is `None` for zero.
    pub fn phi_valuations(&self, j: u64) -> (Option<u32>, u32) {
        let r = self.reduce();
        if r.is_zero() {
            return (None, 0);
        }
        (valuation(&r.num, j), r.den.get(&j).copied().unwrap_or(0))
    }

    /// Whether the scalar is negative; the sign of the value at large `q`.
    pub fn is_negative(&self) -> bool {
        self.scalar.is_negative() != self.num.leading_coeff().is_some_and(Signed::is_negative)
    }
}
