use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{gcd_with_cofactors, IntPoly, PolyError};

/// A reduced element of `Q(q)`, stored as `scalar * num / den`.
///
/// `num` and `den` are primitive with positive leading coefficients and
/// coprime; the rational content lives in `scalar`. Zero is `0 * 1 / 1`.
/// With this normal form, equality of values is structural equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    scalar: BigRational,
    num: IntPoly,
    den: IntPoly,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            scalar: BigRational::zero(),
            num: IntPoly::one(),
            den: IntPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn from_rational(c: BigRational) -> Self {
        RatFunc {
            scalar: c,
            num: IntPoly::one(),
            den: IntPoly::one(),
        }
    }

    pub fn from_poly(p: IntPoly) -> Self {
        let (c, pp) = p.primitive_split();
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc {
            scalar: BigRational::from_integer(c),
            num: pp,
            den: IntPoly::one(),
        }
    }

    /// `q^k` for any integer `k`.
    pub fn q_pow(k: i64) -> Self {
        let m = IntPoly::q_pow(k.unsigned_abs() as usize);
        let (num, den) = if k >= 0 {
            (m, IntPoly::one())
        } else {
            (IntPoly::one(), m)
        };
        RatFunc {
            scalar: BigRational::one(),
            num,
            den,
        }
    }

    /// Reduces `scalar * num / den` to normal form.
    pub fn new(scalar: BigRational, num: IntPoly, den: IntPoly) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivideByZero);
        }
        if scalar.is_zero() || num.is_zero() {
            return Ok(Self::zero());
        }
        let g = gcd_with_cofactors(&num, &den)?;
        Ok(Self::from_coprime(scalar, g.a_over_gcd, g.b_over_gcd))
    }

    /// Normalises contents and signs of a pair already known to be coprime,
    /// skipping the gcd.
    pub fn from_coprime(scalar: BigRational, num: IntPoly, den: IntPoly) -> Self {
        debug_assert!(!den.is_zero());
        if scalar.is_zero() || num.is_zero() {
            return Self::zero();
        }
        let (cn, num) = num.primitive_split();
        let (cd, den) = den.primitive_split();
        RatFunc {
            scalar: scalar * BigRational::new(cn, cd),
            num,
            den,
        }
    }

    pub fn scalar(&self) -> &BigRational {
        &self.scalar
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &IntPoly {
        &self.den
    }

    /// Integer polynomials `(a, b)` with `self = a / b`, coprime over `Q`
    /// and `b` with positive leading coefficient.
    pub fn to_int_fraction(&self) -> (IntPoly, IntPoly) {
        if self.is_zero() {
            return (IntPoly::zero(), IntPoly::one());
        }
        let a = self.num.scale(self.scalar.numer());
        let b = self.den.scale(self.scalar.denom());
        (a, b)
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.scalar.is_one() && self.num.is_one() && self.den.is_one()
    }

    /// Whether the value is a polynomial with rational coefficients.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.num.is_one() && self.den.is_one()).then_some(&self.scalar)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc {
            scalar: &self.scalar * c,
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Err(PolyError::DivideByZero);
        }
        Ok(RatFunc {
            scalar: self.scalar.recip(),
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }

    pub fn checked_div(&self, other: &RatFunc) -> Result<Self, PolyError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self, PolyError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        Ok(RatFunc {
            scalar: num_traits::pow(base.scalar, e as usize),
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// Substitutes `q -> -q`.
    pub fn negate_var(&self) -> Self {
        Self::from_coprime(
            self.scalar.clone(),
            self.num.negate_var(),
            self.den.negate_var(),
        )
    }

    /// Exact value at a rational point.
    pub fn eval_rational(&self, point: &BigRational) -> Result<BigRational, PolyError> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(PolyError::PoleAtPoint {
                point: point.to_string(),
            });
        }
        Ok(&self.scalar * self.num.eval(point) / d)
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }

    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
}

impl From<IntPoly> for RatFunc {
    fn from(p: IntPoly) -> Self {
        Self::from_poly(p)
    }
}

impl From<BigRational> for RatFunc {
    fn from(c: BigRational) -> Self {
        Self::from_rational(c)
    }
}

impl From<i64> for RatFunc {
    fn from(c: i64) -> Self {
        Self::from_int(c)
    }
}

fn add(a: &RatFunc, b: &RatFunc) -> RatFunc {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    // Henrici: with g = gcd(den_a, den_b) only g can share factors with the
    // combined numerator.
    let g = gcd_with_cofactors(&a.den, &b.den).expect("denominators are nonzero");
    let (da, db) = (&g.a_over_gcd, &g.b_over_gcd);
    let l = a.scalar.denom().lcm(b.scalar.denom());
    let ca = a.scalar.numer() * (&l / a.scalar.denom());
    let cb = b.scalar.numer() * (&l / b.scalar.denom());
    let t = (&a.num * db).scale(&ca) + (&b.num * da).scale(&cb);
    if t.is_zero() {
        return RatFunc::zero();
    }
    let scalar = BigRational::new(BigInt::one(), l);
    if g.gcd.is_one() {
        return RatFunc::from_coprime(scalar, t, da * &b.den);
    }
    let h = gcd_with_cofactors(&t, &g.gcd).expect("numerator is nonzero");
    let den = &(&h.b_over_gcd * da) * db;
    RatFunc::from_coprime(scalar, h.a_over_gcd, den)
}

fn mul(a: &RatFunc, b: &RatFunc) -> RatFunc {
    if a.is_zero() || b.is_zero() {
        return RatFunc::zero();
    }
    let scalar = &a.scalar * &b.scalar;
    let cross = |n: &IntPoly, d: &IntPoly| {
        if n.is_one() || d.is_one() {
            (n.clone(), d.clone())
        } else {
            let g = gcd_with_cofactors(n, d).expect("operands are nonzero");
            (g.a_over_gcd, g.b_over_gcd)
        }
    };
    let (na, db) = cross(&a.num, &b.den);
    let (nb, da) = cross(&b.num, &a.den);
    RatFunc::from_coprime(scalar, &na * &nb, &da * &db)
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        add(self, rhs)
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        add(&self, &rhs)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        add(self, &-rhs)
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: RatFunc) -> RatFunc {
        add(&self, &-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        mul(self, rhs)
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        mul(&self, &rhs)
    }
}

/// Panics on division by zero, like integer division; use
/// [`RatFunc::checked_div`] to get an error instead.
impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs).expect("division by zero RatFunc")
    }
}

impl Div for RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: RatFunc) -> RatFunc {
        &self / &rhs
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            scalar: -&self.scalar,
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(mut self) -> RatFunc {
        self.scalar = -self.scalar;
        self
    }
}

impl std::iter::Sum for RatFunc {
    fn sum<I: Iterator<Item = RatFunc>>(iter: I) -> RatFunc {
        iter.fold(RatFunc::zero(), |acc, x| &acc + &x)
    }
}

impl std::iter::Product for RatFunc {
    fn product<I: Iterator<Item = RatFunc>>(iter: I) -> RatFunc {
        iter.fold(RatFunc::one(), |acc, x| &acc * &x)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if !self.scalar.is_one() || self.num.is_one() {
            if self.scalar.is_negative() || !self.scalar.is_integer() {
                parts.push(format!("({})", self.scalar));
            } else {
                parts.push(self.scalar.to_string());
            }
        }
        if !self.num.is_one() {
            parts.push(format!("({})", self.num));
        }
        write!(f, "{}", parts.join("*"))?;
        if !self.den.is_one() {
            write!(f, " / ({})", self.den)?;
        }
        Ok(())
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc[{self}]")
    }
}
