//! Classical congruences between rationals, decided by p-adic valuation.
//!
//! `x = y (mod p^e)` for rationals means `vp(x - y) >= e`. The claims here
//! are the `q -> 1` and `q -> -1` images of the q-congruences, and each one
//! can be re-derived by evaluating the matching q-case at that point.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use sha2::{Digest, Sha256};

use crate::checker::suites::statement_case;
use crate::checker::{CaseBody, CaseSpec, CheckError, Shape, Strength, Verdict, Witness};
use crate::cyclotomic::{cyclotomic, CycloMonomial};
use crate::qterms::CaseParams;
use crate::sums::{double_sum, single_sum, triple_sum};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PadicError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{claim} needs p = {residue} (mod {modulus}), got p = {p}")]
    ResidueConditionViolated {
        claim: &'static str,
        p: u64,
        residue: u64,
        modulus: u64,
    },
    #[error("pole at q = {0}")]
    PoleAtPoint(i64),
    #[error("unknown claim `{0}`")]
    UnknownClaim(String),
}

/// p-adic valuation; `None` stands for the valuation of zero.
pub fn vp(x: &BigRational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let count = |mut v: BigInt| {
        let mut e = 0i64;
        loop {
            let (q, r) = v.div_rem(&p);
            if !r.is_zero() {
                return e;
            }
            v = q;
            e += 1;
        }
    };
    Some(count(x.numer().abs()) - count(x.denom().abs()))
}

/// Trial division; the primes here are small.
pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClaimId {
    Cor15A,
    Cor15B,
    Cor16E12,
    Cor16E13,
    Cor17A,
    Cor17B,
    LiEq13,
    SunM4,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicClaim {
    pub id: ClaimId,
    pub p: u64,
    pub exponent: u32,
    pub lhs: BigRational,
    pub rhs: BigRational,
    /// `p = c (mod m)` as `(c, m)`.
    pub residue: Option<(u64, u64)>,
}

/// Values of a claim's two sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalValues {
    pub lhs: BigRational,
    pub rhs: BigRational,
}

impl ClaimId {
    pub const ALL: [ClaimId; 8] = [
        ClaimId::Cor15A,
        ClaimId::Cor15B,
        ClaimId::Cor16E12,
        ClaimId::Cor16E13,
        ClaimId::Cor17A,
        ClaimId::Cor17B,
        ClaimId::LiEq13,
        ClaimId::SunM4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClaimId::Cor15A => "cor1_5.a",
            ClaimId::Cor15B => "cor1_5.b",
            ClaimId::Cor16E12 => "cor1_6.e12",
            ClaimId::Cor16E13 => "cor1_6.e13",
            ClaimId::Cor17A => "cor1_7.a",
            ClaimId::Cor17B => "cor1_7.b",
            ClaimId::LiEq13 => "li.eq1_3",
            ClaimId::SunM4 => "sun.m4",
        }
    }

    pub fn exponent(self) -> u32 {
        match self {
            ClaimId::Cor15A | ClaimId::Cor15B | ClaimId::Cor17A => 2,
            ClaimId::Cor16E12 | ClaimId::Cor17B | ClaimId::LiEq13 => 3,
            ClaimId::Cor16E13 => 4,
            ClaimId::SunM4 => 1,
        }
    }

    pub fn residue(self) -> Option<(u64, u64)> {
        matches!(self, ClaimId::Cor17A | ClaimId::Cor17B).then_some((1, 4))
    }

    /// The primes the shipped suite checks.
    pub fn primes(self) -> &'static [u64] {
        match self.residue() {
            Some(_) => &[5, 13, 17],
            None => &[3, 5, 7, 11, 13],
        }
    }

    /// Checks that `p` is an odd prime meeting the residue condition.
    pub fn admit(self, p: u64) -> Result<(), PadicError> {
        if p == 2 || !is_prime(p) {
            return Err(PadicError::NotOddPrime(p));
        }
        if let Some((residue, modulus)) = self.residue() {
            if p % modulus != residue {
                return Err(PadicError::ResidueConditionViolated {
                    claim: self.name(),
                    p,
                    residue,
                    modulus,
                });
            }
        }
        Ok(())
    }

    pub fn claim(self, p: u64) -> Result<PadicClaim, PadicError> {
        let v = classical_sum(self, p)?;
        Ok(PadicClaim {
            id: self,
            p,
            exponent: self.exponent(),
            lhs: v.lhs,
            rhs: v.rhs,
            residue: self.residue(),
        })
    }

    /// The q-case this claim is the image of, with the evaluation point.
    pub fn q_case(self, p: u64) -> Option<(CaseSpec, i64)> {
        let n = p as i64;
        let (statement, params, target) = match self {
            ClaimId::Cor15A => ("thm1_1", CaseParams::new(n, 2, 1), 1),
            ClaimId::Cor15B => ("thm1_2", CaseParams::new(n, 2, 1), 1),
            ClaimId::Cor16E12 => ("thm1_1", CaseParams::new(n, 2, 1), -1),
            ClaimId::Cor16E13 => ("thm1_2", CaseParams::new(n, 2, 1), -1),
            ClaimId::Cor17A => ("thm1_3", CaseParams::new(n, 4, 1), -1),
            ClaimId::Cor17B => ("thm1_4", CaseParams::new(n, 4, 1), -1),
            ClaimId::LiEq13 => ("eq1_2", CaseParams::new(n, 2, 1), 1),
            ClaimId::SunM4 => return None,
        };
        Some((statement_case(statement, params)?, target))
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClaimId {
    type Err = PadicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ClaimId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| PadicError::UnknownClaim(s.to_string()))
    }
}

/// `C(2k, k)` for `k = 0..len`.
fn central_binomials(len: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(len);
    let mut c = BigInt::one();
    for k in 0..len as i64 {
        out.push(BigRational::from_integer(c.clone()));
        c = c * (2 * (2 * k + 1)) / (k + 1);
    }
    out
}

/// `(x)_k / k!` for `k = 0..len`.
fn rising_over_factorial(x: &BigRational, len: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(len);
    let mut v = BigRational::one();
    for k in 0..len as i64 {
        out.push(v.clone());
        v = v * (x + rat(k)) / rat(k + 1);
    }
    out
}

/// `(x)_k` for `k = 0..len`.
fn rising(x: &BigRational, len: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(len);
    let mut v = BigRational::one();
    for k in 0..len as i64 {
        out.push(v.clone());
        v *= x + rat(k);
    }
    out
}

fn sign(k: usize) -> BigRational {
    if k % 2 == 0 {
        rat(1)
    } else {
        rat(-1)
    }
}

fn pow_rat(x: &BigRational, e: usize) -> BigRational {
    num_traits::pow(x.clone(), e)
}

/// Exact values of both sides of a classical claim at the prime `p`.
pub fn classical_sum(id: ClaimId, p: u64) -> Result<ClassicalValues, PadicError> {
    id.admit(p)?;
    let len = p as usize;
    let half = (len - 1) / 2;
    let pp = rat(p as i64 * p as i64);
    let c = central_binomials(len);
    let quarter = rising_over_factorial(&frac(1, 4), len);
    let terms = |f: &dyn Fn(usize) -> BigRational| (0..len).map(f).collect::<Vec<_>>();
    let values = match id {
        ClaimId::Cor15A => {
            let t = terms(&|k| sign(k) * pow_rat(&c[k], 2) / pow_rat(&rat(16), k));
            let inner: Vec<_> = (0..=half)
                .map(|k| &c[k] / (rat(4 * k as i64 + 1) * pow_rat(&rat(4), k)))
                .collect();
            ClassicalValues {
                lhs: double_sum(&t),
                rhs: &pp * pow_rat(&single_sum(&inner), 2),
            }
        }
        ClaimId::Cor15B => {
            let t = terms(&|k| sign(k) * pow_rat(&c[k], 3) / pow_rat(&rat(64), k));
            let halves = rising(&frac(1, 2), half + 1);
            let three = rising(&frac(3, 4), half + 1);
            let five = rising(&frac(5, 4), half + 1);
            let inner: Vec<_> = (0..=half)
                .map(|k| {
                    pow_rat(&halves[k], 2) * &c[k] / (&three[k] * &five[k] * pow_rat(&rat(4), k))
                })
                .collect();
            ClassicalValues {
                lhs: double_sum(&t),
                rhs: &pp * pow_rat(&single_sum(&inner), 2),
            }
        }
        ClaimId::Cor16E12 => {
            let t = terms(&|k| rat(4 * k as i64 + 1) * pow_rat(&c[k], 2) / pow_rat(&rat(16), k));
            ClassicalValues {
                lhs: double_sum(&t),
                rhs: rat(0),
            }
        }
        ClaimId::Cor16E13 | ClaimId::LiEq13 => {
            let t = terms(&|k| {
                sign(k) * rat(4 * k as i64 + 1) * pow_rat(&c[k], 3) / pow_rat(&rat(64), k)
            });
            ClassicalValues {
                lhs: double_sum(&t),
                rhs: pp,
            }
        }
        ClaimId::Cor17A => {
            let t = terms(&|k| rat(8 * k as i64 + 1) * pow_rat(&quarter[k], 2));
            let inner = single_sum(&quarter[..=(len - 1) / 4]);
            ClassicalValues {
                lhs: double_sum(&t),
                rhs: &pp * pow_rat(&inner, 2),
            }
        }
        ClaimId::Cor17B => {
            let t = terms(&|k| sign(k) * rat(8 * k as i64 + 1) * pow_rat(&quarter[k], 3));
            ClassicalValues {
                lhs: double_sum(&t),
                rhs: pp,
            }
        }
        ClaimId::SunM4 => {
            let t: Vec<_> = (0..=half).map(|k| &c[k] / pow_rat(&rat(4), k)).collect();
            ClassicalValues {
                lhs: single_sum(&t),
                rhs: rat(0),
            }
        }
    };
    Ok(values)
}

/// Holds iff `vp(lhs - rhs) >= exponent`; reports the achieved valuation.
pub fn check_padic(claim: &PadicClaim) -> Verdict {
    let diff = &claim.lhs - &claim.rhs;
    let achieved = vp(&diff, claim.p);
    let holds = achieved.map_or(true, |v| v >= claim.exponent as i64);
    Verdict {
        holds,
        witness: (!holds).then(|| Witness {
            failed_factor: format!("{}^{}", claim.p, claim.exponent),
            remainder_digest: hex::encode(Sha256::digest(diff.to_string().as_bytes())),
            gcd_obstruction: None,
            remainder: None,
        }),
        strength: Strength::Padic {
            prime: claim.p,
            required: claim.exponent,
            achieved,
        },
        notes: Vec::new(),
    }
}

fn phi_at(j: u64, x: i64) -> BigRational {
    cyclotomic(j).eval(&rat(x))
}

/// Exact value of a factored monomial at `q = x`, for `x = +-1`.
pub fn eval_monomial(m: &CycloMonomial, x: i64) -> Result<BigRational, PadicError> {
    let mut v = m.coeff().clone();
    if v.is_zero() {
        return Ok(v);
    }
    if x == -1 && m.q_exp().rem_euclid(2) == 1 {
        v = -v;
    }
    for (&j, &e) in m.phi_exponents() {
        let f = phi_at(j, x);
        if f.is_zero() {
            if e < 0 {
                return Err(PadicError::PoleAtPoint(x));
            }
            return Ok(rat(0));
        }
        let f = num_traits::pow(f, e.unsigned_abs() as usize);
        if e < 0 {
            v /= f;
        } else {
            v *= f;
        }
    }
    Ok(v)
}

/// Both sides of a congruence case evaluated exactly at `q = target`.
pub fn q_to_classical(case: &CaseSpec, target: i64) -> Result<ClassicalValues, CheckError> {
    let CaseBody::Congruence(spec) = &case.body else {
        return Err(CheckError::InvalidCase(format!(
            "{} is not a congruence case",
            case.id
        )));
    };
    let params = &case.params;
    spec.lhs.term.check(params)?;
    let at = |m: CycloMonomial| eval_monomial(&m, target).map_err(CheckError::from);
    let lhs_terms = spec
        .lhs
        .term
        .values(params, spec.lhs.count(params)?)?
        .into_iter()
        .map(at)
        .collect::<Result<Vec<_>, _>>()?;
    let lhs = match spec.shape {
        Shape::Single => single_sum(&lhs_terms),
        Shape::Double => double_sum(&lhs_terms),
        Shape::Triple => triple_sum(&lhs_terms),
    };
    let mut rhs = match &spec.rhs.prefactor {
        Some(pre) => {
            pre.check(params)?;
            at(pre.monomial(params, 0)?)?
        }
        None => rat(1),
    };
    if let Some(inner) = &spec.rhs.inner {
        let vals = inner
            .term
            .values(params, inner.count(params)?)?
            .into_iter()
            .map(at)
            .collect::<Result<Vec<_>, _>>()?;
        rhs *= pow_rat(&single_sum(&vals), spec.rhs.power as usize);
    }
    Ok(ClassicalValues { lhs, rhs })
}

/// Whether the q-image of a claim reproduces the direct classical values:
/// the left sides must be equal, and the right sides equal or congruent
/// modulo the claim's power of `p` when the stated right side is a reduced
/// form of the image. `None` for claims without a q-analogue here.
pub fn pipeline_agrees(id: ClaimId, p: u64) -> Result<Option<bool>, CheckError> {
    let Some((case, target)) = id.q_case(p) else {
        return Ok(None);
    };
    let direct = classical_sum(id, p)?;
    let image = q_to_classical(&case, target)?;
    let rhs_ok = image.rhs == direct.rhs
        || vp(&(&image.rhs - &direct.rhs), p).map_or(true, |v| v >= id.exponent() as i64);
    Ok(Some(image.lhs == direct.lhs && rhs_ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(vp(&rat(50), 5), Some(2));
        assert_eq!(vp(&frac(1, 5), 5), Some(-1));
        assert_eq!(vp(&rat(0), 7), None);
        assert_eq!(vp(&frac(-18, 7), 3), Some(2));
    }

    #[test]
    fn sun_at_three() {
        let v = classical_sum(ClaimId::SunM4, 3).unwrap();
        assert_eq!(v.lhs, frac(3, 2));
        assert!(check_padic(&ClaimId::SunM4.claim(3).unwrap()).holds);
    }

    #[test]
    fn e13_at_three() {
        let claim = ClaimId::Cor16E13.claim(3).unwrap();
        assert_eq!(claim.rhs, rat(9));
        let v = check_padic(&claim);
        assert!(v.holds);
        assert!(v.min_margin().map_or(true, |m| m >= 0));
    }

    #[test]
    fn cor17b_at_five() {
        assert!(check_padic(&ClaimId::Cor17B.claim(5).unwrap()).holds);
    }

    #[test]
    fn check_examples() {
        let claim = |lhs: BigRational, rhs: BigRational, e| PadicClaim {
            id: ClaimId::SunM4,
            p: 5,
            exponent: e,
            lhs,
            rhs,
            residue: None,
        };
        assert!(check_padic(&claim(rat(3), rat(3), 9)).holds);
        let v = check_padic(&claim(rat(25), rat(0), 3));
        assert!(!v.holds);
        assert_eq!(
            v.strength,
            Strength::Padic {
                prime: 5,
                required: 3,
                achieved: Some(2)
            }
        );
    }

    #[test]
    fn residue_condition() {
        assert!(matches!(
            classical_sum(ClaimId::Cor17A, 7),
            Err(PadicError::ResidueConditionViolated { .. })
        ));
        assert_eq!(
            classical_sum(ClaimId::Cor15A, 9),
            Err(PadicError::NotOddPrime(9))
        );
    }

    #[test]
    fn binomial_rising_identity() {
        let c = central_binomials(51);
        let h = rising_over_factorial(&frac(1, 2), 51);
        for k in 0..=50 {
            assert_eq!(&c[k] / pow_rat(&rat(4), k), h[k]);
        }
    }

    #[test]
    fn pole_detected() {
        let m = CycloMonomial::one_minus_q_pow(1).inv().unwrap();
        assert_eq!(eval_monomial(&m, 1), Err(PadicError::PoleAtPoint(1)));
        assert_eq!(eval_monomial(&m, -1), Ok(frac(1, 2)));
    }

    #[test]
    fn pipelines_agree_small() {
        assert_eq!(pipeline_agrees(ClaimId::Cor16E13, 3).unwrap(), Some(true));
        assert_eq!(pipeline_agrees(ClaimId::Cor15A, 5).unwrap(), Some(true));
        assert_eq!(pipeline_agrees(ClaimId::SunM4, 5).unwrap(), None);
    }

    fn nonzero_rat() -> impl Strategy<Value = BigRational> {
        (1i64..5000, 1i64..5000, any::<bool>())
            .prop_map(|(a, b, s)| frac(if s { a } else { -a }, b))
    }

    proptest! {
        #[test]
        fn valuation_additive(x in nonzero_rat(), y in nonzero_rat(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
            prop_assert_eq!(vp(&(&x * &y), p), Some(vp(&x, p).unwrap() + vp(&y, p).unwrap()));
        }
    }
}
