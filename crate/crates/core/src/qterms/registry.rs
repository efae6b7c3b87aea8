use std::fmt;
use std::str::FromStr;

use super::{coprime, exact_quotient, CaseParams, QTermError};
use crate::cyclotomic::CycloMonomial as M;
use crate::polyring::RatFunc;

/// A built-in summand or right-hand-side prefactor.
///
/// `*.lhs` ids are summands `c_q(k)`, `*.rhs` ids are the summands of the
/// truncated sum on the right, and `*.pre` ids are the `k`-free prefactors
/// multiplying that sum. Parametric ids read the exponents `a`, `b` of the
/// specialisations `a = q^a`, `b = q^b` from the extras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermId {
    Thm1_1Lhs,
    Thm1_1Rhs,
    Thm1_1Pre,
    Thm1_2Lhs,
    Thm1_2Rhs,
    Thm1_2Pre,
    Thm1_3Lhs,
    Thm1_3Rhs,
    Thm1_3Pre,
    Thm1_4Lhs,
    Thm1_4Rhs,
    Thm1_4Pre,
    Eq1_1Lhs,
    Eq1_1Pre,
    Eq1_2Lhs,
    Eq1_2Pre,
    Eq1_7Lhs,
    Eq1_7Rhs,
    Eq1_7Pre,
    Eq1_8Lhs,
    Eq1_8Rhs,
    Eq1_8Pre,
    Thm6_1Lhs,
    Thm6_1Rhs,
    Thm6_1Pre,
    Thm6_3Lhs,
    Thm6_3Rhs,
    Thm6_3Pre,
    Thm6_4Lhs,
    Thm6_4Pre,
    Lemma2_2Lhs,
    Lemma2_2Rhs,
    Lemma3_1Lhs,
    Lemma3_1Rhs,
    Lemma6_5Lhs,
    Lemma6_5Pre,
    Lemma6_5Pre1,
    Lemma6_6Pre,
    Lemma6_6Pre1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    OddN,
    Thm13,
    WangXu,
    Triple,
    Thm64,
    ParamA,
    ParamAB,
    ParamD3A,
}

use TermId::*;

impl TermId {
    pub const ALL: [TermId; 39] = [
        Thm1_1Lhs,
        Thm1_1Rhs,
        Thm1_1Pre,
        Thm1_2Lhs,
        Thm1_2Rhs,
        Thm1_2Pre,
        Thm1_3Lhs,
        Thm1_3Rhs,
        Thm1_3Pre,
        Thm1_4Lhs,
        Thm1_4Rhs,
        Thm1_4Pre,
        Eq1_1Lhs,
        Eq1_1Pre,
        Eq1_2Lhs,
        Eq1_2Pre,
        Eq1_7Lhs,
        Eq1_7Rhs,
        Eq1_7Pre,
        Eq1_8Lhs,
        Eq1_8Rhs,
        Eq1_8Pre,
        Thm6_1Lhs,
        Thm6_1Rhs,
        Thm6_1Pre,
        Thm6_3Lhs,
        Thm6_3Rhs,
        Thm6_3Pre,
        Thm6_4Lhs,
        Thm6_4Pre,
        Lemma2_2Lhs,
        Lemma2_2Rhs,
        Lemma3_1Lhs,
        Lemma3_1Rhs,
        Lemma6_5Lhs,
        Lemma6_5Pre,
        Lemma6_5Pre1,
        Lemma6_6Pre,
        Lemma6_6Pre1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Thm1_1Lhs => "thm1_1.lhs",
            Thm1_1Rhs => "thm1_1.rhs",
            Thm1_1Pre => "thm1_1.pre",
            Thm1_2Lhs => "thm1_2.lhs",
            Thm1_2Rhs => "thm1_2.rhs",
            Thm1_2Pre => "thm1_2.pre",
            Thm1_3Lhs => "thm1_3.lhs",
            Thm1_3Rhs => "thm1_3.rhs",
            Thm1_3Pre => "thm1_3.pre",
            Thm1_4Lhs => "thm1_4.lhs",
            Thm1_4Rhs => "thm1_4.rhs",
            Thm1_4Pre => "thm1_4.pre",
            Eq1_1Lhs => "eq1_1.lhs",
            Eq1_1Pre => "eq1_1.pre",
            Eq1_2Lhs => "eq1_2.lhs",
            Eq1_2Pre => "eq1_2.pre",
            Eq1_7Lhs => "eq1_7.lhs",
            Eq1_7Rhs => "eq1_7.rhs",
            Eq1_7Pre => "eq1_7.pre",
            Eq1_8Lhs => "eq1_8.lhs",
            Eq1_8Rhs => "eq1_8.rhs",
            Eq1_8Pre => "eq1_8.pre",
            Thm6_1Lhs => "thm6_1.lhs",
            Thm6_1Rhs => "thm6_1.rhs",
            Thm6_1Pre => "thm6_1.pre",
            Thm6_3Lhs => "thm6_3.lhs",
            Thm6_3Rhs => "thm6_3.rhs",
            Thm6_3Pre => "thm6_3.pre",
            Thm6_4Lhs => "thm6_4.lhs",
            Thm6_4Pre => "thm6_4.pre",
            Lemma2_2Lhs => "lemma2_2.lhs",
            Lemma2_2Rhs => "lemma2_2.rhs",
            Lemma3_1Lhs => "lemma3_1.lhs",
            Lemma3_1Rhs => "lemma3_1.rhs",
            Lemma6_5Lhs => "lemma6_5.lhs",
            Lemma6_5Pre => "lemma6_5.pre",
            Lemma6_5Pre1 => "lemma6_5.pre1",
            Lemma6_6Pre => "lemma6_6.pre",
            Lemma6_6Pre1 => "lemma6_6.pre1",
        }
    }

    /// Whether the term is a `k`-free prefactor.
    pub fn is_prefactor(self) -> bool {
        self.name().contains(".pre")
    }

    /// The same summand written in the term language.
    pub fn source(self) -> &'static str {
        match self {
            Thm1_1Lhs => "(-1)^k * (1+qpow(4*k + 1)) * poch(2; 4; k)^2 / (1+qpow(1)) / poch(4; 4; k)^2 * qpow(2*k^2 + k)",
            Thm1_1Rhs => "poch(2; 4; k) * qpow(2*k) / [4*k + 1] / poch(4; 4; k)",
            Thm1_1Pre | Thm1_2Pre => "[n]_q2^2 * qpow((n - 1)^2)",
            Thm1_2Lhs => "(-1)^k * (1+qpow(4*k + 1)) * poch(2; 4; k)^3 / (1+qpow(1)) / poch(4; 4; k)^3 * qpow(2*k^2 + 2*k)",
            Thm1_2Rhs => "poch(2; 4; k)^3 * qpow(2*k) / poch(4; 4; k) / poch(3; 4; k) / poch(5; 4; k)",
            Thm1_3Lhs | Eq1_7Lhs => "(-1)^k * (1+qpow(2*d*k + r)) * poch(2*r; 2*d; k)^2 / (1+qpow(r)) / poch(2*d; 2*d; k)^2 * qpow(d*k^2 + (d - r)*k)",
            Thm1_3Rhs | Eq1_7Rhs => "poch(2*r; 2*d; k) * poch(r; 2*d; k) * qpow(2*(d - r)*k) / poch(2*d; 2*d; k) / poch(2*d + r; 2*d; k)",
            Thm1_3Pre | Thm1_4Pre => "[n]_q2^2 / [r]_q2^2 * qpow(2*(n - r)*(n + r - d)/d)",
            Thm1_4Lhs | Eq1_8Lhs => "(-1)^k * qpow(d*k^2 + 2*(d - r)*k) * poch(2*r; 2*d; k)^3 / poch(2*d; 2*d; k)^3 * (1+qpow(2*d*k + r)) / (1+qpow(r))",
            Thm1_4Rhs | Eq1_8Rhs => "poch(2*r; 2*d; k)^2 * poch(d; 2*d; k) * qpow(2*(d - r)*k) / poch(2*d; 2*d; k) / poch(d + r; 2*d; k) / poch(2*d + r; 2*d; k)",
            Eq1_1Lhs | Eq1_2Lhs => "(-1)^k * qpow(k^2) * [4*k + 1] * poch(1; 2; k)^3 / poch(2; 2; k)^3",
            Eq1_1Pre => "(-1)^((n - 1)/2) * qpow((n - 1)^2/4) * [n]",
            Eq1_2Pre => "qpow((n + 1)/2) * [n]^2",
            Eq1_7Pre | Eq1_8Pre => "(-1)^((n - r)/d) * [n]_q2 / [r]_q2 * qpow((n - r)*(n + r - d)/d)",
            Thm6_1Lhs => "(-1)^k * (1+qpow(2*d*k + 1)) * poch(2; 2*d; k)^3 / (1+qpow(1)) / poch(2*d; 2*d; k)^3 * qpow(d*k^2 + 2*(d - 1)*k)",
            Thm6_1Rhs => "poch(2; 2*d; k)^2 * poch(d; 2*d; k) * qpow(2*(d - 1)*k) / poch(d + 1; 2*d; k) / poch(2*d; 2*d; k) / poch(2*d + 1; 2*d; k)",
            Thm6_1Pre | Thm6_3Pre => "(-1)^(3*(n - 1)/d) * [n]_q2^3 * qpow(3*(n - 1)*(n + 1 - d)/d)",
            Thm6_3Lhs => "(-1)^k * (1+qpow(2*d*k + 1)) * poch(2; 2*d; k)^2 / (1+qpow(1)) / poch(2*d; 2*d; k)^2 * qpow(d*k^2 + (d - 1)*k)",
            Thm6_3Rhs => "poch(2; 2*d; k) * poch(1; 2*d; k) * qpow(2*(d - 1)*k) / poch(2*d; 2*d; k) / poch(2*d + 1; 2*d; k)",
            Thm6_4Lhs => "[2*d*k + 1] * poch(1; d; k)^4 / poch(d; d; k)^4 * qpow((d - 2)*k)",
            Thm6_4Pre => "[n]^3 * qpow(3*(1 - n)/d) * poch(2; d; (n - 1)/d)^3 / poch(d; d; (n - 1)/d)^3",
            Lemma2_2Lhs => "(-1)^k * (1+qpow(2*d*k + r)) * poch(2*r + a; 2*d; k) * poch(2*r - a; 2*d; k) / (1+qpow(r)) / poch(2*d + a; 2*d; k) / poch(2*d - a; 2*d; k) * qpow(d*k^2 + (d - r)*k)",
            Lemma2_2Rhs => "poch(2*r + a; 2*d; k) * poch(2*r - a; 2*d; k) * poch(r; 2*d; k) * qpow(2*(d - r)*k) / poch(2*d; 2*d; k) / poch(2*d + r; 2*d; k) / poch(2*r; 2*d; k)",
            Lemma3_1Lhs => "(-1)^k * (1+qpow(2*d*k + r)) * poch(2*r + a; 2*d; k) * poch(2*r - a; 2*d; k) * poch(2*r; 2*d; k) / (1+qpow(r)) / poch(2*d + a; 2*d; k) / poch(2*d - a; 2*d; k) / poch(2*d; 2*d; k) * qpow(d*k^2 + 2*(d - r)*k)",
            Lemma3_1Rhs => "poch(2*r + a; 2*d; k) * poch(2*r - a; 2*d; k) * poch(d; 2*d; k) * qpow(2*(d - r)*k) / poch(2*d; 2*d; k) / poch(d + r; 2*d; k) / poch(2*d + r; 2*d; k)",
            Lemma6_5Lhs => "[2*d*k + 1] * poch(1; d; k) * poch(1 + a; d; k) * poch(1 - a; d; k) * poch(1 - b; d; k) / poch(d; d; k) / poch(d + a; d; k) / poch(d - a; d; k) / poch(d + b; d; k) * qpow(b*k + (d - 2)*k)",
            Lemma6_5Pre => "[n]^3 * qpow(3*(b - 1)*(n - 1)/d) * poch(2 - b; d; (n - 1)/d)^3 / poch(b + d; d; (n - 1)/d)^3",
            Lemma6_5Pre1 => "[n] * qpow((b - 1)*(n - 1)/d) * poch(2 - b; d; (n - 1)/d) / poch(b + d; d; (n - 1)/d)",
            Lemma6_6Pre => "[n]^3 * poch(1; d; (n - 1)/d)^3 * poch(d - 1; d; (n - 1)/d)^3 / poch(d + a; d; (n - 1)/d)^3 / poch(d - a; d; (n - 1)/d)^3",
            Lemma6_6Pre1 => "[n] * poch(1; d; (n - 1)/d) * poch(d - 1; d; (n - 1)/d) / poch(d + a; d; (n - 1)/d) / poch(d - a; d; (n - 1)/d)",
        }
    }

    fn family(self) -> Family {
        match self {
            Thm1_1Lhs | Thm1_1Rhs | Thm1_1Pre | Thm1_2Lhs | Thm1_2Rhs | Thm1_2Pre | Eq1_1Lhs
            | Eq1_1Pre | Eq1_2Lhs | Eq1_2Pre => Family::OddN,
            Thm1_3Lhs | Thm1_3Rhs | Thm1_3Pre | Thm1_4Lhs | Thm1_4Rhs | Thm1_4Pre => Family::Thm13,
            Eq1_7Lhs | Eq1_7Rhs | Eq1_7Pre | Eq1_8Lhs | Eq1_8Rhs | Eq1_8Pre => Family::WangXu,
            Thm6_1Lhs | Thm6_1Rhs | Thm6_1Pre | Thm6_3Lhs | Thm6_3Rhs | Thm6_3Pre => Family::Triple,
            Thm6_4Lhs | Thm6_4Pre => Family::Thm64,
            Lemma2_2Lhs | Lemma2_2Rhs | Lemma3_1Lhs | Lemma3_1Rhs => Family::ParamA,
            Lemma6_5Lhs | Lemma6_5Pre | Lemma6_5Pre1 => Family::ParamAB,
            Lemma6_6Pre | Lemma6_6Pre1 => Family::ParamD3A,
        }
    }

    /// Checks the parameter constraints of the statement this term belongs
    /// to, naming the first violated predicate.
    pub fn check_constraints(self, p: &CaseParams) -> Result<(), QTermError> {
        let fail = |predicate: &str| {
            Err(QTermError::ConstraintViolation {
                term: self.name().to_string(),
                predicate: predicate.to_string(),
            })
        };
        let (n, d, r) = (p.n, p.d, p.r);
        let odd_n = n % 2 != 0;
        let congruent = |m: i64| d != 0 && (n - m).rem_euclid(d) == 0;
        match self.family() {
            Family::OddN => {
                if !(odd_n && n > 1) {
                    return fail("n odd and n > 1");
                }
            }
            Family::Thm13 => {
                if !(odd_n && n > 1) {
                    return fail("n odd and n > 1");
                }
                if d < 1 {
                    return fail("d >= 1");
                }
                if !coprime(n, d) {
                    return fail("gcd(n, d) = 1");
                }
                if !congruent(r) {
                    return fail("n = r (mod d)");
                }
                if !(2 * (n - r) <= (n - 1) * d && r <= n) {
                    return fail("n - (n-1)d/2 <= r <= n");
                }
            }
            Family::WangXu => {
                if !(odd_n && n > 0) {
                    return fail("n positive and odd");
                }
                if d <= 1 {
                    return fail("d > 1");
                }
                if !coprime(n, d) {
                    return fail("gcd(n, d) = 1");
                }
                if r >= n {
                    return fail("r < n");
                }
                if !congruent(r) {
                    return fail("n = r (mod d)");
                }
            }
            Family::Triple => {
                if !(odd_n && n > 0) {
                    return fail("n positive and odd");
                }
                if d < 3 {
                    return fail("d >= 3");
                }
                if !congruent(1) {
                    return fail("n = 1 (mod d)");
                }
            }
            Family::Thm64 | Family::ParamAB | Family::ParamD3A => {
                if n <= 1 {
                    return fail("n > 1");
                }
                if d < 3 {
                    return fail("d >= 3");
                }
                if !congruent(1) {
                    return fail("n = 1 (mod d)");
                }
            }
            Family::ParamA => {
                if !(odd_n && n > 1) {
                    return fail("n odd and n > 1");
                }
                if d < 1 {
                    return fail("d >= 1");
                }
                if r >= n {
                    return fail("r < n");
                }
                if !congruent(r) {
                    return fail("n = r (mod d)");
                }
            }
        }
        match self.family() {
            Family::ParamA | Family::ParamD3A => {
                p.require("a")?;
            }
            Family::ParamAB => {
                if self != Lemma6_5Pre && self != Lemma6_5Pre1 {
                    p.require("a")?;
                }
                p.require("b")?;
            }
            _ => {}
        }
        Ok(())
    }

    /// The `k`-th value (ignored for prefactors) in factored form. Assumes
    /// constraints have been checked.
    pub fn monomial(self, p: &CaseParams, k: u64) -> Result<M, QTermError> {
        let (n, d, r) = (p.n, p.d, p.r);
        let ki = k as i64;
        let a = || p.require("a");
        let b = || p.require("b");
        let ratio = |num: Vec<M>, den: Vec<M>| -> Result<M, QTermError> {
            let num = product(num);
            let den = product(den);
            num.checked_div(&den)
                .map_err(|_| QTermError::ZeroDenominator { k })
        };
        let poch_pow = |a0: i64, step: i64, len: u64, e: i64| {
            M::poch(a0, step, len).pow(e).expect("positive power")
        };
        let value = match self {
            Thm1_1Lhs | Thm1_2Lhs => {
                let e = if self == Thm1_1Lhs { 2 } else { 3 };
                ratio(
                    vec![
                        sign(ki),
                        M::one_plus_q_pow(4 * ki + 1),
                        poch_pow(2, 4, k, e),
                        M::q_pow(2 * ki * ki + (e - 1) * ki),
                    ],
                    vec![M::one_plus_q_pow(1), poch_pow(4, 4, k, e)],
                )?
            }
            Thm1_1Rhs => ratio(
                vec![M::poch(2, 4, k), M::q_pow(2 * ki)],
                vec![M::q_int(4 * ki + 1, 1), M::poch(4, 4, k)],
            )?,
            Thm1_2Rhs => ratio(
                vec![poch_pow(2, 4, k, 3), M::q_pow(2 * ki)],
                vec![M::poch(4, 4, k), M::poch(3, 4, k), M::poch(5, 4, k)],
            )?,
            Thm1_1Pre | Thm1_2Pre => product(vec![
                M::q_int(n, 2).pow(2).unwrap(),
                M::q_pow((n - 1) * (n - 1)),
            ]),
            Thm1_3Lhs | Eq1_7Lhs | Thm1_4Lhs | Eq1_8Lhs => {
                let cube = matches!(self, Thm1_4Lhs | Eq1_8Lhs);
                let (e, lin) = if cube { (3, 2 * (d - r)) } else { (2, d - r) };
                ratio(
                    vec![
                        sign(ki),
                        M::one_plus_q_pow(2 * d * ki + r),
                        poch_pow(2 * r, 2 * d, k, e),
                        M::q_pow(d * ki * ki + lin * ki),
                    ],
                    vec![M::one_plus_q_pow(r), poch_pow(2 * d, 2 * d, k, e)],
                )?
            }
            Thm1_3Rhs | Eq1_7Rhs => ratio(
                vec![
                    M::poch(2 * r, 2 * d, k),
                    M::poch(r, 2 * d, k),
                    M::q_pow(2 * (d - r) * ki),
                ],
                vec![M::poch(2 * d, 2 * d, k), M::poch(2 * d + r, 2 * d, k)],
            )?,
            Thm1_4Rhs | Eq1_8Rhs => ratio(
                vec![
                    poch_pow(2 * r, 2 * d, k, 2),
                    M::poch(d, 2 * d, k),
                    M::q_pow(2 * (d - r) * ki),
                ],
                vec![
                    M::poch(2 * d, 2 * d, k),
                    M::poch(d + r, 2 * d, k),
                    M::poch(2 * d + r, 2 * d, k),
                ],
            )?,
            Thm1_3Pre | Thm1_4Pre => {
                let e = exact_quotient(2 * (n - r) * (n + r - d), d, "2(n-r)(n+r-d)/d")?;
                ratio(
                    vec![M::q_int(n, 2).pow(2).unwrap(), M::q_pow(e)],
                    vec![M::q_int(r, 2).pow(2).unwrap()],
                )?
            }
            Eq1_1Lhs | Eq1_2Lhs => ratio(
                vec![
                    sign(ki),
                    M::q_pow(ki * ki),
                    M::q_int(4 * ki + 1, 1),
                    poch_pow(1, 2, k, 3),
                ],
                vec![poch_pow(2, 2, k, 3)],
            )?,
            Eq1_1Pre => {
                let h = exact_quotient(n - 1, 2, "(n-1)/2")?;
                let e = exact_quotient((n - 1) * (n - 1), 4, "(n-1)^2/4")?;
                product(vec![sign(h), M::q_pow(e), M::q_int(n, 1)])
            }
            Eq1_2Pre => {
                let e = exact_quotient(n + 1, 2, "(n+1)/2")?;
                product(vec![M::q_pow(e), M::q_int(n, 1).pow(2).unwrap()])
            }
            Eq1_7Pre | Eq1_8Pre => {
                let m = exact_quotient(n - r, d, "(n-r)/d")?;
                let e = exact_quotient((n - r) * (n + r - d), d, "(n-r)(n+r-d)/d")?;
                ratio(
                    vec![sign(m), M::q_int(n, 2), M::q_pow(e)],
                    vec![M::q_int(r, 2)],
                )?
            }
            Thm6_1Lhs | Thm6_3Lhs => {
                let (e, lin) = if self == Thm6_1Lhs {
                    (3, 2 * (d - 1))
                } else {
                    (2, d - 1)
                };
                ratio(
                    vec![
                        sign(ki),
                        M::one_plus_q_pow(2 * d * ki + 1),
                        poch_pow(2, 2 * d, k, e),
                        M::q_pow(d * ki * ki + lin * ki),
                    ],
                    vec![M::one_plus_q_pow(1), poch_pow(2 * d, 2 * d, k, e)],
                )?
            }
            Thm6_1Rhs => ratio(
                vec![
                    poch_pow(2, 2 * d, k, 2),
                    M::poch(d, 2 * d, k),
                    M::q_pow(2 * (d - 1) * ki),
                ],
                vec![
                    M::poch(d + 1, 2 * d, k),
                    M::poch(2 * d, 2 * d, k),
                    M::poch(2 * d + 1, 2 * d, k),
                ],
            )?,
            Thm6_3Rhs => ratio(
                vec![
                    M::poch(2, 2 * d, k),
                    M::poch(1, 2 * d, k),
                    M::q_pow(2 * (d - 1) * ki),
                ],
                vec![M::poch(2 * d, 2 * d, k), M::poch(2 * d + 1, 2 * d, k)],
            )?,
            Thm6_1Pre | Thm6_3Pre => {
                let s = exact_quotient(3 * (n - 1), d, "3(n-1)/d")?;
                let e = exact_quotient(3 * (n - 1) * (n + 1 - d), d, "3(n-1)(n+1-d)/d")?;
                product(vec![sign(s), M::q_int(n, 2).pow(3).unwrap(), M::q_pow(e)])
            }
            Thm6_4Lhs => ratio(
                vec![
                    M::q_int(2 * d * ki + 1, 1),
                    poch_pow(1, d, k, 4),
                    M::q_pow((d - 2) * ki),
                ],
                vec![poch_pow(d, d, k, 4)],
            )?,
            Thm6_4Pre => {
                let m = exact_quotient(n - 1, d, "(n-1)/d")? as u64;
                let e = exact_quotient(3 * (1 - n), d, "3(1-n)/d")?;
                ratio(
                    vec![
                        M::q_int(n, 1).pow(3).unwrap(),
                        M::q_pow(e),
                        poch_pow(2, d, m, 3),
                    ],
                    vec![poch_pow(d, d, m, 3)],
                )?
            }
            Lemma2_2Lhs | Lemma3_1Lhs => {
                let a = a()?;
                let full = self == Lemma3_1Lhs;
                let mut num = vec![
                    sign(ki),
                    M::one_plus_q_pow(2 * d * ki + r),
                    M::poch(2 * r + a, 2 * d, k),
                    M::poch(2 * r - a, 2 * d, k),
                ];
                let mut den = vec![
                    M::one_plus_q_pow(r),
                    M::poch(2 * d + a, 2 * d, k),
                    M::poch(2 * d - a, 2 * d, k),
                ];
                if full {
                    num.push(M::poch(2 * r, 2 * d, k));
                    den.push(M::poch(2 * d, 2 * d, k));
                    num.push(M::q_pow(d * ki * ki + 2 * (d - r) * ki));
                } else {
                    num.push(M::q_pow(d * ki * ki + (d - r) * ki));
                }
                ratio(num, den)?
            }
            Lemma2_2Rhs => {
                let a = a()?;
                ratio(
                    vec![
                        M::poch(2 * r + a, 2 * d, k),
                        M::poch(2 * r - a, 2 * d, k),
                        M::poch(r, 2 * d, k),
                        M::q_pow(2 * (d - r) * ki),
                    ],
                    vec![
                        M::poch(2 * d, 2 * d, k),
                        M::poch(2 * d + r, 2 * d, k),
                        M::poch(2 * r, 2 * d, k),
                    ],
                )?
            }
            Lemma3_1Rhs => {
                let a = a()?;
                ratio(
                    vec![
                        M::poch(2 * r + a, 2 * d, k),
                        M::poch(2 * r - a, 2 * d, k),
                        M::poch(d, 2 * d, k),
                        M::q_pow(2 * (d - r) * ki),
                    ],
                    vec![
                        M::poch(2 * d, 2 * d, k),
                        M::poch(d + r, 2 * d, k),
                        M::poch(2 * d + r, 2 * d, k),
                    ],
                )?
            }
            Lemma6_5Lhs => {
                let (a, b) = (a()?, b()?);
                ratio(
                    vec![
                        M::q_int(2 * d * ki + 1, 1),
                        M::poch(1, d, k),
                        M::poch(1 + a, d, k),
                        M::poch(1 - a, d, k),
                        M::poch(1 - b, d, k),
                        M::q_pow(b * ki + (d - 2) * ki),
                    ],
                    vec![
                        M::poch(d, d, k),
                        M::poch(d + a, d, k),
                        M::poch(d - a, d, k),
                        M::poch(d + b, d, k),
                    ],
                )?
            }
            Lemma6_5Pre | Lemma6_5Pre1 => {
                let b = b()?;
                let m = exact_quotient(n - 1, d, "(n-1)/d")?;
                let e = if self == Lemma6_5Pre { 3 } else { 1 };
                ratio(
                    vec![
                        M::q_int(n, 1).pow(e).unwrap(),
                        M::q_pow(e * (b - 1) * m),
                        poch_pow(2 - b, d, m as u64, e),
                    ],
                    vec![poch_pow(b + d, d, m as u64, e)],
                )?
            }
            Lemma6_6Pre | Lemma6_6Pre1 => {
                let a = a()?;
                let m = exact_quotient(n - 1, d, "(n-1)/d")? as u64;
                let e = if self == Lemma6_6Pre { 3 } else { 1 };
                ratio(
                    vec![
                        M::q_int(n, 1).pow(e).unwrap(),
                        poch_pow(1, d, m, e),
                        poch_pow(d - 1, d, m, e),
                    ],
                    vec![poch_pow(d + a, d, m, e), poch_pow(d - a, d, m, e)],
                )?
            }
        };
        Ok(value)
    }
}

fn sign(e: i64) -> M {
    if e.rem_euclid(2) == 0 {
        M::one()
    } else {
        M::from_int(-1)
    }
}

fn product(parts: Vec<M>) -> M {
    let mut acc = M::one();
    for p in &parts {
        acc.mul_assign(p);
    }
    acc
}

impl fmt::Display for TermId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown built-in term `{0}`")]
pub struct UnknownTerm(pub String);

impl FromStr for TermId {
    type Err = UnknownTerm;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TermId::ALL
            .iter()
            .copied()
            .find(|t| t.name() == s)
            .ok_or_else(|| UnknownTerm(s.to_string()))
    }
}

/// Checks constraints once and returns a generator for the factored values.
pub fn builtin_monomial(
    id: TermId,
    params: &CaseParams,
) -> Result<impl Fn(u64) -> Result<M, QTermError> + Send + Sync, QTermError> {
    id.check_constraints(params)?;
    let params = params.clone();
    Ok(move |k| id.monomial(&params, k))
}

/// Checks constraints once and returns a generator of exact `RatFunc` values.
pub fn builtin_term(
    id: TermId,
    params: &CaseParams,
) -> Result<impl Fn(u64) -> Result<RatFunc, QTermError> + Send + Sync, QTermError> {
    let g = builtin_monomial(id, params)?;
    Ok(move |k| g(k).map(|m| m.to_ratfunc()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::IntPoly;

    fn poly(c: &[i64]) -> RatFunc {
        RatFunc::from_poly(IntPoly::from_i64s(c))
    }

    #[test]
    fn names_round_trip() {
        for id in TermId::ALL {
            assert_eq!(id.name().parse::<TermId>().unwrap(), id);
        }
        assert!("thm9_9.lhs".parse::<TermId>().is_err());
    }

    #[test]
    fn thm1_1_first_terms() {
        let p = CaseParams::new(3, 2, 1);
        let c = builtin_term(Thm1_1Lhs, &p).unwrap();
        assert!(c(0).unwrap().is_one());
        // -(1+q^5)(1-q^2)^2 q^3 / ((1+q)(1-q^4)^2)
        let num = poly(&[1, 0, 0, 0, 0, 1]) * poly(&[1, 0, -1]).pow(2).unwrap() * RatFunc::q_pow(3);
        let den = poly(&[1, 1]) * poly(&[1, 0, 0, 0, -1]).pow(2).unwrap();
        assert_eq!(c(1).unwrap(), -(num / den));
    }

    #[test]
    fn thm6_4_starts_at_one() {
        for d in 3..6 {
            let p = CaseParams::new(1 + d, d, 1);
            assert!(builtin_term(Thm6_4Lhs, &p).unwrap()(0).unwrap().is_one());
        }
    }

    #[test]
    fn every_summand_starts_at_one() {
        let p = CaseParams::new(7, 3, 1).with("a", 4).with("b", 2);
        for id in TermId::ALL.into_iter().filter(|t| !t.is_prefactor()) {
            assert!(id.monomial(&p, 0).unwrap().to_ratfunc().is_one(), "{id}");
        }
    }

    #[test]
    fn constraint_violations_are_named() {
        let bad = CaseParams::new(5, 3, 1);
        let err = builtin_term(Thm1_3Lhs, &bad).err().unwrap();
        assert_eq!(
            err,
            QTermError::ConstraintViolation {
                term: "thm1_3.lhs".into(),
                predicate: "n = r (mod d)".into()
            }
        );
        assert!(builtin_term(Thm1_1Lhs, &CaseParams::new(4, 2, 1)).is_err());
        assert!(builtin_term(Thm6_4Lhs, &CaseParams::new(4, 3, 1)).is_ok());
        assert_eq!(
            builtin_term(Lemma2_2Lhs, &CaseParams::new(5, 3, 2)).err(),
            Some(QTermError::MissingParameter("a".into()))
        );
    }

    #[test]
    fn support_vanishes_after_specialisation() {
        // c_q(k, q^{2n}) = 0 for (n-r)/d < k <= n-1
        for (n, d, r) in [(5, 3, 2), (7, 3, 1), (7, 4, 3), (9, 4, 1), (11, 3, 2)] {
            let p = CaseParams::new(n, d, r).with("a", 2 * n);
            let m = (n - r) / d;
            for k in 0..n as u64 {
                let v = Lemma2_2Lhs.monomial(&p, k).unwrap();
                assert_eq!(v.is_zero(), k as i64 > m, "(n,d,r)=({n},{d},{r}) k={k}");
            }
        }
    }
}
