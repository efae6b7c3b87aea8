//! Parametric lemmas checked by specialising the parameters to powers of q.

use std::fmt;
use std::str::FromStr;

use super::{
    check_exact, check_fraction, digest, CheckError, CheckOptions, Strength, Verdict, Witness,
};
use crate::cyclotomic::{
    neg_index, qint_indices, CycloFrac, CycloMonomial, ModFactor, Modulus, Sign,
};
use crate::polyring::RatFunc;
use crate::qterms::{exact_quotient, CaseParams, QTermError, TermId};
use crate::sums::{factored_double, factored_single, factored_triple};
use crate::termlang::{parse_term, Op, Term, TermError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Lemma {
    Lemma2_2,
    Lemma3_1,
    Lemma5_1,
    Lemma6_5,
    Lemma6_6,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown lemma `{0}`")]
pub struct UnknownLemma(pub String);

impl Lemma {
    pub const ALL: [Lemma; 5] = [
        Lemma::Lemma2_2,
        Lemma::Lemma3_1,
        Lemma::Lemma5_1,
        Lemma::Lemma6_5,
        Lemma::Lemma6_6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Lemma::Lemma2_2 => "lemma2_2",
            Lemma::Lemma3_1 => "lemma3_1",
            Lemma::Lemma5_1 => "lemma5_1",
            Lemma::Lemma6_5 => "lemma6_5",
            Lemma::Lemma6_6 => "lemma6_6",
        }
    }

    /// Checks the lemma's parameter constraints; the specialised parameters
    /// are supplied by the check itself.
    pub fn check_params(self, p: &CaseParams) -> Result<(), CheckError> {
        let with = |a: i64, b: i64| p.clone().with("a", a).with("b", b);
        match self {
            Lemma::Lemma2_2 => TermId::Lemma2_2Lhs.check_constraints(&with(0, 0))?,
            Lemma::Lemma3_1 => TermId::Lemma3_1Lhs.check_constraints(&with(0, 0))?,
            Lemma::Lemma5_1 => {
                let violation = |predicate: &str| QTermError::ConstraintViolation {
                    term: self.name().into(),
                    predicate: predicate.into(),
                };
                if p.n < 2 || p.d < 1 {
                    return Err(violation("n > 1 and d >= 1").into());
                }
                if !(0 < p.r && p.r < p.n) {
                    return Err(violation("0 < r < n").into());
                }
                if (p.n - p.r) % p.d != 0 {
                    return Err(violation("n = r (mod d)").into());
                }
            }
            Lemma::Lemma6_5 => TermId::Lemma6_5Lhs.check_constraints(&with(0, 0))?,
            Lemma::Lemma6_6 => TermId::Lemma6_6Pre.check_constraints(&with(0, 0))?,
        }
        Ok(())
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Lemma {
    type Err = UnknownLemma;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Lemma::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| UnknownLemma(s.to_string()))
    }
}

/// Exponents `j` of the sampled specialisations `a = q^j` (or `q^{2j}`).
pub fn sample_exponents(n: i64) -> [i64; 5] {
    [1, 2, 3, n + 1, n + 2]
}

/// Exponents `b` used for the second parameter of `lemma6_5`.
pub const B_SAMPLES: [i64; 3] = [0, 2, 3];

/// Collects sub-verdicts into one.
#[derive(Default)]
struct Tally {
    checks: usize,
    skipped: usize,
    failure: Option<Witness>,
    notes: Vec<String>,
}

impl Tally {
    fn record(&mut self, label: String, v: Verdict) {
        self.checks += 1;
        if !v.holds && self.failure.is_none() {
            let mut w = v.witness.expect("failing verdicts carry a witness");
            w.failed_factor = format!("{label}: {}", w.failed_factor);
            self.notes.push(format!("failed {label}"));
            self.failure = Some(w);
        }
    }

    fn skip(&mut self, label: String, reason: &str) {
        self.skipped += 1;
        self.notes.push(format!("skipped {label}: {reason}"));
    }

    fn finish(mut self) -> Verdict {
        if self.checks == 0 && self.failure.is_none() {
            self.notes.push("no admissible specialisation".into());
        }
        Verdict {
            holds: self.failure.is_none() && self.checks > 0,
            witness: self.failure,
            strength: Strength::Composite {
                checks: self.checks,
                skipped: self.skipped,
            },
            notes: self.notes,
        }
    }
}

/// Whether some denominator factor of `term` at `k` vanishes or shares a
/// factor `Phi_j`, `j` in `guard`. Factors are inspected before any
/// cancellation: a specialisation that turns a denominator into a non-unit
/// is degenerate even when a vanishing numerator hides it.
fn degenerate(term: &Term, p: &CaseParams, k: u64, guard: &[u64]) -> Result<bool, CheckError> {
    for (op, factor) in &term.items {
        let m = match factor.monomial(p, k) {
            Ok(m) => m,
            Err(TermError::ZeroDenominator { .. }) => return Ok(true),
            Err(e) => return Err(e.into()),
        };
        let bad = match op {
            Op::Div => m.is_zero() || guard.iter().any(|&j| m.phi_exponent(j) > 0),
            Op::Mul => guard.iter().any(|&j| m.phi_exponent(j) < 0),
        };
        if bad {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Values `k = 0..count` of a registry term, or `None` when the
/// specialisation is degenerate at some `k`.
fn values(
    id: TermId,
    p: &CaseParams,
    count: usize,
    guard: &[u64],
) -> Result<Option<Vec<CycloMonomial>>, CheckError> {
    let term = parse_term(id.source(), &["a", "b"])?;
    let mut out = Vec::with_capacity(count);
    for k in 0..count as u64 {
        if degenerate(&term, p, k, guard)? {
            return Ok(None);
        }
        out.push(id.monomial(p, k)?);
    }
    Ok(Some(out))
}

fn prefactor(
    id: TermId,
    p: &CaseParams,
    guard: &[u64],
) -> Result<Option<CycloMonomial>, CheckError> {
    Ok(values(id, p, 1, guard)?.map(|mut v| v.remove(0)))
}

fn predicate(holds: bool, what: &str) -> Verdict {
    Verdict {
        holds,
        witness: (!holds).then(|| Witness {
            failed_factor: what.to_string(),
            remainder_digest: String::new(),
            gcd_obstruction: None,
            remainder: None,
        }),
        strength: Strength::Composite {
            checks: 1,
            skipped: 0,
        },
        notes: Vec::new(),
    }
}

fn single_modulus(index: u64, sign: Sign) -> Modulus {
    Modulus::new(vec![ModFactor::new(index, sign, 1)], None).expect("valid modulus")
}

pub fn verify_specialization(
    lemma: Lemma,
    params: &CaseParams,
    opts: CheckOptions,
) -> Result<Verdict, CheckError> {
    lemma.check_params(params)?;
    match lemma {
        Lemma::Lemma2_2 => wang_xu(
            params,
            TermId::Lemma2_2Lhs,
            TermId::Lemma2_2Rhs,
            TermId::Eq1_7Pre,
            opts,
        ),
        Lemma::Lemma3_1 => wang_xu(
            params,
            TermId::Lemma3_1Lhs,
            TermId::Lemma3_1Rhs,
            TermId::Eq1_8Pre,
            opts,
        ),
        Lemma::Lemma5_1 => guo_schlosser(params, opts),
        Lemma::Lemma6_5 => lemma6_5(params, opts),
        Lemma::Lemma6_6 => lemma6_6(params, opts),
    }
}

/// Lemmas 2.2 and 3.1: exact at `a = q^{+-2n}` for the single sum and its
/// square, and modulo `Phi_n(-q)` at the sampled `a = q^{2j}`.
fn wang_xu(
    params: &CaseParams,
    lhs: TermId,
    rhs: TermId,
    pre: TermId,
    opts: CheckOptions,
) -> Result<Verdict, CheckError> {
    let n = params.n;
    let m = exact_quotient(n - params.r, params.d, "(n - r)/d")? as usize;
    let nn = n as usize;
    let mut tally = Tally::default();

    for a in [2 * n, -2 * n] {
        let p = params.clone().with("a", a);
        let label = format!("a=q^{a}");
        let (Some(c), Some(inner), Some(pre)) = (
            values(lhs, &p, nn, &[])?,
            values(rhs, &p, m + 1, &[])?,
            prefactor(pre, &p, &[])?,
        ) else {
            tally.skip(label, "denominator vanishes");
            continue;
        };
        let inner = factored_single(&inner);
        let single = factored_single(&c[..=m]).sub(&inner.mul_monomial(&pre));
        tally.record(format!("{label} single"), check_exact(&single, "exact"));
        let pre2 = pre.pow(2).expect("nonzero prefactor");
        let double = factored_double(&c).sub(&inner.pow(2).mul_monomial(&pre2));
        tally.record(format!("{label} double"), check_exact(&double, "exact"));
        let tail = c[m + 1..].iter().all(CycloMonomial::is_zero);
        tally.record(
            format!("{label} support"),
            predicate(tail, "c(k) = 0 for (n-r)/d < k < n"),
        );
    }

    let guard = [neg_index(n as u64)];
    let modulus = single_modulus(n as u64, Sign::Minus);
    for j in sample_exponents(n) {
        let p = params.clone().with("a", 2 * j);
        let label = format!("a=q^{}", 2 * j);
        let (Some(c), Some(inner), Some(pre)) = (
            values(lhs, &p, m + 1, &guard)?,
            values(rhs, &p, m + 1, &guard)?,
            prefactor(pre, &p, &guard)?,
        ) else {
            tally.skip(label, "denominator not coprime to the modulus");
            continue;
        };
        let diff = factored_single(&c).sub(&factored_single(&inner).mul_monomial(&pre));
        tally.record(label, check_fraction(&diff, &modulus, opts));
    }
    Ok(tally.finish())
}

/// The Guo-Schlosser reflection: for `m = (n - r)/d` and `0 <= k <= m`,
/// `(aq^r;q^d)_{m-k} / (q^d/a;q^d)_{m-k}` is congruent modulo `Phi_n(q)` to
/// `(-a)^{m-2k} (aq^r;q^d)_k / (q^d/a;q^d)_k q^{m(n-d+r)/2 + (d-r)k}`.
fn guo_schlosser(params: &CaseParams, opts: CheckOptions) -> Result<Verdict, CheckError> {
    let (n, d, r) = (params.n, params.d, params.r);
    let m = exact_quotient(n - r, d, "(n - r)/d")?;
    let shift = exact_quotient(m * (n - d + r), 2, "(n-r)(n-d+r)/(2d)")?;
    let modulus = single_modulus(n as u64, Sign::Plus);
    let guard = n as u64;
    let ratio = |j: i64, len: i64| -> Option<CycloMonomial> {
        let den = CycloMonomial::poch(d - j, d, len as u64);
        if den.is_zero() || den.phi_exponent(guard) > 0 {
            return None;
        }
        CycloMonomial::poch(r + j, d, len as u64)
            .checked_div(&den)
            .ok()
    };
    let mut tally = Tally::default();
    for j in sample_exponents(n) {
        let label = format!("a=q^{j}");
        if (0..=m).any(|k| ratio(j, k).is_none()) {
            tally.skip(label, "denominator not coprime to the modulus");
            continue;
        }
        for k in 0..=m {
            let lhs = ratio(j, m - k).expect("checked above");
            let sign = if (m - 2 * k).rem_euclid(2) == 0 {
                1
            } else {
                -1
            };
            let rhs = ratio(j, k)
                .expect("checked above")
                .mul(&CycloMonomial::q_pow(j * (m - 2 * k) + shift + (d - r) * k))
                .scale(&num_rational::BigRational::from_integer(sign.into()));
            let diff = CycloFrac::from_monomial(&lhs).sub(&CycloFrac::from_monomial(&rhs));
            tally.record(
                format!("{label} k={k}"),
                check_fraction(&diff, &modulus, opts),
            );
        }
    }
    Ok(tally.finish())
}

fn qint_guard(n: i64) -> Vec<u64> {
    qint_indices(n as u64)
}

/// `lemma6_5`: for `a = q^{+-n}` the triple sum and the truncated single sums
/// equal the closed forms; at sampled `a = q^j` the triple sum is congruent
/// to its closed form modulo `[n]`.
fn lemma6_5(params: &CaseParams, opts: CheckOptions) -> Result<Verdict, CheckError> {
    let n = params.n;
    let lhs = TermId::Lemma6_5Lhs;
    let nn = n as usize;
    let m = exact_quotient(n - 1, params.d, "(n - 1)/d")? as usize;
    let guard = qint_guard(n);
    let modulus = Modulus::new(Vec::new(), Some(n as u64)).expect("n > 1");
    let mut tally = Tally::default();
    for b in B_SAMPLES {
        for a in [n, -n] {
            let p = params.clone().with("a", a).with("b", b);
            let label = format!("b=q^{b} a=q^{a}");
            let (Some(z), Some(pre), Some(pre1)) = (
                values(lhs, &p, nn, &[])?,
                prefactor(TermId::Lemma6_5Pre, &p, &[])?,
                prefactor(TermId::Lemma6_5Pre1, &p, &[])?,
            ) else {
                tally.skip(label, "denominator vanishes");
                continue;
            };
            let pre = CycloFrac::from_monomial(&pre);
            let pre1 = CycloFrac::from_monomial(&pre1);
            tally.record(
                format!("{label} triple"),
                check_exact(&factored_triple(&z).sub(&pre), "exact"),
            );
            tally.record(
                format!("{label} single"),
                check_exact(&factored_single(&z[..=m]).sub(&pre1), "exact"),
            );
            tally.record(
                format!("{label} full single"),
                check_exact(&factored_single(&z).sub(&pre1), "exact"),
            );
        }
        for j in sample_exponents(n) {
            let p = params.clone().with("a", j).with("b", b);
            let label = format!("b=q^{b} a=q^{j}");
            let (Some(z), Some(pre)) = (
                values(lhs, &p, nn, &guard)?,
                prefactor(TermId::Lemma6_5Pre, &p, &guard)?,
            ) else {
                tally.skip(label, "denominator not coprime to the modulus");
                continue;
            };
            let diff = factored_triple(&z).sub(&CycloFrac::from_monomial(&pre));
            tally.record(label, check_fraction(&diff, &modulus, opts));
        }
    }
    Ok(tally.finish())
}

/// `lemma6_6`: at `b = q^n` and sampled `a = q^j` the triple sum and the
/// truncated single sum equal their closed forms exactly.
fn lemma6_6(params: &CaseParams, _opts: CheckOptions) -> Result<Verdict, CheckError> {
    let n = params.n;
    let lhs = TermId::Lemma6_5Lhs;
    let nn = n as usize;
    let m = exact_quotient(n - 1, params.d, "(n - 1)/d")? as usize;
    let mut tally = Tally::default();
    for j in sample_exponents(n) {
        let p = params.clone().with("a", j).with("b", n);
        let label = format!("b=q^{n} a=q^{j}");
        let (Some(z), Some(pre), Some(pre1)) = (
            values(lhs, &p, nn, &[])?,
            prefactor(TermId::Lemma6_6Pre, &p, &[])?,
            prefactor(TermId::Lemma6_6Pre1, &p, &[])?,
        ) else {
            tally.skip(label, "denominator vanishes");
            continue;
        };
        let pre = CycloFrac::from_monomial(&pre);
        let pre1 = CycloFrac::from_monomial(&pre1);
        tally.record(
            format!("{label} triple"),
            check_exact(&factored_triple(&z).sub(&pre), "exact"),
        );
        tally.record(
            format!("{label} single"),
            check_exact(&factored_single(&z[..=m]).sub(&pre1), "exact"),
        );
    }
    Ok(tally.finish())
}

/// The unit relations used to glue congruences modulo `(1 - aq^n)(a - q^n)`
/// and `b - q^n`, checked by specialisation, plus the closing identity.
pub fn check_crt_identities(n: i64, a_exp: i64, b_exp: i64) -> Verdict {
    let q = RatFunc::q_pow;
    let one = RatFunc::one();
    let qn = q(n);
    let mut tally = Tally::default();
    let exact = |tally: &mut Tally, label: String, lhs: RatFunc, rhs: RatFunc| {
        let diff = &lhs - &rhs;
        let mut v = predicate(diff.is_zero(), "exact");
        if let Some(w) = v.witness.as_mut() {
            w.remainder_digest = digest(diff.num());
        }
        tally.record(label, v);
    };
    let b = q(b_exp);
    for e in [n, -n] {
        let a = q(e);
        let left = &(&b - &qn) * &(&(&(&(&a * &b) - &one) - &(&a * &a)) + &(&a * &qn));
        let right = &(&a - &b) * &(&one - &(&a * &b));
        exact(
            &mut tally,
            format!("first relation at a=q^{e}"),
            left,
            right,
        );
    }
    let a = q(a_exp);
    let b = qn.clone();
    let left = &(&one - &(&a * &qn)) * &(&a - &qn);
    let right = &(&a - &b) * &(&one - &(&a * &b));
    exact(&mut tally, "second relation at b=q^n".into(), left, right);
    let left = &(&one - &qn) * &(&(&(&one + &(&a * &a)) - &a) - &(&a * &qn));
    let right = &(&(&one - &a) * &(&one - &a)) + &(&(&one - &(&a * &qn)) * &(&a - &qn));
    exact(&mut tally, "closing identity".into(), left, right);
    tally.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn holds(l: Lemma, p: CaseParams) -> Verdict {
        let v = verify_specialization(l, &p, CheckOptions::default()).unwrap();
        assert!(v.holds, "{l} {p}: {v:?}");
        v
    }

    #[test]
    fn lemma_2_2_and_3_1() {
        holds(Lemma::Lemma2_2, CaseParams::new(5, 3, 2));
        holds(Lemma::Lemma3_1, CaseParams::new(7, 4, 3));
    }

    #[test]
    fn lemma_5_1() {
        holds(Lemma::Lemma5_1, CaseParams::new(7, 3, 1));
        holds(Lemma::Lemma5_1, CaseParams::new(9, 4, 1));
    }

    #[test]
    fn lemma_6_5_and_6_6() {
        holds(Lemma::Lemma6_5, CaseParams::new(7, 3, 1));
        holds(Lemma::Lemma6_6, CaseParams::new(7, 3, 1));
    }

    #[test]
    fn crt() {
        for n in [3, 5, 7] {
            let v = check_crt_identities(n, 2, 3);
            assert!(v.holds, "{v:?}");
        }
    }

    #[test]
    fn names() {
        for l in Lemma::ALL {
            assert_eq!(l.name().parse::<Lemma>().unwrap(), l);
        }
        assert!("lemma9_9".parse::<Lemma>().is_err());
    }
}
