use std::fmt;

use rayon::prelude::*;

use super::{check_fraction, CheckError, CheckOptions, Lemma, Verdict};
use crate::cyclotomic::{CycloFrac, CycloMonomial, Modulus};
use crate::padic::ClaimId;
use crate::qterms::{CaseParams, TermId};
use crate::sums::{factored_double, factored_single, factored_triple};
use crate::termlang::{parse_form, parse_term, Form, ModulusExpr, Term};

/// A summand or prefactor, either from the registry or parsed source.
#[derive(Clone, Debug)]
pub enum TermSource {
    Builtin(TermId),
    Parsed { source: String, term: Term },
}

impl TermSource {
    pub fn parse(source: &str, extras: &[&str]) -> Result<Self, CheckError> {
        Ok(TermSource::Parsed {
            source: source.trim().to_string(),
            term: parse_term(source, extras)?,
        })
    }

    pub fn check(&self, params: &CaseParams) -> Result<(), CheckError> {
        if let TermSource::Builtin(id) = self {
            id.check_constraints(params)?;
        }
        Ok(())
    }

    pub fn monomial(&self, params: &CaseParams, k: u64) -> Result<CycloMonomial, CheckError> {
        Ok(match self {
            TermSource::Builtin(id) => id.monomial(params, k)?,
            TermSource::Parsed { term, .. } => term.monomial(params, k)?,
        })
    }

    /// Values at `k = 0, ..., count - 1`, computed in parallel.
    pub fn values(
        &self,
        params: &CaseParams,
        count: usize,
    ) -> Result<Vec<CycloMonomial>, CheckError> {
        (0..count as u64)
            .into_par_iter()
            .map(|k| self.monomial(params, k))
            .collect()
    }
}

impl fmt::Display for TermSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermSource::Builtin(id) => write!(f, "{id}"),
            TermSource::Parsed { source, .. } => write!(f, "{source}"),
        }
    }
}

/// `sum_{k=0}^{upper} term(k)`, or the convolution built from those values.
#[derive(Clone, Debug)]
pub struct SumSpec {
    pub term: TermSource,
    pub upper: Form,
}

impl SumSpec {
    pub fn new(term: TermSource, upper: &str) -> Result<Self, CheckError> {
        Ok(SumSpec {
            term,
            upper: parse_form(upper, &[])?,
        })
    }

    pub fn builtin(id: TermId, upper: &str) -> Self {
        Self::new(TermSource::Builtin(id), upper).expect("shipped bound parses")
    }

    /// Number of terms, zero when the bound is negative.
    pub fn count(&self, params: &CaseParams) -> Result<usize, CheckError> {
        Ok((self.upper.eval(params, 0)? + 1).max(0) as usize)
    }
}

/// `prefactor * (inner sum)^power`.
#[derive(Clone, Debug)]
pub struct RhsSpec {
    pub prefactor: Option<TermSource>,
    pub inner: Option<SumSpec>,
    pub power: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Single,
    Double,
    Triple,
}

#[derive(Clone, Debug)]
pub struct CongruenceSpec {
    pub shape: Shape,
    pub lhs: SumSpec,
    pub rhs: RhsSpec,
    pub modulus: ModulusExpr,
}

#[derive(Clone, Debug)]
pub enum CaseBody {
    Congruence(CongruenceSpec),
    Specialization(Lemma),
    /// A classical claim; the prime is the case's `n`.
    Padic(ClaimId),
    /// The unit relations behind the CRT step; uses extras `a` and `b`.
    Crt,
}

#[derive(Clone, Debug)]
pub struct CaseSpec {
    pub id: String,
    pub params: CaseParams,
    pub notes: String,
    /// Statement whose parameter constraints apply, for parsed summands.
    pub constraints: Option<TermId>,
    pub body: CaseBody,
}

impl CaseSpec {
    pub fn kind(&self) -> &'static str {
        match &self.body {
            CaseBody::Congruence(c) => match c.shape {
                Shape::Single => "single_sum",
                Shape::Double => "double_sum",
                Shape::Triple => "triple_sum",
            },
            CaseBody::Specialization(_) => "specialization",
            CaseBody::Padic(_) => "padic",
            CaseBody::Crt => "crt",
        }
    }

    /// Checks every parameter constraint the case depends on without
    /// evaluating anything expensive.
    pub fn validate(&self) -> Result<(), CheckError> {
        let p = &self.params;
        if let Some(id) = self.constraints {
            id.check_constraints(p)?;
        }
        match &self.body {
            CaseBody::Congruence(c) => {
                c.lhs.term.check(p)?;
                c.lhs.count(p)?;
                if let Some(pre) = &c.rhs.prefactor {
                    pre.check(p)?;
                }
                if let Some(inner) = &c.rhs.inner {
                    inner.term.check(p)?;
                    inner.count(p)?;
                }
                c.modulus.build(p)?;
            }
            CaseBody::Specialization(l) => l.check_params(p)?,
            CaseBody::Padic(claim) => {
                let prime = u64::try_from(p.n)
                    .map_err(|_| CheckError::InvalidCase(format!("prime {} is negative", p.n)))?;
                claim.admit(prime)?;
            }
            CaseBody::Crt => {
                p.require("a")?;
                p.require("b")?;
            }
        }
        Ok(())
    }

    /// Number of left-hand summands evaluated, where meaningful.
    pub fn term_count(&self) -> Option<usize> {
        match &self.body {
            CaseBody::Congruence(c) => c.lhs.count(&self.params).ok(),
            _ => None,
        }
    }
}

/// Both sides of a congruence case in factored form.
#[derive(Clone, Debug)]
pub struct EvaluatedSides {
    pub lhs: CycloFrac,
    pub rhs: CycloFrac,
    pub modulus: Modulus,
    pub term_count: usize,
}

pub fn evaluate_congruence(
    spec: &CongruenceSpec,
    params: &CaseParams,
) -> Result<EvaluatedSides, CheckError> {
    spec.lhs.term.check(params)?;
    let modulus = spec.modulus.build(params)?;
    let count = spec.lhs.count(params)?;
    let terms = spec.lhs.term.values(params, count)?;
    let lhs = match spec.shape {
        Shape::Single => factored_single(&terms),
        Shape::Double => factored_double(&terms),
        Shape::Triple => factored_triple(&terms),
    };
    let pre = match &spec.rhs.prefactor {
        Some(p) => {
            p.check(params)?;
            p.monomial(params, 0)?
        }
        None => CycloMonomial::one(),
    };
    let rhs = match &spec.rhs.inner {
        Some(inner) => {
            inner.term.check(params)?;
            let vals = inner.term.values(params, inner.count(params)?)?;
            factored_single(&vals)
                .pow(spec.rhs.power)
                .mul_monomial(&pre)
        }
        None => CycloFrac::from_monomial(&pre),
    };
    Ok(EvaluatedSides {
        lhs,
        rhs,
        modulus,
        term_count: count,
    })
}

pub fn verify_case(case: &CaseSpec, opts: CheckOptions) -> Result<Verdict, CheckError> {
    case.validate()?;
    match &case.body {
        CaseBody::Congruence(spec) => {
            let sides = evaluate_congruence(spec, &case.params)?;
            Ok(check_fraction(
                &sides.lhs.sub(&sides.rhs),
                &sides.modulus,
                opts,
            ))
        }
        CaseBody::Specialization(lemma) => super::verify_specialization(*lemma, &case.params, opts),
        CaseBody::Padic(claim) => {
            let p = u64::try_from(case.params.n).map_err(|_| {
                CheckError::InvalidCase(format!("prime {} is negative", case.params.n))
            })?;
            Ok(crate::padic::check_padic(&claim.claim(p)?))
        }
        CaseBody::Crt => {
            let a = case.params.require("a")?;
            let b = case.params.require("b")?;
            Ok(super::check_crt_identities(case.params.n, a, b))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qterms::QTermError;
    use crate::termlang::parse_modulus;

    fn thm1_1(n: i64) -> CaseSpec {
        CaseSpec {
            id: format!("thm1_1[n={n}]"),
            params: CaseParams::new(n, 2, 1),
            notes: String::new(),
            constraints: None,
            body: CaseBody::Congruence(CongruenceSpec {
                shape: Shape::Double,
                lhs: SumSpec::builtin(TermId::Thm1_1Lhs, "n - 1"),
                rhs: RhsSpec {
                    prefactor: Some(TermSource::Builtin(TermId::Thm1_1Pre)),
                    inner: Some(SumSpec::builtin(TermId::Thm1_1Rhs, "(n - 1)/2")),
                    power: 2,
                },
                modulus: parse_modulus("phi(n,-)^3 * phi(n,+)^2", &[]).unwrap(),
            }),
        }
    }

    #[test]
    fn theorem_1_1_small() {
        let v = verify_case(&thm1_1(3), CheckOptions::default()).unwrap();
        assert!(v.holds, "{v:?}");
        assert_eq!(thm1_1(3).kind(), "double_sum");
        assert_eq!(thm1_1(3).term_count(), Some(3));
    }

    #[test]
    fn raised_exponent_fails() {
        let mut case = thm1_1(5);
        if let CaseBody::Congruence(c) = &mut case.body {
            c.modulus = parse_modulus("phi(n,-)^3 * phi(n,+)^3", &[]).unwrap();
        }
        let v = verify_case(&case, CheckOptions::default()).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness.unwrap().failed_factor, "phi(5,+)^3");
    }

    #[test]
    fn constraint_violation() {
        let mut case = thm1_1(5);
        case.params = CaseParams::new(5, 3, 1);
        if let CaseBody::Congruence(c) = &mut case.body {
            c.lhs = SumSpec::builtin(TermId::Thm1_3Lhs, "n - 1");
        }
        match verify_case(&case, CheckOptions::default()) {
            Err(CheckError::Term(QTermError::ConstraintViolation { predicate, .. })) => {
                assert_eq!(predicate, "n = r (mod d)")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parsed_source_matches_builtin() {
        let mut case = thm1_1(5);
        if let CaseBody::Congruence(c) = &mut case.body {
            c.lhs.term = TermSource::parse(TermId::Thm1_1Lhs.source(), &[]).unwrap();
        }
        case.constraints = Some(TermId::Thm1_1Lhs);
        assert!(verify_case(&case, CheckOptions::default()).unwrap().holds);
    }
}
