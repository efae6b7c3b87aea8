//! Shipped instances of every statement, grouped into named suites.

use super::{
    CaseBody, CaseSpec, CheckError, CongruenceSpec, Lemma, RhsSpec, Shape, SumSpec, TermSource,
};
use crate::padic::ClaimId;
use crate::qterms::{CaseParams, TermId};
use crate::termlang::parse_modulus;

pub const SUITES: [&str; 11] = [
    "thm1_1", "thm1_2", "thm1_3", "thm1_4", "thm6_1", "thm6_3", "thm6_4", "cited", "padic",
    "lemmas", "all",
];

pub const ODD_N: [i64; 7] = [3, 5, 7, 9, 11, 13, 15];
pub const THM13_TRIPLES: [(i64, i64, i64); 6] = [
    (5, 3, 2),
    (7, 3, 1),
    (7, 4, 3),
    (9, 4, 1),
    (11, 3, 2),
    (11, 4, 3),
];
pub const TRIPLE_ND: [(i64, i64); 5] = [(7, 3), (13, 3), (5, 4), (9, 4), (13, 4)];
pub const THM64_ND: [(i64, i64); 5] = [(4, 3), (7, 3), (10, 3), (5, 4), (9, 4)];
pub const COR67_N: [i64; 4] = [4, 7, 10, 13];
pub const COR68_N: [i64; 3] = [5, 9, 13];
pub const CITED_N: [i64; 3] = [3, 5, 7];
pub const CRT_N: [i64; 3] = [3, 5, 7];
pub const CRT_EXPONENTS: [i64; 3] = [1, 2, 3];

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error("unknown suite `{0}`")]
    Unknown(String),
    #[error("no admissible case in suite `{suite}` for the given parameters")]
    Empty { suite: String },
    #[error("{id}: {source}")]
    Invalid { id: String, source: CheckError },
}

fn sum(id: TermId, upper: &str) -> SumSpec {
    SumSpec::builtin(id, upper)
}

fn congruence(
    shape: Shape,
    lhs: SumSpec,
    pre: TermSource,
    inner: Option<(SumSpec, u32)>,
    modulus: &str,
) -> CongruenceSpec {
    let (inner, power) = match inner {
        Some((s, p)) => (Some(s), p),
        None => (None, 1),
    };
    CongruenceSpec {
        shape,
        lhs,
        rhs: RhsSpec {
            prefactor: Some(pre),
            inner,
            power,
        },
        modulus: parse_modulus(modulus, &[]).expect("shipped modulus parses"),
    }
}

/// The congruence of a named statement at the given parameters.
pub fn statement_case(statement: &str, params: CaseParams) -> Option<CaseSpec> {
    use TermId::*;
    let b = TermSource::Builtin;
    let parsed = |src: &str| TermSource::parse(src, &[]).expect("shipped source parses");
    let (spec, constraints) = match statement {
        "thm1_1" | "thm1_2" => {
            let (l, r, p, m) = if statement == "thm1_1" {
                (Thm1_1Lhs, Thm1_1Rhs, Thm1_1Pre, "phi(n,-)^3 * phi(n,+)^2")
            } else {
                (Thm1_2Lhs, Thm1_2Rhs, Thm1_2Pre, "phi(n,-)^4 * phi(n,+)^2")
            };
            let inner = Some((sum(r, "(n - 1)/2"), 2));
            (
                congruence(Shape::Double, sum(l, "n - 1"), b(p), inner, m),
                None,
            )
        }
        "thm1_3" | "thm1_4" => {
            let (l, r, p, m) = if statement == "thm1_3" {
                (Thm1_3Lhs, Thm1_3Rhs, Thm1_3Pre, "phi(n,-)^2 * phi(n,+)^2")
            } else {
                (Thm1_4Lhs, Thm1_4Rhs, Thm1_4Pre, "phi(n,-)^3 * phi(n,+)^2")
            };
            let inner = Some((sum(r, "(n - r)/d"), 2));
            (
                congruence(Shape::Double, sum(l, "n - 1"), b(p), inner, m),
                None,
            )
        }
        "thm6_1" | "thm6_3" => {
            let (l, r, p, m) = if statement == "thm6_1" {
                (Thm6_1Lhs, Thm6_1Rhs, Thm6_1Pre, "phi(n,-)^3 * phi(n,+)^2")
            } else {
                (Thm6_3Lhs, Thm6_3Rhs, Thm6_3Pre, "phi(n,-)^2 * phi(n,+)^2")
            };
            let inner = Some((sum(r, "(n - 1)/d"), 3));
            (
                congruence(Shape::Triple, sum(l, "n - 1"), b(p), inner, m),
                None,
            )
        }
        "thm6_4" => (
            congruence(
                Shape::Triple,
                sum(Thm6_4Lhs, "n - 1"),
                b(Thm6_4Pre),
                None,
                "[n] * phi(n,+)^3",
            ),
            None,
        ),
        "cor6_7" | "cor6_8" => {
            let (lhs, pre) = if statement == "cor6_7" {
                (
                    "[6*k + 1] * poch(1; 3; k)^4 / poch(3; 3; k)^4 * qpow(k)",
                    "[n]^3 * qpow(1 - n) * poch(2; 3; (n - 1)/3)^3 / poch(3; 3; (n - 1)/3)^3",
                )
            } else {
                (
                    "[8*k + 1] * poch(1; 4; k)^4 / poch(4; 4; k)^4 * qpow(2*k)",
                    "[n]^3 * qpow(3*(1 - n)/4) * poch(2; 4; (n - 1)/4)^3 / poch(4; 4; (n - 1)/4)^3",
                )
            };
            let lhs = SumSpec::new(parsed(lhs), "n - 1").expect("shipped bound parses");
            (
                congruence(Shape::Triple, lhs, parsed(pre), None, "[n] * phi(n,+)^3"),
                Some(Thm6_4Lhs),
            )
        }
        "eq1_1" => (
            congruence(
                Shape::Single,
                sum(Eq1_1Lhs, "(n - 1)/2"),
                b(Eq1_1Pre),
                None,
                "[n] * phi(n,+)^2",
            ),
            None,
        ),
        "eq1_2" => (
            congruence(
                Shape::Double,
                sum(Eq1_2Lhs, "n - 1"),
                b(Eq1_2Pre),
                None,
                "[n] * phi(n,+)^2",
            ),
            None,
        ),
        "eq1_7" | "eq1_8" => {
            let (l, r, p) = if statement == "eq1_7" {
                (Eq1_7Lhs, Eq1_7Rhs, Eq1_7Pre)
            } else {
                (Eq1_8Lhs, Eq1_8Rhs, Eq1_8Pre)
            };
            let inner = Some((sum(r, "(n - r)/d"), 1));
            (
                congruence(
                    Shape::Single,
                    sum(l, "(n - r)/d"),
                    b(p),
                    inner,
                    "phi(n,-)^3 * phi(n,+)^2",
                ),
                None,
            )
        }
        _ => return None,
    };
    Some(CaseSpec {
        id: format!("{statement}[{params}]"),
        params,
        notes: String::new(),
        constraints,
        body: CaseBody::Congruence(spec),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Entry {
    Statement(&'static str),
    Lemma(Lemma),
    Claim(ClaimId),
    Crt,
}

fn build(entry: Entry, params: CaseParams) -> CaseSpec {
    let case = |id: String, body: CaseBody| CaseSpec {
        id,
        params: params.clone(),
        notes: String::new(),
        constraints: None,
        body,
    };
    match entry {
        Entry::Statement(s) => statement_case(s, params.clone()).expect("known statement"),
        Entry::Lemma(l) => case(format!("{l}[{params}]"), CaseBody::Specialization(l)),
        Entry::Claim(c) => case(format!("{c}[p={}]", params.n), CaseBody::Padic(c)),
        Entry::Crt => {
            let a = params.get("a").unwrap_or(0);
            let b = params.get("b").unwrap_or(0);
            case(format!("crt[n={},a={a},b={b}]", params.n), CaseBody::Crt)
        }
    }
}

fn defaults(suite: &str) -> Option<Vec<(Entry, CaseParams)>> {
    use Entry::*;
    let odd = |s| {
        ODD_N
            .iter()
            .map(move |&n| (Statement(s), CaseParams::new(n, 2, 1)))
    };
    let triples = |e: Entry| {
        THM13_TRIPLES
            .iter()
            .map(move |&(n, d, r)| (e, CaseParams::new(n, d, r)))
    };
    let pairs = |e: Entry, list: &'static [(i64, i64)]| {
        list.iter()
            .map(move |&(n, d)| (e, CaseParams::new(n, d, 1)))
    };
    let list: Vec<(Entry, CaseParams)> = match suite {
        "thm1_1" => odd("thm1_1").collect(),
        "thm1_2" => odd("thm1_2").collect(),
        "thm1_3" => triples(Statement("thm1_3")).collect(),
        "thm1_4" => triples(Statement("thm1_4")).collect(),
        "thm6_1" => pairs(Statement("thm6_1"), &TRIPLE_ND).collect(),
        "thm6_3" => pairs(Statement("thm6_3"), &TRIPLE_ND).collect(),
        "thm6_4" => pairs(Statement("thm6_4"), &THM64_ND)
            .chain(
                COR67_N
                    .iter()
                    .map(|&n| (Statement("cor6_7"), CaseParams::new(n, 3, 1))),
            )
            .chain(
                COR68_N
                    .iter()
                    .map(|&n| (Statement("cor6_8"), CaseParams::new(n, 4, 1))),
            )
            .collect(),
        "cited" => CITED_N
            .iter()
            .map(|&n| (Statement("eq1_1"), CaseParams::new(n, 2, 1)))
            .chain(
                CITED_N
                    .iter()
                    .map(|&n| (Statement("eq1_2"), CaseParams::new(n, 2, 1))),
            )
            .chain(triples(Statement("eq1_7")))
            .chain(triples(Statement("eq1_8")))
            .collect(),
        "padic" => ClaimId::ALL
            .iter()
            .flat_map(|&c| {
                c.primes()
                    .iter()
                    .map(move |&p| (Claim(c), CaseParams::new(p as i64, 0, 0)))
            })
            .collect(),
        "lemmas" => triples(Lemma(super::Lemma::Lemma2_2))
            .chain(triples(Lemma(super::Lemma::Lemma3_1)))
            .chain(triples(Lemma(super::Lemma::Lemma5_1)))
            .chain(pairs(Lemma(super::Lemma::Lemma6_5), &THM64_ND))
            .chain(pairs(Lemma(super::Lemma::Lemma6_6), &THM64_ND))
            .chain(CRT_N.iter().flat_map(|&n| {
                CRT_EXPONENTS.iter().flat_map(move |&a| {
                    CRT_EXPONENTS
                        .iter()
                        .map(move |&b| (Crt, CaseParams::new(n, 0, 0).with("a", a).with("b", b)))
                })
            }))
            .collect(),
        "all" => SUITES[..SUITES.len() - 1]
            .iter()
            .flat_map(|s| defaults(s).expect("known suite"))
            .collect(),
        _ => return None,
    };
    Some(list)
}

/// Parameter overrides for a suite run.
#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    /// Replaces the `n` values; each distinct parameter template is
    /// instantiated at every listed `n` and inadmissible combinations are
    /// dropped.
    pub n: Option<Vec<i64>>,
    /// Explicit assignments such as `d=3`, applied to every case.
    pub params: Vec<(String, i64)>,
}

pub fn suite(name: &str, opts: &SuiteOptions) -> Result<Vec<CaseSpec>, SuiteError> {
    let mut entries = defaults(name).ok_or_else(|| SuiteError::Unknown(name.to_string()))?;
    if let Some(ns) = &opts.n {
        let mut templates: Vec<(Entry, CaseParams)> = Vec::new();
        for (e, mut p) in entries {
            p.n = 0;
            if !templates.contains(&(e, p.clone())) {
                templates.push((e, p));
            }
        }
        entries = templates
            .into_iter()
            .flat_map(|(e, p)| {
                ns.iter().map(move |&n| {
                    let mut p = p.clone();
                    p.n = n;
                    (e, p)
                })
            })
            .collect();
    }
    for (_, p) in entries.iter_mut() {
        for (k, v) in &opts.params {
            p.set(k, *v);
        }
    }
    let mut cases = Vec::new();
    for (e, p) in entries {
        let case = build(e, p);
        if cases.iter().any(|c: &CaseSpec| c.id == case.id) {
            continue;
        }
        match case.validate() {
            Ok(()) => cases.push(case),
            Err(_) if opts.n.is_some() => {}
            Err(source) => {
                return Err(SuiteError::Invalid {
                    id: case.id,
                    source,
                })
            }
        }
    }
    if cases.is_empty() {
        return Err(SuiteError::Empty {
            suite: name.to_string(),
        });
    }
    Ok(cases)
}
