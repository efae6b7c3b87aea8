//! Case files: `key = value` lines grouped under `[case]`, `[lhs]`, `[rhs]`
//! and `[modulus]` headers. `#` starts a comment line.
//!
//! ```text
//! [case]
//! id = thm1_1-n7
//! kind = double_sum
//! params = n=7, d=2, r=1
//!
//! [lhs]
//! term = thm1_1.lhs
//! upper = n - 1
//!
//! [rhs]
//! prefactor = thm1_1.pre
//! term = thm1_1.rhs
//! upper = (n - 1)/2
//! power = 2
//!
//! [modulus]
//! value = phi(n,-)^3 * phi(n,+)^2
//! ```
//!
//! `source = ...` and `prefactor_source = ...` take term-language text in
//! place of a built-in name. Specialization cases name a `lemma`, p-adic
//! cases a `claim` (with `n` the prime), and `crt` cases need `a` and `b`.

use std::collections::BTreeMap;

use qcong_core::checker::{
    CaseBody, CaseSpec, CheckError, CongruenceSpec, Lemma, RhsSpec, Shape, SumSpec, TermSource,
};
use qcong_core::padic::ClaimId;
use qcong_core::qterms::{CaseParams, TermId};
use qcong_core::termlang::parse_modulus;

#[derive(Debug, thiserror::Error)]
pub enum CaseFileError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `{key}` in [{section}]")]
    Missing {
        section: &'static str,
        key: &'static str,
    },
    #[error("[{section}] {key}: {source}")]
    Invalid {
        section: &'static str,
        key: &'static str,
        source: CheckError,
    },
    #[error("{0}")]
    Other(String),
}

type Section = BTreeMap<String, (usize, String)>;

const SECTIONS: [&str; 4] = ["case", "lhs", "rhs", "modulus"];

fn sections(text: &str) -> Result<BTreeMap<&'static str, Section>, CaseFileError> {
    let mut out: BTreeMap<&'static str, Section> = BTreeMap::new();
    let mut current: Option<&'static str> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(name) = trimmed.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let name = SECTIONS
                .into_iter()
                .find(|s| *s == name.trim())
                .ok_or_else(|| CaseFileError::Syntax {
                    line,
                    msg: format!("unknown section [{name}]"),
                })?;
            if out.contains_key(name) {
                return Err(CaseFileError::Syntax {
                    line,
                    msg: format!("duplicate section [{name}]"),
                });
            }
            out.insert(name, Section::new());
            current = Some(name);
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(CaseFileError::Syntax {
                line,
                msg: "expected `key = value`".into(),
            });
        };
        let section = current.ok_or_else(|| CaseFileError::Syntax {
            line,
            msg: "entry before any section header".into(),
        })?;
        let slot = out.get_mut(section).expect("section inserted");
        let key = key.trim().to_string();
        if slot.contains_key(&key) {
            return Err(CaseFileError::Syntax {
                line,
                msg: format!("duplicate key `{key}`"),
            });
        }
        slot.insert(key, (line, value.trim().to_string()));
    }
    Ok(out)
}

/// Parses `n=7, d=2, r=1` into assignments.
pub fn parse_assignments(text: &str) -> Result<Vec<(String, i64)>, String> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|part| {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| format!("expected `name=value`, got `{}`", part.trim()))?;
            let k = k.trim();
            if k.is_empty() || !k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(format!("bad parameter name `{k}`"));
            }
            let v = v
                .trim()
                .parse::<i64>()
                .map_err(|_| format!("bad value for `{k}`: `{}`", v.trim()))?;
            Ok((k.to_string(), v))
        })
        .collect()
}

fn get<'a>(s: Option<&'a Section>, key: &str) -> Option<&'a str> {
    s.and_then(|s| s.get(key)).map(|(_, v)| v.as_str())
}

fn term_source(
    section: &'static str,
    builtin: Option<&str>,
    source: Option<&str>,
    extras: &[&str],
) -> Result<Option<TermSource>, CaseFileError> {
    match (builtin, source) {
        (Some(_), Some(_)) => Err(CaseFileError::Other(format!(
            "[{section}] gives both a built-in term and a source"
        ))),
        (Some(name), None) => name
            .parse::<TermId>()
            .map(|id| Some(TermSource::Builtin(id)))
            .map_err(|e| CaseFileError::Other(format!("[{section}] {e}"))),
        (None, Some(src)) => {
            TermSource::parse(src, extras)
                .map(Some)
                .map_err(|source| CaseFileError::Invalid {
                    section,
                    key: "source",
                    source,
                })
        }
        (None, None) => Ok(None),
    }
}

fn sum(
    section: &'static str,
    term: TermSource,
    upper: Option<&str>,
) -> Result<SumSpec, CaseFileError> {
    SumSpec::new(term, upper.unwrap_or("n - 1")).map_err(|source| CaseFileError::Invalid {
        section,
        key: "upper",
        source,
    })
}

pub fn parse_case(text: &str) -> Result<CaseSpec, CaseFileError> {
    let secs = sections(text)?;
    let case = secs.get("case");
    let id = get(case, "id").ok_or(CaseFileError::Missing {
        section: "case",
        key: "id",
    })?;
    let kind = get(case, "kind").ok_or(CaseFileError::Missing {
        section: "case",
        key: "kind",
    })?;
    let mut params = CaseParams::new(0, 0, 0);
    let assignments = parse_assignments(get(case, "params").unwrap_or(""))
        .map_err(|msg| CaseFileError::Other(format!("[case] params: {msg}")))?;
    for (k, v) in &assignments {
        params.set(k, *v);
    }
    let extras: Vec<&str> = params.extra.keys().map(String::as_str).collect();
    let constraints = get(case, "constraints")
        .map(|s| s.parse::<TermId>())
        .transpose()
        .map_err(|e| CaseFileError::Other(format!("[case] constraints: {e}")))?;

    let body = match kind {
        "single_sum" | "double_sum" | "triple_sum" => {
            let shape = match kind {
                "single_sum" => Shape::Single,
                "double_sum" => Shape::Double,
                _ => Shape::Triple,
            };
            let lhs = secs.get("lhs");
            let lhs_term = term_source("lhs", get(lhs, "term"), get(lhs, "source"), &extras)?
                .ok_or(CaseFileError::Missing {
                    section: "lhs",
                    key: "term",
                })?;
            let lhs = sum("lhs", lhs_term, get(lhs, "upper"))?;
            let rhs = secs.get("rhs");
            let prefactor = term_source(
                "rhs",
                get(rhs, "prefactor"),
                get(rhs, "prefactor_source"),
                &extras,
            )?;
            let inner = term_source("rhs", get(rhs, "term"), get(rhs, "source"), &extras)?
                .map(|t| sum("rhs", t, get(rhs, "upper")))
                .transpose()?;
            let power =
                match get(rhs, "power") {
                    Some(p) => p.parse::<u32>().ok().filter(|&p| p >= 1).ok_or_else(|| {
                        CaseFileError::Other(format!("[rhs] power: bad value `{p}`"))
                    })?,
                    None => 1,
                };
            if prefactor.is_none() && inner.is_none() {
                return Err(CaseFileError::Missing {
                    section: "rhs",
                    key: "prefactor",
                });
            }
            let modulus_text = get(secs.get("modulus"), "value").ok_or(CaseFileError::Missing {
                section: "modulus",
                key: "value",
            })?;
            let modulus =
                parse_modulus(modulus_text, &extras).map_err(|e| CaseFileError::Invalid {
                    section: "modulus",
                    key: "value",
                    source: e.into(),
                })?;
            CaseBody::Congruence(CongruenceSpec {
                shape,
                lhs,
                rhs: RhsSpec {
                    prefactor,
                    inner,
                    power,
                },
                modulus,
            })
        }
        "specialization" => {
            let name = get(case, "lemma").ok_or(CaseFileError::Missing {
                section: "case",
                key: "lemma",
            })?;
            CaseBody::Specialization(
                name.parse::<Lemma>()
                    .map_err(|e| CaseFileError::Other(format!("[case] {e}")))?,
            )
        }
        "padic" => {
            let name = get(case, "claim").ok_or(CaseFileError::Missing {
                section: "case",
                key: "claim",
            })?;
            CaseBody::Padic(
                name.parse::<ClaimId>()
                    .map_err(|e| CaseFileError::Other(format!("[case] {e}")))?,
            )
        }
        "crt" => CaseBody::Crt,
        other => {
            return Err(CaseFileError::Other(format!(
                "[case] unknown kind `{other}`"
            )))
        }
    };
    Ok(CaseSpec {
        id: id.to_string(),
        params,
        notes: get(case, "notes").unwrap_or("").to_string(),
        constraints,
        body,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const THM1_1: &str = "
# thm1_1 at n = 7
[case]
id = t
kind = double_sum
params = n=7, d=2, r=1

[lhs]
term = thm1_1.lhs

[rhs]
prefactor = thm1_1.pre
term = thm1_1.rhs
upper = (n - 1)/2
power = 2

[modulus]
value = phi(n,-)^3 * phi(n,+)^2
";

    #[test]
    fn parses_congruence() {
        let c = parse_case(THM1_1).unwrap();
        assert_eq!(c.kind(), "double_sum");
        assert_eq!(c.params, CaseParams::new(7, 2, 1));
        assert_eq!(c.term_count(), Some(7));
        let CaseBody::Congruence(spec) = &c.body else {
            panic!()
        };
        assert_eq!(spec.rhs.power, 2);
    }

    #[test]
    fn parses_source_and_extras() {
        let text = "[case]\nid = x\nkind = single_sum\nparams = n=5, d=3, r=2, a=4\n\
                    [lhs]\nsource = poch(2*r + a; 2*d; k) / poch(2*d; 2*d; k)\nupper = 1\n\
                    [rhs]\nprefactor_source = [n]\n[modulus]\nvalue = phi(n,-)\n";
        let c = parse_case(text).unwrap();
        assert_eq!(c.params.get("a"), Some(4));
    }

    #[test]
    fn errors_carry_location() {
        let err = parse_case("[case]\nid x\n").unwrap_err();
        assert_eq!(err.to_string(), "line 2: expected `key = value`");
        let err = parse_case("[cases]\n").unwrap_err();
        assert!(err.to_string().contains("unknown section"));
        let err = parse_case("[case]\nid = x\nkind = double_sum\n[lhs]\nsource = poch(1; 2\n")
            .unwrap_err();
        assert!(matches!(err, CaseFileError::Invalid { section: "lhs", .. }));
        let err =
            parse_case("[case]\nid = x\nkind = padic\nparams = n=5\nclaim = nope\n").unwrap_err();
        assert!(err.to_string().contains("unknown claim"));
    }

    #[test]
    fn assignments() {
        assert_eq!(
            parse_assignments("d=3, r = 2").unwrap(),
            vec![("d".into(), 3), ("r".into(), 2)]
        );
        assert!(parse_assignments("d:3").is_err());
    }
}
