//! Deciding congruences of rational functions modulo products of
//! cyclotomic polynomials, and running declared cases.
//!
//! `L = R (mod M)` means the reduced numerator of `L - R` is divisible by
//! `M` and its reduced denominator is coprime to `M`.

mod case;
mod special;
pub mod suites;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::cyclotomic::{cyclotomic, valuation, CycloFrac, Modulus};
use crate::padic::PadicError;
use crate::polyring::{poly_gcd, IntPoly, PolyError, RatFunc};
use crate::qterms::QTermError;
use crate::sums::SumsError;
use crate::termlang::TermError;

pub use case::{
    evaluate_congruence, verify_case, CaseBody, CaseSpec, CongruenceSpec, EvaluatedSides, RhsSpec,
    Shape, SumSpec, TermSource,
};
pub use special::{check_crt_identities, verify_specialization, Lemma, UnknownLemma};

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error(transparent)]
    Term(#[from] QTermError),
    #[error(transparent)]
    Lang(#[from] TermError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Sums(#[from] SumsError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("invalid case: {0}")]
    InvalidCase(String),
}

/// Why a congruence failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub failed_factor: String,
    /// SHA-256 of the remainder of the reduced numerator modulo `M`.
    pub remainder_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gcd_obstruction: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub remainder: Option<String>,
}

/// Required and achieved exponent of one irreducible factor of the modulus.
/// `achieved` is `None` when the difference vanishes identically; a negative
/// value means the factor divides the denominator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorStrength {
    pub factor: String,
    pub required: u32,
    pub achieved: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Strength {
    Cyclotomic {
        factors: Vec<FactorStrength>,
    },
    Padic {
        prime: u64,
        required: u32,
        achieved: Option<i64>,
    },
    Composite {
        checks: usize,
        skipped: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub strength: Strength,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Verdict {
    /// The smallest margin `achieved - required` over the modulus factors,
    /// or `None` when every factor holds to infinite order.
    pub fn min_margin(&self) -> Option<i64> {
        match &self.strength {
            Strength::Cyclotomic { factors } => factors
                .iter()
                .filter_map(|f| f.achieved.map(|a| a - f.required as i64))
                .min(),
            Strength::Padic {
                required, achieved, ..
            } => achieved.map(|a| a - *required as i64),
            Strength::Composite { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckOptions {
    /// Include the full remainder polynomial in failure witnesses.
    pub verbose_witness: bool,
}

pub(crate) fn digest(p: &IntPoly) -> String {
    let mut h = Sha256::new();
    for c in p.coeffs() {
        h.update(c.to_signed_bytes_le());
        h.update([0xff]);
    }
    hex::encode(h.finalize())
}

fn witness(
    failed_factor: String,
    reduced_num: &IntPoly,
    m: &Modulus,
    gcd_obstruction: Option<String>,
    opts: CheckOptions,
) -> Witness {
    let rem = reduced_num
        .primitive_part()
        .rem_monic(m.expanded())
        .expect("modulus is monic");
    Witness {
        failed_factor,
        remainder_digest: digest(&rem),
        gcd_obstruction,
        remainder: opts.verbose_witness.then(|| rem.to_string()),
    }
}

/// Decides `lhs = rhs (mod m)` by reducing the difference and dividing.
pub fn check_congruence(lhs: &RatFunc, rhs: &RatFunc, m: &Modulus, opts: CheckOptions) -> Verdict {
    let diff = lhs - rhs;
    let profile = m.profile();
    if diff.is_zero() {
        return Verdict {
            holds: true,
            witness: None,
            strength: Strength::Cyclotomic {
                factors: profile
                    .iter()
                    .map(|(&j, &e)| FactorStrength {
                        factor: m.label_for(j),
                        required: e,
                        achieved: None,
                    })
                    .collect(),
            },
            notes: Vec::new(),
        };
    }
    let (a, b) = (diff.num(), diff.den());
    let factors: Vec<FactorStrength> = profile
        .iter()
        .map(|(&j, &e)| {
            let va = valuation(a, j).unwrap_or(0) as i64;
            let vb = valuation(b, j).unwrap_or(0) as i64;
            FactorStrength {
                factor: m.label_for(j),
                required: e,
                achieved: Some(va - vb),
            }
        })
        .collect();
    let g = poly_gcd(b, m.expanded()).expect("modulus is nonzero");
    let strength = Strength::Cyclotomic { factors };
    if !g.is_constant() {
        let failed = first_failure(&strength).unwrap_or_else(|| m.to_string());
        return Verdict {
            holds: false,
            witness: Some(witness(failed, a, m, Some(g.to_string()), opts)),
            strength,
            notes: Vec::new(),
        };
    }
    let rem = a.rem_monic(m.expanded()).expect("modulus is monic");
    if rem.is_zero() {
        return Verdict {
            holds: true,
            witness: None,
            strength,
            notes: Vec::new(),
        };
    }
    let failed = first_failure(&strength).unwrap_or_else(|| m.to_string());
    Verdict {
        holds: false,
        witness: Some(witness(failed, a, m, None, opts)),
        strength,
        notes: Vec::new(),
    }
}

fn first_failure(s: &Strength) -> Option<String> {
    let Strength::Cyclotomic { factors } = s else {
        return None;
    };
    factors
        .iter()
        .find(|f| f.achieved.is_some_and(|a| a < f.required as i64))
        .map(|f| format!("{}^{}", f.factor, f.required))
}

/// Same decision as [`check_congruence`] for a difference whose denominator
/// is already factored: only the valuations at the modulus' irreducibles
/// matter, since `q` and every other cyclotomic polynomial are coprime to it.
pub fn check_fraction(diff: &CycloFrac, m: &Modulus, opts: CheckOptions) -> Verdict {
    let profile = m.profile();
    if diff.is_zero() {
        return check_congruence(&RatFunc::zero(), &RatFunc::zero(), m, opts);
    }
    let mut factors = Vec::new();
    let mut obstruction = Vec::new();
    for (&j, &e) in profile {
        let v = valuation(diff.num(), j).unwrap_or(0) as i64;
        let den = diff.den_factors().get(&j).copied().unwrap_or(0) as i64;
        if v < den {
            obstruction.push((j, (den - v) as u32));
        }
        factors.push(FactorStrength {
            factor: m.label_for(j),
            required: e,
            achieved: Some(v - den),
        });
    }
    let strength = Strength::Cyclotomic { factors };
    let failed = first_failure(&strength);
    if failed.is_none() && obstruction.is_empty() {
        return Verdict {
            holds: true,
            witness: None,
            strength,
            notes: Vec::new(),
        };
    }
    let reduced = diff.reduce();
    let gcd = (!obstruction.is_empty()).then(|| {
        IntPoly::product(obstruction.iter().map(|&(j, e)| cyclotomic(j).pow(e))).to_string()
    });
    let failed = failed.unwrap_or_else(|| m.to_string());
    Verdict {
        holds: false,
        witness: Some(witness(failed, reduced.num(), m, gcd, opts)),
        strength,
        notes: Vec::new(),
    }
}

/// Exact equality `diff == 0`, with the reduced numerator as witness.
pub fn check_exact(diff: &CycloFrac, label: &str) -> Verdict {
    let holds = diff.is_zero();
    Verdict {
        holds,
        witness: (!holds).then(|| Witness {
            failed_factor: label.to_string(),
            remainder_digest: digest(diff.reduce().num()),
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
