//! q-integers, q-shifted factorials and the registry of built-in summands.

mod registry;

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::cyclotomic::CycloMonomial;
use crate::polyring::{IntPoly, RatFunc};

pub use registry::{builtin_monomial, builtin_term, TermId, UnknownTerm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QTermError {
    #[error("{term}: constraint violated: {predicate}")]
    ConstraintViolation { term: String, predicate: String },
    #[error("missing parameter `{0}`")]
    MissingParameter(String),
    #[error("{what} is not an integer")]
    NonIntegral { what: String },
    #[error("denominator vanishes at k = {k}")]
    ZeroDenominator { k: u64 },
}

/// Theorem parameters `n`, `d`, `r` plus named extras such as the exponent
/// `a` of a specialised parameter `a = q^a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CaseParams {
    pub n: i64,
    pub d: i64,
    pub r: i64,
    pub extra: BTreeMap<String, i64>,
}

impl CaseParams {
    pub fn new(n: i64, d: i64, r: i64) -> Self {
        CaseParams {
            n,
            d,
            r,
            extra: BTreeMap::new(),
        }
    }

    pub fn with(mut self, name: &str, value: i64) -> Self {
        self.set(name, value);
        self
    }

    pub fn set(&mut self, name: &str, value: i64) {
        match name {
            "n" => self.n = value,
            "d" => self.d = value,
            "r" => self.r = value,
            _ => {
                self.extra.insert(name.to_string(), value);
            }
        }
    }

    pub fn get(&self, name: &str) -> Option<i64> {
        match name {
            "n" => Some(self.n),
            "d" => Some(self.d),
            "r" => Some(self.r),
            _ => self.extra.get(name).copied(),
        }
    }

    pub fn require(&self, name: &str) -> Result<i64, QTermError> {
        self.get(name)
            .ok_or_else(|| QTermError::MissingParameter(name.to_string()))
    }
}

impl fmt::Display for CaseParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={},d={},r={}", self.n, self.d, self.r)?;
        for (k, v) in &self.extra {
            write!(f, ",{k}={v}")?;
        }
        Ok(())
    }
}

/// `num / den` as an exact integer, or an error naming `what`.
pub fn exact_quotient(num: i64, den: i64, what: &str) -> Result<i64, QTermError> {
    if den == 0 || num % den != 0 {
        return Err(QTermError::NonIntegral {
            what: what.to_string(),
        });
    }
    Ok(num / den)
}

/// `[m]_q`, or `[m]_{q^2}` when `square` is set.
///
/// # Panics
/// If `m == 0`.
pub fn q_integer(m: u64, square: bool) -> IntPoly {
    assert!(m >= 1, "q-integer needs a positive argument");
    let step = if square { 2 } else { 1 };
    let mut coeffs = vec![0i64; ((m - 1) * step + 1) as usize];
    for i in 0..m {
        coeffs[(i * step) as usize] = 1;
    }
    IntPoly::from_i64s(&coeffs)
}

/// `(q^a_exp; q^step)_k` as an exact rational function; a polynomial
/// whenever every exponent `a_exp + i*step` is nonnegative.
pub fn q_pochhammer(a_exp: i64, step: i64, k: u64) -> RatFunc {
    CycloMonomial::poch(a_exp, step, k).to_ratfunc()
}

/// Whether `gcd(a, b) == 1`.
pub(crate) fn coprime(a: i64, b: i64) -> bool {
    a.gcd(&b) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_integer_examples() {
        assert_eq!(q_integer(4, false), IntPoly::from_i64s(&[1, 1, 1, 1]));
        assert_eq!(q_integer(1, false), IntPoly::one());
        assert_eq!(q_integer(3, true), IntPoly::from_i64s(&[1, 0, 1, 0, 1]));
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(
            q_pochhammer(1, 2, 2),
            RatFunc::from_poly(IntPoly::from_i64s(&[1, -1, 0, -1, 1]))
        );
        assert!(q_pochhammer(7, 3, 0).is_one());
        assert_eq!(
            q_pochhammer(2, 4, 1),
            RatFunc::from_poly(IntPoly::from_i64s(&[1, 0, -1]))
        );
        // (q^-2; q^2)_1 = 1 - q^-2 = (q^2 - 1) / q^2
        let neg = q_pochhammer(-2, 2, 1);
        assert_eq!(neg.den(), &IntPoly::q_pow(2));
    }

    #[test]
    fn params_lookup() {
        let p = CaseParams::new(7, 3, 1).with("a", -14);
        assert_eq!(p.get("n"), Some(7));
        assert_eq!(p.get("a"), Some(-14));
        assert_eq!(
            p.require("b"),
            Err(QTermError::MissingParameter("b".into()))
        );
        assert_eq!(p.to_string(), "n=7,d=3,r=1,a=-14");
    }
}
