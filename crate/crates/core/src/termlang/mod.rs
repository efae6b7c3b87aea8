//! A small language for summands and moduli.
//!
//! ```text
//! term    := factor { ("*" | "/") factor }
//! factor  := signpow | qpow | poch | qint | integer | "(" term ")" [power]
//!          | "1+qpow(" form ")"
//! signpow := "(-1)^" primary
//! qpow    := "qpow(" form ")"
//! poch    := "poch(" form ";" form ";" form ")" [power]
//! qint    := "[" form "]" ["_q2"] [power]
//! power   := "^" ["-"] integer            (nonzero)
//! modulus := mfactor { "*" mfactor }
//! mfactor := "phi(" form "," ("+" | "-") ")" [power] | "[" form "]"
//! ```
//!
//! Forms are integer polynomials in `n`, `d`, `r`, `k` and any declared
//! extra parameters, with exact division. Exponents of `q` may be quadratic
//! in `k`; every other form is at most linear in `k`, and Pochhammer bases
//! and steps do not involve `k` at all. `#` starts a comment.

mod ast;
mod lexer;
mod parser;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::cyclotomic::{CycloMonomial, ModFactor, Modulus};
use crate::polyring::RatFunc;
use crate::qterms::CaseParams;

pub use ast::{Factor, Form, ModulusExpr, Op, Term};
use parser::Parser;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TermError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("unbound symbol `{name}` at {line}:{col}")]
    UnboundSymbol {
        name: String,
        line: usize,
        col: usize,
    },
    #[error("`{form}` evaluates to the non-integer {value}")]
    NonIntegerExponent { form: String, value: String },
    #[error("division by zero in `{form}`")]
    DivisionByZero { form: String },
    #[error("`{form}` is out of range")]
    Overflow { form: String },
    #[error("Pochhammer length `{form}` is negative ({value})")]
    NegativeLength { form: String, value: i64 },
    #[error("no value for parameter `{0}`")]
    MissingParameter(String),
    #[error("denominator vanishes at k = {k}")]
    ZeroDenominator { k: u64 },
    #[error("invalid modulus: {0}")]
    Modulus(String),
}

/// Parses a summand; `extras` names the parameters allowed besides
/// `n`, `d`, `r`, `k`.
pub fn parse_term(src: &str, extras: &[&str]) -> Result<Term, TermError> {
    let mut p = Parser::new(src, extras)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_form(src: &str, extras: &[&str]) -> Result<Form, TermError> {
    let mut p = Parser::new(src, extras)?;
    let f = p.form()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_modulus(src: &str, extras: &[&str]) -> Result<ModulusExpr, TermError> {
    let mut p = Parser::new(src, extras)?;
    let m = p.modulus()?;
    p.finish()?;
    Ok(m)
}

impl Form {
    fn eval_rational(&self, params: &CaseParams, k: i64) -> Result<BigRational, TermError> {
        let int = |v: i64| BigRational::from_integer(BigInt::from(v));
        Ok(match self {
            Form::Num(v) => int(*v),
            Form::Var(name) if name == "k" => int(k),
            Form::Var(name) => int(params
                .get(name)
                .ok_or_else(|| TermError::MissingParameter(name.clone()))?),
            Form::Add(a, b) => a.eval_rational(params, k)? + b.eval_rational(params, k)?,
            Form::Sub(a, b) => a.eval_rational(params, k)? - b.eval_rational(params, k)?,
            Form::Mul(a, b) => a.eval_rational(params, k)? * b.eval_rational(params, k)?,
            Form::Div(a, b) => {
                let den = b.eval_rational(params, k)?;
                if den.is_zero() {
                    return Err(TermError::DivisionByZero {
                        form: self.to_string(),
                    });
                }
                a.eval_rational(params, k)? / den
            }
            Form::Neg(a) => -a.eval_rational(params, k)?,
            Form::Pow(a, e) => num_traits::pow(a.eval_rational(params, k)?, *e as usize),
        })
    }

    /// Integer value under the binding, with `k` bound to `k`.
    pub fn eval(&self, params: &CaseParams, k: i64) -> Result<i64, TermError> {
        let v = self.eval_rational(params, k)?;
        if !v.is_integer() {
            return Err(TermError::NonIntegerExponent {
                form: self.to_string(),
                value: v.to_string(),
            });
        }
        v.to_integer().to_i64().ok_or_else(|| TermError::Overflow {
            form: self.to_string(),
        })
    }
}

fn powered(m: CycloMonomial, power: i32, k: u64) -> Result<CycloMonomial, TermError> {
    m.pow(power as i64)
        .map_err(|_| TermError::ZeroDenominator { k })
}

impl Factor {
    pub fn monomial(&self, params: &CaseParams, k: u64) -> Result<CycloMonomial, TermError> {
        let ki = k as i64;
        match self {
            Factor::SignPow(e) => Ok(if e.eval(params, ki)?.rem_euclid(2) == 0 {
                CycloMonomial::one()
            } else {
                CycloMonomial::from_int(-1)
            }),
            Factor::QPow(e) => Ok(CycloMonomial::q_pow(e.eval(params, ki)?)),
            Factor::Poch {
                base,
                step,
                len,
                power,
            } => {
                let l = len.eval(params, ki)?;
                if l < 0 {
                    return Err(TermError::NegativeLength {
                        form: len.to_string(),
                        value: l,
                    });
                }
                let m =
                    CycloMonomial::poch(base.eval(params, ki)?, step.eval(params, ki)?, l as u64);
                powered(m, *power, k)
            }
            Factor::QInt { arg, square, power } => {
                let base = if *square { 2 } else { 1 };
                powered(CycloMonomial::q_int(arg.eval(params, ki)?, base), *power, k)
            }
            Factor::Int(v) => Ok(CycloMonomial::from_int(*v)),
            Factor::OnePlusQPow(e) => Ok(CycloMonomial::one_plus_q_pow(e.eval(params, ki)?)),
            Factor::Group(t, power) => powered(t.monomial(params, k)?, *power, k),
        }
    }
}

impl Term {
    /// Value at `k` in factored form.
    pub fn monomial(&self, params: &CaseParams, k: u64) -> Result<CycloMonomial, TermError> {
        let mut num = CycloMonomial::one();
        let mut den = CycloMonomial::one();
        for (op, factor) in &self.items {
            let v = factor.monomial(params, k)?;
            match op {
                Op::Mul => num.mul_assign(&v),
                Op::Div => den.mul_assign(&v),
            }
        }
        num.checked_div(&den)
            .map_err(|_| TermError::ZeroDenominator { k })
    }

    pub fn eval(&self, params: &CaseParams, k: u64) -> Result<RatFunc, TermError> {
        self.monomial(params, k).map(|m| m.to_ratfunc())
    }
}

impl ModulusExpr {
    pub fn build(&self, params: &CaseParams) -> Result<Modulus, TermError> {
        let index = |f: &Form| -> Result<u64, TermError> {
            let v = f.eval(params, 0)?;
            u64::try_from(v)
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| TermError::Modulus(format!("index `{f}` evaluates to {v}")))
        };
        let factors = self
            .factors
            .iter()
            .map(|(f, sign, e)| Ok(ModFactor::new(index(f)?, *sign, *e)))
            .collect::<Result<Vec<_>, TermError>>()?;
        let qint = self.qint.as_ref().map(index).transpose()?;
        Modulus::new(factors, qint).map_err(|e| TermError::Modulus(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qterms::{builtin_term, TermId};
    use proptest::prelude::*;

    const THM1_4: &str = "(-1)^k * qpow(d*k^2 + 2*(d-r)*k) * poch(2*r; 2*d; k)^3 / poch(2*d; 2*d; k)^3 * (1+qpow(2*d*k+r)) / (1+qpow(r))";

    #[test]
    fn parses_theorem_summand() {
        let t = parse_term(THM1_4, &[]).unwrap();
        assert_eq!(t.items.len(), 6);
        assert!(matches!(t.items[0], (Op::Mul, Factor::SignPow(_))));
        assert!(matches!(
            t.items[2],
            (Op::Mul, Factor::Poch { power: 3, .. })
        ));
        assert!(matches!(t.items[5], (Op::Div, Factor::OnePlusQPow(_))));
        assert_eq!(
            t.to_string(),
            "(-1)^k * qpow(d*k^2 + 2*(d - r)*k) * poch(2*r; 2*d; k)^3 / poch(2*d; 2*d; k)^3 \
             * (1+qpow(2*d*k + r)) / (1+qpow(r))"
        );
        let p = CaseParams::new(7, 3, 1);
        let builtin = builtin_term(TermId::Thm1_4Lhs, &p).unwrap();
        for k in 0..8 {
            assert_eq!(t.eval(&p, k).unwrap(), builtin(k).unwrap());
        }
    }

    #[test]
    fn constant_term() {
        let t = parse_term("1", &[]).unwrap();
        assert_eq!(t.items, vec![(Op::Mul, Factor::Int(1))]);
    }

    #[test]
    fn rejects_zero_power() {
        let err = parse_term("poch(1; 2; k)^0", &[]).unwrap_err();
        assert!(
            matches!(
                err,
                TermError::Syntax {
                    line: 1,
                    col: 15,
                    ..
                }
            ),
            "{err}"
        );
    }

    #[test]
    fn rejects_unbound_and_high_degree() {
        assert_eq!(
            parse_term("qpow(a*k)", &[]).unwrap_err(),
            TermError::UnboundSymbol {
                name: "a".into(),
                line: 1,
                col: 6
            }
        );
        assert!(parse_term("qpow(a*k)", &["a"]).is_ok());
        assert!(matches!(
            parse_term("qpow(k^3)", &[]),
            Err(TermError::Syntax { .. })
        ));
        assert!(matches!(
            parse_term("[k^2]", &[]),
            Err(TermError::Syntax { .. })
        ));
        assert!(matches!(
            parse_term("poch(k; 2; k)", &[]),
            Err(TermError::Syntax { .. })
        ));
        assert!(matches!(
            parse_term("qpow(n/k)", &[]),
            Err(TermError::Syntax { .. })
        ));
        assert!(matches!(
            parse_term("qpow(k)\n  * poch(1;2;k", &[]),
            Err(TermError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn evaluation_examples() {
        let p = CaseParams::new(3, 2, 1);
        let t = parse_term("qpow(k^2)", &[]).unwrap();
        assert_eq!(t.eval(&p, 3).unwrap(), RatFunc::q_pow(9));
        let half = parse_term("qpow(k/2)", &[]).unwrap();
        assert!(matches!(
            half.eval(&p, 3),
            Err(TermError::NonIntegerExponent { .. })
        ));
        assert!(half.eval(&p, 4).is_ok());
        let src = TermId::Thm1_1Lhs.source();
        assert!(parse_term(src, &[]).unwrap().eval(&p, 0).unwrap().is_one());
        let zero_den = parse_term("1 / poch(0; 1; k)", &[]).unwrap();
        assert_eq!(
            zero_den.eval(&p, 1),
            Err(TermError::ZeroDenominator { k: 1 })
        );
    }

    #[test]
    fn comments_and_whitespace() {
        let a = parse_term("qpow(k)   # exponent\n *\t[n]_q2^2", &[]).unwrap();
        let b = parse_term("qpow(k)*[n]_q2^2", &[]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn modulus_text() {
        let p = CaseParams::new(5, 2, 1);
        let m = parse_modulus("phi(n,-)^3 * phi(n,+)^2", &[]).unwrap();
        let built = m.build(&p).unwrap();
        assert_eq!(built.degree(), 20);
        assert_eq!(m.to_string(), "phi(n,-)^3 * phi(n,+)^2");
        let m = parse_modulus("[n] * phi(n,+)^3", &[])
            .unwrap()
            .build(&p)
            .unwrap();
        assert_eq!(m.include_qint(), Some(5));
        assert_eq!(m.degree(), 16);
        assert!(parse_modulus("phi(n,*)", &[]).is_err());
        assert!(parse_modulus("phi(n - 5,+)", &[])
            .unwrap()
            .build(&p)
            .is_err());
    }

    fn shipped_params() -> Vec<CaseParams> {
        let mut base: Vec<(i64, i64, i64)> = vec![(3, 2, 1), (5, 2, 1), (7, 2, 1)];
        base.extend([
            (5, 3, 2),
            (7, 3, 1),
            (7, 4, 3),
            (9, 4, 1),
            (11, 3, 2),
            (11, 4, 3),
        ]);
        base.extend([
            (7, 3, 1),
            (13, 3, 1),
            (5, 4, 1),
            (9, 4, 1),
            (4, 3, 1),
            (10, 3, 1),
        ]);
        let mut out = Vec::new();
        for (n, d, r) in base {
            for a in [2 * n, -2 * n, 4] {
                for b in [n, 2] {
                    out.push(CaseParams::new(n, d, r).with("a", a).with("b", b));
                }
            }
        }
        out
    }

    #[test]
    fn registry_sources_agree() {
        for id in TermId::ALL {
            let term = parse_term(id.source(), &["a", "b"]).unwrap();
            let mut checked = 0;
            for p in shipped_params() {
                if id.check_constraints(&p).is_err() {
                    continue;
                }
                checked += 1;
                for k in 0..=2 * p.n as u64 {
                    let hand = id.monomial(&p, k).ok();
                    let parsed = term.monomial(&p, k).ok();
                    assert_eq!(hand, parsed, "{id} at {p}, k={k}");
                }
            }
            assert!(checked > 0, "{id} has no admissible shipped parameters");
        }
    }

    fn form_strategy() -> impl Strategy<Value = Form> {
        let leaf = prop_oneof![
            (0i64..20).prop_map(Form::Num),
            prop::sample::select(vec!["n", "d", "r"]).prop_map(|v| Form::Var(v.into())),
        ];
        leaf.prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Form::Add(a.into(), b.into())),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Form::Sub(a.into(), b.into())),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Form::Mul(a.into(), b.into())),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Form::Div(a.into(), b.into())),
                inner.clone().prop_map(|a| Form::Neg(a.into())),
                (inner, 1u32..3).prop_map(|(a, e)| Form::Pow(a.into(), e)),
            ]
        })
    }

    fn k_form() -> impl Strategy<Value = Form> {
        (form_strategy(), form_strategy()).prop_map(|(a, b)| {
            Form::Add(
                Box::new(Form::Mul(Box::new(a), Box::new(Form::Var("k".into())))),
                Box::new(b),
            )
        })
    }

    fn power() -> impl Strategy<Value = i32> {
        prop_oneof![1i32..4, -3i32..0]
    }

    fn factor_strategy() -> impl Strategy<Value = Factor> {
        let leaf = prop_oneof![
            k_form().prop_map(Factor::SignPow),
            k_form().prop_map(Factor::QPow),
            (form_strategy(), form_strategy(), power()).prop_map(|(base, step, power)| {
                Factor::Poch {
                    base,
                    step,
                    len: Form::Var("k".into()),
                    power,
                }
            }),
            (k_form(), any::<bool>(), power()).prop_map(|(arg, square, power)| Factor::QInt {
                arg,
                square,
                power
            }),
            (-5i64..6).prop_map(Factor::Int),
            k_form().prop_map(Factor::OnePlusQPow),
        ];
        leaf.prop_recursive(2, 8, 3, |inner| {
            (prop::collection::vec((any::<bool>(), inner), 2..4), power()).prop_map(|(items, p)| {
                let items = items
                    .into_iter()
                    .enumerate()
                    .map(|(i, (div, f))| (if div && i > 0 { Op::Div } else { Op::Mul }, f))
                    .collect();
                Factor::Group(Term { items }, p)
            })
        })
    }

    proptest! {
        #[test]
        fn form_print_parse_fixpoint(f in form_strategy()) {
            let printed = f.to_string();
            let parsed = parse_form(&printed, &[]).unwrap();
            prop_assert_eq!(&parsed, &f);
        }

        #[test]
        fn term_parse_print_parse(items in prop::collection::vec((any::<bool>(), factor_strategy()), 1..5)) {
            let term = Term {
                items: items
                    .into_iter()
                    .enumerate()
                    .map(|(i, (div, f))| (if div && i > 0 { Op::Div } else { Op::Mul }, f))
                    .collect(),
            };
            let once = parse_term(&term.to_string(), &[]).unwrap();
            let twice = parse_term(&once.to_string(), &[]).unwrap();
            prop_assert_eq!(&once, &twice);
            prop_assert_eq!(once.to_string(), twice.to_string());
        }
    }
}
