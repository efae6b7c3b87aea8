use super::ast::{Factor, Form, ModulusExpr, Op, Term};
use super::lexer::{lex, Spanned, Tok};
use super::TermError;
use crate::cyclotomic::Sign;

const BUILTIN_SYMBOLS: [&str; 4] = ["n", "d", "r", "k"];

pub(crate) struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    extras: &'a [&'a str],
}

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &str, extras: &'a [&'a str]) -> Result<Self, TermError> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            extras,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.pos + ahead).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, msg: impl Into<String>) -> TermError {
        let s = &self.toks[self.pos];
        TermError::Syntax {
            line: s.line,
            col: s.col,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<(), TermError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(format!(
                "expected {}, found {}",
                want.describe(),
                self.peek().describe()
            )))
        }
    }

    fn expect_ident(&mut self, name: &str) -> Result<(), TermError> {
        match self.peek() {
            Tok::Ident(s) if s == name => {
                self.bump();
                Ok(())
            }
            other => Err(self.error_here(format!("expected `{name}`, found {}", other.describe()))),
        }
    }

    pub(crate) fn finish(&self) -> Result<(), TermError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error_here(format!("unexpected {}", self.peek().describe())))
        }
    }

    pub(crate) fn term(&mut self) -> Result<Term, TermError> {
        let mut items = vec![(Op::Mul, self.factor()?)];
        loop {
            let op = match self.peek() {
                Tok::Star => Op::Mul,
                Tok::Slash => Op::Div,
                _ => break,
            };
            self.bump();
            items.push((op, self.factor()?));
        }
        Ok(Term { items })
    }

    fn factor(&mut self) -> Result<Factor, TermError> {
        match self.peek().clone() {
            Tok::Int(1) if *self.peek_at(1) == Tok::Plus => self.one_plus_qpow(),
            Tok::Int(v) => {
                self.bump();
                Ok(Factor::Int(v))
            }
            Tok::LParen => {
                if *self.peek_at(1) == Tok::Minus {
                    if let (Tok::Int(v), Tok::RParen) = (self.peek_at(2).clone(), self.peek_at(3)) {
                        self.pos += 4;
                        if v == 1 && *self.peek() == Tok::Caret {
                            self.bump();
                            let e = self.bounded(Self::primary, 1, "sign exponent")?;
                            return Ok(Factor::SignPow(e));
                        }
                        return Ok(Factor::Int(-v));
                    }
                }
                self.bump();
                let inner = self.term()?;
                self.expect(Tok::RParen)?;
                let power = self.power_suffix()?;
                if power == 1 && inner.items.len() == 1 && inner.items[0].0 == Op::Mul {
                    return Ok(inner.items.into_iter().next().unwrap().1);
                }
                Ok(Factor::Group(inner, power))
            }
            Tok::Ident(name) if name == "qpow" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let e = self.bounded(Self::form, 2, "q exponent")?;
                self.expect(Tok::RParen)?;
                Ok(Factor::QPow(e))
            }
            Tok::Ident(name) if name == "poch" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let base = self.bounded(Self::form, 0, "Pochhammer base exponent")?;
                self.expect(Tok::Semi)?;
                let step = self.bounded(Self::form, 0, "Pochhammer step")?;
                self.expect(Tok::Semi)?;
                let len = self.bounded(Self::form, 1, "Pochhammer length")?;
                self.expect(Tok::RParen)?;
                let power = self.power_suffix()?;
                Ok(Factor::Poch {
                    base,
                    step,
                    len,
                    power,
                })
            }
            Tok::LBracket => {
                self.bump();
                let arg = self.bounded(Self::form, 1, "q-integer argument")?;
                self.expect(Tok::RBracket)?;
                let square = matches!(self.peek(), Tok::Ident(s) if s == "_q2");
                if square {
                    self.bump();
                }
                let power = self.power_suffix()?;
                Ok(Factor::QInt { arg, square, power })
            }
            other => Err(self.error_here(format!("expected a factor, found {}", other.describe()))),
        }
    }

    fn one_plus_qpow(&mut self) -> Result<Factor, TermError> {
        self.bump();
        self.expect(Tok::Plus)?;
        self.expect_ident("qpow")?;
        self.expect(Tok::LParen)?;
        let e = self.bounded(Self::form, 2, "q exponent")?;
        self.expect(Tok::RParen)?;
        Ok(Factor::OnePlusQPow(e))
    }

    fn power_suffix(&mut self) -> Result<i32, TermError> {
        if *self.peek() != Tok::Caret {
            return Ok(1);
        }
        self.bump();
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        match self.peek().clone() {
            Tok::Int(0) => Err(self.error_here("zero power is not allowed")),
            Tok::Int(v) if v <= i32::MAX as i64 => {
                self.bump();
                Ok(if negative { -(v as i32) } else { v as i32 })
            }
            other => Err(self.error_here(format!("expected a power, found {}", other.describe()))),
        }
    }

    /// Parses with `f` and rejects results of too high a degree in `k`.
    fn bounded(
        &mut self,
        f: fn(&mut Self) -> Result<Form, TermError>,
        max: u32,
        what: &str,
    ) -> Result<Form, TermError> {
        let start = self.pos;
        let form = f(self)?;
        let ok = form.k_degree().is_some_and(|deg| deg <= max);
        if !ok {
            let s = &self.toks[start];
            let msg = match max {
                0 => format!("{what} must not depend on k"),
                _ => format!("{what} must have degree at most {max} in k"),
            };
            return Err(TermError::Syntax {
                line: s.line,
                col: s.col,
                msg,
            });
        }
        Ok(form)
    }

    pub(crate) fn form(&mut self) -> Result<Form, TermError> {
        let mut acc = self.product()?;
        loop {
            let sub = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => return Ok(acc),
            };
            self.bump();
            let rhs = self.product()?;
            acc = if sub {
                Form::Sub(Box::new(acc), Box::new(rhs))
            } else {
                Form::Add(Box::new(acc), Box::new(rhs))
            };
        }
    }

    fn product(&mut self) -> Result<Form, TermError> {
        let mut acc = self.unary()?;
        loop {
            let div = match self.peek() {
                Tok::Star => false,
                Tok::Slash => true,
                _ => return Ok(acc),
            };
            self.bump();
            let rhs = self.unary()?;
            acc = if div {
                Form::Div(Box::new(acc), Box::new(rhs))
            } else {
                Form::Mul(Box::new(acc), Box::new(rhs))
            };
        }
    }

    fn unary(&mut self) -> Result<Form, TermError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Form::Neg(Box::new(self.unary()?)));
        }
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.peek().clone() {
            Tok::Int(e) if (0..=u32::MAX as i64).contains(&e) => {
                self.bump();
                Ok(Form::Pow(Box::new(base), e as u32))
            }
            other => Err(self.error_here(format!(
                "expected a nonnegative exponent, found {}",
                other.describe()
            ))),
        }
    }

    fn primary(&mut self) -> Result<Form, TermError> {
        let here = self.pos;
        match self.bump() {
            Tok::Int(v) => Ok(Form::Num(v)),
            Tok::Ident(name) => {
                if BUILTIN_SYMBOLS.contains(&name.as_str()) || self.extras.contains(&name.as_str())
                {
                    Ok(Form::Var(name))
                } else {
                    let s = &self.toks[here];
                    Err(TermError::UnboundSymbol {
                        name,
                        line: s.line,
                        col: s.col,
                    })
                }
            }
            Tok::LParen => {
                let f = self.form()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            other => {
                self.pos = here;
                Err(self.error_here(format!(
                    "expected an expression, found {}",
                    other.describe()
                )))
            }
        }
    }

    pub(crate) fn modulus(&mut self) -> Result<ModulusExpr, TermError> {
        let mut out = ModulusExpr {
            factors: Vec::new(),
            qint: None,
        };
        loop {
            match self.peek().clone() {
                Tok::LBracket => {
                    if out.qint.is_some() {
                        return Err(self.error_here("at most one q-integer factor"));
                    }
                    self.bump();
                    out.qint = Some(self.bounded(Self::form, 0, "q-integer argument")?);
                    self.expect(Tok::RBracket)?;
                }
                Tok::Ident(name) if name == "phi" => {
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let idx = self.bounded(Self::form, 0, "cyclotomic index")?;
                    self.expect(Tok::Comma)?;
                    let sign = match self.bump() {
                        Tok::Plus => Sign::Plus,
                        Tok::Minus => Sign::Minus,
                        _ => {
                            self.pos -= 1;
                            return Err(self.error_here("expected `+` or `-`"));
                        }
                    };
                    self.expect(Tok::RParen)?;
                    let e = match self.power_suffix()? {
                        e if e > 0 => e as u32,
                        _ => return Err(self.error_here("modulus exponents must be positive")),
                    };
                    out.factors.push((idx, sign, e));
                }
                other => {
                    return Err(self.error_here(format!(
                        "expected `phi(..)` or `[..]`, found {}",
                        other.describe()
                    )))
                }
            }
            if *self.peek() == Tok::Star {
                self.bump();
            } else {
                return Ok(out);
            }
        }
    }
}
