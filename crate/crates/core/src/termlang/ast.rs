use std::fmt;

use crate::cyclotomic::Sign;

/// Integer polynomial expression in `n`, `d`, `r`, `k` and declared extras.
/// Division is exact division and is checked at evaluation time.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    Num(i64),
    Var(String),
    Add(Box<Form>, Box<Form>),
    Sub(Box<Form>, Box<Form>),
    Mul(Box<Form>, Box<Form>),
    Div(Box<Form>, Box<Form>),
    Neg(Box<Form>),
    Pow(Box<Form>, u32),
}

impl Form {
    /// Degree in `k`, or `None` when `k` appears in a divisor.
    pub fn k_degree(&self) -> Option<u32> {
        Some(match self {
            Form::Num(_) => 0,
            Form::Var(v) => u32::from(v == "k"),
            Form::Add(a, b) | Form::Sub(a, b) => a.k_degree()?.max(b.k_degree()?),
            Form::Mul(a, b) => a.k_degree()? + b.k_degree()?,
            Form::Div(a, b) => {
                if b.k_degree()? != 0 {
                    return None;
                }
                a.k_degree()?
            }
            Form::Neg(a) => a.k_degree()?,
            Form::Pow(a, e) => a.k_degree()? * e,
        })
    }

    fn prec(&self) -> u8 {
        match self {
            Form::Add(..) | Form::Sub(..) => 1,
            Form::Mul(..) | Form::Div(..) => 2,
            Form::Neg(_) => 3,
            Form::Pow(..) => 4,
            Form::Num(_) | Form::Var(_) => 5,
        }
    }

    fn is_atom(&self) -> bool {
        self.prec() == 5
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            write!(f, "(")?;
            self.fmt_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Form::Num(v) => write!(f, "{v}"),
            Form::Var(v) => f.write_str(v),
            Form::Add(a, b) => {
                a.fmt_at(f, 1)?;
                write!(f, " + ")?;
                b.fmt_at(f, 2)
            }
            Form::Sub(a, b) => {
                a.fmt_at(f, 1)?;
                write!(f, " - ")?;
                b.fmt_at(f, 2)
            }
            Form::Mul(a, b) => {
                a.fmt_at(f, 2)?;
                write!(f, "*")?;
                b.fmt_at(f, 3)
            }
            Form::Div(a, b) => {
                a.fmt_at(f, 2)?;
                write!(f, "/")?;
                b.fmt_at(f, 3)
            }
            Form::Neg(a) => {
                write!(f, "-")?;
                a.fmt_at(f, 3)
            }
            Form::Pow(a, e) => {
                a.fmt_at(f, 5)?;
                write!(f, "^{e}")
            }
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    /// `(-1)^e`
    SignPow(Form),
    /// `q^e`
    QPow(Form),
    /// `(q^base; q^step)_len ^ power`
    Poch {
        base: Form,
        step: Form,
        len: Form,
        power: i32,
    },
    /// `[arg]_q ^ power`, or `[arg]_{q^2} ^ power` when `square` is set.
    QInt {
        arg: Form,
        square: bool,
        power: i32,
    },
    Int(i64),
    /// `1 + q^e`
    OnePlusQPow(Form),
    Group(Term, i32),
}

/// Product of factors, each multiplied or divided in turn.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub items: Vec<(Op, Factor)>,
}

impl Term {
    /// Whether the summation index `k` occurs anywhere.
    pub fn uses_k(&self) -> bool {
        self.forms().iter().any(|f| f.k_degree() != Some(0))
    }

    /// Every form in the term, in source order.
    pub fn forms(&self) -> Vec<&Form> {
        let mut out = Vec::new();
        for (_, factor) in &self.items {
            match factor {
                Factor::SignPow(e) | Factor::QPow(e) | Factor::OnePlusQPow(e) => out.push(e),
                Factor::Poch {
                    base, step, len, ..
                } => out.extend([base, step, len]),
                Factor::QInt { arg, .. } => out.push(arg),
                Factor::Int(_) => {}
                Factor::Group(t, _) => out.extend(t.forms()),
            }
        }
        out
    }
}

fn power_suffix(f: &mut fmt::Formatter<'_>, power: i32) -> fmt::Result {
    if power != 1 {
        write!(f, "^{power}")?;
    }
    Ok(())
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::SignPow(e) => {
                write!(f, "(-1)^")?;
                if e.is_atom() {
                    write!(f, "{e}")
                } else {
                    write!(f, "({e})")
                }
            }
            Factor::QPow(e) => write!(f, "qpow({e})"),
            Factor::Poch {
                base,
                step,
                len,
                power,
            } => {
                write!(f, "poch({base}; {step}; {len})")?;
                power_suffix(f, *power)
            }
            Factor::QInt { arg, square, power } => {
                write!(f, "[{arg}]")?;
                if *square {
                    write!(f, "_q2")?;
                }
                power_suffix(f, *power)
            }
            Factor::Int(v) if *v < 0 => write!(f, "({v})"),
            Factor::Int(v) => write!(f, "{v}"),
            Factor::OnePlusQPow(e) => write!(f, "(1+qpow({e}))"),
            Factor::Group(t, power) => {
                write!(f, "({t})")?;
                power_suffix(f, *power)
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (op, factor)) in self.items.iter().enumerate() {
            match (i, op) {
                (0, Op::Mul) => {}
                (0, Op::Div) => write!(f, "1 / ")?,
                (_, Op::Mul) => write!(f, " * ")?,
                (_, Op::Div) => write!(f, " / ")?,
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

/// A modulus written in factored form, with symbolic indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulusExpr {
    pub factors: Vec<(Form, Sign, u32)>,
    pub qint: Option<Form>,
}

impl fmt::Display for ModulusExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(m) = &self.qint {
            parts.push(format!("[{m}]"));
        }
        for (idx, sign, e) in &self.factors {
            let mut s = format!("phi({idx},{})", sign.symbol());
            if *e != 1 {
                s.push_str(&format!("^{e}"));
            }
            parts.push(s);
        }
        f.write_str(&parts.join(" * "))
    }
}
