//! A small expression grammar shared by scalar strings, cocycle formulas and
//! relation strings.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' ('-')? atom)?
//! atom   := integer | ident | 'i' | 'zeta(' integer ')' | '(' expr ')'
//!         | '[' expr ',' expr ']' | '[' expr ',' expr ']+'
//! ```
//!
//! `[a,b]` is the commutator `ab - ba`; `]+` written without a space is the
//! anticommutator `ab + ba`. Identifiers are generator names in relation
//! strings and integer variables in cocycle formulas.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::cyclo::{lcm, CycNum};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var(String),
    ImagUnit,
    Zeta(u32),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Commutator(Box<Expr>, Box<Expr>),
    AntiCommutator(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    RBracketPlus,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = s[start..i].parse().map_err(|_| Error::Parse {
                    pos: start,
                    msg: "bad integer".into(),
                })?;
                out.push((start, Tok::Int(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(s[start..i].to_string())));
                continue;
            }
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            '[' => out.push((start, Tok::LBracket)),
            ']' => {
                if bytes.get(i + 1) == Some(&b'+') {
                    out.push((start, Tok::RBracketPlus));
                    i += 1;
                } else {
                    out.push((start, Tok::RBracket));
                }
            }
            ',' => out.push((start, Tok::Comma)),
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '/' => out.push((start, Tok::Slash)),
            '^' => out.push((start, Tok::Caret)),
            other => {
                return Err(Error::Parse {
                    pos: start,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {t:?}"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let exp = if self.peek() == Some(&Tok::Minus) {
                self.pos += 1;
                Expr::Neg(Box::new(self.atom()?))
            } else {
                self.atom()?
            };
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of input");
        };
        self.pos += 1;
        match tok {
            Tok::Int(n) => Ok(Expr::Int(n)),
            Tok::Ident(name) if name == "i" => Ok(Expr::ImagUnit),
            Tok::Ident(name) if name == "zeta" => {
                self.expect(Tok::LParen)?;
                let n = match self.peek() {
                    Some(Tok::Int(n)) => n.to_u32().filter(|&n| n > 0),
                    _ => None,
                };
                let Some(n) = n else {
                    return self.err("zeta(N) needs a positive integer N");
                };
                self.pos += 1;
                self.expect(Tok::RParen)?;
                Ok(Expr::Zeta(n))
            }
            Tok::Ident(name) => Ok(Expr::Var(name)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::LBracket => {
                let a = self.expr()?;
                self.expect(Tok::Comma)?;
                let b = self.expr()?;
                match self.peek() {
                    Some(Tok::RBracket) => {
                        self.pos += 1;
                        Ok(Expr::Commutator(Box::new(a), Box::new(b)))
                    }
                    Some(Tok::RBracketPlus) => {
                        self.pos += 1;
                        Ok(Expr::AntiCommutator(Box::new(a), Box::new(b)))
                    }
                    _ => self.err("expected `]` or `]+`"),
                }
            }
            _ => {
                self.pos -= 1;
                self.err("expected an operand")
            }
        }
    }
}

/// Parses a complete expression string.
pub fn parse(s: &str) -> Result<Expr> {
    let toks = tokenize(s)?;
    let mut p = Parser {
        toks,
        pos: 0,
        len: s.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Integer variable bindings for formula evaluation.
pub type Env<'a> = &'a dyn Fn(&str) -> Option<i64>;

fn no_vars(_: &str) -> Option<i64> {
    None
}

impl Expr {
    /// Smallest conductor in which every scalar literal of the expression lives.
    pub fn required_conductor(&self) -> u32 {
        match self {
            Expr::ImagUnit => 4,
            Expr::Zeta(n) => *n,
            Expr::Int(_) | Expr::Var(_) => 1,
            Expr::Neg(a) => a.required_conductor(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Commutator(a, b)
            | Expr::AntiCommutator(a, b) => lcm(a.required_conductor(), b.required_conductor()),
            Expr::Pow(a, _) => a.required_conductor(),
        }
    }

    /// Evaluates an integer-valued expression (exponents, coordinates).
    pub fn eval_int(&self, env: Env<'_>) -> Result<i64> {
        let overflow = || Error::Eval("integer overflow".into());
        match self {
            Expr::Int(n) => n.to_i64().ok_or_else(overflow),
            Expr::Var(v) => env(v).ok_or_else(|| Error::Eval(format!("unbound variable `{v}`"))),
            Expr::Neg(a) => Ok(-a.eval_int(env)?),
            Expr::Add(a, b) => a.eval_int(env)?.checked_add(b.eval_int(env)?).ok_or_else(overflow),
            Expr::Sub(a, b) => a.eval_int(env)?.checked_sub(b.eval_int(env)?).ok_or_else(overflow),
            Expr::Mul(a, b) => a.eval_int(env)?.checked_mul(b.eval_int(env)?).ok_or_else(overflow),
            Expr::Pow(a, b) => {
                let e = b.eval_int(env)?;
                let e = u32::try_from(e).map_err(|_| Error::Eval("negative exponent in integer expression".into()))?;
                a.eval_int(env)?.checked_pow(e).ok_or_else(overflow)
            }
            _ => Err(Error::Eval("not an integer expression".into())),
        }
    }

    /// Evaluates a scalar at the given conductor; variables resolve through `env`.
    pub fn eval_scalar(&self, conductor: u32, env: Env<'_>) -> Result<CycNum> {
        let need = self.required_conductor();
        if !conductor.is_multiple_of(need) {
            return Err(Error::NotDivisible {
                from: need,
                to: conductor,
            });
        }
        self.scalar(conductor, env)
    }

    fn scalar(&self, n: u32, env: Env<'_>) -> Result<CycNum> {
        Ok(match self {
            Expr::Int(k) => CycNum::from_rational(n, BigRational::from_integer(k.clone())),
            Expr::Var(v) => {
                let k = env(v).ok_or_else(|| Error::Eval(format!("unknown symbol `{v}`")))?;
                CycNum::from_int(n, k)
            }
            Expr::ImagUnit => CycNum::zeta_pow(4, 1).embed(n)?,
            Expr::Zeta(m) => CycNum::zeta(*m).embed(n)?,
            Expr::Neg(a) => -a.scalar(n, env)?,
            Expr::Add(a, b) => a.scalar(n, env)? + b.scalar(n, env)?,
            Expr::Sub(a, b) => a.scalar(n, env)? - b.scalar(n, env)?,
            Expr::Mul(a, b) => a.scalar(n, env)? * b.scalar(n, env)?,
            Expr::Div(a, b) => a.scalar(n, env)?.checked_div(&b.scalar(n, env)?)?,
            Expr::Pow(a, b) => {
                let e = b.eval_int(env)?;
                let base = a.scalar(n, env)?;
                if e < 0 && base.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                base.pow(e)
            }
            Expr::Commutator(..) | Expr::AntiCommutator(..) => {
                return Err(Error::Eval("brackets are not scalars".into()))
            }
        })
    }
}

/// Parses and evaluates a scalar string at its own required conductor
/// (or a multiple of it when `conductor` is given).
pub fn parse_scalar(s: &str, conductor: Option<u32>) -> Result<CycNum> {
    let e = parse(s)?;
    let n = conductor.unwrap_or_else(|| e.required_conductor());
    e.eval_scalar(n, &no_vars)
}

impl Expr {
    pub fn is_zero_literal(&self) -> bool {
        matches!(self, Expr::Int(n) if n.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_grammar() {
        assert_eq!(parse_scalar("3/2", None).unwrap(), CycNum::from_fraction(1, 3, 2));
        assert_eq!(parse_scalar("i*i", None).unwrap(), CycNum::from_int(4, -1));
        let g = parse_scalar("(1+i)/2", None).unwrap();
        assert_eq!(g.to_string(), "1/2 + 1/2*i");
        assert_eq!(parse_scalar("zeta(8)^-1", None).unwrap(), CycNum::zeta_pow(8, 7));
        assert_eq!(parse_scalar("-1^2", None).unwrap(), CycNum::from_int(1, -1));
        assert_eq!(parse_scalar("(-1)^2", None).unwrap(), CycNum::from_int(1, 1));
        assert_eq!(parse_scalar("i", Some(8)).unwrap(), CycNum::zeta_pow(8, 2));
    }

    #[test]
    fn display_parses_back() {
        for s in ["1/2 + 1/2*i", "-zeta(8)^3 + 2", "-7/3", "zeta(12) - zeta(12)^3"] {
            let v = parse_scalar(s, None).unwrap();
            let again = parse_scalar(&v.to_string(), Some(v.conductor())).unwrap();
            assert_eq!(v, again, "{s}");
        }
    }

    #[test]
    fn errors_carry_position() {
        assert!(matches!(parse("1 + ) 2"), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse("zeta(0)"), Err(Error::Parse { .. })));
        assert!(matches!(parse("1 2"), Err(Error::Parse { .. })));
        assert_eq!(parse_scalar("1/0", None), Err(Error::DivisionByZero));
        assert!(parse_scalar("i", Some(6)).is_err());
    }

    #[test]
    fn formula_with_variables() {
        let e = parse("(-1)^(p*s)").unwrap();
        let env = |v: &str| match v {
            "p" => Some(1),
            "s" => Some(1),
            _ => None,
        };
        assert_eq!(e.eval_scalar(4, &env).unwrap(), CycNum::from_int(4, -1));
    }

    #[test]
    fn bracket_tokens() {
        let e = parse("[w3,[w1,w2]+]").unwrap();
        assert!(matches!(e, Expr::Commutator(_, ref b) if matches!(**b, Expr::AntiCommutator(..))));
        let sum = parse("[a,b] + c").unwrap();
        assert!(matches!(sum, Expr::Add(..)));
    }
}
