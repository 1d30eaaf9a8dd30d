//! Closed-form prime-power rules such as `l + 1` or `(p^(l+1) - 1)/(p - 1)`.
//!
//! Grammar: integers, the variables `p` and `l` (alias `ell`), binary
//! `+ - * / ^` (`^` is right-associative and needs an integer exponent),
//! unary minus, parentheses and the functions `min(..)` and `max(..)`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(BigInt),
    P,
    L,
    Neg(Box<Expr>),
    Bin(Op, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Min,
    Max,
}

const MAX_EXPONENT: i64 = 4096;

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let tokens = tokenize(src)?;
        let mut parser = Parser { tokens, pos: 0 };
        let e = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(Error::Parse(format!("trailing input in {src:?}")));
        }
        Ok(e)
    }

    pub fn eval(&self, p: u64, l: u32) -> Result<Rational> {
        match self {
            Expr::Int(n) => Ok(Rational::from_integer(n.clone())),
            Expr::P => Ok(Rational::from_integer(p.into())),
            Expr::L => Ok(Rational::from_integer(l.into())),
            Expr::Neg(e) => Ok(-e.eval(p, l)?),
            Expr::Bin(op, a, b) => {
                let a = a.eval(p, l)?;
                let b = b.eval(p, l)?;
                match op {
                    Op::Add => Ok(a + b),
                    Op::Sub => Ok(a - b),
                    Op::Mul => Ok(a * b),
                    Op::Div => {
                        if b.is_zero() {
                            Err(Error::Precondition(format!("division by zero at p={p}, l={l}")))
                        } else {
                            Ok(a / b)
                        }
                    }
                    Op::Pow => pow(a, b, p, l),
                }
            }
            Expr::Call(f, args) => {
                let vals = args.iter().map(|e| e.eval(p, l)).collect::<Result<Vec<_>>>()?;
                let pick = match f {
                    Func::Min => vals.into_iter().min(),
                    Func::Max => vals.into_iter().max(),
                };
                pick.ok_or_else(|| Error::Parse("min/max need an argument".into()))
            }
        }
    }
}

fn pow(base: Rational, exp: Rational, p: u64, l: u32) -> Result<Rational> {
    if !exp.is_integer() {
        return Err(Error::Precondition(format!("non-integer exponent at p={p}, l={l}")));
    }
    let e = exp
        .to_integer()
        .to_i64()
        .filter(|e| e.abs() <= MAX_EXPONENT)
        .ok_or_else(|| Error::Overflow(format!("exponent too large at p={p}, l={l}")))?;
    if e < 0 && base.is_zero() {
        return Err(Error::Precondition(format!("0 to a negative power at p={p}, l={l}")));
    }
    let mag = num_traits::pow(base, e.unsigned_abs() as usize);
    Ok(if e < 0 { Rational::one() / mag } else { mag })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(s.parse().unwrap()));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^(),".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {src:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek_sym(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Tok::Sym(c)) => Some(*c),
            _ => None,
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek_sym() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {c:?}")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_sym() {
            self.pos += 1;
            let rhs = self.term()?;
            let op = if c == '+' { Op::Add } else { Op::Sub };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_sym() {
            self.pos += 1;
            let rhs = self.unary()?;
            let op = if c == '*' { Op::Mul } else { Op::Div };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek_sym() == Some('-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek_sym() == Some('^') {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Expr::Bin(Op::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let tok = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::Parse("unexpected end of expression".into()))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(Expr::Int(n)),
            Tok::Ident(name) => match name.as_str() {
                "p" => Ok(Expr::P),
                "l" | "ell" => Ok(Expr::L),
                "min" | "max" => {
                    let func = if name == "min" { Func::Min } else { Func::Max };
                    self.expect('(')?;
                    let mut args = vec![self.expr()?];
                    while self.peek_sym() == Some(',') {
                        self.pos += 1;
                        args.push(self.expr()?);
                    }
                    self.expect(')')?;
                    Ok(Expr::Call(func, args))
                }
                other => Err(Error::Parse(format!("unknown identifier {other:?}"))),
            },
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym(c) => Err(Error::Parse(format!("unexpected {c:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn ev(src: &str, p: u64, l: u32) -> Rational {
        Expr::parse(src).unwrap().eval(p, l).unwrap()
    }

    #[test]
    fn arithmetic_and_precedence() {
        assert_eq!(ev("l + 1", 7, 3), rat(4, 1));
        assert_eq!(ev("2^l", 7, 3), rat(8, 1));
        assert_eq!(ev("2^3^2", 0, 0), rat(512, 1));
        assert_eq!(ev("-2^2", 0, 0), rat(-4, 1));
        assert_eq!(ev("(p^(l+1) - 1)/(p - 1)", 2, 3), rat(15, 1));
        assert_eq!(ev("1 + 1/p", 3, 1), rat(4, 3));
        assert_eq!(ev("p^-1", 4, 1), rat(1, 4));
        assert_eq!(ev("min(l, 2) * max(1, p - 5)", 3, 9), rat(2, 1));
        assert_eq!(ev("ell", 3, 9), rat(9, 1));
    }

    #[test]
    fn errors() {
        assert!(Expr::parse("l +").is_err());
        assert!(Expr::parse("q").is_err());
        assert!(Expr::parse("(l").is_err());
        assert!(Expr::parse("l $ 2").is_err());
        assert!(Expr::parse("1/(p-p)").unwrap().eval(2, 1).is_err());
        assert!(Expr::parse("2^(1/2)").unwrap().eval(2, 1).is_err());
        assert!(Expr::parse("2^100000").unwrap().eval(2, 1).is_err());
    }
}
