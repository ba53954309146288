use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::laurent::{LaurentPoly, Rat};
use super::scalar::Scalar;
use crate::{QError, Result};

/// Token with source position; shared by the scalar parser and the
/// relation-file DSL.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokKind,
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokKind {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Semi,
    Less,
    Eof,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut it = text.chars().peekable();
    while let Some(&ch) = it.peek() {
        let (l, c) = (line, col);
        let mut bump = |it: &mut std::iter::Peekable<std::str::Chars>| {
            let ch = it.next().unwrap();
            if ch == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            ch
        };
        match ch {
            ' ' | '\t' | '\r' | '\n' => {
                bump(&mut it);
            }
            '#' => {
                while let Some(&c2) = it.peek() {
                    if c2 == '\n' {
                        break;
                    }
                    bump(&mut it);
                }
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&c2) = it.peek() {
                    if c2.is_ascii_digit() {
                        digits.push(bump(&mut it));
                    } else {
                        break;
                    }
                }
                let n = BigInt::parse_bytes(digits.as_bytes(), 10).unwrap();
                out.push(Token { kind: TokKind::Int(n), line: l, col: c });
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut name = String::new();
                while let Some(&c2) = it.peek() {
                    if c2.is_ascii_alphanumeric() || c2 == '_' {
                        name.push(bump(&mut it));
                    } else {
                        break;
                    }
                }
                out.push(Token { kind: TokKind::Ident(name), line: l, col: c });
            }
            _ => {
                let kind = match ch {
                    '+' => TokKind::Plus,
                    '-' => TokKind::Minus,
                    '*' => TokKind::Star,
                    '/' => TokKind::Slash,
                    '^' => TokKind::Caret,
                    '(' => TokKind::LParen,
                    ')' => TokKind::RParen,
                    ';' => TokKind::Semi,
                    '<' => TokKind::Less,
                    other => {
                        return Err(QError::Syntax {
                            line: l,
                            col: c,
                            msg: format!("unexpected character `{other}`"),
                        })
                    }
                };
                bump(&mut it);
                out.push(Token { kind, line: l, col: c });
            }
        }
    }
    out.push(Token { kind: TokKind::Eof, line, col });
    Ok(out)
}

/// Recursive-descent parser over a token slice; also reused by the DSL for
/// embedded scalar expressions.
pub struct Parser<'a> {
    toks: &'a [Token],
    pub pos: usize,
}

impl<'a> Parser<'a> {
    pub fn new(toks: &'a [Token]) -> Self {
        Parser { toks, pos: 0 }
    }

    pub fn peek(&self) -> &Token {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    pub fn next(&mut self) -> Token {
        let t = self.peek().clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    pub fn err(&self, msg: impl Into<String>) -> QError {
        let t = self.peek();
        QError::Syntax { line: t.line, col: t.col, msg: msg.into() }
    }

    fn err_scalar(&self, msg: impl Into<String>) -> QError {
        let t = self.peek();
        QError::MalformedScalar { line: t.line, col: t.col, msg: msg.into() }
    }

    pub fn expect(&mut self, kind: &TokKind, what: &str) -> Result<Token> {
        if &self.peek().kind == kind {
            Ok(self.next())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    pub fn scalar_expr(&mut self) -> Result<Scalar> {
        let mut acc = self.scalar_term()?;
        loop {
            match self.peek().kind {
                TokKind::Plus => {
                    self.next();
                    acc = &acc + &self.scalar_term()?;
                }
                TokKind::Minus => {
                    self.next();
                    acc = &acc - &self.scalar_term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn scalar_term(&mut self) -> Result<Scalar> {
        let mut acc = self.scalar_unary()?;
        loop {
            match self.peek().kind {
                TokKind::Star => {
                    self.next();
                    acc = &acc * &self.scalar_unary()?;
                }
                TokKind::Slash => {
                    self.next();
                    let d = self.scalar_unary()?;
                    acc = acc
                        .checked_div(&d)
                        .map_err(|_| self.err_scalar("division by zero"))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn scalar_unary(&mut self) -> Result<Scalar> {
        if self.peek().kind == TokKind::Minus {
            self.next();
            return Ok(-&self.scalar_unary()?);
        }
        self.scalar_power()
    }

    fn scalar_power(&mut self) -> Result<Scalar> {
        let base = self.scalar_atom()?;
        if self.peek().kind != TokKind::Caret {
            return Ok(match base {
                Base::Q => Scalar::q(),
                Base::S => Scalar::s(),
                Base::Val(v) => v,
            });
        }
        self.next();
        let e = self.exponent()?;
        match base {
            Base::Q => {
                let in_s = &e * &Rat::from_integer(2.into());
                if !in_s.is_integer() {
                    return Err(self.err_scalar("q^e needs e a multiple of 1/2"));
                }
                Ok(Scalar::s_pow(rat_to_i64(&in_s)))
            }
            Base::S => {
                if !e.is_integer() {
                    return Err(self.err_scalar("s^e needs an integer exponent"));
                }
                Ok(Scalar::s_pow(rat_to_i64(&e)))
            }
            Base::Val(v) => {
                if !e.is_integer() {
                    return Err(self.err_scalar("fractional exponent on a non-symbol"));
                }
                v.pow(rat_to_i64(&e))
                    .map_err(|_| self.err_scalar("negative power of zero"))
            }
        }
    }

    fn scalar_atom(&mut self) -> Result<Base> {
        let t = self.next();
        match t.kind {
            TokKind::Int(n) => Ok(Base::Val(Scalar::from_rat(Rat::from_integer(n)))),
            TokKind::Ident(name) => match name.as_str() {
                "q" => Ok(Base::Q),
                "s" => Ok(Base::S),
                other => Err(QError::MalformedScalar {
                    line: t.line,
                    col: t.col,
                    msg: format!("unknown symbol `{other}` in scalar"),
                }),
            },
            TokKind::LParen => {
                let v = self.scalar_expr()?;
                self.expect(&TokKind::RParen, "`)`")?;
                Ok(Base::Val(v))
            }
            _ => Err(QError::MalformedScalar {
                line: t.line,
                col: t.col,
                msg: "expected integer, `q`, `s`, or `(`".into(),
            }),
        }
    }

    /// Exponent: signed integer, or a parenthesized signed rational a/b.
    fn exponent(&mut self) -> Result<Rat> {
        let mut neg = false;
        if self.peek().kind == TokKind::Minus {
            self.next();
            neg = true;
        }
        let v = match self.next().kind {
            TokKind::Int(n) => Rat::from_integer(n),
            TokKind::LParen => {
                let mut inner_neg = false;
                if self.peek().kind == TokKind::Minus {
                    self.next();
                    inner_neg = true;
                }
                let numer = match self.next().kind {
                    TokKind::Int(n) => n,
                    _ => return Err(self.err_scalar("expected integer exponent")),
                };
                let denom = if self.peek().kind == TokKind::Slash {
                    self.next();
                    match self.next().kind {
                        TokKind::Int(n) if !n.is_zero() => n,
                        _ => return Err(self.err_scalar("expected nonzero integer denominator")),
                    }
                } else {
                    BigInt::one()
                };
                self.expect(&TokKind::RParen, "`)`")?;
                let r = Rat::new(numer, denom);
                if inner_neg {
                    -r
                } else {
                    r
                }
            }
            _ => return Err(self.err_scalar("expected exponent")),
        };
        Ok(if neg { -v } else { v })
    }

    pub fn at_eof(&self) -> bool {
        self.peek().kind == TokKind::Eof
    }
}

enum Base {
    Q,
    S,
    Val(Scalar),
}

fn rat_to_i64(r: &Rat) -> i64 {
    debug_assert!(r.is_integer());
    let n = r.to_integer();
    i64::try_from(n).expect("exponent fits i64")
}

pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let toks = tokenize(text)?;
    let mut p = Parser::new(&toks);
    let v = p.scalar_expr()?;
    if !p.at_eof() {
        return Err(p.err("trailing input after scalar"));
    }
    Ok(v)
}

impl FromStr for Scalar {
    type Err = QError;
    fn from_str(s: &str) -> Result<Scalar> {
        parse_scalar(s)
    }
}

/// Canonical printer. Uses q when every s-exponent in both parts is even,
/// otherwise s; output round-trips through `parse_scalar` bit-exactly.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let use_q = self.num().q_expressible() && self.den().q_expressible();
        if self.den().is_one() {
            write!(f, "{}", poly_string(self.num(), use_q))
        } else {
            write!(
                f,
                "({})/({})",
                poly_string(self.num(), use_q),
                poly_string(self.den(), use_q)
            )
        }
    }
}

fn rat_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn poly_string(p: &LaurentPoly, use_q: bool) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let var = if use_q { "q" } else { "s" };
    let mut out = String::new();
    let terms: Vec<(i64, Rat)> = p.iter().map(|(e, c)| (*e, c.clone())).collect();
    for (i, (e, c)) in terms.iter().rev().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let disp_exp = if use_q { e / 2 } else { *e };
        if *e == 0 {
            out.push_str(&rat_string(&mag));
        } else {
            if !mag.is_one() {
                out.push_str(&rat_string(&mag));
                out.push('*');
            }
            out.push_str(var);
            if disp_exp != 1 {
                out.push_str(&format!("^{disp_exp}"));
            }
        }
    }
    out
}
