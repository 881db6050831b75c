//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | identifier | '(' expr ')'
//! ```

use crate::error::{Error, Result};
use crate::poly::{Poly, RingCtx};

const MAX_EXPONENT: u64 = 64;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Token::Int(src[start..i].to_string())));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Token::Ident(src[start..i].to_string())));
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Expr {
    Int(String),
    Var(String, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser {
    toks: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(Token::Star) = self.peek() {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if let Some(Token::Minus) = self.peek() {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if let Some(Token::Caret) = self.peek() {
            self.pos += 1;
            let at = self.here();
            match self.toks.get(self.pos).cloned() {
                Some((_, Token::Int(digits))) => {
                    self.pos += 1;
                    let exp = digits.parse::<u64>().unwrap_or(u64::MAX);
                    if exp > MAX_EXPONENT {
                        return Err(Error::ExponentOverflow { exp, pos: at });
                    }
                    return Ok(Expr::Pow(Box::new(base), exp as u32));
                }
                _ => {
                    return Err(Error::Syntax {
                        pos: at,
                        msg: "exponent must be a nonnegative integer literal".into(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.here();
        match self.toks.get(self.pos).cloned() {
            Some((_, Token::Int(d))) => {
                self.pos += 1;
                Ok(Expr::Int(d))
            }
            Some((p, Token::Ident(name))) => {
                self.pos += 1;
                Ok(Expr::Var(name, p))
            }
            Some((_, Token::LParen)) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Token::RParen) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(Error::Syntax {
                        pos: self.here(),
                        msg: "expected `)`".into(),
                    }),
                }
            }
            Some((_, t)) => Err(Error::Syntax {
                pos: at,
                msg: format!("unexpected token {t:?}"),
            }),
            None => Err(Error::Syntax {
                pos: at,
                msg: "unexpected end of input".into(),
            }),
        }
    }
}

fn parse_expr(src: &str) -> Result<Expr> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Syntax {
            pos: p.here(),
            msg: "trailing input".into(),
        });
    }
    Ok(e)
}

fn eval(e: &Expr, ctx: &RingCtx) -> Result<Poly> {
    Ok(match e {
        Expr::Int(d) => {
            let p = ctx.p() as u64;
            let v = d.bytes().fold(0u64, |acc, b| (acc * 10 + (b - b'0') as u64) % p);
            Poly::constant(ctx, v as i64)
        }
        Expr::Var(name, pos) => match ctx.var_index(name) {
            Some(i) => Poly::var(ctx, i),
            None => {
                return Err(Error::UnknownVariable {
                    name: name.clone(),
                    pos: *pos,
                })
            }
        },
        Expr::Neg(a) => -&eval(a, ctx)?,
        Expr::Add(a, b) => &eval(a, ctx)? + &eval(b, ctx)?,
        Expr::Sub(a, b) => &eval(a, ctx)? - &eval(b, ctx)?,
        Expr::Mul(a, b) => &eval(a, ctx)? * &eval(b, ctx)?,
        Expr::Pow(a, n) => eval(a, ctx)?.pow(*n),
    })
}

pub fn parse_poly(src: &str, ctx: &RingCtx) -> Result<Poly> {
    eval(&parse_expr(src)?, ctx)
}

/// Splits a factored equation such as `x * y * (x+y)` at its top-level
/// products and evaluates each factor separately.
pub fn parse_factors(src: &str, ctx: &RingCtx) -> Result<Vec<Poly>> {
    fn flatten<'a>(e: &'a Expr, out: &mut Vec<&'a Expr>) {
        match e {
            Expr::Mul(a, b) => {
                flatten(a, out);
                flatten(b, out);
            }
            other => out.push(other),
        }
    }
    let e = parse_expr(src)?;
    let mut parts = Vec::new();
    flatten(&e, &mut parts);
    let mut out = Vec::new();
    let mut scalar = Poly::one(ctx);
    for part in parts {
        let f = eval(part, ctx)?;
        if f.is_constant() {
            scalar = &scalar * &f;
        } else {
            out.push(f);
        }
    }
    if scalar.is_zero() {
        return Err(Error::NonLocal("equation is zero".into()));
    }
    if let Some(first) = out.first_mut() {
        *first = &*first * &scalar;
    }
    Ok(out)
}

/// Identifiers in order of first appearance; used to infer a variable list.
pub fn identifiers(src: &str) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    for (_, t) in tokenize(src)? {
        if let Token::Ident(name) = t {
            if !out.contains(&name) {
                out.push(name);
            }
        }
    }
    Ok(out)
}
