//! Expression language for family files.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | factor
//! factor  := base ('^' uint)?
//! base    := rational | ident | '(' expr ')'
//! rational:= uint ('/' uint)?
//! ```
//!
//! `p/q` is read as one literal only where a new operand starts (not as the
//! right operand of `/`) and only when it is not immediately raised to a
//! power, so `a/2/3` and `2/3^2` keep their left-associative meaning.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{Num, ToPrimitive, Zero};

use crate::error::{AlgebraError, ExprError, ParseError, ParseErrorKind};
use crate::mpoly::MultiPoly;
use crate::ratfun::RationalFunction;
use crate::ring::RingRef;
use crate::scalar::Scalar;
use crate::xpoly::XPolynomial;

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    /// Nonnegative literal `num` or `num/den`.
    Literal { num: BigUint, den: Option<BigUint> },
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigUint),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(v) => format!("number `{v}`"),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
    }
}

fn err(pos: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { pos, kind }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && (bytes[i].is_ascii_alphabetic() || bytes[i] == b'_' || bytes[i] == b'.') {
                // `2x` (implicit product) and `1.5` (decimal) are both rejected.
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_' || bytes[j] == b'.') {
                    j += 1;
                }
                return Err(err(start, ParseErrorKind::MalformedToken(src[start..j].to_string())));
            }
            let v: BigUint = src[start..i].parse().expect("digits");
            out.push((start, Tok::Int(v)));
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
            continue;
        }
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => {
                let ch = src[start..].chars().next().unwrap();
                return Err(err(start, ParseErrorKind::MalformedToken(ch.to_string())));
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary(true)?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary(true)?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary(false)?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self, allow_fraction: bool) -> Result<Expr, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary(true)?)));
        }
        self.factor(allow_fraction)
    }

    fn factor(&mut self, allow_fraction: bool) -> Result<Expr, ParseError> {
        let base = self.base(allow_fraction)?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let at = self.here();
            return match self.bump() {
                Some(Tok::Int(v)) => {
                    let e = v.to_u32().ok_or_else(|| err(at, ParseErrorKind::BadExponent))?;
                    if let Some(Tok::Caret) = self.peek() {
                        return Err(err(self.here(), ParseErrorKind::Unexpected("`^` (parenthesize nested powers)".into())));
                    }
                    Ok(Expr::Pow(Box::new(base), e))
                }
                Some(_) => Err(err(at, ParseErrorKind::BadExponent)),
                None => Err(err(at, ParseErrorKind::UnexpectedEnd)),
            };
        }
        Ok(base)
    }

    fn base(&mut self, allow_fraction: bool) -> Result<Expr, ParseError> {
        let at = self.here();
        match self.bump() {
            Some(Tok::Int(num)) => {
                let fraction = allow_fraction
                    && matches!(self.peek(), Some(Tok::Slash))
                    && matches!(self.peek_at(1), Some(Tok::Int(_)))
                    && !matches!(self.peek_at(2), Some(Tok::Caret));
                if fraction {
                    self.bump();
                    let den_at = self.here();
                    let Some(Tok::Int(den)) = self.bump() else { unreachable!() };
                    if den.is_zero() {
                        return Err(err(den_at, ParseErrorKind::MalformedToken(format!("{num}/0"))));
                    }
                    Ok(Expr::Literal { num, den: Some(den) })
                } else {
                    Ok(Expr::Literal { num, den: None })
                }
            }
            Some(Tok::Ident(name)) => {
                if self.names.iter().any(|n| *n == name) {
                    Ok(Expr::Ident(name))
                } else {
                    Err(err(at, ParseErrorKind::UnknownIdentifier(name)))
                }
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    Some(t) => Err(err(self.toks[self.pos - 1].0, ParseErrorKind::Unexpected(describe(&t)))),
                    None => Err(err(at, ParseErrorKind::Unbalanced)),
                }
            }
            Some(Tok::RParen) => Err(err(at, ParseErrorKind::Unbalanced)),
            Some(t) => Err(err(at, ParseErrorKind::Unexpected(describe(&t)))),
            None => Err(err(at, ParseErrorKind::UnexpectedEnd)),
        }
    }
}

/// Parse `src`, accepting identifiers `x`, `n` and the declared parameters.
pub fn parse<S: AsRef<str>>(src: &str, params: &[S]) -> Result<Expr, ParseError> {
    let mut names: Vec<String> = vec![crate::ring::X.into(), crate::ring::N.into()];
    names.extend(params.iter().map(|p| p.as_ref().to_string()));
    parse_with_names(src, &names)
}

/// Parse with an explicit identifier list (e.g. a ring's names).
pub fn parse_with_names(src: &str, names: &[String]) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
        names,
    };
    if p.toks.is_empty() {
        return Err(err(0, ParseErrorKind::UnexpectedEnd));
    }
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some(Tok::RParen) => Err(err(p.here(), ParseErrorKind::Unbalanced)),
        Some(t) => {
            let d = describe(t);
            Err(err(p.here(), ParseErrorKind::Unexpected(d)))
        }
    }
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            Expr::Literal { den: Some(_), .. } => 4,
            Expr::Literal { .. } | Expr::Ident(_) => 5,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let wrap = self.prec() < min_prec;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Expr::Literal { num, den } => match den {
                Some(d) => write!(f, "{num}/{d}")?,
                None => write!(f, "{num}")?,
            },
            Expr::Ident(s) => f.write_str(s)?,
            Expr::Neg(e) => {
                f.write_str("-")?;
                e.write(f, 3)?;
            }
            Expr::Add(a, b) => {
                a.write(f, 1)?;
                f.write_str(" + ")?;
                b.write(f, 2)?;
            }
            Expr::Sub(a, b) => {
                a.write(f, 1)?;
                f.write_str(" - ")?;
                b.write(f, 2)?;
            }
            Expr::Mul(a, b) => {
                a.write(f, 2)?;
                f.write_str("*")?;
                b.write(f, 3)?;
            }
            Expr::Div(a, b) => {
                a.write(f, 2)?;
                f.write_str("/")?;
                // A bare literal here could fuse with a preceding integer.
                let need = if matches!(**b, Expr::Literal { .. }) { 6 } else { 3 };
                b.write(f, need)?;
            }
            Expr::Pow(b, e) => {
                b.write(f, 5)?;
                write!(f, "^{e}")?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }

    /// Exact value as a rational function over `ring`.
    pub fn eval_to_ratfun<K: Scalar>(&self, ring: &RingRef) -> Result<RationalFunction<K>, AlgebraError> {
        Ok(match self {
            Expr::Literal { num, den } => {
                let n = int_from_big::<K>(num);
                let d = match den {
                    Some(d) => int_from_big::<K>(d),
                    None => num_traits::One::one(),
                };
                if d.is_zero() {
                    return Err(AlgebraError::DivisionByZero);
                }
                RationalFunction::constant(ring, K::from_parts(n, d))
            }
            Expr::Ident(name) => {
                let idx = ring
                    .index_of(name)
                    .ok_or_else(|| AlgebraError::UnknownVariable(name.clone()))?;
                RationalFunction::var(ring, idx)
            }
            Expr::Neg(e) => -e.eval_to_ratfun::<K>(ring)?,
            Expr::Add(a, b) => a.eval_to_ratfun::<K>(ring)?.checked_add(&b.eval_to_ratfun(ring)?)?,
            Expr::Sub(a, b) => a.eval_to_ratfun::<K>(ring)?.checked_sub(&b.eval_to_ratfun(ring)?)?,
            Expr::Mul(a, b) => a.eval_to_ratfun::<K>(ring)?.checked_mul(&b.eval_to_ratfun(ring)?)?,
            Expr::Div(a, b) => a.eval_to_ratfun::<K>(ring)?.checked_div(&b.eval_to_ratfun(ring)?)?,
            Expr::Pow(b, e) => b.eval_to_ratfun::<K>(ring)?.pow(*e),
        })
    }

    /// Exact value as a polynomial in `x`; fails if `x` reaches a denominator.
    pub fn eval_to_xpoly<K: Scalar>(&self, ring: &RingRef) -> Result<XPolynomial<K>, AlgebraError> {
        XPolynomial::from_ratfun(&self.eval_to_ratfun(ring)?)
    }
}

fn int_from_big<K: Scalar>(v: &BigUint) -> K::Int {
    K::Int::from_str_radix(&v.to_string(), 10)
        .unwrap_or_else(|_| panic!("literal {v} does not fit the scalar type"))
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

/// Parse with the ring's names and evaluate to a rational function.
pub fn parse_ratfun<K: Scalar>(src: &str, ring: &RingRef) -> Result<RationalFunction<K>, ExprError> {
    let e = parse_with_names(src, ring.names())?;
    Ok(e.eval_to_ratfun(ring)?)
}

/// Parse with the ring's names and evaluate to a polynomial in `x`.
pub fn parse_xpoly<K: Scalar>(src: &str, ring: &RingRef) -> Result<XPolynomial<K>, ExprError> {
    let e = parse_with_names(src, ring.names())?;
    Ok(e.eval_to_xpoly(ring)?)
}

/// Parse with the ring's names and evaluate to a polynomial over the ring.
pub fn parse_mpoly<K: Scalar>(src: &str, ring: &RingRef) -> Result<MultiPoly<K>, ExprError> {
    let f: RationalFunction<K> = parse_ratfun(src, ring)?;
    if !f.is_polynomial() {
        return Err(ExprError::Algebra(AlgebraError::NotDivisible {
            remainder: f.to_string(),
        }));
    }
    Ok(f.into_parts().0)
}
