//! Recursive-descent parser for algebra expressions.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? INT)?
//! atom  := INT | E | F | K | Omega | q | z | '(' expr ')'
//! ```
//!
//! Every canonical rendering of a [`Scalar`] or [`AlgebraElement`] parses
//! back to the same value.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::algebra::{casimir, Algebra, AlgebraElement, Monomial};
use crate::field::Field;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprErrorKind {
    UnexpectedChar(char),
    UnknownIdentifier(String),
    Expected(&'static str),
    TrailingInput,
    NonIntegerExponent,
    ExponentOutOfRange,
    DivisionByNonScalar,
    DivisionByZero,
    NotInvertible,
    NotScalar,
    NeedsQuantumGroup,
}

impl fmt::Display for ExprErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ExprErrorKind::UnknownIdentifier(s) => write!(f, "unknown identifier {s:?}"),
            ExprErrorKind::Expected(what) => write!(f, "expected {what}"),
            ExprErrorKind::TrailingInput => write!(f, "unexpected trailing input"),
            ExprErrorKind::NonIntegerExponent => write!(f, "exponent must be an integer literal"),
            ExprErrorKind::ExponentOutOfRange => write!(f, "exponent out of range"),
            ExprErrorKind::DivisionByNonScalar => write!(f, "division by a non-scalar"),
            ExprErrorKind::DivisionByZero => write!(f, "division by zero"),
            ExprErrorKind::NotInvertible => write!(f, "negative power of a non-invertible element"),
            ExprErrorKind::NotScalar => write!(f, "expression is not a scalar"),
            ExprErrorKind::NeedsQuantumGroup => write!(f, "Omega and z need f = f_m"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at byte {offset}: {kind}")]
pub struct ExprError {
    pub offset: usize,
    pub kind: ExprErrorKind,
}

fn err<T>(offset: usize, kind: ExprErrorKind) -> Result<T, ExprError> {
    Err(ExprError { offset, kind })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    E,
    F,
    K,
    Omega,
    Q,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Sym(Symbol),
    Neg(Box<Expr>),
    Bin {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
        /// Offset of the operator.
        at: usize,
    },
    Pow {
        base: Box<Expr>,
        exp: i64,
        at: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>, ExprError> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let t = lx.next()?;
            let done = t.0 == Tok::End;
            out.push(t);
            if done {
                return Ok(out);
            }
        }
    }

    fn next(&mut self) -> Result<(Tok, usize), ExprError> {
        let rest = &self.src[self.pos..];
        let trimmed = rest.trim_start();
        self.pos += rest.len() - trimmed.len();
        let start = self.pos;
        let Some(c) = trimmed.chars().next() else {
            return Ok((Tok::End, start));
        };
        let take = |pred: fn(char) -> bool| -> &str {
            let n = trimmed.find(|ch: char| !pred(ch)).unwrap_or(trimmed.len());
            &trimmed[..n]
        };
        if c.is_ascii_digit() {
            let digits = take(|ch| ch.is_ascii_digit());
            self.pos += digits.len();
            return Ok((Tok::Int(digits.parse().expect("digits")), start));
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let word = take(|ch| ch.is_ascii_alphanumeric() || ch == '_');
            self.pos += word.len();
            return Ok((Tok::Ident(word.to_string()), start));
        }
        if "+-*/^()".contains(c) {
            self.pos += 1;
            return Ok((Tok::Op(c), start));
        }
        err(start, ExprErrorKind::UnexpectedChar(c))
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn offset(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if t.0 != Tok::End {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Op(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let at = self.offset();
            let op = match self.peek() {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Bin { op, lhs: Box::new(lhs), rhs: Box::new(rhs), at };
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let at = self.offset();
            let op = match self.peek() {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Bin { op, lhs: Box::new(lhs), rhs: Box::new(rhs), at };
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        let at = self.offset();
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let here = self.offset();
        match self.bump().0 {
            Tok::Int(n) => {
                let n = if neg { -n } else { n };
                let exp: i64 = n
                    .try_into()
                    .or_else(|_| err(here, ExprErrorKind::ExponentOutOfRange))?;
                Ok(Expr::Pow { base: Box::new(base), exp, at })
            }
            _ => err(here, ExprErrorKind::NonIntegerExponent),
        }
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let (tok, at) = self.bump();
        match tok {
            Tok::Int(n) => Ok(Expr::Int(n)),
            Tok::Ident(name) => {
                let sym = match name.as_str() {
                    "E" => Symbol::E,
                    "F" => Symbol::F,
                    "K" => Symbol::K,
                    "Omega" => Symbol::Omega,
                    "q" => Symbol::Q,
                    "z" => Symbol::Z,
                    _ => return err(at, ExprErrorKind::UnknownIdentifier(name)),
                };
                Ok(Expr::Sym(sym))
            }
            Tok::Op('(') => {
                let inner = self.expr()?;
                if !self.eat(')') {
                    return err(self.offset(), ExprErrorKind::Expected("')'"));
                }
                Ok(inner)
            }
            _ => err(at, ExprErrorKind::Expected("a number, a symbol or '('")),
        }
    }
}

pub fn parse(input: &str) -> Result<Expr, ExprError> {
    let mut p = Parser { toks: Lexer::tokens(input)?, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return err(p.offset(), ExprErrorKind::TrailingInput);
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Scalar(Scalar),
    Element(AlgebraElement),
}

impl Value {
    fn into_element(self, alg: &Arc<Algebra>) -> AlgebraElement {
        match self {
            Value::Scalar(s) => AlgebraElement::scalar(alg, s),
            Value::Element(u) => u,
        }
    }

    /// The scalar, if the value is a multiple of `1`.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self {
            Value::Scalar(s) => Some(s.clone()),
            Value::Element(u) => {
                if u.is_zero() {
                    return Some(Scalar::zero());
                }
                match u.terms().next() {
                    Some((mono, c)) if u.len() == 1 && *mono == Monomial::ONE => Some(c.clone()),
                    _ => None,
                }
            }
        }
    }
}

fn elem_err(at: usize, _: crate::algebra::AlgebraError) -> ExprError {
    ExprError { offset: at, kind: ExprErrorKind::NeedsQuantumGroup }
}

fn power(v: Value, exp: i64, at: usize, alg: &Arc<Algebra>) -> Result<Value, ExprError> {
    if let Some(s) = v.as_scalar() {
        return s
            .pow_i(exp)
            .map(Value::Scalar)
            .or_else(|_| err(at, ExprErrorKind::DivisionByZero));
    }
    let u = v.into_element(alg);
    if exp >= 0 {
        let exp = u32::try_from(exp).or_else(|_| err(at, ExprErrorKind::ExponentOutOfRange))?;
        return Ok(Value::Element(u.pow(exp)));
    }
    // only c K^b is invertible among the elements we can recognise
    let single = match u.terms().next() {
        Some((mono, c)) if u.len() == 1 && mono.f == 0 && mono.e == 0 => Some((mono.k, c.clone())),
        _ => None,
    };
    let Some((k, c)) = single else {
        return err(at, ExprErrorKind::NotInvertible);
    };
    let c = c.pow_i(exp).expect("nonzero coefficient");
    Ok(Value::Element(AlgebraElement::monomial(alg, Monomial::new(0, k * exp, 0), c)))
}

/// Evaluate in `alg`; `z` is the primitive `2m`-th root of unity.
pub fn evaluate(e: &Expr, alg: &Arc<Algebra>) -> Result<Value, ExprError> {
    eval_at(e, alg, 0)
}

fn eval_at(e: &Expr, alg: &Arc<Algebra>, at: usize) -> Result<Value, ExprError> {
    Ok(match e {
        Expr::Int(n) => Value::Scalar(Scalar::rational(BigRational::from_integer(n.clone()))),
        Expr::Sym(s) => match s {
            Symbol::E => Value::Element(AlgebraElement::e(alg)),
            Symbol::F => Value::Element(AlgebraElement::f(alg)),
            Symbol::K => Value::Element(AlgebraElement::k(alg)),
            Symbol::Omega => Value::Element(casimir(alg).map_err(|x| elem_err(at, x))?),
            Symbol::Q => Value::Scalar(Scalar::q()),
            Symbol::Z => {
                let m = alg.require_fm().map_err(|x| elem_err(at, x))?;
                Value::Scalar(Scalar::zeta(2 * m))
            }
        },
        Expr::Neg(x) => match eval_at(x, alg, at)? {
            Value::Scalar(s) => Value::Scalar(-s),
            Value::Element(u) => Value::Element(u.neg()),
        },
        Expr::Pow { base, exp, at } => power(eval_at(base, alg, *at)?, *exp, *at, alg)?,
        Expr::Bin { op, lhs, rhs, at } => {
            let a = eval_at(lhs, alg, *at)?;
            let b = eval_at(rhs, alg, *at)?;
            match (op, a, b) {
                (BinOp::Div, a, b) => {
                    let Some(d) = b.as_scalar() else {
                        return err(*at, ExprErrorKind::DivisionByNonScalar);
                    };
                    let Ok(inv) = d.try_inv() else {
                        return err(*at, ExprErrorKind::DivisionByZero);
                    };
                    match a {
                        Value::Scalar(s) => Value::Scalar(s * inv),
                        Value::Element(u) => Value::Element(u.scale(&inv)),
                    }
                }
                (op, Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    _ => x * y,
                }),
                (op, a, b) => {
                    let (x, y) = (a.into_element(alg), b.into_element(alg));
                    Value::Element(match op {
                        BinOp::Add => &x + &y,
                        BinOp::Sub => &x - &y,
                        _ => &x * &y,
                    })
                }
            }
        }
    })
}

pub fn parse_element(input: &str, alg: &Arc<Algebra>) -> Result<AlgebraElement, ExprError> {
    Ok(evaluate(&parse(input)?, alg)?.into_element(alg))
}

/// A scalar in the field of `alg`; generators are allowed only if they
/// cancel out.
pub fn parse_scalar(input: &str, alg: &Arc<Algebra>) -> Result<Scalar, ExprError> {
    evaluate(&parse(input)?, alg)?
        .as_scalar()
        .ok_or(ExprError { offset: 0, kind: ExprErrorKind::NotScalar })
}
