//! Text syntax for forms.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := ('+' | '-') unary | power
//! power   := atom ('^' integer)?
//! atom    := integer ('/' integer)? | identifier | '(' expr ')'
//! ```
//!
//! Multiplication must be written explicitly. A rational literal `p/q` is a
//! single atom, so `-1/3*x^3` is `(-1/3) * x^3` and `2/3^2` is `(2/3)^2`.
//! Division anywhere else is a syntax error.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::form::{check_homogeneous, Form, FormError, Monomial, Rational};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 1 << 16;

/// Ordered, distinct variable names. Position `i` is coordinate `i` of every
/// point and matrix row downstream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableContext {
    names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ContextError {
    #[error("at least one variable is required")]
    Empty,
    #[error("invalid variable name {0:?}")]
    InvalidName(String),
    #[error("duplicate variable name {0:?}")]
    Duplicate(String),
}

impl VariableContext {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, ContextError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(ContextError::Empty);
        }
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) {
                return Err(ContextError::InvalidName(name.clone()));
            }
            if names[..i].contains(name) {
                return Err(ContextError::Duplicate(name.clone()));
            }
        }
        Ok(VariableContext { names })
    }

    /// Parses a comma-separated list such as `x,y,z`.
    pub fn from_list(list: &str) -> Result<Self, ContextError> {
        Self::new(list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable {name:?} at byte {offset}")]
    UnknownVariable { offset: usize, name: String },
    #[error("exponent {value} at byte {offset} exceeds the limit of {MAX_EXPONENT}")]
    ExponentOverflow { offset: usize, value: String },
    #[error(transparent)]
    Form(#[from] FormError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(text[start..i].parse().expect("digits")), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    offset: start,
                    message: format!("unexpected character {ch:?}"),
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

/// Sparse, not necessarily homogeneous polynomial used while expanding.
type Poly = BTreeMap<Monomial, Rational>;

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    ctx: &'a VariableContext,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { offset: self.offset(), message: message.into() })
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    add_into(&mut acc, rhs, false);
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    add_into(&mut acc, rhs, true);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.unary()?;
            acc = mul(&acc, &rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                let mut p = self.unary()?;
                for c in p.values_mut() {
                    *c = -c.clone();
                }
                Ok(p)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let (tok, offset) = self.bump();
        let Tok::Int(value) = tok else {
            return Err(ParseError::Syntax {
                offset,
                message: "expected a nonnegative integer exponent".into(),
            });
        };
        let exp = match u32::try_from(&value) {
            Ok(e) if e <= MAX_EXPONENT => e,
            _ => return Err(ParseError::ExponentOverflow { offset, value: value.to_string() }),
        };
        Ok(pow(&base, exp, self.ctx.len()))
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        let (tok, offset) = self.bump();
        let n = self.ctx.len();
        match tok {
            Tok::Int(num) => {
                let mut value = Rational::from_integer(num);
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let (den, den_offset) = self.bump();
                    let Tok::Int(den) = den else {
                        return Err(ParseError::Syntax {
                            offset: den_offset,
                            message: "division is only allowed inside a rational literal p/q".into(),
                        });
                    };
                    if den.is_zero() {
                        return Err(ParseError::Syntax {
                            offset: den_offset,
                            message: "zero denominator".into(),
                        });
                    }
                    value /= Rational::from_integer(den);
                }
                Ok(constant(value, n))
            }
            Tok::Ident(name) => match self.ctx.position(&name) {
                Some(i) => {
                    let mut p = Poly::new();
                    p.insert(Monomial::var(n, i), Rational::one());
                    Ok(p)
                }
                None => Err(ParseError::UnknownVariable { offset, name }),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.syntax("expected ')'");
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => Err(ParseError::Syntax { offset, message: "unexpected end of input".into() }),
            Tok::Slash => Err(ParseError::Syntax {
                offset,
                message: "division is only allowed inside a rational literal p/q".into(),
            }),
            other => Err(ParseError::Syntax { offset, message: format!("unexpected {other:?}") }),
        }
    }
}

fn constant(value: Rational, n: usize) -> Poly {
    let mut p = Poly::new();
    if !value.is_zero() {
        p.insert(Monomial::one(n), value);
    }
    p
}

fn add_into(acc: &mut Poly, rhs: Poly, negate: bool) {
    for (m, c) in rhs {
        let entry = acc.entry(m).or_insert_with(Rational::zero);
        if negate {
            *entry -= c;
        } else {
            *entry += c;
        }
    }
    acc.retain(|_, c| !c.is_zero());
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out: HashMap<Monomial, Rational> = HashMap::with_capacity(a.len() * b.len());
    for (ma, ca) in a {
        for (mb, cb) in b {
            *out.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
        }
    }
    out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn pow(base: &Poly, mut exp: u32, n: usize) -> Poly {
    let mut result = constant(Rational::one(), n);
    let mut square = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul(&result, &square);
        }
        exp >>= 1;
        if exp > 0 {
            square = mul(&square, &square);
        }
    }
    result
}

/// Parses and fully expands `text`, then checks homogeneity.
pub fn parse_form(text: &str, ctx: &VariableContext) -> Result<Form, ParseError> {
    let toks = tokenize(text)?;
    let mut parser = Parser { toks, pos: 0, ctx };
    let poly = parser.expr()?;
    if *parser.peek() != Tok::End {
        return parser.syntax(format!("unexpected {:?}", parser.peek()));
    }
    Ok(check_homogeneous(ctx.len(), poly)?)
}

/// Writes `f` in graded-lex order using the names of `ctx`.
///
/// The output parses back to `f` under the same context.
pub fn format_form(f: &Form, ctx: &VariableContext) -> Result<String, FormError> {
    if ctx.len() != f.nvars() {
        return Err(FormError::DimensionMismatch { expected: f.nvars(), found: ctx.len() });
    }
    if f.is_zero() {
        return Ok("0".to_string());
    }
    let mut out = String::new();
    for (k, (m, c)) in f.terms().enumerate() {
        let negative = c.is_negative();
        match (k, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let magnitude = c.abs();
        let mut factors: Vec<String> = Vec::new();
        let is_const = m.degree() == 0;
        if !magnitude.is_one() || is_const {
            factors.push(magnitude.to_string());
        }
        for (name, &e) in ctx.names().iter().zip(m.exponents()) {
            match e {
                0 => {}
                1 => factors.push(name.clone()),
                _ => factors.push(format!("{name}^{e}")),
            }
        }
        let _ = write!(out, "{}", factors.join("*"));
    }
    Ok(out)
}
