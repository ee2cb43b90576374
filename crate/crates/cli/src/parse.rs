//! Recursive-descent parser for the phase-space expression language.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | atom ('^' int)?
//! atom   := rational | 'I' | 'lam' | 'pi' | coord | 'gauss' '(' rational ')'
//!         | 'delta' '(' point (';' multi_index)? ')' | 'density' '(' expr ')' | '(' expr ')'
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use starforge_core::complex::{fmt_rational, Rational};
use starforge_core::phase::{coord_name, Coord, PhaseContext};
use thiserror::Error;

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// Nonnegative literal; signs are `Neg` nodes.
    Num(Rational),
    I,
    Lam,
    Pi,
    Coord(Coord),
    Gauss(Rational),
    Delta { point: Vec<Rational>, multi_index: Vec<u32> },
    Density(Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, ch)) = chars.peek() {
        if ch.is_whitespace() {
            chars.next();
        } else if ch.is_ascii_digit() {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = j + d.len_utf8();
                chars.next();
            }
            out.push((i, Tok::Int(text[i..end].parse().expect("ascii digits"))));
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_') {
                    break;
                }
                end = j + d.len_utf8();
                chars.next();
            }
            out.push((i, Tok::Ident(text[i..end].to_string())));
        } else if "+-*^()/,;".contains(ch) {
            out.push((i, Tok::Sym(ch)));
            chars.next();
        } else {
            return Err(ParseError { offset: i, expected: vec!["a token".into()], found: format!("`{ch}`") });
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

const ATOM_START: &[&str] = &["number", "`I`", "`lam`", "`pi`", "coordinate", "`gauss`", "`delta`", "`density`", "`(`", "`-`"];

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    ctx: &'a PhaseContext,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, CliError> {
        Err(ParseError { offset: self.offset(), expected: expected.iter().map(|s| s.to_string()).collect(), found: self.peek().to_string() }.into())
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), CliError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(&[&format!("`{c}`")])
        }
    }

    fn expr(&mut self) -> Result<Expr, CliError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, CliError> {
        let mut lhs = self.factor()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, CliError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let Tok::Int(n) = self.peek().clone() else {
                return self.fail(if neg { &["integer"] } else { &["integer", "`-`"] });
            };
            let Ok(n) = i64::try_from(n) else {
                return self.fail(&["exponent that fits in 64 bits"]);
            };
            self.pos += 1;
            return Ok(Expr::Pow(Box::new(base), if neg { -n } else { n }));
        }
        Ok(base)
    }

    fn unsigned_rational(&mut self) -> Result<Rational, CliError> {
        let Tok::Int(n) = self.peek().clone() else {
            return self.fail(&["number"]);
        };
        self.pos += 1;
        if !self.eat('/') {
            return Ok(Rational::from_integer(n));
        }
        match self.peek().clone() {
            Tok::Int(d) if !d.is_zero() => {
                self.pos += 1;
                Ok(Rational::new(n, d))
            }
            _ => self.fail(&["nonzero denominator"]),
        }
    }

    fn signed_rational(&mut self) -> Result<Rational, CliError> {
        let neg = self.eat('-');
        let r = self.unsigned_rational()?;
        Ok(if neg { -r } else { r })
    }

    fn small_int(&mut self) -> Result<u32, CliError> {
        match self.peek().clone() {
            Tok::Int(n) => match u32::try_from(n) {
                Ok(k) => {
                    self.pos += 1;
                    Ok(k)
                }
                Err(_) => self.fail(&["derivative order below 2^32"]),
            },
            _ => self.fail(&["integer"]),
        }
    }

    fn atom(&mut self) -> Result<Expr, CliError> {
        match self.peek().clone() {
            Tok::Int(_) => Ok(Expr::Num(self.unsigned_rational()?)),
            Tok::Sym('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.pos += 1;
                match name.as_str() {
                    "I" => Ok(Expr::I),
                    "lam" => Ok(Expr::Lam),
                    "pi" => Ok(Expr::Pi),
                    "gauss" => {
                        self.expect('(')?;
                        let a = self.signed_rational()?;
                        self.expect(')')?;
                        Ok(Expr::Gauss(a))
                    }
                    "density" => {
                        self.expect('(')?;
                        let e = self.expr()?;
                        self.expect(')')?;
                        Ok(Expr::Density(Box::new(e)))
                    }
                    "delta" => {
                        self.expect('(')?;
                        let mut point = vec![self.signed_rational()?];
                        while self.eat(',') {
                            point.push(self.signed_rational()?);
                        }
                        let mut multi_index = Vec::new();
                        if self.eat(';') {
                            multi_index.push(self.small_int()?);
                            while self.eat(',') {
                                multi_index.push(self.small_int()?);
                            }
                        }
                        if !self.eat(')') {
                            return self.fail(if multi_index.is_empty() { &["`,`", "`;`", "`)`"] } else { &["`,`", "`)`"] });
                        }
                        Ok(Expr::Delta { point, multi_index })
                    }
                    _ => Ok(Expr::Coord(self.ctx.coord(&name)?)),
                }
            }
            _ => self.fail(ATOM_START),
        }
    }
}

/// Parses `text` against the coordinates of `ctx`.
pub fn parse_expression(text: &str, ctx: &PhaseContext) -> Result<Expr, CliError> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0, ctx };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail(&["`+`", "`-`", "`*`", "end of input"]);
    }
    Ok(e)
}

// binding strengths used by `render`
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const NEGATION: u8 = 3;
const ATOM: u8 = 5;

fn rational_literal(r: &Rational) -> String {
    if r.is_negative() {
        format!("(-{})", fmt_rational(&-r))
    } else {
        fmt_rational(r)
    }
}

fn render_at(e: &Expr, ctx: &PhaseContext, need: u8) -> String {
    let (own, s) = match e {
        Expr::Num(r) => (ATOM, rational_literal(r)),
        Expr::I => (ATOM, "I".into()),
        Expr::Lam => (ATOM, "lam".into()),
        Expr::Pi => (ATOM, "pi".into()),
        Expr::Coord(c) => (ATOM, ctx.index(*c).map_or_else(|_| c.to_string(), |i| coord_name(ctx, i))),
        Expr::Gauss(a) => (ATOM, format!("gauss({})", fmt_rational(a))),
        Expr::Delta { point, multi_index } => {
            let pt: Vec<String> = point.iter().map(fmt_rational).collect();
            let s = if multi_index.is_empty() {
                format!("delta({})", pt.join(","))
            } else {
                let mi: Vec<String> = multi_index.iter().map(u32::to_string).collect();
                format!("delta({}; {})", pt.join(","), mi.join(","))
            };
            (ATOM, s)
        }
        Expr::Density(inner) => (ATOM, format!("density({})", render_at(inner, ctx, 0))),
        Expr::Neg(x) => (NEGATION, format!("-{}", render_at(x, ctx, NEGATION))),
        Expr::Add(a, b) => (SUM, format!("{} + {}", render_at(a, ctx, SUM), render_at(b, ctx, PRODUCT))),
        Expr::Sub(a, b) => (SUM, format!("{} - {}", render_at(a, ctx, SUM), render_at(b, ctx, PRODUCT))),
        Expr::Mul(a, b) => (PRODUCT, format!("{}*{}", render_at(a, ctx, PRODUCT), render_at(b, ctx, NEGATION))),
        // the base of `^` is always an atom
        Expr::Pow(x, n) => (NEGATION + 1, format!("{}^{n}", render_at(x, ctx, ATOM))),
    };
    if own < need {
        format!("({s})")
    } else {
        s
    }
}

/// Renders `e` with the fewest parentheses that reparse to the same tree.
pub fn render(e: &Expr, ctx: &PhaseContext) -> String {
    render_at(e, ctx, 0)
}
