//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := number | 'i' | ident ['^' int] | '(' expr ')' ['^' int]
//! number := digits ['/' digits]
//! ```
//!
//! Identifiers are variables or named parameters; `i` is the imaginary unit
//! and is only accepted in Gaussian mode.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::field::Scalar;
use crate::poly::{Monomial, Series};

/// Largest accepted exponent.
pub const MAX_EXPONENT: u32 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownIdentifier,
    ExponentOverflow,
    /// `i` or a non-real parameter in rational mode.
    ModeMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// What identifiers mean while parsing.
#[derive(Clone, Debug, Default)]
pub struct Context {
    pub variables: Vec<String>,
    pub parameters: BTreeMap<String, Scalar>,
    pub gaussian: bool,
}

impl Context {
    pub fn new(variables: &[String]) -> Self {
        Context {
            variables: variables.to_vec(),
            parameters: BTreeMap::new(),
            gaussian: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    src: &'a str,
}

fn position(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut lx = Lexer {
            chars: src.char_indices().peekable(),
            src,
        };
        let mut out = Vec::new();
        loop {
            let (tok, at) = lx.next()?;
            let end = tok == Tok::End;
            out.push((tok, at));
            if end {
                return Ok(out);
            }
        }
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(&(_, c)) = self.chars.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                self.chars.next();
            } else {
                break;
            }
        }
        s
    }

    fn skip_ws(&mut self) {
        while self.chars.peek().is_some_and(|(_, c)| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        self.skip_ws();
        let Some(&(at, c)) = self.chars.peek() else {
            return Ok((Tok::End, self.src.len()));
        };
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            self.chars.next();
            return Ok((t, at));
        }
        if c.is_ascii_digit() {
            let numer = self.digits();
            let mut value = BigRational::from_integer(numer.parse::<BigInt>().expect("digits"));
            // `p/q` is a single literal; the slash binds tighter than anything else
            let mut probe = self.chars.clone();
            while probe.peek().is_some_and(|(_, c)| c.is_whitespace()) {
                probe.next();
            }
            if probe.peek().is_some_and(|&(_, c)| c == '/') {
                self.skip_ws();
                let (slash, _) = self.chars.next().expect("peeked");
                self.skip_ws();
                let denom = self.digits();
                if denom.is_empty() {
                    return Err(error(self.src, slash + 1, ParseErrorKind::Syntax, "expected a denominator after '/'"));
                }
                let d = denom.parse::<BigInt>().expect("digits");
                if d.is_zero() {
                    return Err(error(self.src, slash + 1, ParseErrorKind::Syntax, "zero denominator"));
                }
                value /= BigRational::from_integer(d);
            }
            return Ok((Tok::Num(value), at));
        }
        if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&(_, c)) = self.chars.peek() {
                if c.is_alphanumeric() || c == '_' {
                    s.push(c);
                    self.chars.next();
                } else {
                    break;
                }
            }
            return Ok((Tok::Ident(s), at));
        }
        Err(error(self.src, at, ParseErrorKind::Syntax, &format!("unexpected character '{c}'")))
    }
}

fn error(src: &str, offset: usize, kind: ParseErrorKind, message: &str) -> ParseError {
    let (line, column) = position(src, offset);
    ParseError {
        kind,
        line,
        column,
        message: message.to_string(),
    }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    ctx: &'a Context,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn err(&self, kind: ParseErrorKind, message: &str) -> ParseError {
        error(self.src, self.offset(), kind, message)
    }

    fn nvars(&self) -> usize {
        self.ctx.variables.len()
    }

    fn expr(&mut self) -> Result<Series, ParseError> {
        let negate = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Tok::Minus => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Series, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<Option<u32>, ParseError> {
        if *self.peek() != Tok::Caret {
            return Ok(None);
        }
        let caret = self.offset();
        self.bump();
        match self.bump() {
            Tok::Num(q) if q.is_integer() => {
                let e = q.to_integer();
                match u32::try_from(&e) {
                    Ok(e) if e <= MAX_EXPONENT => Ok(Some(e)),
                    _ => Err(error(
                        self.src,
                        caret,
                        ParseErrorKind::ExponentOverflow,
                        &format!("exponent {e} exceeds {MAX_EXPONENT}"),
                    )),
                }
            }
            _ => Err(error(
                self.src,
                caret,
                ParseErrorKind::Syntax,
                "expected a nonnegative integer exponent after '^'",
            )),
        }
    }

    fn factor(&mut self) -> Result<Series, ParseError> {
        let n = self.nvars();
        let start = self.offset();
        match self.bump() {
            Tok::Num(q) => Ok(Series::constant(n, Scalar::from_rational(q))),
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.err(ParseErrorKind::Syntax, "expected ')'"));
                }
                self.bump();
                Ok(match self.exponent()? {
                    Some(e) => inner.pow(e),
                    None => inner,
                })
            }
            Tok::Ident(name) => {
                let base = if let Some(j) = self.ctx.variables.iter().position(|v| *v == name) {
                    Series::var(n, j)
                } else if let Some(value) = self.ctx.parameters.get(&name) {
                    Series::constant(n, value.clone())
                } else if name == "i" {
                    if !self.ctx.gaussian {
                        return Err(error(
                            self.src,
                            start,
                            ParseErrorKind::ModeMismatch,
                            "the imaginary unit is not available in rational mode",
                        ));
                    }
                    Series::constant(n, Scalar::i())
                } else {
                    return Err(error(
                        self.src,
                        start,
                        ParseErrorKind::UnknownIdentifier,
                        &format!("unknown identifier '{name}'"),
                    ));
                };
                Ok(match self.exponent()? {
                    Some(e) => match base.terms().next() {
                        Some((m, c)) if base.len() == 1 && c.is_one_scalar() => {
                            Series::monomial(Monomial::new(m.exponents().iter().map(|x| x * e).collect()), c.clone())
                        }
                        _ => base.pow(e),
                    },
                    None => base,
                })
            }
            Tok::End => Err(error(self.src, start, ParseErrorKind::Syntax, "unexpected end of input")),
            _ => Err(error(self.src, start, ParseErrorKind::Syntax, "expected a number, identifier or '('")),
        }
    }
}

trait IsOneScalar {
    fn is_one_scalar(&self) -> bool;
}

impl IsOneScalar for Scalar {
    fn is_one_scalar(&self) -> bool {
        num_traits::One::is_one(self)
    }
}

/// Parses `src` into an exact series over `ctx.variables`.
pub fn parse_expression(src: &str, ctx: &Context) -> Result<Series, ParseError> {
    if let Some(v) = ctx.variables.iter().find(|v| v.as_str() == "i") {
        return Err(ParseError {
            kind: ParseErrorKind::Syntax,
            line: 1,
            column: 1,
            message: format!("'{v}' is reserved for the imaginary unit"),
        });
    }
    let toks = Lexer::tokens(src)?;
    let mut p = Parser { src, toks, pos: 0, ctx };
    if *p.peek() == Tok::End {
        return Err(p.err(ParseErrorKind::Syntax, "empty expression"));
    }
    let s = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.err(ParseErrorKind::Syntax, "unexpected token"));
    }
    Ok(s)
}
