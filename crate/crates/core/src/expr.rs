//! Text syntax for integrand sums.
//!
//! ```text
//! expr   := '0' | term (('+' | '-') term)*
//! term   := coeff* factor ('*'? (factor | coeff))*
//! factor := ('D' | 'dD' | 'ddD' | 'delta') ('^' nat)?
//! coeff  := rational | 'w' ('^' int)? | ('d0' | 'a' | 'g') ('^' nat)?
//! ```
//!
//! `D`, `dD`, `ddD` and `delta` stand for `Δ`, `Δ̇`, `Δ̈` and `δ`; `w` is `ω` and
//! `d0` is `δ(0)`. Whitespace is insignificant. Every term needs at least one
//! factor: a bare coefficient would be the divergent `∫dτ`.

use crate::error::{Error, Result};
use crate::integrand::{IntegrandMonomial, IntegrandSum, Powers};
use crate::ring::{parse_rational, Rational, Symbol, ValuePoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprTerm {
    pub coeff: ValuePoly,
    pub powers: Powers,
}

/// A parsed sum of products, before merging equal products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<ExprTerm>,
}

impl Expr {
    pub fn lower(&self) -> IntegrandSum {
        IntegrandSum::from_terms(
            self.terms
                .iter()
                .map(|t| IntegrandMonomial::new(t.powers, t.coeff.clone())),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Number(String),
    Ident(String),
    Caret,
    Plus,
    Minus,
    Star,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                s.push(chars[i]);
                i += 1;
                col += 1;
            }
            Tok::Number(s)
        } else if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                s.push(chars[i]);
                i += 1;
                col += 1;
            }
            Tok::Ident(s)
        } else {
            i += 1;
            col += 1;
            match c {
                '^' => Tok::Caret,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                other => return Err(error(start_line, start_col, format!("unexpected character `{other}`"))),
            }
        };
        out.push(Token {
            tok,
            line: start_line,
            column: start_col,
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    /// Optional `^ int`; negative values only when `allow_negative`.
    fn exponent(&mut self, allow_negative: bool, what: &str) -> Result<i64> {
        if self.peek().tok != Tok::Caret {
            return Ok(1);
        }
        self.bump();
        let start = self.peek().clone();
        let negative = if start.tok == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let t = self.bump();
        let value = match &t.tok {
            Tok::Number(s) if !s.contains('/') => s
                .parse::<i64>()
                .map_err(|_| error(t.line, t.column, format!("exponent `{s}` out of range")))?,
            _ => return Err(error(t.line, t.column, "expected an integer exponent")),
        };
        if value > i32::MAX as i64 {
            return Err(error(t.line, t.column, format!("exponent {value} is too large")));
        }
        if negative && !allow_negative {
            return Err(error(start.line, start.column, format!("negative power of {what}")));
        }
        Ok(if negative { -value } else { value })
    }

    fn term(&mut self, sign: i64) -> Result<ExprTerm> {
        let start = self.peek().clone();
        let mut coeff = ValuePoly::constant(Rational::from_integer(sign.into()));
        let mut powers = Powers::default();
        let mut has_factor = false;
        let mut first = true;
        loop {
            if !first && self.peek().tok == Tok::Star {
                self.bump();
                if !matches!(self.peek().tok, Tok::Number(_) | Tok::Ident(_)) {
                    let t = self.peek();
                    return Err(error(t.line, t.column, "expected a factor after `*`"));
                }
            }
            let t = self.peek().clone();
            match &t.tok {
                Tok::Number(s) => {
                    self.bump();
                    let r = parse_rational(s).ok_or_else(|| error(t.line, t.column, format!("bad rational `{s}`")))?;
                    coeff = coeff.scale(&r);
                }
                Tok::Ident(name) => {
                    self.bump();
                    match name.as_str() {
                        "D" | "dD" | "ddD" | "delta" => {
                            let k = self.exponent(false, name)? as u32;
                            match name.as_str() {
                                "D" => powers.m += k,
                                "dD" => powers.n += k,
                                "ddD" => powers.p += k,
                                _ => powers.q += k,
                            }
                            has_factor = true;
                        }
                        "w" => {
                            let k = self.exponent(true, name)?;
                            coeff = coeff * ValuePoly::symbol_pow(Symbol::Omega, k as i32);
                        }
                        "d0" | "a" | "g" => {
                            let k = self.exponent(false, name)?;
                            let sym = match name.as_str() {
                                "d0" => Symbol::Delta0,
                                "a" => Symbol::A,
                                _ => Symbol::G,
                            };
                            coeff = coeff * ValuePoly::symbol_pow(sym, k as i32);
                        }
                        other => return Err(error(t.line, t.column, format!("unknown symbol `{other}`"))),
                    }
                }
                _ => {
                    if first {
                        return Err(error(t.line, t.column, "expected a term"));
                    }
                    break;
                }
            }
            first = false;
        }
        if !has_factor {
            return Err(error(
                start.line,
                start.column,
                "term has no D, dD, ddD or delta factor (bare measure diverges)",
            ));
        }
        Ok(ExprTerm { coeff, powers })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = Vec::new();
        let mut sign = 1;
        match self.peek().tok {
            Tok::Minus => {
                self.bump();
                sign = -1;
            }
            Tok::Plus => {
                self.bump();
            }
            _ => {}
        }
        loop {
            terms.push(self.term(sign)?);
            let t = self.bump();
            match t.tok {
                Tok::Plus => sign = 1,
                Tok::Minus => sign = -1,
                Tok::End => break,
                _ => return Err(error(t.line, t.column, "expected `+`, `-` or end of input")),
            }
        }
        Ok(Expr { terms })
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    let tokens = lex(text)?;
    if let [Token { tok: Tok::Number(s), .. }, Token { tok: Tok::End, .. }] = tokens.as_slice() {
        if parse_rational(s).is_some_and(|r| r == Rational::from_integer(0.into())) {
            return Ok(Expr { terms: Vec::new() });
        }
    }
    Parser { tokens, pos: 0 }.expr()
}

/// Parses and lowers to a normalized [`IntegrandSum`].
pub fn parse_sum(text: &str) -> Result<IntegrandSum> {
    parse(text).map(|e| e.lower())
}

/// Canonical text of a sum with no scalar part; inverse of [`parse_sum`].
pub fn render(s: &IntegrandSum) -> String {
    debug_assert!(s.local.is_zero());
    s.normalize().to_string()
}
