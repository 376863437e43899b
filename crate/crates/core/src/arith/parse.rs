//! Polynomial text grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/' | <implicit>) unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' nat)?
//! atom   := int | ident | 'i' | '(' expr ')'
//! ```
//! Identifiers may carry trailing primes (`s'`). `i` is the imaginary unit.
//! Division is only allowed by nonzero constants, which covers `a/b`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::gauss::GaussRational;
use super::poly::{MultiPoly, Vars};
use super::ArithError;

#[derive(Clone, Debug, PartialEq)]
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
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ArithError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (pos, c) = chars[k];
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' | '·' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                let mut j = k;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[k..j].iter().map(|p| p.1).collect();
                out.push((pos, Tok::Int(s.parse().unwrap())));
                k = j;
                continue;
            }
            a if a.is_alphabetic() || a == '_' => {
                let mut j = k;
                while j < chars.len() && (chars[j].1.is_alphanumeric() || chars[j].1 == '_') {
                    j += 1;
                }
                while j < chars.len() && chars[j].1 == '\'' {
                    j += 1;
                }
                let s: String = chars[k..j].iter().map(|p| p.1).collect();
                out.push((pos, Tok::Ident(s)));
                k = j;
                continue;
            }
            other => {
                return Err(ArithError::Syntax { pos, msg: format!("unexpected character '{other}'") })
            }
        };
        out.push((pos, tok));
        k += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    k: usize,
    vars: &'a Vars,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.k).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.k).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ArithError> {
        Err(ArithError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<MultiPoly, ArithError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.k += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.k += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, ArithError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.k += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.k += 1;
                    let at = self.pos();
                    let d = self.unary()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(ArithError::Syntax {
                            pos: at,
                            msg: "division only by a nonzero constant".into(),
                        });
                    }
                    acc = acc.scale(&d.constant_term().inv().unwrap());
                }
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly, ArithError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.k += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.k += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly, ArithError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.k += 1;
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.k += 1;
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| ArithError::Syntax { pos: self.pos(), msg: "exponent too large".into() })?;
                    Ok(base.pow(e))
                }
                _ => self.err("expected a natural exponent after '^'"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly, ArithError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.k += 1;
                Ok(MultiPoly::constant(BigRational::from_integer(n).into(), self.vars))
            }
            Some(Tok::Ident(name)) => {
                self.k += 1;
                if name == "i" {
                    return Ok(MultiPoly::constant(GaussRational::i(), self.vars));
                }
                if self.vars.iter().any(|v| *v == name) {
                    Ok(MultiPoly::var(&name, self.vars))
                } else {
                    Err(ArithError::UnknownVariableAt { name, pos })
                }
            }
            Some(Tok::LParen) => {
                self.k += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.k += 1;
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parse `text` over the given variable list.
pub fn parse_poly(text: &str, vars: &Vars) -> Result<MultiPoly, ArithError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(ArithError::Syntax { pos: 0, msg: "empty expression".into() });
    }
    let mut p = Parser { toks, k: 0, vars, end: text.len() };
    let out = p.expr()?;
    if p.k != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// Identifiers (other than `i`) occurring in `text`, in order of appearance.
pub fn identifiers(text: &str) -> Result<Vec<String>, ArithError> {
    let mut out: Vec<String> = Vec::new();
    for (_, t) in tokenize(text)? {
        if let Tok::Ident(s) = t {
            if s != "i" && !out.contains(&s) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// Parse with variables inferred from the text. Variables are ordered by
/// the conventional list `s, t, x, y, z, s', t'`, then alphabetically;
/// `preferred` is always included (so a constant still gets a sensible list).
pub fn parse_poly_auto(text: &str, preferred: &[&str]) -> Result<MultiPoly, ArithError> {
    let mut names = identifiers(text)?;
    for p in preferred {
        if !names.iter().any(|n| n == p) {
            names.push(p.to_string());
        }
    }
    const ORDER: [&str; 7] = ["s", "t", "x", "y", "z", "s'", "t'"];
    names.sort_by_key(|n| {
        (
            ORDER.iter().position(|o| o == n).unwrap_or(ORDER.len()),
            n.clone(),
        )
    });
    let vars: Vars = names.into();
    parse_poly(text, &vars)
}
