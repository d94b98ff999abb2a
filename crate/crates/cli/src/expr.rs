//! Expression syntax.
//!
//! ```text
//! sum   := prod ('+' prod)*
//! prod  := power (('*' | '|')? power)*
//! power := atom ('^' nat)?
//! atom  := '(' sum ')' | '0' | '1' | 'r' | 't' | 'th' ('/' ('(' rt ')' | rt1))? | leaf
//! leaf  := 'a' nat? | 'b' nat? | 'x' | 'B' nat | 'B' list | list
//! list  := '[' nat (',' nat)* ']'
//! ```
//!
//! Juxtaposition multiplies, so `r^2 t*B[1]` reads as `(r^2)(t)(B[1])`.
//! `ρ τ θ β · ⊗` are accepted for `r t th B * |`.

use std::fmt;

use eqcohom::ConeMonomial;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown generator '{token}' at byte {offset} in {space}")]
    UnknownGenerator {
        token: String,
        offset: usize,
        space: String,
    },
}

impl ParseError {
    fn syntax(offset: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            offset,
            message: message.into(),
        }
    }
}

/// A space-dependent leaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Var {
    A(Option<u32>),
    B(Option<u32>),
    X,
    /// `B<i>`
    Gen(u32),
    /// `B[i1,...]`
    Seq(Vec<u32>),
    /// `[i1,...]`
    Bracket(Vec<u32>),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[u32]| {
            v.iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            Var::A(None) => f.write_str("a"),
            Var::A(Some(j)) => write!(f, "a{j}"),
            Var::B(None) => f.write_str("b"),
            Var::B(Some(j)) => write!(f, "b{j}"),
            Var::X => f.write_str("x"),
            Var::Gen(i) => write!(f, "B{i}"),
            Var::Seq(v) => write!(f, "B[{}]", list(v)),
            Var::Bracket(v) => write!(f, "[{}]", list(v)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Zero,
    One,
    Coeff(ConeMonomial),
    Leaf { var: Var, offset: usize },
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Power(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Plus,
    Star,
    Bar,
    Caret,
    Slash,
    Comma,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Nat(u32),
    R,
    T,
    Th,
    A(Option<u32>),
    Bsmall(Option<u32>),
    X,
    /// `B` with an optional index; `B[` lexes as `BigB(None)` then `[`.
    BigB(Option<u32>),
}

fn normalize(c: char) -> Option<&'static str> {
    Some(match c {
        'ρ' => "r",
        'τ' => "t",
        'θ' => "th",
        'β' => "B",
        '·' | '×' => "*",
        '⊗' => "|",
        _ => return None,
    })
}

fn subscript_digit(c: char) -> Option<u32> {
    ('₀'..='₉').contains(&c).then(|| c as u32 - '₀' as u32)
}

fn lex(input: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    // rewrite aliases but keep byte offsets pointing into the original input
    let mut chars: Vec<(char, usize)> = Vec::new();
    for (off, c) in input.char_indices() {
        match (normalize(c), subscript_digit(c)) {
            (Some(s), _) => chars.extend(s.chars().map(|ch| (ch, off))),
            (_, Some(d)) => chars.push((char::from_digit(d, 10).expect("digit"), off)),
            _ => chars.push((c, off)),
        }
    }
    let mut out = Vec::new();
    let mut i = 0;
    let nat = |i: &mut usize| -> Result<Option<u32>, ParseError> {
        let start = *i;
        while *i < chars.len() && chars[*i].0.is_ascii_digit() {
            *i += 1;
        }
        if start == *i {
            return Ok(None);
        }
        let s: String = chars[start..*i].iter().map(|(c, _)| c).collect();
        s.parse()
            .map(Some)
            .map_err(|_| ParseError::syntax(chars[start].1, format!("number '{s}' too large")))
    };
    while i < chars.len() {
        let (c, off) = chars[i];
        let single = match c {
            '+' => Some(Tok::Plus),
            '*' => Some(Tok::Star),
            '|' => Some(Tok::Bar),
            '^' => Some(Tok::Caret),
            '/' => Some(Tok::Slash),
            ',' => Some(Tok::Comma),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, off));
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let n = nat(&mut i)?.expect("at least one digit");
            out.push((Tok::Nat(n), off));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].0.is_ascii_alphabetic() {
                i += 1;
            }
            let word: String = chars[start..i].iter().map(|(c, _)| c).collect();
            let index = nat(&mut i)?;
            let tok = match (word.as_str(), index) {
                ("r", None) => Tok::R,
                ("t", None) => Tok::T,
                ("th", None) => Tok::Th,
                ("x", None) => Tok::X,
                ("a", j) => Tok::A(j),
                ("b", j) => Tok::Bsmall(j),
                ("B", j) => Tok::BigB(j),
                _ => {
                    let text: String = chars[start..i].iter().map(|(c, _)| c).collect();
                    return Err(ParseError::syntax(off, format!("unknown token '{text}'")));
                }
            };
            out.push((tok, off));
            continue;
        }
        return Err(ParseError::syntax(
            off,
            format!("unexpected character '{c}'"),
        ));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn bump(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<usize, ParseError> {
        match self.bump() {
            Some((t, off)) if t == want => Ok(off),
            Some((_, off)) => Err(ParseError::syntax(off, format!("expected {what}"))),
            None => Err(ParseError::syntax(
                self.end,
                format!("expected {what}, found end of input"),
            )),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(
                Tok::LParen
                    | Tok::LBracket
                    | Tok::Nat(_)
                    | Tok::R
                    | Tok::T
                    | Tok::Th
                    | Tok::A(_)
                    | Tok::Bsmall(_)
                    | Tok::X
                    | Tok::BigB(_)
            )
        )
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.prod()?];
        while self.peek() == Some(&Tok::Plus) {
            self.bump();
            terms.push(self.prod()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().expect("one term")
        } else {
            Expr::Sum(terms)
        })
    }

    fn prod(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.power()?];
        loop {
            if matches!(self.peek(), Some(Tok::Star | Tok::Bar)) {
                self.bump();
                factors.push(self.power()?);
            } else if self.starts_atom() {
                factors.push(self.power()?);
            } else {
                break;
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().expect("one factor")
        } else {
            Expr::Product(factors)
        })
    }

    fn exponent(&mut self) -> Result<Option<u32>, ParseError> {
        if self.peek() != Some(&Tok::Caret) {
            return Ok(None);
        }
        self.bump();
        match self.bump() {
            Some((Tok::Nat(n), _)) => Ok(Some(n)),
            Some((_, off)) => Err(ParseError::syntax(off, "expected exponent")),
            None => Err(ParseError::syntax(
                self.end,
                "expected exponent, found end of input",
            )),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        Ok(match self.exponent()? {
            Some(n) => Expr::Power(Box::new(base), n),
            None => base,
        })
    }

    fn list(&mut self) -> Result<Vec<u32>, ParseError> {
        self.expect(Tok::LBracket, "'['")?;
        let mut out = Vec::new();
        loop {
            match self.bump() {
                Some((Tok::Nat(n), _)) => out.push(n),
                Some((_, off)) => return Err(ParseError::syntax(off, "expected index")),
                None => return Err(ParseError::syntax(self.end, "unterminated '['")),
            }
            match self.bump() {
                Some((Tok::Comma, _)) => continue,
                Some((Tok::RBracket, _)) => break,
                Some((_, off)) => return Err(ParseError::syntax(off, "expected ',' or ']'")),
                None => return Err(ParseError::syntax(self.end, "unterminated '['")),
            }
        }
        // [0] and B[0] name the unit
        if out == [0] {
            out.clear();
        }
        Ok(out)
    }

    /// `r^a t^b` inside `th/( ... )`.
    fn rho_tau(&mut self) -> Result<(u32, u32), ParseError> {
        let (mut rho, mut tau) = (0u32, 0u32);
        let mut first = true;
        loop {
            if !first && self.peek() == Some(&Tok::Star) {
                self.bump();
            }
            let (slot, off) = match self.bump() {
                Some((Tok::R, off)) => (&mut rho, off),
                Some((Tok::T, off)) => (&mut tau, off),
                Some((_, off)) => return Err(ParseError::syntax(off, "expected r or t")),
                None => return Err(ParseError::syntax(self.end, "expected r or t")),
            };
            let e = self.exponent()?.unwrap_or(1);
            *slot = slot
                .checked_add(e)
                .ok_or_else(|| ParseError::syntax(off, "exponent overflow"))?;
            first = false;
            if self.peek() == Some(&Tok::RParen) {
                return Ok((rho, tau));
            }
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let off = self.offset();
        let Some(tok) = self.peek().cloned() else {
            return Err(ParseError::syntax(self.end, "unexpected end of input"));
        };
        if tok == Tok::LBracket {
            let v = self.list()?;
            return Ok(Expr::Leaf {
                var: Var::Bracket(v),
                offset: off,
            });
        }
        self.bump();
        Ok(match tok {
            Tok::LParen => {
                let e = self.sum()?;
                self.expect(Tok::RParen, "')'")?;
                e
            }
            Tok::Nat(0) => Expr::Zero,
            Tok::Nat(1) => Expr::One,
            Tok::Nat(n) => {
                return Err(ParseError::syntax(
                    off,
                    format!("integer {n} is not 0 or 1"),
                ))
            }
            Tok::R => Expr::Coeff(ConeMonomial::RHO),
            Tok::T => Expr::Coeff(ConeMonomial::TAU),
            Tok::Th => {
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    let (rho, tau) = match self.peek() {
                        Some(Tok::LParen) => {
                            self.bump();
                            let rt = self.rho_tau()?;
                            self.expect(Tok::RParen, "')'")?;
                            rt
                        }
                        Some(Tok::R) => {
                            self.bump();
                            (self.exponent()?.unwrap_or(1), 0)
                        }
                        Some(Tok::T) => {
                            self.bump();
                            (0, self.exponent()?.unwrap_or(1))
                        }
                        _ => {
                            return Err(ParseError::syntax(
                                self.offset(),
                                "expected r, t or '(' after 'th/'",
                            ))
                        }
                    };
                    Expr::Coeff(ConeMonomial::Bot { rho, tau })
                } else {
                    Expr::Coeff(ConeMonomial::THETA)
                }
            }
            Tok::A(j) => Expr::Leaf {
                var: Var::A(j),
                offset: off,
            },
            Tok::Bsmall(j) => Expr::Leaf {
                var: Var::B(j),
                offset: off,
            },
            Tok::X => Expr::Leaf {
                var: Var::X,
                offset: off,
            },
            Tok::BigB(Some(i)) => Expr::Leaf {
                var: Var::Gen(i),
                offset: off,
            },
            Tok::BigB(None) => {
                if self.peek() != Some(&Tok::LBracket) {
                    return Err(ParseError::syntax(
                        self.offset(),
                        "expected index or '[' after 'B'",
                    ));
                }
                Expr::Leaf {
                    var: Var::Seq(self.list()?),
                    offset: off,
                }
            }
            _ => return Err(ParseError::syntax(off, "expected a term")),
        })
    }
}

pub fn parse(input: &str) -> Result<Expr, ParseError> {
    let toks = lex(input)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: input.len(),
    };
    let e = p.sum()?;
    if p.pos < p.toks.len() {
        return Err(ParseError::syntax(p.offset(), "unexpected trailing input"));
    }
    Ok(e)
}
