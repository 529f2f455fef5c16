//! Recursive-descent parser for the ASCII formula syntax.
//!
//! Binding strength, tightest first: the prefix operators `~`, `[]`, `<>`;
//! then `&`; then `|`; then `->`. Conjunction and disjunction associate to
//! the left, implication to the right. `~A` is sugar for `A -> F`.

use super::Formula;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: {message}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Atom(String),
    Top,
    Bot,
    LParen,
    RParen,
    Not,
    Box,
    Dia,
    And,
    Or,
    Implies,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Atom(a) => format!("atom `{a}`"),
            Tok::Top => "`T`".into(),
            Tok::Bot => "`F`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Not => "`~`".into(),
            Tok::Box => "`[]`".into(),
            Tok::Dia => "`<>`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
        }
    }
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let err = |msg: &str| ParseError {
            position: start,
            message: msg.to_string(),
        };
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => out.push((i, Tok::LParen)),
            b')' => out.push((i, Tok::RParen)),
            b'~' => out.push((i, Tok::Not)),
            b'&' => out.push((i, Tok::And)),
            b'|' => out.push((i, Tok::Or)),
            b'T' => out.push((i, Tok::Top)),
            b'F' => out.push((i, Tok::Bot)),
            b'[' => {
                if bytes.get(i + 1) != Some(&b']') {
                    return Err(err("expected `]` after `[`"));
                }
                out.push((i, Tok::Box));
                i += 1;
            }
            b'<' => {
                if bytes.get(i + 1) != Some(&b'>') {
                    return Err(err("expected `>` after `<`"));
                }
                out.push((i, Tok::Dia));
                i += 1;
            }
            b'-' => {
                if bytes.get(i + 1) != Some(&b'>') {
                    return Err(err("expected `>` after `-`"));
                }
                out.push((i, Tok::Implies));
                i += 1;
            }
            b'a'..=b'z' => {
                let mut j = i + 1;
                while j < bytes.len()
                    && (bytes[j].is_ascii_lowercase() || bytes[j].is_ascii_digit() || bytes[j] == b'_')
                {
                    j += 1;
                }
                out.push((i, Tok::Atom(input[i..j].to_string())));
                i = j;
                continue;
            }
            _ => {
                let ch = input[i..].chars().next().unwrap_or('?');
                return Err(err(&format!("unexpected character `{ch}`")));
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            position: self.offset(),
            message: message.into(),
        }
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Implies) {
            self.pos += 1;
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            let rhs = self.conjunction()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.prefix()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            let rhs = self.prefix()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn prefix(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.prefix()?))
            }
            Some(Tok::Box) => {
                self.pos += 1;
                Ok(Formula::boxed(self.prefix()?))
            }
            Some(Tok::Dia) => {
                self.pos += 1;
                Ok(Formula::dia(self.prefix()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return Err(self.error("unexpected end of input")),
        };
        match tok {
            Tok::Atom(name) => {
                self.pos += 1;
                Ok(Formula::atom(&name))
            }
            Tok::Top => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Tok::Bot => {
                self.pos += 1;
                Ok(Formula::Bot)
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.implication()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            other => Err(self.error(format!("unexpected {}", other.describe()))),
        }
    }
}

pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let f = parser.implication()?;
    if let Some(t) = parser.peek() {
        let msg = format!("unexpected {} after complete formula", t.describe());
        return Err(parser.error(msg));
    }
    Ok(f)
}
