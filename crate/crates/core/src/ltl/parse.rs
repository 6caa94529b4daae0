//! Recursive-descent parser for LTL using Spot-compatible operator spellings.
//!
//! Precedence, loosest first: `->`/`<->` (right-assoc), `|`, `xor`/`^`, `&`,
//! `U`/`R`/`W` (right-assoc), then the prefix operators `!`, `X`, `F`, `G`.

use std::fmt;

use super::{Formula, Kind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset of the offending token.
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at byte {}: found {}, expected one of {}",
            self.offset,
            self.found,
            self.expected.join(", ")
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Quoted(String),
    True,
    False,
    Not,
    And,
    Or,
    Xor,
    Implies,
    Iff,
    Next,
    Eventually,
    Globally,
    Until,
    Release,
    WeakUntil,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Quoted(s) => format!("\"{s}\""),
            Tok::End => "end of input".to_string(),
            other => format!("`{}`", other.spelling()),
        }
    }

    fn spelling(&self) -> &'static str {
        match self {
            Tok::True => "true",
            Tok::False => "false",
            Tok::Not => "!",
            Tok::And => "&",
            Tok::Or => "|",
            Tok::Xor => "xor",
            Tok::Implies => "->",
            Tok::Iff => "<->",
            Tok::Next => "X",
            Tok::Eventually => "F",
            Tok::Globally => "G",
            Tok::Until => "U",
            Tok::Release => "R",
            Tok::WeakUntil => "W",
            Tok::LParen => "(",
            Tok::RParen => ")",
            _ => "",
        }
    }
}

pub(super) fn is_reserved(word: &str) -> bool {
    matches!(word, "true" | "false" | "xor" | "U" | "R" | "W")
        || (!word.is_empty() && word.chars().all(|c| matches!(c, 'F' | 'G' | 'X')))
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |offset: usize, found: String| ParseError {
        offset,
        expected: vec!["an operator", "an atomic proposition", "`(`"],
        found,
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let rest = &text[i..];
        let symbol = [
            ("<->", Tok::Iff),
            ("<=>", Tok::Iff),
            ("-->", Tok::Implies),
            ("->", Tok::Implies),
            ("=>", Tok::Implies),
            ("&&", Tok::And),
            ("/\\", Tok::And),
            ("||", Tok::Or),
            ("\\/", Tok::Or),
            ("[]", Tok::Globally),
            ("<>", Tok::Eventually),
            ("&", Tok::And),
            ("|", Tok::Or),
            ("^", Tok::Xor),
            ("!", Tok::Not),
            ("~", Tok::Not),
            ("(", Tok::LParen),
            (")", Tok::RParen),
        ]
        .into_iter()
        .find(|(s, _)| rest.starts_with(s));
        if let Some((s, tok)) = symbol {
            out.push((tok, start));
            i += s.len();
            continue;
        }
        if c == b'"' {
            let end = rest[1..]
                .find('"')
                .ok_or_else(|| err(start, "unterminated string".to_string()))?;
            let name = &rest[1..1 + end];
            if name.is_empty() {
                return Err(err(start, "empty quoted proposition".to_string()));
            }
            out.push((Tok::Quoted(name.to_string()), start));
            i += end + 2;
            continue;
        }
        if c.is_ascii_alphanumeric() || c == b'_' {
            let len = rest
                .bytes()
                .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
                .count();
            let word = &rest[..len];
            i += len;
            match word {
                "true" | "1" => out.push((Tok::True, start)),
                "false" | "0" => out.push((Tok::False, start)),
                "xor" => out.push((Tok::Xor, start)),
                "U" => out.push((Tok::Until, start)),
                "R" | "V" => out.push((Tok::Release, start)),
                "W" => out.push((Tok::WeakUntil, start)),
                w if w.chars().all(|ch| matches!(ch, 'F' | 'G' | 'X')) => {
                    for (k, ch) in w.char_indices() {
                        let tok = match ch {
                            'F' => Tok::Eventually,
                            'G' => Tok::Globally,
                            _ => Tok::Next,
                        };
                        out.push((tok, start + k));
                    }
                }
                w if w.as_bytes()[0].is_ascii_digit() => {
                    return Err(err(start, format!("number `{w}`")));
                }
                w => out.push((Tok::Ident(w.to_string()), start)),
            }
            continue;
        }
        let ch = rest.chars().next().unwrap_or('?');
        return Err(err(start, format!("character `{ch}`")));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

const PRIMARY_EXPECTED: &[&str] = &["an atomic proposition", "true", "false", "(", "!", "X", "F", "G"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError {
            offset: self.offset(),
            expected: expected.to_vec(),
            found: self.peek().describe(),
        }
    }

    fn expr(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or_expr()?;
        let kind = match self.peek() {
            Tok::Implies => Kind::Implies,
            Tok::Iff => Kind::Iff,
            _ => return Ok(lhs),
        };
        self.bump();
        let rhs = self.expr()?;
        Ok(Formula::binary(kind, lhs, rhs))
    }

    fn or_expr(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.xor_expr()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.xor_expr()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn xor_expr(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and_expr()?;
        while *self.peek() == Tok::Xor {
            self.bump();
            let rhs = self.and_expr()?;
            lhs = Formula::xor(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.temporal()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.temporal()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn temporal(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        let kind = match self.peek() {
            Tok::Until => Kind::Until,
            Tok::Release => Kind::Release,
            Tok::WeakUntil => Kind::WeakUntil,
            _ => return Ok(lhs),
        };
        self.bump();
        let rhs = self.temporal()?;
        Ok(Formula::binary(kind, lhs, rhs))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let kind = match self.peek() {
            Tok::Not => Kind::Not,
            Tok::Next => Kind::Next,
            Tok::Eventually => Kind::Eventually,
            Tok::Globally => Kind::Globally,
            _ => return self.primary(),
        };
        self.bump();
        let child = self.unary()?;
        Ok(Formula::unary(kind, child))
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) | Tok::Quoted(name) => {
                self.bump();
                Ok(Formula::ap(&name))
            }
            Tok::True => {
                self.bump();
                Ok(Formula::tt())
            }
            Tok::False => {
                self.bump();
                Ok(Formula::ff())
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(&[")", "a binary operator"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(PRIMARY_EXPECTED)),
        }
    }
}

/// Parses an LTL formula.
pub fn parse_ltl(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["end of input", "a binary operator"]));
    }
    Ok(f)
}
