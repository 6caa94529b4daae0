//! HOA v1 subset: explicit transition labels and transition-based colors.

use std::fmt::Write as _;

use thiserror::Error;

use super::{AccCond, Acceptance, Automaton, ColorSet, Edge};
use crate::label::{Label, MAX_VARS};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct HoaError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, HoaError> {
    Err(HoaError { line, message: message.into() })
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Header(String),
    Ident(String),
    Str(String),
    Int(u64),
    Punct(char),
    Body,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, HoaError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut line = 1;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c == '/' && chars.get(i + 1) == Some(&'*') {
            i += 2;
            while i < chars.len() && !(chars[i] == '*' && chars.get(i + 1) == Some(&'/')) {
                if chars[i] == '\n' {
                    line += 1;
                }
                i += 1;
            }
            if i >= chars.len() {
                return err(line, "unterminated comment");
            }
            i += 2;
        } else if c == '"' {
            let mut s = String::new();
            i += 1;
            loop {
                match chars.get(i) {
                    None => return err(line, "unterminated string"),
                    Some('"') => break,
                    Some('\\') => {
                        if let Some(&n) = chars.get(i + 1) {
                            s.push(n);
                        }
                        i += 2;
                    }
                    Some(&ch) => {
                        if ch == '\n' {
                            line += 1;
                        }
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            i += 1;
            out.push((Tok::Str(s), line));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            match s.parse() {
                Ok(v) => out.push((Tok::Int(v), line)),
                Err(_) => return err(line, format!("integer `{s}` out of range")),
            }
        } else if c == '-' && chars.get(i + 1) == Some(&'-') {
            let start = i;
            i += 2;
            while i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
            }
            if chars.get(i) == Some(&'-') && chars.get(i + 1) == Some(&'-') {
                i += 2;
            }
            let word: String = chars[start..i].iter().collect();
            match word.as_str() {
                "--BODY--" => out.push((Tok::Body, line)),
                "--END--" => out.push((Tok::End, line)),
                "--ABORT--" => return err(line, "automaton aborted"),
                _ => return err(line, format!("unknown marker `{word}`")),
            }
        } else if c.is_ascii_alphabetic() || c == '_' || c == '@' {
            let start = i;
            i += 1;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '-') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            if chars.get(i) == Some(&':') {
                i += 1;
                out.push((Tok::Header(word), line));
            } else {
                out.push((Tok::Ident(word), line));
            }
        } else if "[]{}()!&|".contains(c) {
            out.push((Tok::Punct(c), line));
            i += 1;
        } else {
            return err(line, format!("unexpected character `{c}`"));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    num_aps: usize,
    num_colors: u32,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or(1, |(_, l)| *l)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect_punct(&mut self, c: char) -> Result<(), HoaError> {
        let line = self.line();
        match self.next() {
            Some(Tok::Punct(p)) if p == c => Ok(()),
            other => err(line, format!("expected `{c}`, found {other:?}")),
        }
    }

    fn int(&mut self) -> Result<u64, HoaError> {
        let line = self.line();
        match self.next() {
            Some(Tok::Int(v)) => Ok(v),
            other => err(line, format!("expected integer, found {other:?}")),
        }
    }

    fn at_header_value(&self) -> bool {
        !matches!(self.peek(), None | Some(Tok::Header(_)) | Some(Tok::Body))
    }

    // acceptance: or-level
    fn acc_or(&mut self) -> Result<AccCond, HoaError> {
        let mut items = vec![self.acc_and()?];
        while self.peek() == Some(&Tok::Punct('|')) {
            self.pos += 1;
            items.push(self.acc_and()?);
        }
        Ok(AccCond::or(items))
    }

    fn acc_and(&mut self) -> Result<AccCond, HoaError> {
        let mut items = vec![self.acc_atom()?];
        while self.peek() == Some(&Tok::Punct('&')) {
            self.pos += 1;
            items.push(self.acc_atom()?);
        }
        Ok(AccCond::and(items))
    }

    fn acc_atom(&mut self) -> Result<AccCond, HoaError> {
        let line = self.line();
        match self.next() {
            Some(Tok::Punct('(')) => {
                let c = self.acc_or()?;
                self.expect_punct(')')?;
                Ok(c)
            }
            Some(Tok::Ident(w)) if w == "t" => Ok(AccCond::True),
            Some(Tok::Ident(w)) if w == "f" => Ok(AccCond::False),
            Some(Tok::Ident(w)) if w == "Inf" || w == "Fin" => {
                self.expect_punct('(')?;
                if self.peek() == Some(&Tok::Punct('!')) {
                    return err(line, "negated acceptance sets are not supported");
                }
                let c = self.int()?;
                self.expect_punct(')')?;
                if c >= self.num_colors as u64 {
                    return err(line, format!("color {c} exceeds declared count {}", self.num_colors));
                }
                let c = c as u32;
                Ok(if w == "Inf" { AccCond::Inf(c) } else { AccCond::Fin(c) })
            }
            other => err(line, format!("expected acceptance atom, found {other:?}")),
        }
    }

    // label: or-level
    fn label_or(&mut self) -> Result<Label, HoaError> {
        let mut l = self.label_and()?;
        while self.peek() == Some(&Tok::Punct('|')) {
            self.pos += 1;
            l = l.or(&self.label_and()?);
        }
        Ok(l)
    }

    fn label_and(&mut self) -> Result<Label, HoaError> {
        let mut l = self.label_atom()?;
        while self.peek() == Some(&Tok::Punct('&')) {
            self.pos += 1;
            l = l.and(&self.label_atom()?);
        }
        Ok(l)
    }

    fn label_atom(&mut self) -> Result<Label, HoaError> {
        let line = self.line();
        match self.next() {
            Some(Tok::Punct('!')) => Ok(self.label_atom()?.not()),
            Some(Tok::Punct('(')) => {
                let l = self.label_or()?;
                self.expect_punct(')')?;
                Ok(l)
            }
            Some(Tok::Ident(w)) if w == "t" => Ok(Label::tt()),
            Some(Tok::Ident(w)) if w == "f" => Ok(Label::ff()),
            Some(Tok::Int(v)) => {
                if v as usize >= self.num_aps {
                    return err(line, format!("undeclared AP index {v}"));
                }
                Ok(Label::literal(v as usize, true))
            }
            Some(Tok::Ident(w)) if w.starts_with('@') => err(line, "label aliases are not supported"),
            other => err(line, format!("expected label, found {other:?}")),
        }
    }

    fn colors(&mut self) -> Result<ColorSet, HoaError> {
        let mut set = ColorSet::EMPTY;
        if self.peek() != Some(&Tok::Punct('{')) {
            return Ok(set);
        }
        self.pos += 1;
        loop {
            let line = self.line();
            match self.next() {
                Some(Tok::Punct('}')) => return Ok(set),
                Some(Tok::Int(c)) => {
                    if c >= self.num_colors as u64 {
                        return err(line, format!("color {c} exceeds declared count {}", self.num_colors));
                    }
                    set.insert(c as u32);
                }
                other => return err(line, format!("expected color or `}}`, found {other:?}")),
            }
        }
    }
}

/// Parses HOA v1 text. Determinism and completeness are recomputed from
/// the structure; `properties:` claims are ignored.
pub fn parse_hoa(text: &str) -> Result<Automaton, HoaError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, num_aps: 0, num_colors: 0 };
    let mut num_states: Option<usize> = None;
    let mut start: Option<usize> = None;
    let mut aps: Option<Vec<String>> = None;
    let mut acceptance: Option<Acceptance> = None;
    let mut version_seen = false;

    loop {
        let line = p.line();
        match p.next() {
            Some(Tok::Header(h)) => match h.as_str() {
                "HOA" => match p.next() {
                    Some(Tok::Ident(v)) if v == "v1" => version_seen = true,
                    other => return err(line, format!("unsupported HOA version {other:?}")),
                },
                "States" => num_states = Some(p.int()? as usize),
                "Start" => {
                    if start.is_some() {
                        return err(line, "multiple initial states are not supported");
                    }
                    start = Some(p.int()? as usize);
                    if p.peek() == Some(&Tok::Punct('&')) {
                        return err(line, "conjunctive initial states are not supported");
                    }
                }
                "AP" => {
                    let n = p.int()? as usize;
                    if n > MAX_VARS {
                        return err(line, format!("at most {MAX_VARS} APs are supported"));
                    }
                    let mut names = Vec::with_capacity(n);
                    for _ in 0..n {
                        match p.next() {
                            Some(Tok::Str(s)) => names.push(s),
                            other => return err(line, format!("expected AP name, found {other:?}")),
                        }
                    }
                    p.num_aps = n;
                    aps = Some(names);
                }
                "Acceptance" => {
                    let n = p.int()?;
                    if n > ColorSet::MAX_COLORS as u64 {
                        return err(line, format!("at most {} colors are supported", ColorSet::MAX_COLORS));
                    }
                    p.num_colors = n as u32;
                    let cond = p.acc_or()?;
                    acceptance = Some(Acceptance::new(n as u32, cond));
                }
                "properties" => {
                    while let Some(Tok::Ident(w)) = p.peek() {
                        if w == "state-acc" {
                            return err(line, "state-based acceptance is not supported");
                        }
                        p.pos += 1;
                    }
                }
                "Alias" => return err(line, "label aliases are not supported"),
                _ => {
                    // acc-name, name, tool, controllable-AP and others
                    while p.at_header_value() {
                        p.pos += 1;
                    }
                }
            },
            Some(Tok::Body) => break,
            other => return err(line, format!("expected header or --BODY--, found {other:?}")),
        }
    }
    if !version_seen {
        return err(1, "missing `HOA: v1` header");
    }
    let aps = aps.unwrap_or_default();
    let acceptance = match acceptance {
        Some(a) => a,
        None => return err(1, "missing Acceptance header"),
    };
    let initial = match start {
        Some(s) => s,
        None => return err(1, "missing Start header"),
    };
    let mut edges: Vec<Vec<Edge>> = vec![Vec::new(); num_states.unwrap_or(0)];
    let mut current: Option<usize> = None;

    loop {
        let line = p.line();
        match p.next() {
            Some(Tok::End) => break,
            Some(Tok::Header(h)) if h == "State" => {
                if p.peek() == Some(&Tok::Punct('[')) {
                    return err(line, "state labels are not supported");
                }
                let s = p.int()? as usize;
                if let Some(Tok::Str(_)) = p.peek() {
                    p.pos += 1;
                }
                if p.peek() == Some(&Tok::Punct('{')) {
                    return err(line, "state-based acceptance is not supported");
                }
                if num_states.is_some_and(|n| s >= n) {
                    return err(line, format!("state {s} exceeds declared count"));
                }
                if s >= edges.len() {
                    edges.resize(s + 1, Vec::new());
                }
                current = Some(s);
            }
            Some(Tok::Punct('[')) => {
                let Some(src) = current else {
                    return err(line, "edge outside of a state");
                };
                let label = p.label_or()?;
                p.expect_punct(']')?;
                let dst = p.int()? as usize;
                if p.peek() == Some(&Tok::Punct('&')) {
                    return err(line, "universal branching is not supported");
                }
                if num_states.is_some_and(|n| dst >= n) {
                    return err(line, format!("destination {dst} exceeds declared count"));
                }
                let colors = p.colors()?;
                if dst >= edges.len() {
                    edges.resize(dst + 1, Vec::new());
                }
                if label.is_sat() {
                    edges[src].push(Edge { label, colors, dst });
                }
            }
            Some(Tok::Int(_)) => return err(line, "implicit labels are not supported"),
            other => return err(line, format!("expected State, edge or --END--, found {other:?}")),
        }
    }
    if edges.is_empty() || initial >= edges.len() {
        return err(1, format!("initial state {initial} is not declared"));
    }
    let mut a = Automaton { aps, initial, edges, acceptance, deterministic: false, complete: false };
    a.update_flags();
    Ok(a)
}

fn label_text(l: &Label) -> String {
    if l.is_true() {
        return "t".into();
    }
    if l.is_false() {
        return "f".into();
    }
    let mut s = String::new();
    for (i, c) in l.cubes().iter().enumerate() {
        if i > 0 {
            s.push_str(" | ");
        }
        for (j, (v, positive)) in c.literals().enumerate() {
            if j > 0 {
                s.push('&');
            }
            if !positive {
                s.push('!');
            }
            let _ = write!(s, "{v}");
        }
    }
    s
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for ch in s.chars() {
        if ch == '"' || ch == '\\' {
            out.push('\\');
        }
        out.push(ch);
    }
    out.push('"');
    out
}

/// Renders the automaton in the normalized HOA form read by [`parse_hoa`].
pub fn print_hoa(a: &Automaton) -> String {
    let mut s = String::new();
    s.push_str("HOA: v1\n");
    let _ = writeln!(s, "States: {}", a.num_states());
    let _ = writeln!(s, "Start: {}", a.initial);
    let _ = write!(s, "AP: {}", a.aps.len());
    for ap in &a.aps {
        let _ = write!(s, " {}", quote(ap));
    }
    s.push('\n');
    if let Some(name) = a.acceptance.name() {
        let _ = writeln!(s, "acc-name: {name}");
    }
    let _ = writeln!(s, "Acceptance: {} {}", a.acceptance.num_colors, a.acceptance.cond);
    s.push_str("properties: trans-labels explicit-labels trans-acc");
    if a.deterministic {
        s.push_str(" deterministic");
    }
    if a.complete {
        s.push_str(" complete");
    }
    s.push('\n');
    s.push_str("--BODY--\n");
    for (q, es) in a.edges.iter().enumerate() {
        let _ = writeln!(s, "State: {q}");
        for e in es {
            let _ = write!(s, "[{}] {}", label_text(&e.label), e.dst);
            if !e.colors.is_empty() {
                let cs: Vec<String> = e.colors.iter().map(|c| c.to_string()).collect();
                let _ = write!(s, " {{{}}}", cs.join(" "));
            }
            s.push('\n');
        }
    }
    s.push_str("--END--\n");
    s
}
