use std::fmt;

use crate::error::{Error, Result};

use super::semantics::Signature;

/// Geometric modal formulas. `Or(vec![])` is falsum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    Prop(String),
    And(Box<Formula>, Box<Formula>),
    Or(Vec<Formula>),
    Modal(String, Vec<Formula>),
}

impl Formula {
    pub fn bot() -> Formula {
        Formula::Or(Vec::new())
    }

    pub fn prop(name: impl Into<String>) -> Formula {
        Formula::Prop(name.into())
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(parts: Vec<Formula>) -> Formula {
        Formula::Or(parts)
    }

    pub fn modal(id: impl Into<String>, args: Vec<Formula>) -> Formula {
        Formula::Modal(id.into(), args)
    }

    /// Right-nested conjunction; `Top` for the empty list.
    pub fn and_all(parts: Vec<Formula>) -> Formula {
        let mut it = parts.into_iter().rev();
        match it.next() {
            None => Formula::Top,
            Some(last) => it.fold(last, |acc, f| Formula::and(f, acc)),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Prop(_) => 0,
            Formula::And(a, b) => a.depth().max(b.depth()),
            Formula::Or(fs) => fs.iter().map(Formula::depth).max().unwrap_or(0),
            Formula::Modal(_, args) => 1 + args.iter().map(Formula::depth).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Top | Formula::Prop(_) => 1,
            Formula::And(a, b) => 1 + a.size() + b.size(),
            Formula::Or(fs) | Formula::Modal(_, fs) => 1 + fs.iter().map(Formula::size).sum::<usize>(),
        }
    }

    /// Proposition letters in order of first occurrence.
    pub fn props(&self) -> Vec<String> {
        fn go(f: &Formula, out: &mut Vec<String>) {
            match f {
                Formula::Top => {}
                Formula::Prop(p) => {
                    if !out.contains(p) {
                        out.push(p.clone());
                    }
                }
                Formula::And(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Formula::Or(fs) | Formula::Modal(_, fs) => fs.iter().for_each(|g| go(g, out)),
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Lifting identifiers used, in order of first occurrence.
    pub fn liftings(&self) -> Vec<String> {
        fn go(f: &Formula, out: &mut Vec<String>) {
            match f {
                Formula::Top | Formula::Prop(_) => {}
                Formula::And(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Formula::Or(fs) => fs.iter().for_each(|g| go(g, out)),
                Formula::Modal(id, fs) => {
                    if !out.contains(id) {
                        out.push(id.clone());
                    }
                    fs.iter().for_each(|g| go(g, out));
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Flatten nested disjunctions and sort every disjunct list.
    pub fn canonical(&self) -> Formula {
        match self {
            Formula::Top | Formula::Prop(_) => self.clone(),
            Formula::And(a, b) => Formula::and(a.canonical(), b.canonical()),
            Formula::Or(fs) => {
                let mut flat = Vec::new();
                for f in fs {
                    match f.canonical() {
                        Formula::Or(inner) => flat.extend(inner),
                        g => flat.push(g),
                    }
                }
                flat.sort();
                Formula::Or(flat)
            }
            Formula::Modal(id, fs) => Formula::Modal(id.clone(), fs.iter().map(Formula::canonical).collect()),
        }
    }

    /// Equality up to reordering and flattening of disjunctions.
    pub fn equiv_syntax(&self, other: &Formula) -> bool {
        self.canonical() == other.canonical()
    }

    /// Check lifting identifiers and arities against a signature.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        match self {
            Formula::Top | Formula::Prop(_) => Ok(()),
            Formula::And(a, b) => {
                a.check(sig)?;
                b.check(sig)
            }
            Formula::Or(fs) => fs.iter().try_for_each(|f| f.check(sig)),
            Formula::Modal(id, fs) => {
                let l = sig.lifting(id)?;
                if l.arity() != fs.len() {
                    return Err(Error::ArityMismatch { id: id.clone(), expected: l.arity(), found: fs.len() });
                }
                fs.iter().try_for_each(|f| f.check(sig))
            }
        }
    }

    /// Parse and check against `sig`.
    pub fn parse(text: &str, sig: &Signature) -> Result<Formula> {
        let f = Formula::parse_unchecked(text)?;
        f.check(sig)?;
        Ok(f)
    }

    /// Parse without resolving lifting identifiers.
    pub fn parse_unchecked(text: &str) -> Result<Formula> {
        let mut p = Parser { chars: text.chars().collect(), pos: 0 };
        let f = p.formula()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.error("trailing input"));
        }
        Ok(f)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => f.write_str("top"),
            Formula::Prop(p) => write!(f, "p:{p}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(fs) => {
                f.write_str("\\/[")?;
                write_list(f, fs)?;
                f.write_str("]")
            }
            Formula::Modal(id, fs) => {
                write!(f, "<{id}>(")?;
                write_list(f, fs)?;
                f.write_str(")")
            }
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, fs: &[Formula]) -> fmt::Result {
    for (i, g) in fs.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{g}")?;
    }
    Ok(())
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn position(&self) -> (usize, usize) {
        let mut line = 1;
        let mut column = 1;
        for &c in &self.chars[..self.pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        (line, column)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let (line, column) = self.position();
        Error::Syntax { line, column, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        let n = s.chars().count();
        if self.chars.len() >= self.pos + n && self.chars[self.pos..self.pos + n].iter().copied().eq(s.chars()) {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn name(&mut self, what: &str) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error(format!("expected {what}")));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    /// A lifting identifier may also contain `-`, `.` and `:`.
    fn lifting_id(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos] != '>' && !self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected lifting identifier"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn list(&mut self, close: char) -> Result<Vec<Formula>> {
        let mut out = Vec::new();
        if self.peek() == Some(close) {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(self.formula()?);
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(c) if c == close => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.error(format!("expected `,` or `{close}`"))),
            }
        }
    }

    /// `&` binds between atoms and nests to the right; brackets group.
    fn formula(&mut self) -> Result<Formula> {
        let first = self.atom()?;
        if self.peek() == Some('&') {
            self.pos += 1;
            return Ok(Formula::and(first, self.formula()?));
        }
        Ok(first)
    }

    fn atom(&mut self) -> Result<Formula> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(')')?;
                Ok(f)
            }
            Some('<') => {
                self.pos += 1;
                let id = self.lifting_id()?;
                self.expect('>')?;
                self.expect('(')?;
                Ok(Formula::Modal(id, self.list(')')?))
            }
            Some('\\') => {
                if !self.eat_str("\\/[") {
                    return Err(self.error("expected `\\/[`"));
                }
                Ok(Formula::Or(self.list(']')?))
            }
            Some(_) => {
                let save = self.pos;
                let word = self.name("formula")?;
                match word.as_str() {
                    "top" => Ok(Formula::Top),
                    "bot" => Ok(Formula::bot()),
                    "p" if self.peek() == Some(':') => {
                        self.pos += 1;
                        Ok(Formula::Prop(self.name("proposition name")?))
                    }
                    _ => {
                        self.pos = save;
                        Err(self.error(format!("unexpected `{word}`")))
                    }
                }
            }
        }
    }
}
