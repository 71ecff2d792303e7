//! Character cursor shared by the N-Triples, path and query parsers.

use crate::error::{Error, Result};
use crate::term::{is_numeric, Prefixes, Term, BLANK_NS};

/// How `_:name` tokens are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum BlankMode {
    /// Data: blank nodes become IRIs in a reserved namespace.
    Constant,
    /// Queries: blank nodes are variables.
    Variable,
}

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    pub(crate) prefixes: &'a Prefixes,
    pub(crate) blanks: BlankMode,
}

pub(crate) fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '#' | '%')
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str, prefixes: &'a Prefixes, blanks: BlankMode) -> Self {
        Cursor {
            src,
            pos: 0,
            prefixes,
            blanks,
        }
    }

    pub(crate) fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(crate) fn pos(&self) -> usize {
        self.pos
    }

    pub(crate) fn reset(&mut self, pos: usize) {
        self.pos = pos;
    }

    pub(crate) fn is_eof(&self) -> bool {
        self.pos >= self.src.len()
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub(crate) fn peek_nth(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    pub(crate) fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    /// Skips whitespace and `#` comments that start a line or follow whitespace.
    pub(crate) fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') if self.pos == 0 || self.src[..self.pos].ends_with(char::is_whitespace) => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => return,
            }
        }
    }

    pub(crate) fn starts_with(&self, s: &str) -> bool {
        self.rest().starts_with(s)
    }

    /// Consumes `s` if the input continues with it.
    pub(crate) fn eat(&mut self, s: &str) -> bool {
        if self.starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    /// Consumes a keyword only when it is not the prefix of a longer name.
    pub(crate) fn eat_keyword(&mut self, kw: &str) -> bool {
        if !self.starts_with(kw) {
            return false;
        }
        let after = self.rest()[kw.len()..].chars().next();
        if after.is_some_and(|c| is_name_char(c) || c == ':' && !self.rest()[kw.len()..].starts_with("::")) {
            return false;
        }
        self.pos += kw.len();
        true
    }

    pub(crate) fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}`")))
        }
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> Error {
        let before = &self.src[..self.pos.min(self.src.len())];
        let line = before.matches('\n').count();
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        let mut message = message.into();
        if let Some(c) = self.peek() {
            message.push_str(&format!(" (found `{c}`)"));
        } else {
            message.push_str(" (found end of input)");
        }
        Error::syntax(line + 1, column, message)
    }

    /// Reads `[A-Za-z0-9_]+` after a `?` or `$`.
    pub(crate) fn read_var_name(&mut self) -> Result<String> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' {
                self.bump();
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(self.error("expected a variable name"));
        }
        Ok(self.src[start..self.pos].to_string())
    }

    /// Reads a bare name: name characters, `:` unless part of `::`, and `.`
    /// only when followed by another name character.
    pub(crate) fn read_bare(&mut self) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if is_name_char(c) {
                self.bump();
            } else if c == ':' {
                if self.starts_with("::") {
                    break;
                }
                self.bump();
            } else if c == '.' && self.peek_nth(1).is_some_and(is_name_char) {
                self.bump();
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    /// Reads one term: `<iri>`, `"literal"` (optional `^^type` or `@lang`,
    /// both discarded), `?var`, `_:blank`, a number, or a bare/prefixed name.
    pub(crate) fn read_term(&mut self) -> Result<Term> {
        match self.peek() {
            Some('<') => {
                self.bump();
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if c == '>' {
                        let iri = &self.src[start..self.pos];
                        self.bump();
                        return Ok(Term::iri(iri));
                    }
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
                Err(self.error("unterminated IRI"))
            }
            Some('"') => {
                self.bump();
                let mut lex = String::new();
                loop {
                    match self.bump() {
                        None | Some('\n') => return Err(self.error("unterminated literal")),
                        Some('"') => break,
                        Some('\\') => match self.bump() {
                            Some('n') => lex.push('\n'),
                            Some('t') => lex.push('\t'),
                            Some('r') => lex.push('\r'),
                            Some('"') => lex.push('"'),
                            Some('\\') => lex.push('\\'),
                            _ => return Err(self.error("invalid escape in literal")),
                        },
                        Some(c) => lex.push(c),
                    }
                }
                if self.eat("^^") {
                    if self.peek() == Some('<') {
                        self.read_term()?;
                    } else {
                        self.read_bare();
                    }
                } else if self.eat("@") {
                    while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '-') {
                        self.bump();
                    }
                }
                Ok(Term::literal(lex))
            }
            Some('?' | '$') => {
                self.bump();
                Ok(Term::var(self.read_var_name()?))
            }
            Some('_') if self.starts_with("_:") => {
                self.pos += 2;
                let name = self.read_bare();
                if name.is_empty() {
                    return Err(self.error("expected a blank node label"));
                }
                Ok(match self.blanks {
                    BlankMode::Constant => Term::iri(format!("{BLANK_NS}{name}")),
                    BlankMode::Variable => Term::var(format!("_{name}")),
                })
            }
            Some('+' | '-') => {
                let start = self.pos;
                self.bump();
                let tail = self.read_bare();
                let tok = &self.src[start..self.pos];
                if is_numeric(tok) && !tail.is_empty() {
                    Ok(Term::literal(tok))
                } else {
                    self.pos = start;
                    Err(self.error("expected a term"))
                }
            }
            Some(c) if is_name_char(c) => {
                let tok = self.read_bare();
                if is_numeric(tok) {
                    Ok(Term::literal(tok))
                } else {
                    Ok(Term::iri(self.prefixes.expand(tok)))
                }
            }
            _ => Err(self.error("expected a term")),
        }
    }
}
