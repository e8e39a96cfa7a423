//! Character cursor shared by the hand-written parsers.

use crate::error::{ParseError, ParseErrorKind};

#[derive(Clone)]
pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    /// Line/column offsets added to reported positions, for parsers that
    /// feed one line at a time.
    line_offset: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0, line_offset: 0 }
    }

    pub fn with_line(src: &'a str, line: usize) -> Self {
        Cursor { src, pos: 0, line_offset: line.saturating_sub(1) }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn set_pos(&mut self, pos: usize) {
        self.pos = pos;
    }

    pub fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn slice(&self, from: usize) -> &'a str {
        &self.src[from..self.pos]
    }

    pub fn is_eof(&self) -> bool {
        self.pos >= self.src.len()
    }

    pub fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub fn peek_nth(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub fn eat_str(&mut self, s: &str) -> bool {
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    /// Case-insensitive keyword match that must be followed by a non-name char.
    pub fn eat_keyword_ci(&mut self, kw: &str) -> bool {
        let rest = self.rest();
        if rest.len() >= kw.len() && rest[..kw.len()].eq_ignore_ascii_case(kw) {
            let next = rest[kw.len()..].chars().next();
            if next.is_none_or(|c| !(c.is_alphanumeric() || c == '_' || c == ':' || c == '-')) {
                self.pos += kw.len();
                return true;
            }
        }
        false
    }

    pub fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !f(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    /// Skips whitespace and comments introduced by `comment`.
    pub fn skip_ws_and_comments(&mut self, comment: char) {
        loop {
            self.take_while(char::is_whitespace);
            if self.peek() == Some(comment) {
                self.take_while(|c| c != '\n');
            } else {
                break;
            }
        }
    }

    /// 1-based line and column of a byte position.
    pub fn line_col(&self, pos: usize) -> (usize, usize) {
        let before = &self.src[..pos.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line + self.line_offset, col)
    }

    pub fn error_at(&self, pos: usize, kind: ParseErrorKind, msg: impl Into<String>) -> ParseError {
        let (line, column) = self.line_col(pos);
        ParseError::new(kind, line, column, msg)
    }

    pub fn error(&self, msg: impl Into<String>) -> ParseError {
        self.error_at(self.pos, ParseErrorKind::Syntax, msg)
    }

    /// Reads `\uXXXX` / `\UXXXXXXXX` after the backslash and kind char were consumed.
    pub fn read_unicode_escape(&mut self, digits: usize) -> Result<char, ParseError> {
        let start = self.pos;
        let hex: String = (0..digits).filter_map(|_| self.bump()).collect();
        if hex.len() != digits {
            return Err(self.error_at(start, ParseErrorKind::Syntax, "truncated unicode escape"));
        }
        u32::from_str_radix(&hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| self.error_at(start, ParseErrorKind::Syntax, "invalid unicode escape"))
    }

    /// Reads an `<...>` IRI reference (the opening '<' not yet consumed).
    pub fn read_iri_ref(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        if !self.eat('<') {
            return Err(self.error("expected '<'"));
        }
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error_at(start, ParseErrorKind::Syntax, "unterminated IRI")),
                Some('>') => break,
                Some('\\') => match self.bump() {
                    Some('u') => out.push(self.read_unicode_escape(4)?),
                    Some('U') => out.push(self.read_unicode_escape(8)?),
                    _ => return Err(self.error("invalid escape in IRI")),
                },
                Some(c) if c.is_whitespace() || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`') => {
                    return Err(self.error(format!("illegal character {c:?} in IRI")));
                }
                Some(c) => out.push(c),
            }
        }
        Ok(out)
    }

    /// Reads a quoted string with ECHAR/UCHAR escapes. Handles `"`, `'` and,
    /// when `allow_long` is set, the triple-quoted forms.
    pub fn read_string(&mut self, allow_long: bool) -> Result<String, ParseError> {
        let start = self.pos;
        let quote = match self.peek() {
            Some(q @ ('"' | '\'')) => q,
            _ => return Err(self.error("expected string literal")),
        };
        let triple: String = std::iter::repeat_n(quote, 3).collect();
        let long = allow_long && self.rest().starts_with(&triple);
        if long {
            self.pos += 3;
        } else {
            self.pos += 1;
        }
        let mut out = String::new();
        loop {
            if long && self.rest().starts_with(&triple) {
                self.pos += 3;
                break;
            }
            match self.bump() {
                None => return Err(self.error_at(start, ParseErrorKind::Syntax, "unterminated string")),
                Some(c) if c == quote && !long => break,
                Some('\n' | '\r') if !long => {
                    return Err(self.error_at(start, ParseErrorKind::Syntax, "newline in string literal"))
                }
                Some('\\') => {
                    let c = match self.bump() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.read_unicode_escape(4)?,
                        Some('U') => self.read_unicode_escape(8)?,
                        _ => return Err(self.error("invalid escape sequence")),
                    };
                    out.push(c);
                }
                Some(c) => out.push(c),
            }
        }
        Ok(out)
    }

    /// Reads `@lang` (the '@' not yet consumed).
    pub fn read_lang_tag(&mut self) -> Result<String, ParseError> {
        if !self.eat('@') {
            return Err(self.error("expected '@'"));
        }
        let tag = self.take_while(|c| c.is_ascii_alphanumeric() || c == '-');
        if tag.is_empty() || !tag.starts_with(|c: char| c.is_ascii_alphabetic()) {
            return Err(self.error("malformed language tag"));
        }
        Ok(tag.to_string())
    }

    /// Reads `_:label` (nothing consumed yet).
    pub fn read_blank_label(&mut self) -> Result<String, ParseError> {
        if !self.eat_str("_:") {
            return Err(self.error("expected blank node"));
        }
        let raw = self.take_while(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'));
        // a trailing '.' terminates the statement rather than belonging to the label
        let label = raw.trim_end_matches('.');
        self.pos -= raw.len() - label.len();
        if label.is_empty() {
            return Err(self.error("empty blank node label"));
        }
        Ok(label.to_string())
    }
}
