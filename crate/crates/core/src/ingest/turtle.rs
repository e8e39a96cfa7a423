//! A Turtle subset: prefix/base directives, IRIs, prefixed names, `a`,
//! predicate and object lists, literals and `_:` blank nodes. Collections
//! and `[ ... ]` property lists are rejected as unsupported constructs.

use crate::error::{ParseError, ParseErrorKind};
use crate::lex::Cursor;
use crate::term::{Term, RDF_TYPE, XSD_NS};
use crate::vocab::Namespaces;

use super::{resolve_iri, standard_prefixes, TripleDoc};

pub fn parse_turtle_subset(
    text: &str,
    ns: &Namespaces,
    base: Option<&str>,
) -> Result<TripleDoc, ParseError> {
    let mut p = Parser {
        cur: Cursor::new(text),
        doc: TripleDoc {
            prefix_map: standard_prefixes(ns),
            base: base.map(str::to_string),
            ..Default::default()
        },
    };
    p.document()?;
    Ok(p.doc)
}

struct Parser<'a> {
    cur: Cursor<'a>,
    doc: TripleDoc,
}

fn is_pn_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':' | '%' | '\u{b7}')
}

impl Parser<'_> {
    fn ws(&mut self) {
        self.cur.skip_ws_and_comments('#');
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        self.ws();
        if self.cur.eat(c) {
            Ok(())
        } else {
            Err(self.cur.error(format!("expected '{c}'")))
        }
    }

    fn unsupported(&self, what: &str) -> ParseError {
        self.cur.error_at(self.cur.pos(), ParseErrorKind::UnsupportedConstruct, what)
    }

    fn document(&mut self) -> Result<(), ParseError> {
        loop {
            self.ws();
            if self.cur.is_eof() {
                return Ok(());
            }
            if self.cur.eat_str("@prefix") {
                self.prefix_decl()?;
                self.expect('.')?;
            } else if self.cur.eat_str("@base") {
                self.base_decl()?;
                self.expect('.')?;
            } else if self.cur.eat_keyword_ci("PREFIX") {
                self.prefix_decl()?;
            } else if self.cur.eat_keyword_ci("BASE") {
                self.base_decl()?;
            } else {
                self.triples()?;
                self.expect('.')?;
            }
        }
    }

    fn prefix_decl(&mut self) -> Result<(), ParseError> {
        self.ws();
        let start = self.cur.pos();
        let name = self.cur.take_while(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'));
        let name = name.to_string();
        if !self.cur.eat(':') {
            return Err(self.cur.error_at(start, ParseErrorKind::Syntax, "expected prefix name ending in ':'"));
        }
        self.ws();
        let iri = self.iri_ref()?;
        self.doc.prefix_map.insert(name, iri.value().to_string());
        Ok(())
    }

    fn base_decl(&mut self) -> Result<(), ParseError> {
        self.ws();
        let iri = self.iri_ref()?;
        self.doc.base = Some(iri.value().to_string());
        Ok(())
    }

    fn triples(&mut self) -> Result<(), ParseError> {
        self.ws();
        let subject = match self.cur.peek() {
            Some('[') => return Err(self.unsupported("blank node property lists `[ ... ]` are not supported")),
            Some('(') => return Err(self.unsupported("collections `( ... )` are not supported")),
            Some('_') => self.blank()?,
            _ => self.iri()?,
        };
        loop {
            self.ws();
            let predicate = if self.cur.peek() == Some('a')
                && self.cur.peek_nth(1).is_none_or(|c| c.is_whitespace() || c == '<')
            {
                self.cur.bump();
                Term::iri_unchecked(RDF_TYPE)
            } else {
                self.iri()?
            };
            loop {
                self.ws();
                let object = self.object()?;
                self.doc.triples.push((subject.clone(), predicate.clone(), object));
                self.ws();
                if !self.cur.eat(',') {
                    break;
                }
            }
            self.ws();
            if !self.cur.eat(';') {
                return Ok(());
            }
            // repeated or trailing ';'
            loop {
                self.ws();
                if !self.cur.eat(';') {
                    break;
                }
            }
            self.ws();
            if matches!(self.cur.peek(), Some('.') | None) {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> Result<Term, ParseError> {
        match self.cur.peek() {
            Some('[') => Err(self.unsupported("blank node property lists `[ ... ]` are not supported")),
            Some('(') => Err(self.unsupported("collections `( ... )` are not supported")),
            Some('_') if self.cur.peek_nth(1) == Some(':') => self.blank(),
            Some('"' | '\'') => self.literal(),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' => self.number(),
            _ => {
                if self.cur.eat_keyword_ci("true") {
                    return Ok(Term::typed_literal("true", format!("{XSD_NS}boolean")).unwrap());
                }
                if self.cur.eat_keyword_ci("false") {
                    return Ok(Term::typed_literal("false", format!("{XSD_NS}boolean")).unwrap());
                }
                self.iri()
            }
        }
    }

    fn literal(&mut self) -> Result<Term, ParseError> {
        let value = self.cur.read_string(true)?;
        if self.cur.peek() == Some('@') {
            let lang = self.cur.read_lang_tag()?;
            return Ok(Term::lang_literal(value, lang));
        }
        if self.cur.eat_str("^^") {
            let dt = self.iri()?;
            return Ok(Term::typed_literal(value, dt.value()).expect("datatype is absolute"));
        }
        Ok(Term::literal(value))
    }

    fn number(&mut self) -> Result<Term, ParseError> {
        let start = self.cur.pos();
        self.cur.eat('+');
        self.cur.eat('-');
        self.cur.take_while(|c| c.is_ascii_digit());
        let mut kind = "integer";
        // a '.' followed by a digit continues the number; otherwise it ends the statement
        if self.cur.peek() == Some('.') && self.cur.peek_nth(1).is_some_and(|c| c.is_ascii_digit()) {
            self.cur.bump();
            self.cur.take_while(|c| c.is_ascii_digit());
            kind = "decimal";
        }
        if matches!(self.cur.peek(), Some('e' | 'E')) {
            self.cur.bump();
            if !self.cur.eat('+') {
                self.cur.eat('-');
            }
            if self.cur.take_while(|c| c.is_ascii_digit()).is_empty() {
                return Err(self.cur.error("malformed exponent"));
            }
            kind = "double";
        }
        let text = self.cur.slice(start);
        if !text.chars().any(|c| c.is_ascii_digit()) {
            return Err(self.cur.error_at(start, ParseErrorKind::Syntax, "malformed number"));
        }
        Ok(Term::typed_literal(text, format!("{XSD_NS}{kind}")).unwrap())
    }

    fn blank(&mut self) -> Result<Term, ParseError> {
        let label = self.cur.read_blank_label()?;
        Ok(Term::blank(label).expect("non-empty"))
    }

    fn iri_ref(&mut self) -> Result<Term, ParseError> {
        let start = self.cur.pos();
        let raw = self.cur.read_iri_ref()?;
        let resolved = resolve_iri(self.doc.base.as_deref(), &raw).ok_or_else(|| {
            self.cur.error_at(start, ParseErrorKind::MalformedIri, format!("relative IRI <{raw}> with no base"))
        })?;
        Term::iri(resolved).map_err(|e| self.cur.error_at(start, ParseErrorKind::MalformedIri, e.to_string()))
    }

    /// An `<IRI>` or a prefixed name.
    fn iri(&mut self) -> Result<Term, ParseError> {
        if self.cur.peek() == Some('<') {
            return self.iri_ref();
        }
        let start = self.cur.pos();
        let prefix = self.cur.take_while(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'));
        if !self.cur.eat(':') {
            self.cur.set_pos(start);
            return Err(self.cur.error("expected IRI or prefixed name"));
        }
        let prefix = prefix.to_string();
        let mut local = String::new();
        while let Some(c) = self.cur.peek() {
            if c == '\\' {
                self.cur.bump();
                match self.cur.bump() {
                    Some(e) => local.push(e),
                    None => return Err(self.cur.error("dangling escape")),
                }
            } else if is_pn_char(c) {
                local.push(c);
                self.cur.bump();
            } else {
                break;
            }
        }
        // trailing dots end the statement
        while local.ends_with('.') {
            local.pop();
            self.cur.set_pos(self.cur.pos() - 1);
        }
        let Some(ns) = self.doc.prefix_map.get(&prefix) else {
            return Err(self.cur.error_at(
                start,
                ParseErrorKind::UnknownPrefix,
                format!("undeclared prefix `{prefix}:`"),
            ));
        };
        Term::iri(format!("{ns}{local}"))
            .map_err(|e| self.cur.error_at(start, ParseErrorKind::MalformedIri, e.to_string()))
    }
}
