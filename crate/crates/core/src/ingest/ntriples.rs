use crate::error::{ParseError, ParseErrorKind};
use crate::lex::Cursor;
use crate::term::{is_absolute_iri, Term};
use crate::vocab::Namespaces;

use super::{standard_prefixes, Triple, TripleDoc};

/// Parses line-oriented N-Triples. `#` comment lines and blank lines are
/// skipped; the first malformed line aborts the parse.
pub fn parse_ntriples(text: &str, ns: &Namespaces) -> Result<TripleDoc, ParseError> {
    let mut doc = TripleDoc { prefix_map: standard_prefixes(ns), ..Default::default() };
    for (i, line) in text.lines().enumerate() {
        let mut cur = Cursor::with_line(line, i + 1);
        cur.take_while(|c| c == ' ' || c == '\t');
        if cur.is_eof() || cur.peek() == Some('#') {
            continue;
        }
        doc.triples.push(parse_line(&mut cur)?);
    }
    Ok(doc)
}

fn skip_ws(cur: &mut Cursor) {
    cur.take_while(|c| c == ' ' || c == '\t');
}

fn parse_line(cur: &mut Cursor) -> Result<Triple, ParseError> {
    let subject = match cur.peek() {
        Some('<') => iri(cur)?,
        Some('_') => blank(cur)?,
        _ => return Err(cur.error("expected IRI or blank node as subject")),
    };
    skip_ws(cur);
    let predicate = match cur.peek() {
        Some('<') => iri(cur)?,
        _ => return Err(cur.error("expected IRI as predicate")),
    };
    skip_ws(cur);
    let object = match cur.peek() {
        Some('<') => iri(cur)?,
        Some('_') => blank(cur)?,
        Some('"') => literal(cur)?,
        _ => return Err(cur.error("expected IRI, blank node or literal as object")),
    };
    skip_ws(cur);
    if !cur.eat('.') {
        return Err(cur.error("expected '.' at end of triple"));
    }
    skip_ws(cur);
    if !cur.is_eof() && cur.peek() != Some('#') {
        return Err(cur.error("unexpected content after '.'"));
    }
    Ok((subject, predicate, object))
}

fn iri(cur: &mut Cursor) -> Result<Term, ParseError> {
    let start = cur.pos();
    let value = cur.read_iri_ref()?;
    if !is_absolute_iri(&value) {
        return Err(cur.error_at(start, ParseErrorKind::MalformedIri, format!("relative IRI <{value}>")));
    }
    Term::iri(value).map_err(|e| cur.error_at(start, ParseErrorKind::MalformedIri, e.to_string()))
}

fn blank(cur: &mut Cursor) -> Result<Term, ParseError> {
    let label = cur.read_blank_label()?;
    Ok(Term::blank(label).expect("label checked non-empty"))
}

fn literal(cur: &mut Cursor) -> Result<Term, ParseError> {
    let value = cur.read_string(false)?;
    if cur.peek() == Some('@') {
        let lang = cur.read_lang_tag()?;
        return Ok(Term::lang_literal(value, lang));
    }
    if cur.eat_str("^^") {
        let start = cur.pos();
        let dt = cur.read_iri_ref()?;
        return Term::typed_literal(value, dt)
            .map_err(|e| cur.error_at(start, ParseErrorKind::MalformedIri, e.to_string()));
    }
    Ok(Term::literal(value))
}
