//! S-expression reader and name resolution shared by the axiom and shape DSLs.
//!
//! Names are resolved as follows: `<iri>` is taken verbatim, `pfx:local`
//! expands a declared prefix, and a bare name resolves into the vocabulary
//! namespace, except inside `(ind ...)` where it resolves into the
//! magnitude namespace (so `(ind p5)` is the generated individual p5).
//! A file may declare prefixes with `(prefix PFX <IRI>)`.

use std::collections::BTreeMap;

use crate::error::{DslError, ParseErrorKind};
use crate::ingest::standard_prefixes;
use crate::lex::Cursor;
use crate::term::{is_absolute_iri, Term};
use crate::vocab::Namespaces;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    pub fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }

    pub fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a, _) => Some(a),
            Sexp::List(..) => None,
        }
    }

    /// `(head args...)` with an atom head.
    pub fn form(&self) -> Option<(&str, &[Sexp])> {
        match self {
            Sexp::List(items, _) => match items.split_first() {
                Some((Sexp::Atom(h, _), rest)) => Some((h, rest)),
                _ => None,
            },
            Sexp::Atom(..) => None,
        }
    }

    pub fn err(&self, msg: impl Into<String>) -> DslError {
        let p = self.pos();
        DslError::Syntax { line: p.line, column: p.column, message: msg.into() }
    }
}

/// Checks the argument count of a form.
pub(crate) fn arity<'a>(form: &Sexp, args: &'a [Sexp], n: usize) -> Result<&'a [Sexp], DslError> {
    if args.len() == n {
        Ok(args)
    } else {
        let head = form.form().map_or("", |f| f.0);
        Err(form.err(format!("`{head}` takes {n} argument(s), got {}", args.len())))
    }
}

pub(crate) fn read_all(text: &str) -> Result<Vec<Sexp>, DslError> {
    let mut cur = Cursor::new(text);
    let mut out = Vec::new();
    loop {
        cur.skip_ws_and_comments(';');
        if cur.is_eof() {
            return Ok(out);
        }
        out.push(read_one(&mut cur)?);
    }
}

fn syntax(cur: &Cursor, pos: usize, msg: impl Into<String>) -> DslError {
    let e = cur.error_at(pos, ParseErrorKind::Syntax, msg);
    DslError::Syntax { line: e.line, column: e.column, message: e.message }
}

fn read_one(cur: &mut Cursor) -> Result<Sexp, DslError> {
    let start = cur.pos();
    let (line, column) = cur.line_col(start);
    let pos = Pos { line, column };
    match cur.peek() {
        Some('(') => {
            cur.bump();
            let mut items = Vec::new();
            loop {
                cur.skip_ws_and_comments(';');
                match cur.peek() {
                    None => return Err(syntax(cur, start, "unclosed '('")),
                    Some(')') => {
                        cur.bump();
                        return Ok(Sexp::List(items, pos));
                    }
                    Some(_) => items.push(read_one(cur)?),
                }
            }
        }
        Some(')') => Err(syntax(cur, start, "unexpected ')'")),
        Some('<') => {
            let iri = cur.take_while(|c| c != '>' && c != '\n');
            if !cur.eat('>') {
                return Err(syntax(cur, start, "unterminated <IRI>"));
            }
            Ok(Sexp::Atom(format!("{iri}>"), pos))
        }
        _ => {
            let atom = cur.take_while(|c| !c.is_whitespace() && !matches!(c, '(' | ')' | ';'));
            Ok(Sexp::Atom(atom.to_string(), pos))
        }
    }
}

/// Prefixes and namespaces in effect while reading a DSL file.
#[derive(Clone, Debug)]
pub struct DslContext {
    pub namespaces: Namespaces,
    pub prefixes: BTreeMap<String, String>,
}

impl DslContext {
    pub fn new(ns: &Namespaces) -> Self {
        DslContext { namespaces: ns.clone(), prefixes: standard_prefixes(ns) }
    }

    /// Applies `(prefix PFX <IRI>)`; returns false if `s` is not a prefix directive.
    pub(crate) fn directive(&mut self, s: &Sexp) -> Result<bool, DslError> {
        let Some(("prefix", args)) = s.form() else {
            return Ok(false);
        };
        let args = arity(s, args, 2)?;
        let name = args[0].atom().ok_or_else(|| args[0].err("expected prefix name"))?;
        let name = name.strip_suffix(':').unwrap_or(name);
        let iri = args[1]
            .atom()
            .and_then(|a| a.strip_prefix('<')?.strip_suffix('>'))
            .filter(|i| is_absolute_iri(i))
            .ok_or_else(|| args[1].err("expected absolute <IRI>"))?;
        self.prefixes.insert(name.to_string(), iri.to_string());
        Ok(true)
    }

    fn expand(&self, s: &Sexp, default_ns: &str) -> Result<String, DslError> {
        let atom = s.atom().ok_or_else(|| s.err("expected a name"))?;
        if let Some(iri) = atom.strip_prefix('<').and_then(|a| a.strip_suffix('>')) {
            return if is_absolute_iri(iri) {
                Ok(iri.to_string())
            } else {
                Err(s.err(format!("relative IRI <{iri}>")))
            };
        }
        if atom.is_empty() || atom.starts_with('<') {
            return Err(s.err("expected a name"));
        }
        match atom.split_once(':') {
            Some((p, local)) => match self.prefixes.get(p) {
                Some(ns) => Ok(format!("{ns}{local}")),
                None => Err(s.err(format!("unknown prefix `{p}:`"))),
            },
            None => Ok(format!("{default_ns}{atom}")),
        }
    }

    /// A concept or role name.
    pub(crate) fn name(&self, s: &Sexp) -> Result<String, DslError> {
        if s.atom().is_some_and(|a| matches!(a, "top" | "bottom")) {
            return Err(s.err("`top`/`bottom` cannot be used as a name"));
        }
        self.expand(s, &self.namespaces.riskman)
    }

    /// An individual; `_:label` gives a blank node.
    pub(crate) fn individual(&self, s: &Sexp) -> Result<Term, DslError> {
        if let Some(label) = s.atom().and_then(|a| a.strip_prefix("_:")) {
            return Term::blank(label).map_err(|e| s.err(e.to_string()));
        }
        let iri = self.expand(s, &self.namespaces.ps)?;
        Term::iri(iri).map_err(|e| s.err(e.to_string()))
    }

    /// Renders an IRI in the form `name`/`individual` read back: a CURIE when
    /// the local part is plain, `<iri>` otherwise.
    pub(crate) fn render_iri(&self, iri: &str) -> String {
        self.prefixes
            .iter()
            .filter_map(|(p, ns)| {
                let local = iri.strip_prefix(ns.as_str())?;
                let plain = !local.is_empty()
                    && local.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'));
                plain.then(|| format!("{p}:{local}"))
            })
            .min_by_key(|c| c.len())
            .unwrap_or_else(|| format!("<{iri}>"))
    }

    pub(crate) fn render_individual(&self, t: &Term) -> String {
        if t.is_iri() {
            self.render_iri(t.value())
        } else {
            format!("_:{}", t.value())
        }
    }
}
