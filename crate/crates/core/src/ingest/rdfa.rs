//! RDFa-lite subset distiller.
//!
//! Supported attributes:
//! - `prefix="p: IRI q: IRI"` declares prefixes for the element and its descendants;
//! - `about` names the subject of the element's own statements and of its descendants;
//! - `resource` is the object of `property` on the same element and becomes the
//!   subject for descendants;
//! - `typeof` emits `rdf:type` triples for `about`, else `resource`, else a fresh
//!   blank node (which then acts like `resource`);
//! - `property` emits one triple per listed property; the object is `resource`,
//!   `href`, the typeof-created node, the `content` attribute or the element's
//!   text (whitespace collapsed), in that order. `datatype` and `lang`/`xml:lang`
//!   qualify literals.
//!
//! Values are CURIEs (`p:local`, `[p:local]`, `_:label`) or IRIs; relative IRIs
//! resolve against the base. Other RDFa attributes (`rel`, `rev`, `vocab`,
//! `inlist`, `src`) are ignored and reported as warnings.

use std::collections::BTreeMap;

use crate::error::{ParseError, ParseErrorKind};
use crate::term::{Term, RDF_TYPE};
use crate::vocab::Namespaces;

use super::html::{parse_html, Element, Node};
use super::{resolve_iri, standard_prefixes, TripleDoc};

const IGNORED: &[&str] = &["rel", "rev", "vocab", "inlist", "src"];

/// Whether `prefix:local` with an undeclared prefix is read as an absolute IRI
/// rather than rejected as an unknown prefix.
pub(super) fn looks_like_iri(prefix: &str, local: &str) -> bool {
    local.starts_with("//")
        || matches!(prefix, "urn" | "mailto" | "tag" | "file" | "http" | "https" | "data" | "doi" | "info")
}

pub fn distill_rdfa_subset(
    html_text: &str,
    base_iri: &str,
    ns: &Namespaces,
) -> Result<TripleDoc, ParseError> {
    let root = parse_html(html_text)?;
    let mut d = Distiller {
        doc: TripleDoc {
            prefix_map: standard_prefixes(ns),
            base: (!base_iri.is_empty()).then(|| base_iri.to_string()),
            ..Default::default()
        },
        fresh: 0,
    };
    let prefixes = d.doc.prefix_map.clone();
    let ctx = Context { subject: None, prefixes, lang: None };
    d.children(&root, &ctx)?;
    Ok(d.doc)
}

#[derive(Clone)]
struct Context {
    subject: Option<Term>,
    prefixes: BTreeMap<String, String>,
    lang: Option<String>,
}

struct Distiller {
    doc: TripleDoc,
    fresh: usize,
}

impl Distiller {
    fn children(&mut self, el: &Element, ctx: &Context) -> Result<(), ParseError> {
        for child in &el.children {
            if let Node::Element(e) = child {
                self.element(e, ctx)?;
            }
        }
        Ok(())
    }

    fn err(&self, el: &Element, kind: ParseErrorKind, msg: String) -> ParseError {
        ParseError::new(kind, el.line, el.column, msg)
    }

    fn element(&mut self, el: &Element, parent: &Context) -> Result<(), ParseError> {
        let mut ctx = parent.clone();
        if el.name == "base" {
            if let Some(href) = el.attr("href") {
                self.doc.base = resolve_iri(self.doc.base.as_deref(), href);
            }
        }
        if let Some(decl) = el.attr("prefix") {
            let mut parts = decl.split_whitespace();
            while let Some(p) = parts.next() {
                let Some(name) = p.strip_suffix(':') else {
                    return Err(self.err(el, ParseErrorKind::Syntax, format!("malformed prefix declaration `{decl}`")));
                };
                let Some(iri) = parts.next() else {
                    return Err(self.err(el, ParseErrorKind::Syntax, format!("prefix `{name}` has no IRI")));
                };
                ctx.prefixes.insert(name.to_string(), iri.to_string());
                self.doc.prefix_map.insert(name.to_string(), iri.to_string());
            }
        }
        if let Some(lang) = el.attr("xml:lang").or(el.attr("lang")) {
            ctx.lang = (!lang.is_empty()).then(|| lang.to_string());
        }
        for attr in IGNORED {
            if el.attr(attr).is_some() {
                self.doc.warnings.push(format!(
                    "{}:{}: ignored RDFa attribute `{attr}` on <{}>",
                    el.line, el.column, el.name
                ));
            }
        }

        let about = el.attr("about").map(|v| self.resolve(el, &ctx, v)).transpose()?;
        let resource = el.attr("resource").map(|v| self.resolve(el, &ctx, v)).transpose()?;
        let href = el.attr("href").map(|v| self.resolve(el, &ctx, v)).transpose()?;

        let mut typed_node = None;
        if let Some(types) = el.attr("typeof") {
            let target = match about.clone().or_else(|| resource.clone()) {
                Some(t) => t,
                None => {
                    self.fresh += 1;
                    let node = Term::blank(format!("rdfa{}", self.fresh)).unwrap();
                    typed_node = Some(node.clone());
                    node
                }
            };
            for ty in types.split_whitespace() {
                let class = self.resolve_term(el, &ctx, ty)?;
                self.doc.triples.push((target.clone(), Term::iri_unchecked(RDF_TYPE), class));
            }
        }

        if let Some(props) = el.attr("property") {
            let subject = about.clone().or_else(|| ctx.subject.clone());
            match subject {
                None => self.doc.warnings.push(format!(
                    "{}:{}: property on <{}> has no subject; skipped",
                    el.line, el.column, el.name
                )),
                Some(subject) => {
                    let object = match resource.clone().or(href).or(typed_node.clone()) {
                        Some(o) => o,
                        None => self.literal(el, &ctx)?,
                    };
                    for p in props.split_whitespace() {
                        let predicate = self.resolve_term(el, &ctx, p)?;
                        self.doc.triples.push((subject.clone(), predicate, object.clone()));
                    }
                }
            }
        }

        if let Some(s) = about.or(resource).or(typed_node) {
            ctx.subject = Some(s);
        }
        self.children(el, &ctx)
    }

    fn literal(&self, el: &Element, ctx: &Context) -> Result<Term, ParseError> {
        let text = match el.attr("content") {
            Some(c) => c.to_string(),
            None => el.text_content().split_whitespace().collect::<Vec<_>>().join(" "),
        };
        match el.attr("datatype").filter(|d| !d.is_empty()) {
            Some(dt) => {
                let dt = self.resolve_term(el, ctx, dt)?;
                Ok(Term::typed_literal(text, dt.value()).expect("resolved datatype is absolute"))
            }
            None => Ok(match &ctx.lang {
                Some(l) => Term::lang_literal(text, l.clone()),
                None => Term::literal(text),
            }),
        }
    }

    /// Resolves a value in subject/object position: CURIE, blank node or (relative) IRI.
    fn resolve(&self, el: &Element, ctx: &Context, value: &str) -> Result<Term, ParseError> {
        let value = value.trim();
        if let Some(label) = value.strip_prefix("_:") {
            return Term::blank(label)
                .map_err(|e| self.err(el, ParseErrorKind::Syntax, e.to_string()));
        }
        if let Some(curie) = value.strip_prefix('[').and_then(|v| v.strip_suffix(']')) {
            return self.expand_curie(el, ctx, curie, true);
        }
        if value.contains(':') {
            return self.expand_curie(el, ctx, value, false);
        }
        let iri = resolve_iri(self.doc.base.as_deref(), value).ok_or_else(|| {
            self.err(el, ParseErrorKind::MalformedIri, format!("relative IRI `{value}` with no base"))
        })?;
        Ok(Term::iri_unchecked(&iri))
    }

    /// Resolves a value in property/typeof position, where only CURIEs and
    /// absolute IRIs are meaningful.
    fn resolve_term(&self, el: &Element, ctx: &Context, value: &str) -> Result<Term, ParseError> {
        if !value.contains(':') {
            return Err(self.err(
                el,
                ParseErrorKind::UnknownPrefix,
                format!("`{value}` is not a CURIE or IRI (vocab terms are not supported)"),
            ));
        }
        self.expand_curie(el, ctx, value, false)
    }

    fn expand_curie(&self, el: &Element, ctx: &Context, value: &str, safe: bool) -> Result<Term, ParseError> {
        let (prefix, local) = value.split_once(':').unwrap_or(("", value));
        if let Some(ns) = ctx.prefixes.get(prefix) {
            return Term::iri(format!("{ns}{local}"))
                .map_err(|e| self.err(el, ParseErrorKind::MalformedIri, e.to_string()));
        }
        if !safe && looks_like_iri(prefix, local) {
            return Term::iri(value).map_err(|e| self.err(el, ParseErrorKind::MalformedIri, e.to_string()));
        }
        Err(self.err(el, ParseErrorKind::UnknownPrefix, format!("undeclared prefix `{prefix}:` in `{value}`")))
    }
}
