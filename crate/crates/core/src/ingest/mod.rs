//! Submission parsing: N-Triples, a Turtle subset and an RDFa-lite HTML
//! distiller, plus the mapping of triples onto ABox assertions.

mod abox;
mod html;
mod ntriples;
mod rdfa;
mod turtle;
mod write;

use std::collections::BTreeMap;
use std::path::Path;

pub use abox::{triples_to_abox, AboxMapping};
pub use ntriples::parse_ntriples;
pub use rdfa::distill_rdfa_subset;
pub use turtle::parse_turtle_subset;
pub use write::{graph_triples, render_rdfa_html, triples_to_ntriples, write_ntriples, write_turtle};

use crate::error::ParseError;
use crate::term::{Term, TermKind, RDFS_NS, RDF_NS, XSD_NS};
use crate::vocab::Namespaces;

pub type Triple = (Term, Term, Term);

/// Parsed triples with the prefixes and base in effect at the end of the parse.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TripleDoc {
    pub triples: Vec<Triple>,
    pub prefix_map: BTreeMap<String, String>,
    pub base: Option<String>,
    /// Constructs that were recognised but deliberately ignored.
    pub warnings: Vec<String>,
}

impl TripleDoc {
    /// Renames blank nodes to `{scope}.{label}` so that documents loaded
    /// together cannot share blank nodes by accident.
    pub fn skolemize(&mut self, scope: &str) {
        let rename = |t: &mut Term| {
            if t.kind() == TermKind::Blank {
                *t = Term::blank(format!("{scope}.{}", t.value())).expect("non-empty label");
            }
        };
        for (s, _, o) in &mut self.triples {
            rename(s);
            rename(o);
        }
    }
}

/// Prefixes every parser starts from: rdf, rdfs, xsd and the configured
/// `rm` (vocabulary) and `ps` (magnitudes) namespaces.
pub fn standard_prefixes(ns: &Namespaces) -> BTreeMap<String, String> {
    [
        ("rdf", RDF_NS),
        ("rdfs", RDFS_NS),
        ("xsd", XSD_NS),
        ("rm", ns.riskman.as_str()),
        ("ps", ns.ps.as_str()),
    ]
    .into_iter()
    .map(|(p, i)| (p.to_string(), i.to_string()))
    .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    NTriples,
    Turtle,
    RdfaHtml,
}

impl Format {
    /// Detects the format from a file extension (.nt, .ttl, .html/.htm).
    pub fn from_path(path: &Path) -> Option<Format> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "nt" => Some(Format::NTriples),
            "ttl" => Some(Format::Turtle),
            "html" | "htm" | "xhtml" => Some(Format::RdfaHtml),
            _ => None,
        }
    }

    pub fn parse(
        self,
        text: &str,
        ns: &Namespaces,
        base: Option<&str>,
    ) -> Result<TripleDoc, ParseError> {
        match self {
            Format::NTriples => parse_ntriples(text, ns),
            Format::Turtle => parse_turtle_subset(text, ns, base),
            Format::RdfaHtml => distill_rdfa_subset(text, base.unwrap_or(""), ns),
        }
    }
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ntriples" | "nt" => Ok(Format::NTriples),
            "turtle" | "ttl" => Ok(Format::Turtle),
            "rdfa-html" | "html" => Ok(Format::RdfaHtml),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

/// Resolves a (possibly relative) IRI reference against a base.
/// Returns `None` when the reference is relative and there is no usable base.
pub fn resolve_iri(base: Option<&str>, reference: &str) -> Option<String> {
    if crate::term::is_absolute_iri(reference) {
        return Some(reference.to_string());
    }
    let base = base.filter(|b| crate::term::is_absolute_iri(b))?;
    if reference.is_empty() {
        return Some(base.split('#').next().unwrap_or(base).to_string());
    }
    if reference.starts_with('#') {
        let stem = base.split('#').next().unwrap_or(base);
        return Some(format!("{stem}{reference}"));
    }
    let no_frag = base.split('#').next().unwrap_or(base);
    if let Some(rest) = reference.strip_prefix("//") {
        let scheme = &no_frag[..no_frag.find(':')?];
        return Some(format!("{scheme}://{rest}"));
    }
    if reference.starts_with('/') {
        // scheme://authority + absolute path
        let after_scheme = no_frag.find("://").map(|i| i + 3).unwrap_or(no_frag.find(':')? + 1);
        let auth_end = no_frag[after_scheme..]
            .find('/')
            .map(|i| i + after_scheme)
            .unwrap_or(no_frag.len());
        return Some(format!("{}{reference}", &no_frag[..auth_end]));
    }
    let dir_end = no_frag.rfind('/').map(|i| i + 1).unwrap_or(no_frag.len());
    Some(format!("{}{reference}", &no_frag[..dir_end]))
}
