//! Serializers for graphs: N-Triples, Turtle and an RDFa-subset HTML page
//! that the distiller reads back to the same assertions.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::graph::Graph;
use crate::term::{local_name, Term, TermKind, RDF_TYPE};

use super::rdfa::looks_like_iri;
use super::Triple;

/// All assertions and literal triples of `graph`, sorted.
pub fn graph_triples(graph: &Graph) -> Vec<Triple> {
    let mut triples: Vec<Triple> = graph
        .assertions()
        .map(|a| a.to_triple())
        .chain(graph.literal_triples().cloned())
        .collect();
    triples.sort();
    triples.dedup();
    triples
}

pub fn write_ntriples(graph: &Graph) -> String {
    triples_to_ntriples(&graph_triples(graph))
}

/// One N-Triples line per triple, in the given order.
pub fn triples_to_ntriples(triples: &[Triple]) -> String {
    let mut out = String::new();
    for (s, p, o) in triples {
        let _ = writeln!(out, "{s} {p} {o} .");
    }
    out
}

/// Shortest CURIE for `iri` under `prefixes`, if the local part is a plain
/// name that both the Turtle parser and the RDFa distiller accept.
fn compact(iri: &str, prefixes: &BTreeMap<String, String>) -> Option<String> {
    prefixes
        .iter()
        .filter_map(|(p, ns)| {
            let local = iri.strip_prefix(ns.as_str())?;
            let plain = !local.is_empty()
                && local.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
                && !local.starts_with('-');
            plain.then(|| format!("{p}:{local}"))
        })
        .min_by_key(|c| c.len())
}

fn turtle_term(t: &Term, prefixes: &BTreeMap<String, String>) -> String {
    match t.kind() {
        TermKind::Iri => compact(t.value(), prefixes).unwrap_or_else(|| t.to_string()),
        TermKind::Literal => match t.datatype() {
            Some(dt) => {
                let quoted = Term::literal(t.value()).to_string();
                format!("{quoted}^^{}", compact(dt, prefixes).unwrap_or_else(|| format!("<{dt}>")))
            }
            None => t.to_string(),
        },
        TermKind::Blank => t.to_string(),
    }
}

/// Turtle grouped by subject, with `a` for `rdf:type` and prefixed names
/// wherever possible. Only prefixes that are used are declared.
pub fn write_turtle(graph: &Graph, prefixes: &BTreeMap<String, String>) -> String {
    let triples = graph_triples(graph);
    let mut used = BTreeMap::new();
    let mut body = String::new();
    let mut note = |t: &Term| {
        let s = turtle_term(t, prefixes);
        if let Some((p, _)) = s.split_once(':').filter(|_| t.is_iri() && !s.starts_with('<')) {
            used.insert(p.to_string(), prefixes[p].clone());
        }
        if let Some(dt) = t.datatype() {
            if let Some(c) = compact(dt, prefixes) {
                let p = c.split_once(':').unwrap().0;
                used.insert(p.to_string(), prefixes[p].clone());
            }
        }
        s
    };
    let mut i = 0;
    while i < triples.len() {
        let subject = &triples[i].0;
        let _ = write!(body, "{}", note(subject));
        let mut first = true;
        while i < triples.len() && &triples[i].0 == subject {
            let (_, p, o) = &triples[i];
            let pred = if p.value() == RDF_TYPE { "a".to_string() } else { note(p) };
            let sep = if first { " " } else { " ;\n    " };
            let _ = write!(body, "{sep}{pred} {}", note(o));
            first = false;
            i += 1;
        }
        body.push_str(" .\n");
    }
    let mut out = String::new();
    for (p, ns) in &used {
        let _ = writeln!(out, "@prefix {p}: <{ns}> .");
    }
    if !used.is_empty() {
        out.push('\n');
    }
    out.push_str(&body);
    out
}

fn escape_html(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

/// Renders the graph as an HTML page annotated with the RDFa subset the
/// distiller understands: one `<section about>` per subject, `typeof` for
/// concept labels and one list item per property value.
pub fn render_rdfa_html(graph: &Graph, prefixes: &BTreeMap<String, String>, title: &str) -> String {
    let triples = graph_triples(graph);
    let mut prefixes = prefixes.clone();
    // IRIs that neither compact nor read back as IRIs get a generated prefix.
    for (s, p, o) in &triples {
        for t in [s, p, o] {
            let iri = match t.kind() {
                TermKind::Iri => t.value(),
                TermKind::Literal => match t.datatype() {
                    Some(dt) => dt,
                    None => continue,
                },
                TermKind::Blank => continue,
            };
            if compact(iri, &prefixes).is_none() {
                let (scheme, rest) = iri.split_once(':').unwrap_or(("", iri));
                if !looks_like_iri(scheme, rest) {
                    let ns = &iri[..iri.len() - local_name(iri).len()];
                    let name = format!("ns{}", prefixes.len());
                    prefixes.insert(name, ns.to_string());
                }
            }
        }
    }
    let curie = |iri: &str| escape_html(&compact(iri, &prefixes).unwrap_or_else(|| iri.to_string()));
    let node = |t: &Term| match t.kind() {
        TermKind::Blank => escape_html(&t.to_string()),
        _ => curie(t.value()),
    };

    let decl: Vec<String> = prefixes.iter().map(|(p, ns)| format!("{p}: {ns}")).collect();
    let mut out = String::new();
    let _ = writeln!(out, "<!DOCTYPE html>");
    let _ = writeln!(out, "<html prefix=\"{}\">", escape_html(&decl.join(" ")));
    let _ = writeln!(out, "<head><meta charset=\"utf-8\"><title>{}</title></head>", escape_html(title));
    let _ = writeln!(out, "<body>");
    let _ = writeln!(out, "<h1>{}</h1>", escape_html(title));

    let mut i = 0;
    while i < triples.len() {
        let subject = &triples[i].0;
        let end = triples[i..].iter().position(|t| &t.0 != subject).map_or(triples.len(), |n| i + n);
        let group = &triples[i..end];
        let types: Vec<String> = group
            .iter()
            .filter(|(_, p, o)| p.value() == RDF_TYPE && !o.is_literal())
            .map(|(_, _, o)| node(o))
            .collect();
        let typeof_attr = if types.is_empty() {
            String::new()
        } else {
            format!(" typeof=\"{}\"", types.join(" "))
        };
        let _ = writeln!(out, "<section about=\"{}\"{typeof_attr}>", node(subject));
        let _ = writeln!(out, "  <h2>{}</h2>", escape_html(&subject.local_name()));
        let _ = writeln!(out, "  <ul>");
        for (_, p, o) in group {
            if p.value() == RDF_TYPE && !o.is_literal() {
                continue;
            }
            let label = escape_html(local_name(p.value()));
            match o.kind() {
                TermKind::Literal => {
                    let mut attrs = format!("property=\"{}\" content=\"{}\"", curie(p.value()), escape_html(o.value()));
                    if let Some(lang) = o.language() {
                        let _ = write!(attrs, " lang=\"{}\"", escape_html(lang));
                    } else if let Some(dt) = o.datatype() {
                        let _ = write!(attrs, " datatype=\"{}\"", curie(dt));
                    }
                    let _ = writeln!(out, "    <li>{label}: <span {attrs}>{}</span></li>", escape_html(o.value()));
                }
                _ => {
                    let _ = writeln!(
                        out,
                        "    <li>{label}: <span property=\"{}\" resource=\"{}\">{}</span></li>",
                        curie(p.value()),
                        node(o),
                        escape_html(&o.local_name())
                    );
                }
            }
        }
        let _ = writeln!(out, "  </ul>");
        let _ = writeln!(out, "</section>");
        i = end;
    }
    let _ = writeln!(out, "</body>");
    let _ = writeln!(out, "</html>");
    out
}
