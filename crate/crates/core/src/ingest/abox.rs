use crate::error::AboxError;
use crate::graph::Graph;
use crate::term::{Assertion, RDF_TYPE};
use crate::vocab::Vocabulary;

use super::{Triple, TripleDoc};

/// The ABox read off a triple document, plus everything that did not map.
#[derive(Clone, Debug, Default)]
pub struct AboxMapping {
    pub graph: Graph,
    /// Triples outside the vocabulary, in document order.
    pub leftover: Vec<Triple>,
}

/// Maps triples onto assertions over `vocab`.
///
/// `rdf:type` to a concept name gives a concept assertion and a role-name
/// predicate with an individual object gives a role assertion. Literal
/// objects go to the graph's literal triples. Anything else is leftover.
/// A concept name used as a predicate, or a role name used as a type, is a
/// hard error.
pub fn triples_to_abox(doc: &TripleDoc, vocab: &Vocabulary) -> Result<AboxMapping, AboxError> {
    let mut out = AboxMapping::default();
    for (s, p, o) in &doc.triples {
        let pred = p.value();
        if vocab.is_concept(pred) {
            return Err(AboxError::TypeMisuse(format!("concept name <{pred}> used as a predicate (subject {s})")));
        }
        if o.is_literal() {
            out.graph.add_literal_triple(s.clone(), p.clone(), o.clone());
            continue;
        }
        if pred == RDF_TYPE {
            if vocab.is_concept(o.value()) {
                out.graph.add_assertion(Assertion::concept(o.clone(), s.clone()));
            } else if vocab.is_role(o.value()) {
                return Err(AboxError::TypeMisuse(format!("role name {o} used as a type of {s}")));
            } else {
                out.leftover.push((s.clone(), p.clone(), o.clone()));
            }
        } else if vocab.is_role(pred) {
            out.graph.add_assertion(Assertion::role(p.clone(), s.clone(), o.clone()));
        } else {
            out.leftover.push((s.clone(), p.clone(), o.clone()));
        }
    }
    Ok(out)
}
