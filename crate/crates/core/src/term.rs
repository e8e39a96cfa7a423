//! RDF terms and ABox assertions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::TermError;

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";
pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermKind {
    Iri,
    Blank,
    Literal,
}

/// An IRI, blank node or literal. Equality is structural over all fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    kind: TermKind,
    value: String,
    datatype: Option<String>,
    language: Option<String>,
}

/// True if `s` starts with a URI scheme followed by ':'.
pub fn is_absolute_iri(s: &str) -> bool {
    let Some(colon) = s.find(':') else {
        return false;
    };
    let scheme = &s[..colon];
    let mut chars = scheme.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
        && !s.chars().any(|c| c.is_whitespace() || matches!(c, '<' | '>' | '"'))
}

impl Term {
    /// Validating constructor covering all three kinds.
    pub fn make(
        kind: TermKind,
        value: impl Into<String>,
        datatype: Option<String>,
        language: Option<String>,
    ) -> Result<Term, TermError> {
        let value = value.into();
        match kind {
            TermKind::Iri => {
                if value.is_empty() {
                    return Err(TermError::EmptyValue);
                }
                if !is_absolute_iri(&value) {
                    return Err(TermError::MalformedIri(value));
                }
                Ok(Term { kind, value, datatype: None, language: None })
            }
            TermKind::Blank => {
                if value.is_empty() {
                    return Err(TermError::EmptyValue);
                }
                Ok(Term { kind, value, datatype: None, language: None })
            }
            TermKind::Literal => {
                if let Some(dt) = &datatype {
                    if !is_absolute_iri(dt) {
                        return Err(TermError::MalformedIri(dt.clone()));
                    }
                }
                // a language tag implies rdf:langString, so it wins over a datatype
                let datatype = if language.is_some() { None } else { datatype };
                Ok(Term { kind, value, datatype, language })
            }
        }
    }

    pub fn iri(value: impl Into<String>) -> Result<Term, TermError> {
        Term::make(TermKind::Iri, value, None, None)
    }

    pub fn blank(label: impl Into<String>) -> Result<Term, TermError> {
        Term::make(TermKind::Blank, label, None, None)
    }

    pub fn literal(value: impl Into<String>) -> Term {
        Term { kind: TermKind::Literal, value: value.into(), datatype: None, language: None }
    }

    pub fn typed_literal(value: impl Into<String>, datatype: impl Into<String>) -> Result<Term, TermError> {
        Term::make(TermKind::Literal, value, Some(datatype.into()), None)
    }

    pub fn lang_literal(value: impl Into<String>, language: impl Into<String>) -> Term {
        Term {
            kind: TermKind::Literal,
            value: value.into(),
            datatype: None,
            language: Some(language.into()),
        }
    }

    /// Builds an IRI term from a string already known to be absolute.
    /// Panics otherwise; used for static vocabulary.
    pub(crate) fn iri_unchecked(value: &str) -> Term {
        debug_assert!(is_absolute_iri(value), "not an absolute IRI: {value}");
        Term { kind: TermKind::Iri, value: value.to_string(), datatype: None, language: None }
    }

    pub fn kind(&self) -> TermKind {
        self.kind
    }

    pub fn value(&self) -> &str {
        &self.value
    }

    pub fn datatype(&self) -> Option<&str> {
        self.datatype.as_deref()
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    pub fn is_iri(&self) -> bool {
        self.kind == TermKind::Iri
    }

    pub fn is_literal(&self) -> bool {
        self.kind == TermKind::Literal
    }

    /// IRIs and blank nodes can act as individuals.
    pub fn is_individual(&self) -> bool {
        self.kind != TermKind::Literal
    }

    /// Short human-facing name: the IRI fragment or last path segment, or
    /// `_:label` for blank nodes.
    pub fn local_name(&self) -> String {
        match self.kind {
            TermKind::Iri => local_name(&self.value).to_string(),
            TermKind::Blank => format!("_:{}", self.value),
            TermKind::Literal => format!("{self}"),
        }
    }

    /// The identifier used in structured reports: the IRI itself, or `_:label`.
    pub fn report_id(&self) -> String {
        match self.kind {
            TermKind::Iri => self.value.clone(),
            _ => format!("{self}"),
        }
    }
}

pub fn local_name(iri: &str) -> &str {
    let cut = iri.rfind(['#', '/', ':']).map(|i| i + 1).unwrap_or(0);
    if cut >= iri.len() {
        iri
    } else {
        &iri[cut..]
    }
}

/// Formats terms in N-Triples syntax.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TermKind::Iri => write!(f, "<{}>", self.value),
            TermKind::Blank => write!(f, "_:{}", self.value),
            TermKind::Literal => {
                f.write_str("\"")?;
                for c in self.value.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        '\r' => f.write_str("\\r")?,
                        '\t' => f.write_str("\\t")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")?;
                if let Some(lang) = &self.language {
                    write!(f, "@{lang}")
                } else if let Some(dt) = &self.datatype {
                    write!(f, "^^<{dt}>")
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// A concept assertion `A(a)` or a role assertion `R(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Assertion {
    Concept { concept: Term, subject: Term },
    Role { role: Term, subject: Term, object: Term },
}

impl Assertion {
    pub fn concept(concept: Term, subject: Term) -> Assertion {
        Assertion::Concept { concept, subject }
    }

    pub fn role(role: Term, subject: Term, object: Term) -> Assertion {
        Assertion::Role { role, subject, object }
    }

    pub fn subject(&self) -> &Term {
        match self {
            Assertion::Concept { subject, .. } | Assertion::Role { subject, .. } => subject,
        }
    }

    /// Individuals mentioned by this assertion.
    pub fn individuals(&self) -> impl Iterator<Item = &Term> {
        let (a, b) = match self {
            Assertion::Concept { subject, .. } => (subject, None),
            Assertion::Role { subject, object, .. } => (subject, Some(object)),
        };
        std::iter::once(a).chain(b)
    }

    /// Predicate IRI: the concept or role name.
    pub fn predicate(&self) -> &Term {
        match self {
            Assertion::Concept { concept, .. } => concept,
            Assertion::Role { role, .. } => role,
        }
    }

    /// Well-formed for reasoning: names are IRIs, individuals are not literals.
    pub fn is_well_formed(&self) -> bool {
        self.predicate().is_iri() && self.individuals().all(Term::is_individual)
    }

    /// The RDF triple this assertion corresponds to.
    pub fn to_triple(&self) -> (Term, Term, Term) {
        match self {
            Assertion::Concept { concept, subject } => {
                (subject.clone(), Term::iri_unchecked(RDF_TYPE), concept.clone())
            }
            Assertion::Role { role, subject, object } => {
                (subject.clone(), role.clone(), object.clone())
            }
        }
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Concept { concept, subject } => {
                write!(f, "{}({})", concept.local_name(), subject.local_name())
            }
            Assertion::Role { role, subject, object } => write!(
                f,
                "{}({}, {})",
                role.local_name(),
                subject.local_name(),
                object.local_name()
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iri_terms() {
        let t = Term::make(
            TermKind::Iri,
            "https://w3id.org/riskman/ontology#ControlledRisk",
            None,
            None,
        )
        .unwrap();
        assert_eq!(t.kind(), TermKind::Iri);
        assert_eq!(t.local_name(), "ControlledRisk");
        assert_eq!(Term::iri(""), Err(TermError::EmptyValue));
        assert!(matches!(Term::iri("relative/path"), Err(TermError::MalformedIri(_))));
        assert!(matches!(Term::iri("1http://x"), Err(TermError::MalformedIri(_))));
        assert!(Term::iri("urn:x:y").is_ok());
    }

    #[test]
    fn literal_terms_are_not_individuals() {
        let t = Term::make(TermKind::Literal, "A160106", Some(XSD_STRING.into()), None).unwrap();
        assert!(t.is_literal());
        assert!(!t.is_individual());
        assert_eq!(t.to_string(), format!("\"A160106\"^^<{XSD_STRING}>"));
        assert_eq!(Term::blank(""), Err(TermError::EmptyValue));
    }

    #[test]
    fn literal_escaping() {
        let t = Term::lang_literal("a \"b\"\n", "en");
        assert_eq!(t.to_string(), "\"a \\\"b\\\"\\n\"@en");
    }

    #[test]
    fn structural_equality() {
        let a = Term::literal("x");
        let b = Term::lang_literal("x", "en");
        assert_ne!(a, b);
        assert_eq!(a, Term::literal("x"));
    }
}
