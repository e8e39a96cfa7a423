//! The probability-severity ontology PS(π, σ): magnitude individuals
//! p1..pπ and s1..sσ, their `gt` ordering and the "multiplication" GCIs
//! that combine two probability magnitudes by adding exponents.

use crate::axioms::{Axiom, ConceptExpr, Ontology};
use crate::error::PsError;
use crate::ingest::Triple;
use crate::term::{Assertion, Term, RDFS_NS};
use crate::vocab::{Namespaces, Vocabulary};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PsConfig {
    pub pi: u32,
    pub sigma: u32,
}

impl Default for PsConfig {
    fn default() -> Self {
        PsConfig { pi: 5, sigma: 5 }
    }
}

impl PsConfig {
    pub fn new(pi: u32, sigma: u32) -> Result<Self, PsError> {
        if pi == 0 || sigma == 0 {
            return Err(PsError::InvalidConfig { pi, sigma });
        }
        Ok(PsConfig { pi, sigma })
    }
}

/// `k = max(1, i + j − π)`: the magnitude of the product of two
/// probabilities whose interval upper bounds are 10^(i−π) and 10^(j−π).
pub fn multiply_magnitudes(i: u32, j: u32, pi: u32) -> Result<u32, PsError> {
    if i == 0 || j == 0 || i > pi || j > pi {
        return Err(PsError::OutOfRange { i, j, pi });
    }
    Ok((i + j).saturating_sub(pi).max(1))
}

/// Example names for π = 5.
pub const PROBABILITY_LABELS: [&str; 5] = ["improbable", "remote", "occasional", "probable", "frequent"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsOntology {
    pub config: PsConfig,
    /// π² multiplication GCIs followed by `transitive(gt)`.
    pub tbox: Vec<Axiom>,
    /// Probability/Severity memberships and the successor `gt` edges.
    pub abox: Vec<Assertion>,
    pub probabilities: Vec<Term>,
    pub severities: Vec<Term>,
    /// `rdfs:label` annotations, only for π = 5.
    pub labels: Vec<Triple>,
}

pub fn probability(ns: &Namespaces, i: u32) -> Term {
    Term::iri_unchecked(&format!("{}p{i}", ns.ps))
}

pub fn severity(ns: &Namespaces, i: u32) -> Term {
    Term::iri_unchecked(&format!("{}s{i}", ns.ps))
}

pub fn generate_ps(config: PsConfig, ns: &Namespaces) -> Result<PsOntology, PsError> {
    let PsConfig { pi, sigma } = PsConfig::new(config.pi, config.sigma)?;
    let probabilities: Vec<Term> = (1..=pi).map(|i| probability(ns, i)).collect();
    let severities: Vec<Term> = (1..=sigma).map(|i| severity(ns, i)).collect();
    let p = |i: u32| probabilities[i as usize - 1].clone();

    let mut tbox = Vec::with_capacity((pi * pi) as usize + 1);
    for i in 1..=pi {
        for j in 1..=pi {
            let k = multiply_magnitudes(i, j, pi)?;
            tbox.push(Axiom::gci(
                ConceptExpr::and([
                    ConceptExpr::exists(ns.rm("hasProbability1"), ConceptExpr::Nominal(p(i))),
                    ConceptExpr::exists(ns.rm("hasProbability2"), ConceptExpr::Nominal(p(j))),
                ]),
                ConceptExpr::exists(ns.rm("hasProbability"), ConceptExpr::Nominal(p(k))),
            ));
        }
    }
    tbox.push(Axiom::transitive(&ns.rm("gt")));

    let gt = ns.rm_term("gt");
    let mut abox = Vec::new();
    abox.extend(probabilities.iter().map(|t| Assertion::concept(ns.rm_term("Probability"), t.clone())));
    abox.extend(severities.iter().map(|t| Assertion::concept(ns.rm_term("Severity"), t.clone())));
    for w in probabilities.windows(2).chain(severities.windows(2)) {
        abox.push(Assertion::role(gt.clone(), w[1].clone(), w[0].clone()));
    }

    let labels = if pi == 5 && sigma == 5 {
        let label = Term::iri_unchecked(&format!("{RDFS_NS}label"));
        probabilities
            .iter()
            .zip(PROBABILITY_LABELS)
            .map(|(t, l)| (t.clone(), label.clone(), Term::lang_literal(l, "en")))
            .collect()
    } else {
        Vec::new()
    };

    Ok(PsOntology { config: PsConfig { pi, sigma }, tbox, abox, probabilities, severities, labels })
}

impl PsOntology {
    pub fn into_ontology(self, ns: &Namespaces) -> Ontology {
        Ontology {
            axioms: self.tbox,
            abox_constants: self.abox,
            hierarchy: Vec::new(),
            vocabulary: Vocabulary::riskman(ns),
        }
    }
}
