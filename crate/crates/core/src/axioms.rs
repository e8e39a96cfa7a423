//! The restricted EL++ axiom language, the built-in RISKMAN TBox, derived
//! disjointness and the axiom DSL.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::dsl::{arity, read_all, DslContext, Sexp};
use crate::error::{DslError, HierarchyError, Unsupported};
use crate::term::{local_name, Assertion, Term};
use crate::vocab::{Namespaces, Vocabulary, CONCEPT_NAMES};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConceptExpr {
    Top,
    Bottom,
    Name(String),
    Nominal(Term),
    /// At least two conjuncts, none of them a conjunction.
    And(Vec<ConceptExpr>),
    Exists { role: String, filler: Box<ConceptExpr> },
}

impl ConceptExpr {
    pub fn name(iri: impl Into<String>) -> Self {
        ConceptExpr::Name(iri.into())
    }

    pub fn exists(role: impl Into<String>, filler: ConceptExpr) -> Self {
        ConceptExpr::Exists { role: role.into(), filler: Box::new(filler) }
    }

    /// `∃role.⊤`
    pub fn some(role: impl Into<String>) -> Self {
        Self::exists(role, ConceptExpr::Top)
    }

    /// Flattening conjunction; a single part is returned as is and no parts give ⊤.
    pub fn and(parts: impl IntoIterator<Item = ConceptExpr>) -> Self {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                ConceptExpr::And(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => ConceptExpr::Top,
            1 => flat.pop().unwrap(),
            _ => ConceptExpr::And(flat),
        }
    }

    pub fn conjuncts(&self) -> &[ConceptExpr] {
        match self {
            ConceptExpr::And(parts) => parts,
            other => std::slice::from_ref(other),
        }
    }

    fn collect_names(&self, concepts: &mut BTreeSet<String>, roles: &mut BTreeSet<String>) {
        match self {
            ConceptExpr::Name(n) => {
                concepts.insert(n.clone());
            }
            ConceptExpr::And(parts) => parts.iter().for_each(|p| p.collect_names(concepts, roles)),
            ConceptExpr::Exists { role, filler } => {
                roles.insert(role.clone());
                filler.collect_names(concepts, roles);
            }
            ConceptExpr::Top | ConceptExpr::Bottom | ConceptExpr::Nominal(_) => {}
        }
    }
}

impl fmt::Display for ConceptExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConceptExpr::Top => f.write_str("⊤"),
            ConceptExpr::Bottom => f.write_str("⊥"),
            ConceptExpr::Name(n) => f.write_str(local_name(n)),
            ConceptExpr::Nominal(t) => write!(f, "{{{}}}", t.local_name()),
            ConceptExpr::And(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ⊓ ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
            ConceptExpr::Exists { role, filler } => match **filler {
                ConceptExpr::Top => write!(f, "∃{}", local_name(role)),
                ConceptExpr::And(_) => write!(f, "∃{}.({filler})", local_name(role)),
                _ => write!(f, "∃{}.{filler}", local_name(role)),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Gci { lhs: ConceptExpr, rhs: ConceptExpr },
    /// `chain[0] ∘ … ∘ chain[n-1] ⊑ sup`
    RoleInclusion { chain: Vec<String>, sup: String },
    /// `ran(role) ⊑ concept`
    Range { role: String, concept: String },
    Transitive { role: String },
    /// An unordered pair, stored sorted.
    Disjoint { pair: (String, String) },
}

impl Axiom {
    pub fn gci(lhs: ConceptExpr, rhs: ConceptExpr) -> Self {
        Axiom::Gci { lhs, rhs }
    }

    pub fn subclass(sub: &str, sup: &str) -> Self {
        Axiom::gci(ConceptExpr::name(sub), ConceptExpr::name(sup))
    }

    /// `∃role.⊤ ⊑ concept`
    pub fn domain(role: &str, concept: &str) -> Self {
        Axiom::gci(ConceptExpr::some(role), ConceptExpr::name(concept))
    }

    pub fn range(role: &str, concept: &str) -> Self {
        Axiom::Range { role: role.to_string(), concept: concept.to_string() }
    }

    pub fn role_inclusion(chain: &[&str], sup: &str) -> Self {
        Axiom::RoleInclusion { chain: chain.iter().map(|r| r.to_string()).collect(), sup: sup.to_string() }
    }

    pub fn transitive(role: &str) -> Self {
        Axiom::Transitive { role: role.to_string() }
    }

    pub fn disjoint(a: &str, b: &str) -> Self {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Axiom::Disjoint { pair: (a.to_string(), b.to_string()) }
    }

    /// Concept and role names mentioned by the axiom.
    pub fn names(&self) -> (BTreeSet<String>, BTreeSet<String>) {
        let mut concepts = BTreeSet::new();
        let mut roles = BTreeSet::new();
        match self {
            Axiom::Gci { lhs, rhs } => {
                lhs.collect_names(&mut concepts, &mut roles);
                rhs.collect_names(&mut concepts, &mut roles);
            }
            Axiom::RoleInclusion { chain, sup } => {
                roles.extend(chain.iter().cloned());
                roles.insert(sup.clone());
            }
            Axiom::Range { role, concept } => {
                roles.insert(role.clone());
                concepts.insert(concept.clone());
            }
            Axiom::Transitive { role } => {
                roles.insert(role.clone());
            }
            Axiom::Disjoint { pair } => {
                concepts.insert(pair.0.clone());
                concepts.insert(pair.1.clone());
            }
        }
        (concepts, roles)
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::Gci { lhs, rhs } => write!(f, "{lhs} ⊑ {rhs}"),
            Axiom::RoleInclusion { chain, sup } => {
                let chain: Vec<&str> = chain.iter().map(|r| local_name(r)).collect();
                write!(f, "{} ⊑ {}", chain.join("∘"), local_name(sup))
            }
            Axiom::Range { role, concept } => write!(f, "ran({}) ⊑ {}", local_name(role), local_name(concept)),
            Axiom::Transitive { role } => write!(f, "transitive({})", local_name(role)),
            Axiom::Disjoint { pair } => write!(f, "{} ⊓ {} ⊑ ⊥", local_name(&pair.0), local_name(&pair.1)),
        }
    }
}

fn unsupported(reason: &str, fragment: impl fmt::Display) -> Unsupported {
    Unsupported { reason: reason.to_string(), fragment: fragment.to_string() }
}

/// Accepts exactly the fragment the reasoner implements: existentials on
/// the left with a ⊤, name or nominal filler; on the right a name, ⊥, or
/// an existential with a nominal filler (no fresh individuals needed).
pub fn check_fragment(axiom: &Axiom) -> Result<(), Unsupported> {
    match axiom {
        Axiom::Gci { lhs, rhs } => {
            if *lhs == ConceptExpr::Top {
                return Err(unsupported("⊤ on the left-hand side", axiom));
            }
            for c in lhs.conjuncts() {
                match c {
                    ConceptExpr::Top | ConceptExpr::Name(_) => {}
                    ConceptExpr::Bottom => return Err(unsupported("⊥ on the left-hand side", c)),
                    ConceptExpr::Nominal(_) => return Err(unsupported("nominal outside an existential", c)),
                    ConceptExpr::Exists { filler, .. } => match **filler {
                        ConceptExpr::Top | ConceptExpr::Name(_) | ConceptExpr::Nominal(_) => {}
                        _ => return Err(unsupported("existential filler must be ⊤, a name or a nominal", c)),
                    },
                    ConceptExpr::And(_) => unreachable!("conjunctions are flattened"),
                }
            }
            match rhs {
                ConceptExpr::Name(_) | ConceptExpr::Bottom => Ok(()),
                ConceptExpr::Exists { filler, .. } if matches!(**filler, ConceptExpr::Nominal(_)) => Ok(()),
                ConceptExpr::Exists { .. } => {
                    Err(unsupported("right-hand existential needs a nominal filler (would create individuals)", rhs))
                }
                _ => Err(unsupported("right-hand side must be a name, ⊥ or ∃R.{a}", rhs)),
            }
        }
        Axiom::RoleInclusion { chain, .. } if chain.is_empty() => Err(unsupported("empty role chain", axiom)),
        Axiom::Disjoint { pair } if pair.0 == pair.1 => Err(unsupported("concept disjoint with itself", axiom)),
        _ => Ok(()),
    }
}

/// A TBox, constant assertions that come with it, the declared subclass
/// pairs and the vocabulary.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ontology {
    pub axioms: Vec<Axiom>,
    pub abox_constants: Vec<Assertion>,
    /// Declared `(sub, super)` pairs.
    pub hierarchy: Vec<(String, String)>,
    pub vocabulary: Vocabulary,
}

impl Ontology {
    /// Adds an axiom after checking it and declaring its names.
    pub fn add_axiom(&mut self, axiom: Axiom) -> Result<(), DslError> {
        check_fragment(&axiom)?;
        let (concepts, roles) = axiom.names();
        for c in &concepts {
            if !self.vocabulary.declare_concept(c) {
                return Err(DslError::SortClash(c.clone()));
            }
        }
        for r in &roles {
            if !self.vocabulary.declare_role(r) {
                return Err(DslError::SortClash(r.clone()));
            }
        }
        if !self.axioms.contains(&axiom) {
            self.axioms.push(axiom);
        }
        Ok(())
    }

    /// Merges `other` into `self`; hierarchies and constants are unioned.
    pub fn merge(&mut self, other: Ontology) -> Result<(), DslError> {
        for c in &other.vocabulary.concept_names {
            if !self.vocabulary.declare_concept(c) {
                return Err(DslError::SortClash(c.clone()));
            }
        }
        for r in &other.vocabulary.role_names {
            if !self.vocabulary.declare_role(r) {
                return Err(DslError::SortClash(r.clone()));
            }
        }
        for a in other.axioms {
            self.add_axiom(a)?;
        }
        for a in other.abox_constants {
            if !self.abox_constants.contains(&a) {
                self.abox_constants.push(a);
            }
        }
        for h in other.hierarchy {
            if !self.hierarchy.contains(&h) {
                self.hierarchy.push(h);
            }
        }
        Ok(())
    }

    pub fn disjoint_pairs(&self) -> Vec<(String, String)> {
        self.axioms
            .iter()
            .filter_map(|a| match a {
                Axiom::Disjoint { pair } => Some(pair.clone()),
                _ => None,
            })
            .collect()
    }
}

/// Schema edges as (role, domain, range); `gt` is untyped.
pub const SCHEMA_EDGES: [(&str, &str, &str); 27] = [
    ("hasParentHazard", "Hazard", "Hazard"),
    ("isPartOfDeviceComponent", "DeviceComponent", "DeviceComponent"),
    ("hasHazard", "DomainSpecificHazard", "Hazard"),
    ("hasDeviceFunction", "DomainSpecificHazard", "DeviceFunction"),
    ("hasDeviceProblem", "DomainSpecificHazard", "DeviceProblem"),
    ("hasDeviceComponent", "DomainSpecificHazard", "DeviceComponent"),
    ("hasDomainSpecificHazard", "AnalyzedRisk", "DomainSpecificHazard"),
    ("causesHarm", "DomainSpecificHazard", "Harm"),
    ("hasHarm", "Risk", "Harm"),
    ("hasAnalyzedRisk", "ControlledRisk", "AnalyzedRisk"),
    ("hasPrecedingEvent", "Event", "Event"),
    ("hasParentSituation", "HazardousSituation", "HazardousSituation"),
    ("hasEvent", "HazardousSituation", "Event"),
    ("hasProbability", "RiskLevel", "Probability"),
    ("hasProbability1", "RiskLevel", "Probability"),
    ("hasProbability2", "RiskLevel", "Probability"),
    ("hasSeverity", "RiskLevel", "Severity"),
    ("hasDeviceContext", "AnalyzedRisk", "DeviceContext"),
    ("hasHazardousSituation", "AnalyzedRisk", "HazardousSituation"),
    ("hasPatientProblem", "AnalyzedRisk", "PatientProblem"),
    ("hasInitialRiskLevel", "AnalyzedRisk", "RiskLevel"),
    ("hasRiskLevel", "Risk", "RiskLevel"),
    ("hasResidualRiskLevel", "ControlledRisk", "RiskLevel"),
    ("hasSubSDA", "SafeDesignArgument", "SafeDesignArgument"),
    ("isMitigatedBy", "ControlledRisk", "SafeDesignArgument"),
    ("hasImplementationManifest", "SafeDesignArgument", "ImplementationManifest"),
    ("hasSafetyAssurance", "AssuranceSDA", "SafetyAssurance"),
];

/// Subclass edges as (sub, super).
pub const SUBCLASS_EDGES: [(&str, &str); 9] = [
    ("AnalyzedRisk", "Risk"),
    ("ControlledRisk", "Risk"),
    ("SDAI", "SafeDesignArgument"),
    ("RiskSDA", "SafeDesignArgument"),
    ("RiskSDAI", "RiskSDA"),
    ("RiskSDAI", "SDAI"),
    ("AssuranceSDA", "SafeDesignArgument"),
    ("AssuranceSDAI", "AssuranceSDA"),
    ("AssuranceSDAI", "SDAI"),
];

pub const TRANSITIVE_ROLES: [&str; 4] =
    ["hasParentHazard", "hasParentSituation", "isPartOfDeviceComponent", "hasPrecedingEvent"];

/// The RISKMAN concept and role inclusions, the transitivity declarations and the
/// schema (subclass, domain, range and derived disjointness).
pub fn builtin_riskman_ontology(ns: &Namespaces) -> Ontology {
    let rm = |s: &str| ns.rm(s);
    let name = |s: &str| ConceptExpr::name(rm(s));
    let some = |s: &str| ConceptExpr::some(rm(s));
    let gci = |lhs: Vec<ConceptExpr>, rhs: &str| Axiom::gci(ConceptExpr::and(lhs), name(rhs));

    let mut axioms = vec![
        gci(
            vec![
                some("hasDeviceContext"),
                some("hasDomainSpecificHazard"),
                some("hasHarm"),
                some("hasHazardousSituation"),
                some("hasInitialRiskLevel"),
            ],
            "AnalyzedRisk",
        ),
        gci(vec![name("SafeDesignArgument"), some("hasSafetyAssurance")], "AssuranceSDA"),
        gci(vec![name("SDAI"), name("AssuranceSDA")], "AssuranceSDAI"),
        gci(vec![some("hasAnalyzedRisk"), some("hasResidualRiskLevel"), some("isMitigatedBy")], "ControlledRisk"),
        gci(vec![some("hasDeviceComponent"), some("hasDeviceFunction"), some("hasHazard")], "DomainSpecificHazard"),
        gci(vec![some("hasEvent")], "HazardousSituation"),
        gci(vec![some("hasHarm"), some("hasRiskLevel")], "Risk"),
        gci(vec![some("hasProbability"), some("hasSeverity")], "RiskLevel"),
        gci(vec![name("RiskSDA")], "SafeDesignArgument"),
        gci(vec![name("RiskSDA"), name("SDAI")], "RiskSDAI"),
        gci(vec![name("SafeDesignArgument"), some("hasImplementationManifest")], "SDAI"),
        Axiom::role_inclusion(&[&rm("hasAnalyzedRisk"), &rm("hasHarm")], &rm("hasHarm")),
        Axiom::role_inclusion(&[&rm("hasInitialRiskLevel")], &rm("hasRiskLevel")),
        Axiom::role_inclusion(&[&rm("hasResidualRiskLevel")], &rm("hasRiskLevel")),
    ];
    axioms.extend(TRANSITIVE_ROLES.iter().map(|r| Axiom::transitive(&rm(r))));
    for (sub, sup) in SUBCLASS_EDGES {
        let ax = Axiom::subclass(&rm(sub), &rm(sup));
        if !axioms.contains(&ax) {
            axioms.push(ax);
        }
    }
    for (role, dom, ran) in SCHEMA_EDGES {
        axioms.push(Axiom::domain(&rm(role), &rm(dom)));
        axioms.push(Axiom::range(&rm(role), &rm(ran)));
    }

    let hierarchy: Vec<(String, String)> = SUBCLASS_EDGES.iter().map(|(a, b)| (rm(a), rm(b))).collect();
    let concepts: BTreeSet<String> = CONCEPT_NAMES.iter().map(|c| rm(c)).collect();
    let disjoint = derive_disjointness(&hierarchy, &concepts).expect("built-in hierarchy is acyclic");
    axioms.extend(disjoint.iter().map(|(a, b)| Axiom::disjoint(a, b)));

    Ontology { axioms, abox_constants: Vec::new(), hierarchy, vocabulary: Vocabulary::riskman(ns) }
}

/// Ancestors-or-self of every concept under the declared hierarchy.
fn ancestor_sets(
    hierarchy: &[(String, String)],
    concepts: &BTreeSet<String>,
) -> Result<BTreeMap<String, BTreeSet<String>>, HierarchyError> {
    let mut parents: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (sub, sup) in hierarchy {
        parents.entry(sub).or_default().push(sup);
    }
    // iterative DFS with colouring to report cycles
    let mut done: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    let all: BTreeSet<&str> =
        concepts.iter().map(String::as_str).chain(hierarchy.iter().flat_map(|(a, b)| [a.as_str(), b.as_str()])).collect();
    for &start in &all {
        let mut on_path: Vec<&str> = Vec::new();
        visit(start, &parents, &mut done, &mut on_path)?;
    }
    Ok(done)
}

fn visit<'a>(
    c: &'a str,
    parents: &BTreeMap<&'a str, Vec<&'a str>>,
    done: &mut BTreeMap<String, BTreeSet<String>>,
    on_path: &mut Vec<&'a str>,
) -> Result<(), HierarchyError> {
    if done.contains_key(c) {
        return Ok(());
    }
    if on_path.contains(&c) {
        return Err(HierarchyError::Cyclic(c.to_string()));
    }
    on_path.push(c);
    let mut anc = BTreeSet::from([c.to_string()]);
    for &p in parents.get(c).map(Vec::as_slice).unwrap_or(&[]) {
        visit(p, parents, done, on_path)?;
        anc.extend(done[p].iter().cloned());
    }
    on_path.pop();
    done.insert(c.to_string(), anc);
    Ok(())
}

/// Unordered pairs `{A, B}` of `concepts` (stored sorted) that are
/// incomparable under the reflexive-transitive hierarchy and have no common
/// declared descendant.
pub fn derive_disjointness(
    hierarchy: &[(String, String)],
    concepts: &BTreeSet<String>,
) -> Result<BTreeSet<(String, String)>, HierarchyError> {
    let anc = ancestor_sets(hierarchy, concepts)?;
    let names: Vec<&String> = concepts.iter().collect();
    let mut out = BTreeSet::new();
    for (i, a) in names.iter().enumerate() {
        for b in &names[i + 1..] {
            if anc[*a].contains(*b) || anc[*b].contains(*a) {
                continue;
            }
            let shared = names.iter().any(|c| anc[*c].contains(*a) && anc[*c].contains(*b));
            if !shared {
                out.insert(((*a).clone(), (*b).clone()));
            }
        }
    }
    Ok(out)
}

fn parse_concept(ctx: &DslContext, s: &Sexp) -> Result<ConceptExpr, DslError> {
    match s.atom() {
        Some("top") => return Ok(ConceptExpr::Top),
        Some("bottom") => return Ok(ConceptExpr::Bottom),
        Some(a) => return Err(s.err(format!("expected a concept, found `{a}`"))),
        None => {}
    }
    let (head, args) = s.form().ok_or_else(|| s.err("expected a concept form"))?;
    match head {
        "class" => Ok(ConceptExpr::name(ctx.name(&arity(s, args, 1)?[0])?)),
        "ind" => Ok(ConceptExpr::Nominal(ctx.individual(&arity(s, args, 1)?[0])?)),
        "and" => {
            if args.is_empty() {
                return Err(s.err("`and` needs at least one concept"));
            }
            let parts = args.iter().map(|a| parse_concept(ctx, a)).collect::<Result<Vec<_>, _>>()?;
            Ok(ConceptExpr::and(parts))
        }
        "some" => {
            let args = arity(s, args, 2)?;
            Ok(ConceptExpr::exists(ctx.name(&args[0])?, parse_concept(ctx, &args[1])?))
        }
        other => Err(s.err(format!("unknown concept form `{other}`"))),
    }
}

fn parse_axiom(ctx: &DslContext, s: &Sexp) -> Result<Axiom, DslError> {
    let (head, args) = s.form().ok_or_else(|| s.err("expected an axiom form"))?;
    let axiom = match head {
        "gci" => {
            let args = arity(s, args, 2)?;
            Axiom::gci(parse_concept(ctx, &args[0])?, parse_concept(ctx, &args[1])?)
        }
        "role-incl" => {
            let args = arity(s, args, 2)?;
            let chain = match args[0].form() {
                Some(("chain", roles)) if !roles.is_empty() => {
                    roles.iter().map(|r| ctx.name(r)).collect::<Result<Vec<_>, _>>()?
                }
                _ => return Err(args[0].err("expected (chain ROLE+)")),
            };
            Axiom::RoleInclusion { chain, sup: ctx.name(&args[1])? }
        }
        "range" => {
            let args = arity(s, args, 2)?;
            Axiom::range(&ctx.name(&args[0])?, &ctx.name(&args[1])?)
        }
        "transitive" => Axiom::transitive(&ctx.name(&arity(s, args, 1)?[0])?),
        "disjoint" => {
            let args = arity(s, args, 2)?;
            Axiom::disjoint(&ctx.name(&args[0])?, &ctx.name(&args[1])?)
        }
        other => return Err(s.err(format!("unknown axiom form `{other}`"))),
    };
    check_fragment(&axiom)?;
    Ok(axiom)
}

/// Parses axiom DSL text. Every returned axiom is inside the fragment.
pub fn parse_axiom_dsl(text: &str, ctx: &DslContext) -> Result<Vec<Axiom>, DslError> {
    let mut ctx = ctx.clone();
    let mut out = Vec::new();
    for s in read_all(text)? {
        if !ctx.directive(&s)? {
            out.push(parse_axiom(&ctx, &s)?);
        }
    }
    Ok(out)
}

fn render_concept(ctx: &DslContext, c: &ConceptExpr, out: &mut String) {
    match c {
        ConceptExpr::Top => out.push_str("top"),
        ConceptExpr::Bottom => out.push_str("bottom"),
        ConceptExpr::Name(n) => {
            out.push_str("(class ");
            out.push_str(&ctx.render_iri(n));
            out.push(')');
        }
        ConceptExpr::Nominal(t) => {
            out.push_str("(ind ");
            out.push_str(&ctx.render_individual(t));
            out.push(')');
        }
        ConceptExpr::And(parts) => {
            out.push_str("(and");
            for p in parts {
                out.push(' ');
                render_concept(ctx, p, out);
            }
            out.push(')');
        }
        ConceptExpr::Exists { role, filler } => {
            out.push_str("(some ");
            out.push_str(&ctx.render_iri(role));
            out.push(' ');
            render_concept(ctx, filler, out);
            out.push(')');
        }
    }
}

/// Renders axioms in the DSL, one per line, using the prefixes of `ctx`.
pub fn render_axiom_dsl(axioms: &[Axiom], ctx: &DslContext) -> String {
    let mut out = String::new();
    for a in axioms {
        match a {
            Axiom::Gci { lhs, rhs } => {
                out.push_str("(gci ");
                render_concept(ctx, lhs, &mut out);
                out.push(' ');
                render_concept(ctx, rhs, &mut out);
                out.push(')');
            }
            Axiom::RoleInclusion { chain, sup } => {
                let chain: Vec<String> = chain.iter().map(|r| ctx.render_iri(r)).collect();
                out.push_str(&format!("(role-incl (chain {}) {})", chain.join(" "), ctx.render_iri(sup)));
            }
            Axiom::Range { role, concept } => {
                out.push_str(&format!("(range {} {})", ctx.render_iri(role), ctx.render_iri(concept)));
            }
            Axiom::Transitive { role } => out.push_str(&format!("(transitive {})", ctx.render_iri(role))),
            Axiom::Disjoint { pair } => {
                out.push_str(&format!("(disjoint {} {})", ctx.render_iri(&pair.0), ctx.render_iri(&pair.1)));
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ns() -> Namespaces {
        Namespaces::default()
    }

    fn rm(s: &str) -> String {
        ns().rm(s)
    }

    #[test]
    fn builtin_contains_core_axioms() {
        let o = builtin_riskman_ontology(&ns());
        let gci10 = Axiom::gci(
            ConceptExpr::and([ConceptExpr::name(rm("SafeDesignArgument")), ConceptExpr::some(rm("hasImplementationManifest"))]),
            ConceptExpr::name(rm("SDAI")),
        );
        assert!(o.axioms.contains(&gci10));
        assert_eq!(gci10.to_string(), "SafeDesignArgument ⊓ ∃hasImplementationManifest ⊑ SDAI");
        assert!(o.axioms.contains(&Axiom::range(&rm("hasSubSDA"), &rm("SafeDesignArgument"))));
        assert!(o.axioms.contains(&Axiom::domain(&rm("hasSubSDA"), &rm("SafeDesignArgument"))));
        assert!(o.axioms.contains(&Axiom::role_inclusion(&[&rm("hasAnalyzedRisk"), &rm("hasHarm")], &rm("hasHarm"))));
        assert!(!o.axioms.iter().any(|a| a.names().1.contains(&rm("gt"))));
        for a in &o.axioms {
            check_fragment(a).unwrap();
            let (c, r) = a.names();
            assert!(c.iter().all(|c| o.vocabulary.is_concept(c)), "{a}");
            assert!(r.iter().all(|r| o.vocabulary.is_role(r)), "{a}");
        }
    }

    #[test]
    fn builtin_axiom_counts() {
        let o = builtin_riskman_ontology(&ns());
        let count = |f: fn(&Axiom) -> bool| o.axioms.iter().filter(|a| f(a)).count();
        assert_eq!(count(|a| matches!(a, Axiom::Range { .. })), 27);
        assert_eq!(count(|a| matches!(a, Axiom::Transitive { .. })), 4);
        assert_eq!(count(|a| matches!(a, Axiom::RoleInclusion { .. })), 3);
        // 11 concept inclusions, 8 further subclass axioms, 27 domains
        assert_eq!(count(|a| matches!(a, Axiom::Gci { .. })), 46);
        assert_eq!(o.disjoint_pairs().len(), 263);
    }

    #[test]
    fn disjointness_examples() {
        let o = builtin_riskman_ontology(&ns());
        let d: BTreeSet<_> = o.disjoint_pairs().into_iter().collect();
        let has = |a: &str, b: &str| {
            let (a, b) = (rm(a), rm(b));
            d.contains(&(a.clone().min(b.clone()), a.max(b)))
        };
        assert!(has("Risk", "SafeDesignArgument"));
        assert!(!has("RiskSDA", "SafeDesignArgument"));
        assert!(!has("SDAI", "RiskSDA"));
        assert!(!has("SDAI", "AssuranceSDA"));
        assert!(has("RiskSDA", "AssuranceSDA"));
        assert!(has("Probability", "Severity"));
    }

    #[test]
    fn cyclic_hierarchy_is_rejected() {
        let h = vec![("A".to_string(), "B".to_string()), ("B".to_string(), "A".to_string())];
        let names = BTreeSet::from(["A".to_string(), "B".to_string()]);
        assert!(matches!(derive_disjointness(&h, &names), Err(HierarchyError::Cyclic(_))));
    }

    #[test]
    fn fragment_boundary() {
        let crit = Axiom::gci(
            ConceptExpr::and([
                ConceptExpr::exists(rm("hasProbability"), ConceptExpr::Nominal(Term::iri("http://x/p5").unwrap())),
                ConceptExpr::exists(rm("hasSeverity"), ConceptExpr::Nominal(Term::iri("http://x/s3").unwrap())),
            ]),
            ConceptExpr::name(rm("CriticalRiskLevel")),
        );
        assert!(check_fragment(&crit).is_ok());
        let bad = Axiom::gci(ConceptExpr::name("urn:A"), ConceptExpr::exists("urn:R", ConceptExpr::name("urn:B")));
        assert!(check_fragment(&bad).is_err());
        let nested = Axiom::gci(
            ConceptExpr::exists("urn:R", ConceptExpr::some("urn:S")),
            ConceptExpr::name("urn:B"),
        );
        assert!(check_fragment(&nested).is_err());
        assert!(check_fragment(&Axiom::range(&rm("gt"), &rm("Probability"))).is_ok());
        assert!(check_fragment(&Axiom::gci(ConceptExpr::Top, ConceptExpr::name("urn:A"))).is_err());
    }

    #[test]
    fn dsl_examples() {
        let ns = ns();
        let ctx = DslContext::new(&ns);
        let v = parse_axiom_dsl(
            "(gci (and (some hasProbability (ind p5)) (some hasSeverity (ind s3))) (class CriticalRiskLevel))",
            &ctx,
        )
        .unwrap();
        assert_eq!(
            v[0].to_string(),
            "∃hasProbability.{p5} ⊓ ∃hasSeverity.{s3} ⊑ CriticalRiskLevel"
        );
        let v = parse_axiom_dsl("(transitive hasPrecedingEvent)", &ctx).unwrap();
        assert_eq!(v, vec![Axiom::transitive(&rm("hasPrecedingEvent"))]);
        assert!(matches!(
            parse_axiom_dsl("(gci (class A) (some R (class B)))", &ctx),
            Err(DslError::Unsupported(_))
        ));
        assert!(matches!(parse_axiom_dsl("(gci (class A)", &ctx), Err(DslError::Syntax { .. })));
        assert!(matches!(parse_axiom_dsl("(frobnicate A)", &ctx), Err(DslError::Syntax { .. })));
    }

    #[test]
    fn builtin_renders_and_reparses() {
        let ns = ns();
        let ctx = DslContext::new(&ns);
        let o = builtin_riskman_ontology(&ns);
        let text = render_axiom_dsl(&o.axioms, &ctx);
        assert_eq!(parse_axiom_dsl(&text, &ctx).unwrap(), o.axioms);
    }

    #[test]
    fn sort_clash_on_merge() {
        let ns = ns();
        let mut o = builtin_riskman_ontology(&ns);
        let err = o.add_axiom(Axiom::subclass(&rm("gt"), &rm("Risk")));
        assert!(matches!(err, Err(DslError::SortClash(_))));
        o.add_axiom(Axiom::subclass(&rm("CriticalRiskLevel"), &rm("RiskLevel"))).unwrap();
        assert!(o.vocabulary.is_concept(&rm("CriticalRiskLevel")));
    }

    fn arb_name() -> impl Strategy<Value = String> {
        prop_oneof![Just("Risk"), Just("SDAI"), Just("A"), Just("B-2")].prop_map(rm)
    }

    fn arb_role() -> impl Strategy<Value = String> {
        prop_oneof![Just("hasHarm"), Just("gt"), Just("R")].prop_map(rm)
    }

    fn arb_filler() -> impl Strategy<Value = ConceptExpr> {
        prop_oneof![
            Just(ConceptExpr::Top),
            arb_name().prop_map(ConceptExpr::Name),
            (1..4u8).prop_map(|i| ConceptExpr::Nominal(Term::iri(format!("{}p{i}", crate::vocab::DEFAULT_PS_NS)).unwrap())),
            Just(ConceptExpr::Nominal(Term::iri("urn:odd:x(1)").unwrap())),
        ]
    }

    fn arb_conjunct() -> impl Strategy<Value = ConceptExpr> {
        prop_oneof![
            arb_name().prop_map(ConceptExpr::Name),
            (arb_role(), arb_filler()).prop_map(|(r, f)| ConceptExpr::exists(r, f)),
        ]
    }

    fn arb_axiom() -> impl Strategy<Value = Axiom> {
        prop_oneof![
            (prop::collection::vec(arb_conjunct(), 1..4), arb_name())
                .prop_map(|(l, r)| Axiom::gci(ConceptExpr::and(l), ConceptExpr::Name(r))),
            (prop::collection::vec(arb_conjunct(), 1..3), arb_role(), 1..4u8).prop_map(|(l, r, i)| Axiom::gci(
                ConceptExpr::and(l),
                ConceptExpr::exists(r, ConceptExpr::Nominal(Term::iri(format!("urn:i{i}")).unwrap()))
            )),
            prop::collection::vec(arb_conjunct(), 1..3).prop_map(|l| Axiom::gci(ConceptExpr::and(l), ConceptExpr::Bottom)),
            (prop::collection::vec(arb_role(), 1..4), arb_role()).prop_map(|(c, s)| Axiom::RoleInclusion { chain: c, sup: s }),
            (arb_role(), arb_name()).prop_map(|(r, c)| Axiom::range(&r, &c)),
            arb_role().prop_map(|r| Axiom::transitive(&r)),
        ]
    }

    proptest! {
        #[test]
        fn dsl_round_trip(axioms in prop::collection::vec(arb_axiom(), 0..8)) {
            let ctx = DslContext::new(&ns());
            let text = render_axiom_dsl(&axioms, &ctx);
            let parsed = parse_axiom_dsl(&text, &ctx).unwrap();
            prop_assert_eq!(&parsed, &axioms);
            prop_assert_eq!(parse_axiom_dsl(&render_axiom_dsl(&parsed, &ctx), &ctx).unwrap(), parsed);
        }
    }
}
