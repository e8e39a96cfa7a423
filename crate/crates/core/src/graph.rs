//! Indexed in-memory ABox.
//!
//! Terms and names are interned to dense integer ids. Every assertion is
//! stored once in an append-only fact list; the indexes (by subject, by
//! concept, by role in both directions) are maintained on insert. The
//! append-only list doubles as the delta log for semi-naive saturation.

use std::collections::BTreeSet;
use std::hash::Hash;

use indexmap::IndexSet;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::term::{Assertion, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub(crate) u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConceptId(pub(crate) u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RoleId(pub(crate) u32);

impl NodeId {
    pub(crate) fn idx(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Fact {
    Concept(ConceptId, NodeId),
    Role(RoleId, NodeId, NodeId),
}

#[derive(Clone, Debug)]
struct Interner<T> {
    items: Vec<T>,
    ids: FxHashMap<T, u32>,
}

impl<T> Default for Interner<T> {
    fn default() -> Self {
        Interner { items: Vec::new(), ids: FxHashMap::default() }
    }
}

impl<T: Hash + Eq + Clone> Interner<T> {
    fn intern(&mut self, item: &T) -> u32 {
        if let Some(&id) = self.ids.get(item) {
            return id;
        }
        let id = u32::try_from(self.items.len()).expect("interner overflow");
        self.items.push(item.clone());
        self.ids.insert(item.clone(), id);
        id
    }

    fn get<Q>(&self, item: &Q) -> Option<u32>
    where
        T: std::borrow::Borrow<Q>,
        Q: Hash + Eq + ?Sized,
    {
        self.ids.get(item).copied()
    }

    fn resolve(&self, id: u32) -> &T {
        &self.items[id as usize]
    }

    fn len(&self) -> usize {
        self.items.len()
    }
}

#[derive(Clone, Debug, Default)]
struct RoleIndex {
    pairs: FxHashSet<(NodeId, NodeId)>,
    out: FxHashMap<NodeId, Vec<NodeId>>,
    inc: FxHashMap<NodeId, Vec<NodeId>>,
}

/// A set of concept and role assertions over individuals, plus the
/// literal-valued triples of the source document kept verbatim.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    nodes: Interner<Term>,
    concepts: Interner<String>,
    roles: Interner<String>,
    active: Vec<bool>,
    facts: Vec<Fact>,
    members: Vec<FxHashSet<NodeId>>,
    labels: Vec<Vec<ConceptId>>,
    edges: Vec<RoleIndex>,
    by_subject: Vec<Vec<u32>>,
    literal_triples: IndexSet<(Term, Term, Term)>,
}

const EMPTY: &[NodeId] = &[];

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_assertions<I: IntoIterator<Item = Assertion>>(assertions: I) -> Self {
        let mut g = Graph::new();
        for a in assertions {
            g.add_assertion(a);
        }
        g
    }

    /// Inserts an assertion; returns whether the graph grew.
    ///
    /// A role assertion whose object is a literal is stored as a literal
    /// triple instead. Assertions with literal subjects are ignored.
    pub fn add_assertion(&mut self, assertion: Assertion) -> bool {
        match assertion {
            Assertion::Concept { concept, subject } => {
                if !subject.is_individual() || !concept.is_iri() {
                    return false;
                }
                let c = self.intern_concept(concept.value());
                let n = self.intern_node(&subject);
                self.insert_fact(Fact::Concept(c, n))
            }
            Assertion::Role { role, subject, object } => {
                if !subject.is_individual() || !role.is_iri() {
                    return false;
                }
                if object.is_literal() {
                    return self.add_literal_triple(subject, role, object);
                }
                let r = self.intern_role(role.value());
                let s = self.intern_node(&subject);
                let o = self.intern_node(&object);
                self.insert_fact(Fact::Role(r, s, o))
            }
        }
    }

    pub fn add_literal_triple(&mut self, subject: Term, predicate: Term, object: Term) -> bool {
        self.literal_triples.insert((subject, predicate, object))
    }

    pub fn literal_triples(&self) -> impl Iterator<Item = &(Term, Term, Term)> {
        self.literal_triples.iter()
    }

    /// Number of distinct assertions (literal triples excluded).
    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn contains(&self, assertion: &Assertion) -> bool {
        match assertion {
            Assertion::Concept { concept, subject } => {
                match (self.concept_id(concept.value()), self.node_id(subject)) {
                    (Some(c), Some(n)) => self.has_label(n, c),
                    _ => false,
                }
            }
            Assertion::Role { role, subject, object } => {
                match (self.role_id(role.value()), self.node_id(subject), self.node_id(object)) {
                    (Some(r), Some(s), Some(o)) => self.has_edge(r, s, o),
                    _ => false,
                }
            }
        }
    }

    /// All assertions in insertion order.
    pub fn assertions(&self) -> impl Iterator<Item = Assertion> + '_ {
        self.facts.iter().map(|f| self.fact_to_assertion(*f))
    }

    /// All assertions as a sorted set, convenient for comparisons.
    pub fn assertion_set(&self) -> BTreeSet<Assertion> {
        self.assertions().collect()
    }

    /// Assertions whose subject is `node`.
    pub fn assertions_about(&self, node: &Term) -> Vec<Assertion> {
        match self.node_id(node) {
            Some(n) => self.by_subject[n.idx()]
                .iter()
                .map(|&i| self.fact_to_assertion(self.facts[i as usize]))
                .collect(),
            None => Vec::new(),
        }
    }

    /// `{b | role(node, b)}`; empty for unknown roles or nodes.
    pub fn successors(&self, role: &Term, node: &Term) -> BTreeSet<Term> {
        match (self.role_id(role.value()), self.node_id(node)) {
            (Some(r), Some(n)) => self.out(r, n).iter().map(|&b| self.term(b).clone()).collect(),
            _ => BTreeSet::new(),
        }
    }

    /// `{a | role(a, node)}`.
    pub fn predecessors(&self, role: &Term, node: &Term) -> BTreeSet<Term> {
        match (self.role_id(role.value()), self.node_id(node)) {
            (Some(r), Some(n)) => self.inc(r, n).iter().map(|&a| self.term(a).clone()).collect(),
            _ => BTreeSet::new(),
        }
    }

    /// Individuals of `concept`.
    pub fn instances(&self, concept: &Term) -> BTreeSet<Term> {
        match self.concept_id(concept.value()) {
            Some(c) => self.members(c).map(|n| self.term(n).clone()).collect(),
            None => BTreeSet::new(),
        }
    }

    /// Concept names labelling `node`.
    pub fn labels(&self, node: &Term) -> BTreeSet<Term> {
        match self.node_id(node) {
            Some(n) => self.labels[n.idx()]
                .iter()
                .map(|&c| Term::iri_unchecked(self.concept_name(c)))
                .collect(),
            None => BTreeSet::new(),
        }
    }

    /// All individuals occurring in some assertion.
    pub fn nodes(&self) -> BTreeSet<Term> {
        self.node_ids().map(|n| self.term(n).clone()).collect()
    }

    pub fn node_count(&self) -> usize {
        self.active.iter().filter(|a| **a).count()
    }

    /// Role names with at least one assertion.
    pub fn role_names(&self) -> BTreeSet<String> {
        (0..self.roles.len() as u32)
            .filter(|&r| !self.edges[r as usize].pairs.is_empty())
            .map(|r| self.roles.resolve(r).clone())
            .collect()
    }

    /// Concept names with at least one member.
    pub fn concept_names(&self) -> BTreeSet<String> {
        (0..self.concepts.len() as u32)
            .filter(|&c| !self.members[c as usize].is_empty())
            .map(|c| self.concepts.resolve(c).clone())
            .collect()
    }

    // ---- id-level access used by the reasoner and the shape evaluator ----

    pub(crate) fn intern_node(&mut self, term: &Term) -> NodeId {
        let id = NodeId(self.nodes.intern(term));
        if id.idx() == self.active.len() {
            self.active.push(false);
            self.labels.push(Vec::new());
            self.by_subject.push(Vec::new());
        }
        id
    }

    pub(crate) fn intern_concept(&mut self, iri: &str) -> ConceptId {
        let id = self.concepts.intern(&iri.to_string());
        if id as usize == self.members.len() {
            self.members.push(FxHashSet::default());
        }
        ConceptId(id)
    }

    pub(crate) fn intern_role(&mut self, iri: &str) -> RoleId {
        let id = self.roles.intern(&iri.to_string());
        if id as usize == self.edges.len() {
            self.edges.push(RoleIndex::default());
        }
        RoleId(id)
    }

    pub(crate) fn node_id(&self, term: &Term) -> Option<NodeId> {
        self.nodes.get(term).map(NodeId)
    }

    pub(crate) fn concept_id(&self, iri: &str) -> Option<ConceptId> {
        self.concepts.get(iri).map(ConceptId)
    }

    pub(crate) fn role_id(&self, iri: &str) -> Option<RoleId> {
        self.roles.get(iri).map(RoleId)
    }

    pub(crate) fn term(&self, n: NodeId) -> &Term {
        self.nodes.resolve(n.0)
    }

    pub(crate) fn concept_name(&self, c: ConceptId) -> &str {
        self.concepts.resolve(c.0)
    }

    pub(crate) fn role_name(&self, r: RoleId) -> &str {
        self.roles.resolve(r.0)
    }

    pub(crate) fn is_active(&self, n: NodeId) -> bool {
        self.active.get(n.idx()).copied().unwrap_or(false)
    }

    pub(crate) fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.active
            .iter()
            .enumerate()
            .filter(|(_, a)| **a)
            .map(|(i, _)| NodeId(i as u32))
    }

    pub(crate) fn has_label(&self, n: NodeId, c: ConceptId) -> bool {
        self.members.get(c.0 as usize).is_some_and(|m| m.contains(&n))
    }

    pub(crate) fn members(&self, c: ConceptId) -> impl Iterator<Item = NodeId> + '_ {
        self.members.get(c.0 as usize).into_iter().flat_map(|m| m.iter().copied())
    }

    pub(crate) fn member_count(&self, c: ConceptId) -> usize {
        self.members.get(c.0 as usize).map_or(0, |m| m.len())
    }

    pub(crate) fn has_edge(&self, r: RoleId, s: NodeId, o: NodeId) -> bool {
        self.edges.get(r.0 as usize).is_some_and(|e| e.pairs.contains(&(s, o)))
    }

    pub(crate) fn out(&self, r: RoleId, s: NodeId) -> &[NodeId] {
        self.edges
            .get(r.0 as usize)
            .and_then(|e| e.out.get(&s))
            .map_or(EMPTY, Vec::as_slice)
    }

    pub(crate) fn inc(&self, r: RoleId, o: NodeId) -> &[NodeId] {
        self.edges
            .get(r.0 as usize)
            .and_then(|e| e.inc.get(&o))
            .map_or(EMPTY, Vec::as_slice)
    }

    pub(crate) fn edge_pairs(&self, r: RoleId) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.edges.get(r.0 as usize).into_iter().flat_map(|e| e.pairs.iter().copied())
    }

    pub(crate) fn contains_fact(&self, f: Fact) -> bool {
        match f {
            Fact::Concept(c, n) => self.has_label(n, c),
            Fact::Role(r, s, o) => self.has_edge(r, s, o),
        }
    }

    /// Inserts an interned fact; ids must come from this graph.
    pub(crate) fn insert_fact(&mut self, f: Fact) -> bool {
        let idx = self.facts.len() as u32;
        match f {
            Fact::Concept(c, n) => {
                if !self.members[c.0 as usize].insert(n) {
                    return false;
                }
                self.labels[n.idx()].push(c);
                self.active[n.idx()] = true;
                self.by_subject[n.idx()].push(idx);
            }
            Fact::Role(r, s, o) => {
                let e = &mut self.edges[r.0 as usize];
                if !e.pairs.insert((s, o)) {
                    return false;
                }
                e.out.entry(s).or_default().push(o);
                e.inc.entry(o).or_default().push(s);
                self.active[s.idx()] = true;
                self.active[o.idx()] = true;
                self.by_subject[s.idx()].push(idx);
            }
        }
        self.facts.push(f);
        true
    }

    pub(crate) fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub(crate) fn fact_to_assertion(&self, f: Fact) -> Assertion {
        match f {
            Fact::Concept(c, n) => Assertion::Concept {
                concept: Term::iri_unchecked(self.concept_name(c)),
                subject: self.term(n).clone(),
            },
            Fact::Role(r, s, o) => Assertion::Role {
                role: Term::iri_unchecked(self.role_name(r)),
                subject: self.term(s).clone(),
                object: self.term(o).clone(),
            },
        }
    }
}
