//! Independent reference implementations used only by the integration
//! tests. Everything here works on plain `Term` sets and shares no code
//! with the evaluator or the reasoner.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use proptest::prelude::*;
use riskman::axioms::{Axiom, ConceptExpr};
use riskman::shapes::{PathExpr, ShapeExpr};
use riskman::{Assertion, Graph, Namespaces, Term};

pub type Rel = BTreeSet<(Term, Term)>;

fn role_pairs(g: &Graph, role: &str) -> Rel {
    g.assertions()
        .filter_map(|a| match a {
            Assertion::Role { role: r, subject, object } if r.value() == role => Some((subject, object)),
            _ => None,
        })
        .collect()
}

/// `⟦E⟧` computed as a relation, with star as an iterated fixpoint seeded
/// by the identity on all nodes.
pub fn path_relation(g: &Graph, e: &PathExpr) -> Rel {
    match e {
        PathExpr::Role(r) => role_pairs(g, r),
        PathExpr::Inverse(inner) => path_relation(g, inner).into_iter().map(|(a, b)| (b, a)).collect(),
        PathExpr::Union(parts) => parts.iter().flat_map(|p| path_relation(g, p)).collect(),
        PathExpr::Seq(parts) => {
            let mut rels = parts.iter().map(|p| path_relation(g, p));
            let first = rels.next().unwrap_or_default();
            rels.fold(first, |acc, r| compose_naive(&acc, &r))
        }
        PathExpr::Star(inner) => {
            let base = path_relation(g, inner);
            let mut closure: Rel = g.nodes().into_iter().map(|n| (n.clone(), n)).collect();
            loop {
                let step = compose_naive(&closure, &base);
                let before = closure.len();
                closure.extend(step);
                if closure.len() == before {
                    return closure;
                }
            }
        }
    }
}

fn compose_naive(a: &Rel, b: &Rel) -> Rel {
    let mut out = Rel::new();
    for (x, y) in a {
        for (y2, z) in b {
            if y == y2 {
                out.insert((x.clone(), z.clone()));
            }
        }
    }
    out
}

fn image(rel: &Rel, a: &Term) -> BTreeSet<Term> {
    rel.iter().filter(|(x, _)| x == a).map(|(_, y)| y.clone()).collect()
}

/// `⟦φ⟧` by the set equations, bottom-up over whole node sets.
pub fn shape_set(g: &Graph, s: &ShapeExpr) -> BTreeSet<Term> {
    let nodes = g.nodes();
    match s {
        ShapeExpr::Top => nodes,
        ShapeExpr::Concept(c) => g
            .assertions()
            .filter_map(|a| match a {
                Assertion::Concept { concept, subject } if concept.value() == c => Some(subject),
                _ => None,
            })
            .collect(),
        ShapeExpr::Individual(t) => nodes.into_iter().filter(|n| n == t).collect(),
        ShapeExpr::And(parts) => {
            let mut acc = nodes;
            for p in parts {
                let s = shape_set(g, p);
                acc.retain(|n| s.contains(n));
            }
            acc
        }
        ShapeExpr::Not(inner) => {
            let s = shape_set(g, inner);
            nodes.into_iter().filter(|n| !s.contains(n)).collect()
        }
        ShapeExpr::Geq { n, path, filler } => {
            let rel = path_relation(g, path);
            let fill = shape_set(g, filler);
            nodes.into_iter().filter(|a| image(&rel, a).iter().filter(|b| fill.contains(*b)).count() >= *n as usize).collect()
        }
        ShapeExpr::Forall { path, filler } => {
            let rel = path_relation(g, path);
            let fill = shape_set(g, filler);
            nodes.into_iter().filter(|a| image(&rel, a).iter().all(|b| fill.contains(b))).collect()
        }
        ShapeExpr::PathEq(l, r) => {
            let (l, r) = (path_relation(g, l), path_relation(g, r));
            nodes.into_iter().filter(|a| image(&l, a) == image(&r, a)).collect()
        }
    }
}

/// Breadth-first reachability over one role, start included.
pub fn bfs_reach(g: &Graph, role: &str, start: &Term) -> BTreeSet<Term> {
    let edges = role_pairs(g, role);
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(x) = queue.pop_front() {
        for y in image(&edges, &x) {
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Disjoint pairs by enumeration: for every pair of names, compare their
/// ancestor sets (by repeated edge expansion) and look for a shared
/// descendant among all names.
pub fn disjoint_pairs(edges: &[(&str, &str)], names: &[&str]) -> BTreeSet<(String, String)> {
    let ancestors = |c: &str| {
        let mut set = BTreeSet::from([c.to_string()]);
        loop {
            let more: Vec<String> = edges
                .iter()
                .filter(|(sub, _)| set.contains(*sub))
                .map(|(_, sup)| sup.to_string())
                .filter(|s| !set.contains(s))
                .collect();
            if more.is_empty() {
                return set;
            }
            set.extend(more);
        }
    };
    let anc: BTreeMap<&str, BTreeSet<String>> = names.iter().map(|n| (*n, ancestors(n))).collect();
    let mut out = BTreeSet::new();
    for a in names {
        for b in names {
            if a >= b {
                continue;
            }
            let comparable = anc[a].contains(*b) || anc[b].contains(*a);
            let shared = names.iter().any(|c| anc[c].contains(*a) && anc[c].contains(*b));
            if !comparable && !shared {
                out.insert((a.to_string(), b.to_string()));
            }
        }
    }
    out
}

fn satisfies(g: &Graph, c: &ConceptExpr, x: &Term) -> bool {
    match c {
        ConceptExpr::Top => true,
        ConceptExpr::Bottom => false,
        ConceptExpr::Name(n) => g.contains(&Assertion::concept(Term::iri(n.clone()).unwrap(), x.clone())),
        ConceptExpr::Nominal(t) => t == x,
        ConceptExpr::And(parts) => parts.iter().all(|p| satisfies(g, p, x)),
        ConceptExpr::Exists { role, filler } => {
            g.successors(&Term::iri(role.clone()).unwrap(), x).iter().any(|y| satisfies(g, filler, y))
        }
    }
}

/// Axioms the closure does not satisfy, checked directly on the
/// assertions. Disjointness and ⊥ axioms are skipped: they are clashes,
/// not closure conditions.
pub fn unsatisfied_axioms(g: &Graph, axioms: &[Axiom]) -> Vec<String> {
    let nodes = g.nodes();
    let mut out = Vec::new();
    for ax in axioms {
        let ok = match ax {
            Axiom::Gci { rhs: ConceptExpr::Bottom, .. } | Axiom::Disjoint { .. } => true,
            Axiom::Gci { lhs, rhs } => nodes.iter().all(|x| !satisfies(g, lhs, x) || satisfies(g, rhs, x)),
            Axiom::Range { role, concept } => role_pairs(g, role)
                .iter()
                .all(|(_, y)| g.contains(&Assertion::concept(Term::iri(concept.clone()).unwrap(), y.clone()))),
            Axiom::Transitive { role } => {
                let r = role_pairs(g, role);
                compose_naive(&r, &r).is_subset(&r)
            }
            Axiom::RoleInclusion { chain, sup } => {
                let mut rel = role_pairs(g, &chain[0]);
                for r in &chain[1..] {
                    rel = compose_naive(&rel, &role_pairs(g, r));
                }
                rel.is_subset(&role_pairs(g, sup))
            }
        };
        if !ok {
            out.push(ax.to_string());
        }
    }
    out
}

/// Random role/concept assertions over the RISKMAN vocabulary and the
/// magnitude individuals, bounded by `max_nodes` and `max_assertions`.
pub fn arb_abox(max_nodes: u8, max_assertions: usize) -> impl Strategy<Value = Graph> {
    let ns = Namespaces::default();
    let roles: Vec<&str> = vec![
        "hasSubSDA", "hasPrecedingEvent", "hasEvent", "hasAnalyzedRisk", "hasHarm", "hasImplementationManifest",
        "hasSafetyAssurance", "isMitigatedBy", "hasResidualRiskLevel", "hasInitialRiskLevel", "hasProbability1",
        "hasProbability2", "hasProbability", "hasSeverity", "hasDeviceComponent", "isPartOfDeviceComponent", "gt",
        "hasDomainSpecificHazard", "hasHazard", "hasDeviceFunction",
    ];
    let concepts: Vec<&str> = vec!["SafeDesignArgument", "RiskSDA", "SDAI", "Hazard", "DeviceComponent", "Risk", "AssuranceSDA"];
    let ns2 = ns.clone();
    let node = move |i: u8| -> Term {
        // a few nodes are magnitudes so the nominal rules fire
        match i {
            0..=4 => riskman::ps::probability(&ns2, u32::from(i) + 1),
            5 | 6 => riskman::ps::severity(&ns2, u32::from(i) - 3),
            _ => Term::iri(format!("http://example.org/n{i}")).unwrap(),
        }
    };
    let node2 = node.clone();
    let ns3 = ns.clone();
    let assertion = prop_oneof![
        1 => (prop::sample::select(concepts), 0..max_nodes)
            .prop_map(move |(c, i)| Assertion::concept(ns.rm_term(c), node(i))),
        3 => (prop::sample::select(roles), 0..max_nodes, 0..max_nodes)
            .prop_map(move |(r, a, b)| Assertion::role(ns3.rm_term(r), node2(a), node2(b))),
    ];
    prop::collection::vec(assertion, 0..=max_assertions).prop_map(Graph::from_assertions)
}

pub fn arb_path() -> impl Strategy<Value = PathExpr> {
    let ns = Namespaces::default();
    let leaf = prop::sample::select(vec!["hasSubSDA", "hasProbability", "gt", "hasEvent"])
        .prop_map(move |r| PathExpr::role(ns.rm(r)));
    leaf.prop_recursive(2, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(PathExpr::inverse),
            inner.clone().prop_map(PathExpr::star),
            prop::collection::vec(inner.clone(), 2..=2).prop_map(PathExpr::Seq),
            prop::collection::vec(inner, 2..=2).prop_map(PathExpr::Union),
        ]
    })
}

/// Shapes of depth ≤ `depth`.
pub fn arb_shape(depth: u32) -> BoxedStrategy<ShapeExpr> {
    let ns = Namespaces::default();
    let leaf = prop_oneof![
        Just(ShapeExpr::Top),
        prop::sample::select(vec!["SafeDesignArgument", "SDAI", "Risk", "Probability"])
            .prop_map(move |c| ShapeExpr::concept(ns.rm(c))),
        (0..8u32).prop_map(|i| ShapeExpr::Individual(Term::iri(format!("http://example.org/n{i}")).unwrap())),
        (arb_path(), arb_path()).prop_map(|(l, r)| ShapeExpr::path_eq(l, r)),
    ];
    if depth <= 1 {
        return leaf.boxed();
    }
    let sub = arb_shape(depth - 1);
    prop_oneof![
        leaf,
        prop::collection::vec(sub.clone(), 2..=3).prop_map(ShapeExpr::And),
        sub.clone().prop_map(ShapeExpr::not),
        (1..=3u32, arb_path(), sub.clone()).prop_map(|(n, p, s)| ShapeExpr::geq(n, p, s)),
        (arb_path(), sub).prop_map(|(p, s)| ShapeExpr::forall(p, s)),
    ]
    .boxed()
}
