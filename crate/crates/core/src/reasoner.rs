//! Rule compilation and semi-naive saturation.
//!
//! Every axiom of the fragment compiles to one Horn rule over concept and
//! role atoms (role chains longer than two are split with auxiliary roles
//! first). The engine keeps the closure's append-only fact list as its
//! delta log: each iteration matches only the facts added by the previous
//! one against the rule atoms they can instantiate, and completes the match
//! by index joins over the whole graph. Rule heads never introduce new
//! individuals, so saturation is polynomial in the input.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::axioms::{check_fragment, Axiom, ConceptExpr, Ontology};
use crate::error::{ReasonerError, Unsupported};
use crate::exec::Execution;
use crate::graph::{ConceptId, Fact, Graph, NodeId, RoleId};
use crate::term::{local_name, Assertion, Term};

pub const OWL_NOTHING: &str = "http://www.w3.org/2002/07/owl#Nothing";
/// Namespace of generated roles for decomposed role chains; never reported.
pub const AUX_ROLE_NS: &str = "urn:riskman:aux:";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    Concept { concept: String, var: usize },
    Role { role: String, subject: usize, object: usize },
    RoleToConstant { role: String, subject: usize, object: Term },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Head {
    AddConcept { concept: String, var: usize },
    AddRole { role: String, subject: usize, object: usize },
    AddRoleToConstant { role: String, subject: usize, object: Term },
    /// The body is unsatisfiable; `concepts` names the clash in reports.
    Clash { concepts: (String, String) },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub id: String,
    /// The axiom the rule was compiled from.
    pub source: String,
    pub body: Vec<Condition>,
    pub head: Head,
}

impl Condition {
    fn vars(&self) -> Vec<usize> {
        match self {
            Condition::Concept { var, .. } => vec![*var],
            Condition::Role { subject, object, .. } => vec![*subject, *object],
            Condition::RoleToConstant { subject, .. } => vec![*subject],
        }
    }
}

impl Head {
    fn vars(&self) -> Vec<usize> {
        match self {
            Head::AddConcept { var, .. } => vec![*var],
            Head::AddRole { subject, object, .. } => vec![*subject, *object],
            Head::AddRoleToConstant { subject, .. } => vec![*subject],
            Head::Clash { .. } => vec![],
        }
    }
}

impl Rule {
    pub fn var_count(&self) -> usize {
        self.body.iter().flat_map(Condition::vars).max().map_or(0, |m| m + 1)
    }

    /// Every head variable occurs in the body.
    pub fn is_safe(&self) -> bool {
        let body: BTreeSet<usize> = self.body.iter().flat_map(Condition::vars).collect();
        !self.body.is_empty() && self.head.vars().iter().all(|v| body.contains(v))
    }
}

fn var_name(v: usize) -> String {
    ["x", "y", "z", "u", "v", "w"].get(v).map_or_else(|| format!("x{v}"), |s| s.to_string())
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Concept { concept, var } => write!(f, "{}({})", local_name(concept), var_name(*var)),
            Condition::Role { role, subject, object } => {
                write!(f, "{}({}, {})", local_name(role), var_name(*subject), var_name(*object))
            }
            Condition::RoleToConstant { role, subject, object } => {
                write!(f, "{}({}, {})", local_name(role), var_name(*subject), object.local_name())
            }
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.body.iter().map(|c| c.to_string()).collect();
        let head = match &self.head {
            Head::AddConcept { concept, var } => format!("{}({})", local_name(concept), var_name(*var)),
            Head::AddRole { role, subject, object } => {
                format!("{}({}, {})", local_name(role), var_name(*subject), var_name(*object))
            }
            Head::AddRoleToConstant { role, subject, object } => {
                format!("{}({}, {})", local_name(role), var_name(*subject), object.local_name())
            }
            Head::Clash { .. } => "⊥".to_string(),
        };
        write!(f, "{} ⇒ {head}", body.join(" ∧ "))
    }
}

/// Compiles every axiom of the ontology. Rule ids are `r{axiom index}`,
/// with a `.k` suffix for the parts of a decomposed role chain.
pub fn compile_rules(ontology: &Ontology) -> Result<Vec<Rule>, Unsupported> {
    let mut rules = Vec::with_capacity(ontology.axioms.len());
    for (i, axiom) in ontology.axioms.iter().enumerate() {
        check_fragment(axiom)?;
        let id = format!("r{i}");
        let source = axiom.to_string();
        let rule = |body, head| Rule { id: id.clone(), source: source.clone(), body, head };
        match axiom {
            Axiom::Gci { lhs, rhs } => {
                let mut body = Vec::new();
                let mut next = 1;
                for c in lhs.conjuncts() {
                    match c {
                        ConceptExpr::Top => {}
                        ConceptExpr::Name(n) => body.push(Condition::Concept { concept: n.clone(), var: 0 }),
                        ConceptExpr::Exists { role, filler } => match &**filler {
                            ConceptExpr::Nominal(o) => body.push(Condition::RoleToConstant {
                                role: role.clone(),
                                subject: 0,
                                object: o.clone(),
                            }),
                            ConceptExpr::Top => {
                                body.push(Condition::Role { role: role.clone(), subject: 0, object: next });
                                next += 1;
                            }
                            ConceptExpr::Name(n) => {
                                body.push(Condition::Role { role: role.clone(), subject: 0, object: next });
                                body.push(Condition::Concept { concept: n.clone(), var: next });
                                next += 1;
                            }
                            _ => unreachable!("checked by check_fragment"),
                        },
                        _ => unreachable!("checked by check_fragment"),
                    }
                }
                let head = match rhs {
                    ConceptExpr::Name(n) => Head::AddConcept { concept: n.clone(), var: 0 },
                    ConceptExpr::Exists { role, filler } => match &**filler {
                        ConceptExpr::Nominal(o) => {
                            Head::AddRoleToConstant { role: role.clone(), subject: 0, object: o.clone() }
                        }
                        _ => unreachable!("checked by check_fragment"),
                    },
                    ConceptExpr::Bottom => {
                        let names: Vec<&String> = lhs
                            .conjuncts()
                            .iter()
                            .filter_map(|c| match c {
                                ConceptExpr::Name(n) => Some(n),
                                _ => None,
                            })
                            .collect();
                        let concepts = match (names.as_slice(), lhs.conjuncts().len()) {
                            ([a, b], 2) => ((*a).min(*b).clone(), (*a).max(*b).clone()),
                            ([a], 1) => ((*a).clone(), OWL_NOTHING.to_string()),
                            _ => (lhs.to_string(), OWL_NOTHING.to_string()),
                        };
                        Head::Clash { concepts }
                    }
                    _ => unreachable!("checked by check_fragment"),
                };
                rules.push(rule(body, head));
            }
            Axiom::Range { role, concept } => rules.push(rule(
                vec![Condition::Role { role: role.clone(), subject: 0, object: 1 }],
                Head::AddConcept { concept: concept.clone(), var: 1 },
            )),
            Axiom::Transitive { role } => rules.push(rule(
                vec![
                    Condition::Role { role: role.clone(), subject: 0, object: 1 },
                    Condition::Role { role: role.clone(), subject: 1, object: 2 },
                ],
                Head::AddRole { role: role.clone(), subject: 0, object: 2 },
            )),
            Axiom::Disjoint { pair } => rules.push(rule(
                vec![
                    Condition::Concept { concept: pair.0.clone(), var: 0 },
                    Condition::Concept { concept: pair.1.clone(), var: 0 },
                ],
                Head::Clash { concepts: pair.clone() },
            )),
            Axiom::RoleInclusion { chain, sup } => match chain.as_slice() {
                [r] => rules.push(rule(
                    vec![Condition::Role { role: r.clone(), subject: 0, object: 1 }],
                    Head::AddRole { role: sup.clone(), subject: 0, object: 1 },
                )),
                [first, rest @ ..] => {
                    // r1∘r2 ⊑ a1, a1∘r3 ⊑ a2, …, a(n-2)∘rn ⊑ sup
                    let mut left = first.clone();
                    for (k, r) in rest.iter().enumerate() {
                        let target =
                            if k + 1 == rest.len() { sup.clone() } else { format!("{AUX_ROLE_NS}{i}.{}", k + 1) };
                        let id = if rest.len() == 1 { id.clone() } else { format!("{id}.{}", k + 1) };
                        rules.push(Rule {
                            id,
                            source: source.clone(),
                            body: vec![
                                Condition::Role { role: left.clone(), subject: 0, object: 1 },
                                Condition::Role { role: r.clone(), subject: 1, object: 2 },
                            ],
                            head: Head::AddRole { role: target.clone(), subject: 0, object: 2 },
                        });
                        left = target;
                    }
                }
                [] => unreachable!("checked by check_fragment"),
            },
        }
    }
    Ok(rules)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_assertions: usize,
    pub max_duration: Duration,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_assertions: 10_000_000, max_duration: Duration::from_secs(300) }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SaturationOptions {
    pub limits: Limits,
    pub execution: Execution,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationStats {
    pub input_assertions: usize,
    pub derived_assertions: usize,
    pub iterations: usize,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// An individual in two disjoint concepts (or in the body of a ⊥ axiom).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClashRecord {
    pub individual: Term,
    pub concepts: (String, String),
    /// Id of the rule that detected it.
    pub rule: String,
}

#[derive(Clone, Debug)]
pub struct Materialization {
    pub closure: Graph,
    pub stats: SaturationStats,
    /// Sorted and free of duplicates.
    pub clashes: Vec<ClashRecord>,
    input_len: usize,
    derived_by: Vec<u32>,
    rule_ids: Vec<String>,
}

impl Materialization {
    /// Adds `extra` to the closure and saturates again. The additions are
    /// attributed to `label` in the provenance and count as derived.
    pub fn extend(
        self,
        extra: impl IntoIterator<Item = Assertion>,
        label: &str,
        rules: &[Rule],
        options: &SaturationOptions,
    ) -> Result<Materialization, ReasonerError> {
        let mut g = self.closure;
        let mut rule_ids = self.rule_ids;
        let tag = rule_ids.len() as u32;
        rule_ids.push(label.to_string());
        let mut derived_by = self.derived_by;
        for a in extra {
            if g.add_assertion(a) {
                derived_by.push(tag);
            }
        }
        let next = materialize(&g, rules, options)?;
        derived_by.extend(next.derived_by);
        let clashes = next.clashes;
        let stats = SaturationStats {
            input_assertions: self.stats.input_assertions,
            derived_assertions: next.closure.len() - self.input_len,
            iterations: self.stats.iterations + next.stats.iterations,
            elapsed: self.stats.elapsed + next.stats.elapsed,
        };
        Ok(Materialization { closure: next.closure, stats, clashes, input_len: self.input_len, derived_by, rule_ids })
    }

    /// Each derived assertion with the id of the rule that first produced it,
    /// in derivation order.
    pub fn provenance(&self) -> impl Iterator<Item = (Assertion, &str)> + '_ {
        self.closure
            .assertions()
            .skip(self.input_len)
            .zip(&self.derived_by)
            .map(|(a, &r)| (a, self.rule_ids[r as usize].as_str()))
    }
}

const UNBOUND: NodeId = NodeId(u32::MAX);
const CHUNK: usize = 512;

#[derive(Clone, Copy, Debug)]
enum Atom {
    Concept(ConceptId, usize),
    Role(RoleId, usize, usize),
    RoleConst(RoleId, usize, NodeId),
}

#[derive(Clone, Debug)]
struct Plan {
    trigger: usize,
    /// Remaining atoms in join order.
    order: Vec<usize>,
    /// From this position on all head variables are bound, so one witness suffices.
    exist_from: usize,
}

#[derive(Clone, Debug)]
struct CompiledRule {
    atoms: Vec<Atom>,
    head: Option<Atom>,
    nvars: usize,
    plans: Vec<Plan>,
}

struct Engine {
    rules: Vec<CompiledRule>,
    by_concept: Vec<Vec<(u32, u32)>>,
    by_role: Vec<Vec<(u32, u32)>>,
}

#[derive(Default)]
struct Derivations {
    facts: Vec<(Fact, u32)>,
    clashes: Vec<(NodeId, u32)>,
    timed_out: bool,
}

fn atom_vars(a: &Atom) -> Vec<usize> {
    match *a {
        Atom::Concept(_, v) => vec![v],
        Atom::Role(_, s, o) => vec![s, o],
        Atom::RoleConst(_, s, _) => vec![s],
    }
}

fn make_plan(atoms: &[Atom], head_vars: &[usize], trigger: usize) -> Plan {
    let mut bound: BTreeSet<usize> = atom_vars(&atoms[trigger]).into_iter().collect();
    let mut left: Vec<usize> = (0..atoms.len()).filter(|&i| i != trigger).collect();
    let mut order = Vec::new();
    let mut exist_from = usize::MAX;
    while !left.is_empty() {
        if exist_from == usize::MAX && head_vars.iter().all(|v| bound.contains(v)) {
            exist_from = order.len();
        }
        // prefer fully bound atoms (checks), then partially bound ones
        let score = |i: usize| {
            let vars = atom_vars(&atoms[i]);
            let b = vars.iter().filter(|v| bound.contains(v)).count();
            if b == vars.len() {
                2
            } else {
                usize::from(b > 0)
            }
        };
        let pos = (0..left.len()).max_by_key(|&k| (score(left[k]), std::cmp::Reverse(k))).unwrap();
        let next = left.remove(pos);
        bound.extend(atom_vars(&atoms[next]));
        order.push(next);
    }
    if exist_from == usize::MAX {
        exist_from = order.len();
    }
    Plan { trigger, order, exist_from }
}

impl Engine {
    fn compile(rules: &[Rule], g: &mut Graph) -> Engine {
        let mut compiled = Vec::with_capacity(rules.len());
        for rule in rules {
            let atom = |g: &mut Graph, c: &Condition| match c {
                Condition::Concept { concept, var } => Atom::Concept(g.intern_concept(concept), *var),
                Condition::Role { role, subject, object } => Atom::Role(g.intern_role(role), *subject, *object),
                Condition::RoleToConstant { role, subject, object } => {
                    Atom::RoleConst(g.intern_role(role), *subject, g.intern_node(object))
                }
            };
            let atoms: Vec<Atom> = rule.body.iter().map(|c| atom(g, c)).collect();
            let head = match &rule.head {
                Head::AddConcept { concept, var } => Some(Atom::Concept(g.intern_concept(concept), *var)),
                Head::AddRole { role, subject, object } => Some(Atom::Role(g.intern_role(role), *subject, *object)),
                Head::AddRoleToConstant { role, subject, object } => {
                    Some(Atom::RoleConst(g.intern_role(role), *subject, g.intern_node(object)))
                }
                Head::Clash { .. } => None,
            };
            let head_vars = rule.head.vars();
            let plans = (0..atoms.len()).map(|t| make_plan(&atoms, &head_vars, t)).collect();
            compiled.push(CompiledRule { atoms, head, nvars: rule.var_count().max(1), plans });
        }
        let mut by_concept = Vec::new();
        let mut by_role = Vec::new();
        for (ri, r) in compiled.iter().enumerate() {
            for (ai, a) in r.atoms.iter().enumerate() {
                let (list, idx) = match *a {
                    Atom::Concept(c, _) => (&mut by_concept, c.0 as usize),
                    Atom::Role(r, ..) | Atom::RoleConst(r, ..) => (&mut by_role, r.0 as usize),
                };
                if list.len() <= idx {
                    list.resize_with(idx + 1, Vec::new);
                }
                list[idx].push((ri as u32, ai as u32));
            }
        }
        Engine { rules: compiled, by_concept, by_role }
    }

    fn unify(atom: Atom, fact: Fact, b: &mut [NodeId]) -> bool {
        match (atom, fact) {
            (Atom::Concept(c, v), Fact::Concept(c2, n)) if c == c2 => {
                b[v] = n;
                true
            }
            (Atom::Role(r, s, o), Fact::Role(r2, x, y)) if r == r2 => {
                if s == o && x != y {
                    return false;
                }
                b[s] = x;
                b[o] = y;
                true
            }
            (Atom::RoleConst(r, s, k), Fact::Role(r2, x, y)) if r == r2 && y == k => {
                b[s] = x;
                true
            }
            _ => false,
        }
    }

    /// Enumerates completions of `b` over `plan.order[i..]`, calling `emit`
    /// for each. Returns whether any completion exists.
    fn search(
        g: &Graph,
        rule: &CompiledRule,
        plan: &Plan,
        i: usize,
        b: &mut [NodeId],
        emit: &mut dyn FnMut(&[NodeId]),
    ) -> bool {
        if i == plan.order.len() {
            emit(b);
            return true;
        }
        let first_only = i >= plan.exist_from;
        let mut any = false;
        let mut try_bind = |b: &mut [NodeId], v: usize, n: NodeId| -> bool {
            b[v] = n;
            let found = Self::search(g, rule, plan, i + 1, b, emit);
            any |= found;
            found && first_only
        };
        match rule.atoms[plan.order[i]] {
            Atom::Concept(c, v) => {
                if b[v] != UNBOUND {
                    return g.has_label(b[v], c) && Self::search(g, rule, plan, i + 1, b, emit);
                }
                for n in g.members(c) {
                    if try_bind(b, v, n) {
                        break;
                    }
                }
                b[v] = UNBOUND;
            }
            Atom::RoleConst(r, s, k) => {
                if b[s] != UNBOUND {
                    return g.has_edge(r, b[s], k) && Self::search(g, rule, plan, i + 1, b, emit);
                }
                for &n in g.inc(r, k) {
                    if try_bind(b, s, n) {
                        break;
                    }
                }
                b[s] = UNBOUND;
            }
            Atom::Role(r, s, o) => match (b[s] != UNBOUND, b[o] != UNBOUND) {
                (true, true) => return g.has_edge(r, b[s], b[o]) && Self::search(g, rule, plan, i + 1, b, emit),
                (true, false) => {
                    for &n in g.out(r, b[s]) {
                        if try_bind(b, o, n) {
                            break;
                        }
                    }
                    b[o] = UNBOUND;
                }
                (false, true) => {
                    for &n in g.inc(r, b[o]) {
                        if try_bind(b, s, n) {
                            break;
                        }
                    }
                    b[s] = UNBOUND;
                }
                (false, false) => {
                    let pairs: Vec<(NodeId, NodeId)> = g.edge_pairs(r).collect();
                    for (x, y) in pairs {
                        if s == o && x != y {
                            continue;
                        }
                        b[s] = x;
                        if try_bind(b, o, y) {
                            break;
                        }
                    }
                    b[s] = UNBOUND;
                    b[o] = UNBOUND;
                }
            },
        }
        any
    }

    fn instantiate(head: Atom, b: &[NodeId]) -> Fact {
        match head {
            Atom::Concept(c, v) => Fact::Concept(c, b[v]),
            Atom::Role(r, s, o) => Fact::Role(r, b[s], b[o]),
            Atom::RoleConst(r, s, k) => Fact::Role(r, b[s], k),
        }
    }

    fn match_chunk(&self, g: &Graph, delta: &[Fact], deadline: Instant) -> Derivations {
        let mut out = Derivations::default();
        if Instant::now() > deadline {
            out.timed_out = true;
            return out;
        }
        let mut b = Vec::new();
        for &fact in delta {
            let triggers = match fact {
                Fact::Concept(c, _) => self.by_concept.get(c.0 as usize),
                Fact::Role(r, ..) => self.by_role.get(r.0 as usize),
            };
            for &(ri, ai) in triggers.map(Vec::as_slice).unwrap_or(&[]) {
                let rule = &self.rules[ri as usize];
                b.clear();
                b.resize(rule.nvars, UNBOUND);
                if !Self::unify(rule.atoms[ai as usize], fact, &mut b) {
                    continue;
                }
                let plan = &rule.plans[ai as usize];
                debug_assert_eq!(plan.trigger, ai as usize);
                match rule.head {
                    Some(head) => {
                        let facts = &mut out.facts;
                        Self::search(g, rule, plan, 0, &mut b, &mut |b| {
                            let f = Self::instantiate(head, b);
                            if !g.contains_fact(f) {
                                facts.push((f, ri));
                            }
                        });
                    }
                    None => {
                        let clashes = &mut out.clashes;
                        Self::search(g, rule, plan, 0, &mut b, &mut |b| clashes.push((b[0], ri)));
                    }
                }
            }
        }
        out
    }
}

fn is_aux(role: &str) -> bool {
    role.starts_with(AUX_ROLE_NS)
}

/// Saturates `graph` under `rules` (semi-naive). Clashes are collected,
/// never fatal; exceeding a limit is.
pub fn materialize(graph: &Graph, rules: &[Rule], options: &SaturationOptions) -> Result<Materialization, ReasonerError> {
    let start = Instant::now();
    let deadline = start + options.limits.max_duration;
    let mut g = graph.clone();
    let engine = Engine::compile(rules, &mut g);
    let input_len = g.len();
    if input_len > options.limits.max_assertions {
        return Err(ReasonerError::TooManyAssertions(options.limits.max_assertions));
    }
    let mut derived_by: Vec<u32> = Vec::new();
    let mut clash_hits: BTreeSet<(NodeId, u32)> = BTreeSet::new();
    let mut lo = 0;
    let mut iterations = 0;
    loop {
        let hi = g.len();
        if lo == hi {
            break;
        }
        iterations += 1;
        let results = {
            let delta = &g.facts()[lo..hi];
            let g = &g;
            options.execution.map_chunks(delta, CHUNK, |c| engine.match_chunk(g, c, deadline))
        };
        lo = hi;
        for r in results {
            if r.timed_out {
                return Err(ReasonerError::Timeout(options.limits.max_duration.as_secs()));
            }
            for (f, rule) in r.facts {
                if g.insert_fact(f) {
                    derived_by.push(rule);
                    if g.len() > options.limits.max_assertions {
                        return Err(ReasonerError::TooManyAssertions(options.limits.max_assertions));
                    }
                }
            }
            clash_hits.extend(r.clashes);
        }
        if Instant::now() > deadline {
            return Err(ReasonerError::Timeout(options.limits.max_duration.as_secs()));
        }
    }

    let mut clashes: Vec<ClashRecord> = clash_hits
        .into_iter()
        .map(|(n, ri)| {
            let rule = &rules[ri as usize];
            let Head::Clash { concepts } = &rule.head else { unreachable!("only clash heads record clashes") };
            ClashRecord { individual: g.term(n).clone(), concepts: concepts.clone(), rule: rule.id.clone() }
        })
        .collect();
    clashes.sort();
    clashes.dedup_by(|a, b| a.individual == b.individual && a.concepts == b.concepts);

    let has_aux = g.role_names().iter().any(|r| is_aux(r));
    let (closure, derived_by) = if has_aux {
        let keep: Vec<bool> = g.assertions().map(|a| !is_aux(a.predicate().value())).collect();
        let mut c = Graph::from_assertions(g.assertions().filter(|a| !is_aux(a.predicate().value())));
        for (s, p, o) in g.literal_triples() {
            c.add_literal_triple(s.clone(), p.clone(), o.clone());
        }
        let derived_by = derived_by.into_iter().zip(&keep[input_len..]).filter(|(_, k)| **k).map(|(d, _)| d).collect();
        (c, derived_by)
    } else {
        (g, derived_by)
    };

    let stats = SaturationStats {
        input_assertions: input_len,
        derived_assertions: closure.len() - input_len,
        iterations,
        elapsed: start.elapsed(),
    };
    Ok(Materialization {
        closure,
        stats,
        clashes,
        input_len,
        derived_by,
        rule_ids: rules.iter().map(|r| r.id.clone()).collect(),
    })
}

/// Reference engine: re-applies every rule to the whole assertion set by
/// linear scans until nothing changes. Exists as a test oracle.
pub fn naive_materialize(graph: &Graph, rules: &[Rule], limits: &Limits) -> Result<Graph, ReasonerError> {
    let start = Instant::now();
    let mut facts: BTreeSet<Assertion> = graph.assertions().collect();
    loop {
        let mut new = BTreeSet::new();
        for rule in rules {
            let mut b: Vec<Option<Term>> = vec![None; rule.var_count()];
            naive_join(&facts, rule, 0, &mut b, &mut new);
        }
        let before = facts.len();
        facts.extend(new);
        if facts.len() == before {
            break;
        }
        if facts.len() > limits.max_assertions {
            return Err(ReasonerError::TooManyAssertions(limits.max_assertions));
        }
        if start.elapsed() > limits.max_duration {
            return Err(ReasonerError::Timeout(limits.max_duration.as_secs()));
        }
    }
    let mut out = Graph::from_assertions(facts.into_iter().filter(|a| !is_aux(a.predicate().value())));
    for (s, p, o) in graph.literal_triples() {
        out.add_literal_triple(s.clone(), p.clone(), o.clone());
    }
    Ok(out)
}

fn naive_join(
    facts: &BTreeSet<Assertion>,
    rule: &Rule,
    i: usize,
    b: &mut Vec<Option<Term>>,
    new: &mut BTreeSet<Assertion>,
) {
    if i == rule.body.len() {
        let v = |k: usize| b[k].clone().expect("safe rule");
        let derived = match &rule.head {
            Head::AddConcept { concept, var } => Assertion::concept(Term::iri_unchecked(concept), v(*var)),
            Head::AddRole { role, subject, object } => Assertion::role(Term::iri_unchecked(role), v(*subject), v(*object)),
            Head::AddRoleToConstant { role, subject, object } => {
                Assertion::role(Term::iri_unchecked(role), v(*subject), object.clone())
            }
            Head::Clash { .. } => return,
        };
        if !facts.contains(&derived) {
            new.insert(derived);
        }
        return;
    }
    // bind `var` to `t`, recurse, undo; a clash with an existing binding fails
    fn with(
        facts: &BTreeSet<Assertion>,
        rule: &Rule,
        i: usize,
        b: &mut Vec<Option<Term>>,
        new: &mut BTreeSet<Assertion>,
        binds: &[(usize, &Term)],
    ) {
        let saved = b.clone();
        for (v, t) in binds {
            match &b[*v] {
                Some(x) if x != *t => {
                    *b = saved;
                    return;
                }
                _ => b[*v] = Some((*t).clone()),
            }
        }
        naive_join(facts, rule, i + 1, b, new);
        *b = saved;
    }
    for a in facts {
        match (&rule.body[i], a) {
            (Condition::Concept { concept, var }, Assertion::Concept { concept: c, subject }) if c.value() == concept => {
                with(facts, rule, i, b, new, &[(*var, subject)]);
            }
            (Condition::Role { role, subject, object }, Assertion::Role { role: r, subject: s, object: o })
                if r.value() == role =>
            {
                with(facts, rule, i, b, new, &[(*subject, s), (*object, o)]);
            }
            (
                Condition::RoleToConstant { role, subject, object },
                Assertion::Role { role: r, subject: s, object: o },
            ) if r.value() == role && o == object => {
                with(facts, rule, i, b, new, &[(*subject, s)]);
            }
            _ => {}
        }
    }
}

/// One record per individual and disjoint pair with both memberships,
/// found by scanning the closure.
pub fn check_consistency(closure: &Graph, disjoint: &[(String, String)]) -> Vec<ClashRecord> {
    let mut out = BTreeSet::new();
    for (a, b) in disjoint {
        let (Some(ca), Some(cb)) = (closure.concept_id(a), closure.concept_id(b)) else {
            continue;
        };
        let (small, other) =
            if closure.member_count(ca) <= closure.member_count(cb) { (ca, cb) } else { (cb, ca) };
        for n in closure.members(small) {
            if closure.has_label(n, other) {
                let concepts = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
                out.insert(ClashRecord { individual: closure.term(n).clone(), concepts, rule: "disjoint".into() });
            }
        }
    }
    out.into_iter().collect()
}
