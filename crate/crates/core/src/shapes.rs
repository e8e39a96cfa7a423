//! Path and shape expressions, their set semantics over a saturated graph,
//! the built-in RISKMAN constraints and target-class validation.
//!
//! Shapes are evaluated node-locally: `holds(φ, a)` decides `a ∈ ⟦φ⟧`
//! by computing only the path successors it needs, which is exact for
//! this language because every construct is defined pointwise.

use std::collections::BTreeSet;
use std::fmt;

use crate::dsl::{arity, read_all, DslContext, Sexp};
use crate::error::DslError;
use crate::exec::Execution;
use crate::graph::{Graph, NodeId};
use crate::term::{local_name, Term};
use crate::vocab::{Namespaces, Vocabulary};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PathExpr {
    Role(String),
    Inverse(Box<PathExpr>),
    Union(Vec<PathExpr>),
    Seq(Vec<PathExpr>),
    Star(Box<PathExpr>),
}

impl PathExpr {
    pub fn role(iri: impl Into<String>) -> Self {
        PathExpr::Role(iri.into())
    }

    pub fn inverse(self) -> Self {
        PathExpr::Inverse(Box::new(self))
    }

    pub fn star(self) -> Self {
        PathExpr::Star(Box::new(self))
    }

    /// A single part is returned as is.
    pub fn seq(parts: impl IntoIterator<Item = PathExpr>) -> Self {
        let mut parts: Vec<_> = parts.into_iter().collect();
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            PathExpr::Seq(parts)
        }
    }

    /// A single part is returned as is.
    pub fn union(parts: impl IntoIterator<Item = PathExpr>) -> Self {
        let mut parts: Vec<_> = parts.into_iter().collect();
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            PathExpr::Union(parts)
        }
    }

    pub fn roles(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_roles(&mut out);
        out
    }

    fn collect_roles<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            PathExpr::Role(r) => {
                out.insert(r);
            }
            PathExpr::Inverse(e) | PathExpr::Star(e) => e.collect_roles(out),
            PathExpr::Union(ps) | PathExpr::Seq(ps) => ps.iter().for_each(|p| p.collect_roles(out)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ShapeExpr {
    Top,
    Concept(String),
    Individual(Term),
    And(Vec<ShapeExpr>),
    Not(Box<ShapeExpr>),
    Geq { n: u32, path: PathExpr, filler: Box<ShapeExpr> },
    Forall { path: PathExpr, filler: Box<ShapeExpr> },
    PathEq(PathExpr, PathExpr),
}

impl ShapeExpr {
    pub fn concept(iri: impl Into<String>) -> Self {
        ShapeExpr::Concept(iri.into())
    }

    /// Flattens nested conjunctions; a single part is returned as is.
    pub fn and(parts: impl IntoIterator<Item = ShapeExpr>) -> Self {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                ShapeExpr::And(inner) => flat.extend(inner),
                p => flat.push(p),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            ShapeExpr::And(flat)
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        ShapeExpr::Not(Box::new(self))
    }

    /// `n ≥ 1`; panics otherwise.
    pub fn geq(n: u32, path: PathExpr, filler: ShapeExpr) -> Self {
        assert!(n >= 1, "geq needs n ≥ 1");
        ShapeExpr::Geq { n, path, filler: Box::new(filler) }
    }

    pub fn forall(path: PathExpr, filler: ShapeExpr) -> Self {
        ShapeExpr::Forall { path, filler: Box::new(filler) }
    }

    /// `∃E.φ`, i.e. `≥1 E.φ`.
    pub fn exists(path: PathExpr, filler: ShapeExpr) -> Self {
        Self::geq(1, path, filler)
    }

    /// `≤n E.φ`, i.e. `¬≥(n+1) E.φ`.
    pub fn leq(n: u32, path: PathExpr, filler: ShapeExpr) -> Self {
        Self::geq(n + 1, path, filler).not()
    }

    /// `∃₌₁E.⊤`.
    pub fn exactly_one(path: PathExpr) -> Self {
        Self::and([Self::exists(path.clone(), ShapeExpr::Top), Self::leq(1, path, ShapeExpr::Top)])
    }

    pub fn path_eq(left: PathExpr, right: PathExpr) -> Self {
        ShapeExpr::PathEq(left, right)
    }

    pub fn path_neq(left: PathExpr, right: PathExpr) -> Self {
        Self::path_eq(left, right).not()
    }

    pub fn conjuncts(&self) -> &[ShapeExpr] {
        match self {
            ShapeExpr::And(parts) => parts,
            other => std::slice::from_ref(other),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            ShapeExpr::Top | ShapeExpr::Concept(_) | ShapeExpr::Individual(_) | ShapeExpr::PathEq(..) => 1,
            ShapeExpr::And(ps) => 1 + ps.iter().map(ShapeExpr::depth).max().unwrap_or(0),
            ShapeExpr::Not(s) => 1 + s.depth(),
            ShapeExpr::Geq { filler, .. } | ShapeExpr::Forall { filler, .. } => 1 + filler.depth(),
        }
    }

    fn visit<'a>(&'a self, concepts: &mut BTreeSet<&'a str>, roles: &mut BTreeSet<&'a str>) {
        match self {
            ShapeExpr::Top | ShapeExpr::Individual(_) => {}
            ShapeExpr::Concept(c) => {
                concepts.insert(c);
            }
            ShapeExpr::And(ps) => ps.iter().for_each(|p| p.visit(concepts, roles)),
            ShapeExpr::Not(s) => s.visit(concepts, roles),
            ShapeExpr::Geq { path, filler, .. } | ShapeExpr::Forall { path, filler } => {
                path.collect_roles(roles);
                filler.visit(concepts, roles);
            }
            ShapeExpr::PathEq(l, r) => {
                l.collect_roles(roles);
                r.collect_roles(roles);
            }
        }
    }
}

impl fmt::Display for PathExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrapped = |p: &PathExpr| match p {
            PathExpr::Seq(_) => format!("({p})"),
            _ => p.to_string(),
        };
        match self {
            PathExpr::Role(r) => f.write_str(local_name(r)),
            PathExpr::Inverse(e) => write!(f, "{}⁻", wrapped(e)),
            PathExpr::Star(e) => write!(f, "{}*", wrapped(e)),
            PathExpr::Seq(ps) => {
                let parts: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                f.write_str(&parts.join(" • "))
            }
            PathExpr::Union(ps) => {
                let parts: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "({})", parts.join(" ∪ "))
            }
        }
    }
}

impl fmt::Display for ShapeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner = |s: &ShapeExpr| match s {
            ShapeExpr::And(_) | ShapeExpr::PathEq(..) => format!("({s})"),
            ShapeExpr::Not(x) if matches!(**x, ShapeExpr::PathEq(..)) => format!("({s})"),
            _ => s.to_string(),
        };
        match self {
            ShapeExpr::Top => f.write_str("⊤"),
            ShapeExpr::Concept(c) => f.write_str(local_name(c)),
            ShapeExpr::Individual(t) => write!(f, "{{{}}}", t.local_name()),
            ShapeExpr::And(ps) => {
                let parts: Vec<String> = ps.iter().map(inner).collect();
                f.write_str(&parts.join(" ∧ "))
            }
            ShapeExpr::Not(s) => match &**s {
                ShapeExpr::PathEq(l, r) => write!(f, "{l} ≠ {r}"),
                s => write!(f, "¬{}", inner(s)),
            },
            ShapeExpr::Geq { n: 1, path, filler } => write!(f, "∃{path}.{}", inner(filler)),
            ShapeExpr::Geq { n, path, filler } => write!(f, "≥{n} {path}.{}", inner(filler)),
            ShapeExpr::Forall { path, filler } => write!(f, "∀{path}.{}", inner(filler)),
            ShapeExpr::PathEq(l, r) => write!(f, "{l} = {r}"),
        }
    }
}

/// A target-class constraint `head ← body`: every node labelled `head`
/// in the closure must satisfy `body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub id: String,
    pub head: String,
    pub body: ShapeExpr,
    /// Violation message; `{detail}` is replaced by a description of the
    /// first failing top-level conjunct and `{variant}` by the variant.
    pub message_template: String,
    pub variant: Option<String>,
}

impl Constraint {
    pub fn new(id: impl Into<String>, head: impl Into<String>, body: ShapeExpr) -> Self {
        Constraint { id: id.into(), head: head.into(), body, message_template: "{detail}".into(), variant: None }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ← {}", local_name(&self.head), self.body)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Schema {
    constraints: Vec<Constraint>,
}

impl Schema {
    /// Fails with the first duplicated id.
    pub fn new(constraints: Vec<Constraint>) -> Result<Self, String> {
        let mut seen = BTreeSet::new();
        for c in &constraints {
            if !seen.insert(c.id.as_str()) {
                return Err(c.id.clone());
            }
        }
        Ok(Schema { constraints })
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }
}

/// The seven RISKMAN constraints with C4 expanded over its four variants.
pub fn builtin_constraints(ns: &Namespaces) -> Vec<Constraint> {
    let r = |l: &str| PathExpr::role(ns.rm(l));
    let one = |l: &str| ShapeExpr::exactly_one(r(l));
    let all_one = |ls: &[&str]| ShapeExpr::and(ls.iter().map(|l| one(l)));
    let mut out = vec![
        Constraint::new(
            "C1",
            ns.rm("AnalyzedRisk"),
            all_one(&["hasDomainSpecificHazard", "hasHarm", "hasDeviceContext", "hasInitialRiskLevel", "hasHazardousSituation"]),
        ),
        Constraint::new(
            "C2",
            ns.rm("AssuranceSDA"),
            ShapeExpr::and([
                ShapeExpr::forall(r("hasSubSDA"), ShapeExpr::concept(ns.rm("AssuranceSDA"))),
                one("hasSafetyAssurance"),
            ]),
        ),
        Constraint::new("C3", ns.rm("ControlledRisk"), all_one(&["isMitigatedBy", "hasAnalyzedRisk", "hasResidualRiskLevel"])),
    ];
    for x in ["hasProbability", "hasProbability1", "hasProbability2", "hasSeverity"] {
        let left = PathExpr::seq([r("hasAnalyzedRisk"), r("hasInitialRiskLevel"), r(x), r("gt").inverse(), r(x).inverse()]);
        out.push(Constraint {
            id: format!("C4.{x}"),
            head: ns.rm("ControlledRisk"),
            body: ShapeExpr::path_neq(left, r("hasResidualRiskLevel")),
            message_template: "residual risk level is not lower in {variant} ({detail})".into(),
            variant: Some(x.to_string()),
        });
    }
    out.push(Constraint::new("C5", ns.rm("DomainSpecificHazard"), all_one(&["hasDeviceComponent", "hasDeviceFunction", "hasHazard"])));
    out.push(Constraint::new("C6", ns.rm("RiskLevel"), all_one(&["hasProbability", "hasSeverity"])));
    out.push(Constraint::new(
        "C7",
        ns.rm("SafeDesignArgument"),
        ShapeExpr::exists(r("hasSubSDA").star(), ShapeExpr::concept(ns.rm("SDAI"))),
    ));
    out
}

/// Human-readable reason why `conjunct` fails at a node.
fn describe_failure(conjunct: &ShapeExpr) -> String {
    let filler_suffix = |s: &ShapeExpr| match s {
        ShapeExpr::Top => String::new(),
        s => format!(" {s}"),
    };
    match conjunct {
        ShapeExpr::Top => "⊤ fails".into(),
        ShapeExpr::Concept(c) => format!("not a {}", local_name(c)),
        ShapeExpr::Individual(t) => format!("not {}", t.local_name()),
        ShapeExpr::Geq { n: 1, path, filler } if **filler == ShapeExpr::Top => format!("no {path}"),
        ShapeExpr::Geq { n: 1, path, filler } => format!("no {filler} reachable via {path}"),
        ShapeExpr::Geq { n, path, filler } => format!("fewer than {n}{} via {path}", filler_suffix(filler)),
        ShapeExpr::Forall { path, filler } => format!("some {path} successor is not {filler}"),
        ShapeExpr::PathEq(l, r) => format!("{l} differs from {r}"),
        ShapeExpr::Not(inner) => match &**inner {
            ShapeExpr::Geq { n: 2, path, filler } if **filler == ShapeExpr::Top => format!("more than one {path}"),
            ShapeExpr::Geq { n: 1, path, filler } => format!("{path} reaches {filler}"),
            ShapeExpr::Geq { n, path, filler } => format!("at least {n}{} via {path}", filler_suffix(filler)),
            ShapeExpr::PathEq(l, r) => format!("{l} equals {r}"),
            s => format!("satisfies {s}"),
        },
        ShapeExpr::And(_) => format!("violates {conjunct}"),
    }
}

/// Shape evaluation bound to one graph. Roles, concepts and individuals
/// that never occur in the graph evaluate to empty relations and sets.
pub(crate) struct Evaluator<'g> {
    g: &'g Graph,
}

impl<'g> Evaluator<'g> {
    pub(crate) fn new(g: &'g Graph) -> Self {
        Evaluator { g }
    }

    /// Image (`forward`) or preimage of `from` under `e`, sorted.
    fn image(&self, e: &PathExpr, from: &[NodeId], forward: bool) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = match e {
            PathExpr::Role(r) => {
                let Some(r) = self.g.role_id(r) else { return Vec::new() };
                from.iter()
                    .flat_map(|&n| if forward { self.g.out(r, n) } else { self.g.inc(r, n) })
                    .copied()
                    .collect()
            }
            PathExpr::Inverse(inner) => return self.image(inner, from, !forward),
            PathExpr::Union(parts) => parts.iter().flat_map(|p| self.image(p, from, forward)).collect(),
            PathExpr::Seq(parts) => {
                let mut cur = from.to_vec();
                let ordered: Box<dyn Iterator<Item = &PathExpr>> =
                    if forward { Box::new(parts.iter()) } else { Box::new(parts.iter().rev()) };
                for p in ordered {
                    if cur.is_empty() {
                        break;
                    }
                    cur = self.image(p, &cur, forward);
                }
                return cur;
            }
            PathExpr::Star(inner) => {
                let mut seen: BTreeSet<NodeId> = from.iter().copied().collect();
                let mut frontier = from.to_vec();
                while !frontier.is_empty() {
                    frontier = self.image(inner, &frontier, forward).into_iter().filter(|n| seen.insert(*n)).collect();
                }
                return seen.into_iter().collect();
            }
        };
        out.sort_unstable();
        out.dedup();
        out
    }

    pub(crate) fn successors(&self, e: &PathExpr, n: NodeId) -> Vec<NodeId> {
        self.image(e, &[n], true)
    }

    pub(crate) fn holds(&self, s: &ShapeExpr, n: NodeId) -> bool {
        match s {
            ShapeExpr::Top => true,
            ShapeExpr::Concept(c) => self.g.concept_id(c).is_some_and(|c| self.g.has_label(n, c)),
            ShapeExpr::Individual(t) => self.g.node_id(t) == Some(n),
            ShapeExpr::And(ps) => ps.iter().all(|p| self.holds(p, n)),
            ShapeExpr::Not(inner) => !self.holds(inner, n),
            ShapeExpr::Geq { n: k, path, filler } => {
                let mut count = 0;
                for m in self.successors(path, n) {
                    if self.holds(filler, m) {
                        count += 1;
                        if count >= *k {
                            return true;
                        }
                    }
                }
                false
            }
            ShapeExpr::Forall { path, filler } => self.successors(path, n).into_iter().all(|m| self.holds(filler, m)),
            ShapeExpr::PathEq(l, r) => self.successors(l, n) == self.successors(r, n),
        }
    }
}

/// `⟦E⟧` as a set of node pairs.
pub fn eval_path(graph: &Graph, e: &PathExpr) -> BTreeSet<(Term, Term)> {
    let ev = Evaluator::new(graph);
    graph
        .node_ids()
        .flat_map(|a| ev.successors(e, a).into_iter().map(move |b| (a, b)))
        .map(|(a, b)| (graph.term(a).clone(), graph.term(b).clone()))
        .collect()
}

/// `{b | (a, b) ∈ ⟦E⟧}`, computed by traversal from `a` only. Empty when
/// `a` is not a node of the graph.
pub fn eval_path_from(graph: &Graph, e: &PathExpr, a: &Term) -> BTreeSet<Term> {
    match graph.node_id(a).filter(|&n| graph.is_active(n)) {
        Some(n) => Evaluator::new(graph).successors(e, n).into_iter().map(|m| graph.term(m).clone()).collect(),
        None => BTreeSet::new(),
    }
}

/// `⟦φ⟧`.
pub fn eval_shape(graph: &Graph, s: &ShapeExpr) -> BTreeSet<Term> {
    let ev = Evaluator::new(graph);
    graph.node_ids().filter(|&n| ev.holds(s, n)).map(|n| graph.term(n).clone()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub constraint: String,
    pub focus: Term,
    pub variant: Option<String>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSummary {
    pub id: String,
    pub head: String,
    pub focus_nodes: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShapeReport {
    /// Sorted by constraint id, then focus IRI.
    pub violations: Vec<Violation>,
    /// One entry per constraint, in schema order.
    pub summaries: Vec<ConstraintSummary>,
}

impl ShapeReport {
    pub fn conforms(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every constraint at each node carrying its head label.
pub fn validate(graph: &Graph, schema: &Schema, exec: Execution) -> ShapeReport {
    let ev = Evaluator::new(graph);
    let mut work: Vec<(usize, NodeId)> = Vec::new();
    let mut summaries = Vec::new();
    for (i, c) in schema.constraints().iter().enumerate() {
        let before = work.len();
        if let Some(cid) = graph.concept_id(&c.head) {
            work.extend(graph.members(cid).map(|n| (i, n)));
        }
        summaries.push(ConstraintSummary {
            id: c.id.clone(),
            head: c.head.clone(),
            focus_nodes: work.len() - before,
            violations: 0,
        });
    }
    let results = exec.map_chunks(&work, 256, |chunk| {
        chunk
            .iter()
            .filter_map(|&(i, n)| {
                let c = &schema.constraints()[i];
                let failing = c.body.conjuncts().iter().find(|p| !ev.holds(p, n))?;
                let message = c
                    .message_template
                    .replace("{detail}", &describe_failure(failing))
                    .replace("{variant}", c.variant.as_deref().unwrap_or(""));
                Some((i, Violation { constraint: c.id.clone(), focus: graph.term(n).clone(), variant: c.variant.clone(), message }))
            })
            .collect::<Vec<_>>()
    });
    let mut violations = Vec::new();
    for (i, v) in results.into_iter().flatten() {
        summaries[i].violations += 1;
        violations.push(v);
    }
    violations.sort_by(|a, b| (&a.constraint, a.focus.value()).cmp(&(&b.constraint, b.focus.value())));
    ShapeReport { violations, summaries }
}

/// Parses `(constraint NAME shape)` forms (and `(prefix ...)` directives).
/// Constraints are numbered `E1.Name`, `E2.Name`, … in file order. Every
/// concept and role must be known to `vocab`.
pub fn parse_shape_dsl(text: &str, ctx: &DslContext, vocab: &Vocabulary) -> Result<Vec<Constraint>, DslError> {
    let mut ctx = ctx.clone();
    let mut out = Vec::new();
    for form in read_all(text)? {
        if ctx.directive(&form)? {
            continue;
        }
        let Some(("constraint", args)) = form.form() else {
            return Err(form.err("expected (constraint NAME shape) or (prefix PFX <IRI>)"));
        };
        let args = arity(&form, args, 2)?;
        let head = ctx.name(&args[0])?;
        if !vocab.is_concept(&head) {
            return Err(DslError::UnknownName(head));
        }
        let body = parse_shape(&args[1], &ctx, vocab)?;
        out.push(Constraint::new(format!("E{}.{}", out.len() + 1, local_name(&head)), head, body));
    }
    Ok(out)
}

fn parse_path(s: &Sexp, ctx: &DslContext, vocab: &Vocabulary) -> Result<PathExpr, DslError> {
    let role = |s: &Sexp| {
        let r = ctx.name(s)?;
        if vocab.is_role(&r) {
            Ok(PathExpr::Role(r))
        } else {
            Err(DslError::UnknownName(r))
        }
    };
    if s.atom().is_some() {
        return role(s);
    }
    let (head, args) = s.form().ok_or_else(|| s.err("expected a path"))?;
    let many = |args: &[Sexp]| -> Result<Vec<PathExpr>, DslError> {
        if args.is_empty() {
            return Err(s.err(format!("`{head}` needs at least one path")));
        }
        args.iter().map(|a| parse_path(a, ctx, vocab)).collect()
    };
    match head {
        "path" => role(&arity(s, args, 1)?[0]),
        "inv" => Ok(parse_path(&arity(s, args, 1)?[0], ctx, vocab)?.inverse()),
        "star" => Ok(parse_path(&arity(s, args, 1)?[0], ctx, vocab)?.star()),
        "seq" => Ok(PathExpr::seq(many(args)?)),
        "alt" => Ok(PathExpr::union(many(args)?)),
        other => Err(s.err(format!("unknown path form `{other}`"))),
    }
}

fn parse_shape(s: &Sexp, ctx: &DslContext, vocab: &Vocabulary) -> Result<ShapeExpr, DslError> {
    if let Some(a) = s.atom() {
        return if a == "top" { Ok(ShapeExpr::Top) } else { Err(s.err(format!("expected a shape, got `{a}`"))) };
    }
    let (head, args) = s.form().ok_or_else(|| s.err("expected a shape"))?;
    let count = |a: &Sexp| -> Result<u32, DslError> {
        a.atom().and_then(|n| n.parse::<u32>().ok()).filter(|&n| n >= 1).ok_or_else(|| a.err("expected a positive integer"))
    };
    match head {
        "class" => {
            let c = ctx.name(&arity(s, args, 1)?[0])?;
            if vocab.is_concept(&c) {
                Ok(ShapeExpr::Concept(c))
            } else {
                Err(DslError::UnknownName(c))
            }
        }
        "ind" => Ok(ShapeExpr::Individual(ctx.individual(&arity(s, args, 1)?[0])?)),
        "and" => {
            if args.is_empty() {
                return Err(s.err("`and` needs at least one shape"));
            }
            Ok(ShapeExpr::and(args.iter().map(|a| parse_shape(a, ctx, vocab)).collect::<Result<Vec<_>, _>>()?))
        }
        "not" => Ok(parse_shape(&arity(s, args, 1)?[0], ctx, vocab)?.not()),
        "geq" => {
            let a = arity(s, args, 3)?;
            Ok(ShapeExpr::geq(count(&a[0])?, parse_path(&a[1], ctx, vocab)?, parse_shape(&a[2], ctx, vocab)?))
        }
        "some" => {
            let a = arity(s, args, 2)?;
            Ok(ShapeExpr::exists(parse_path(&a[0], ctx, vocab)?, parse_shape(&a[1], ctx, vocab)?))
        }
        "all" => {
            let a = arity(s, args, 2)?;
            Ok(ShapeExpr::forall(parse_path(&a[0], ctx, vocab)?, parse_shape(&a[1], ctx, vocab)?))
        }
        "eq" => {
            let a = arity(s, args, 2)?;
            Ok(ShapeExpr::path_eq(parse_path(&a[0], ctx, vocab)?, parse_path(&a[1], ctx, vocab)?))
        }
        other => Err(s.err(format!("unknown shape form `{other}`"))),
    }
}

fn render_path(p: &PathExpr, ctx: &DslContext) -> String {
    let list = |head: &str, ps: &[PathExpr]| {
        let parts: Vec<String> = ps.iter().map(|p| render_path(p, ctx)).collect();
        format!("({head} {})", parts.join(" "))
    };
    match p {
        PathExpr::Role(r) => ctx.render_iri(r),
        PathExpr::Inverse(e) => format!("(inv {})", render_path(e, ctx)),
        PathExpr::Star(e) => format!("(star {})", render_path(e, ctx)),
        PathExpr::Seq(ps) => list("seq", ps),
        PathExpr::Union(ps) => list("alt", ps),
    }
}

fn render_shape(s: &ShapeExpr, ctx: &DslContext) -> String {
    match s {
        ShapeExpr::Top => "top".into(),
        ShapeExpr::Concept(c) => format!("(class {})", ctx.render_iri(c)),
        ShapeExpr::Individual(t) => format!("(ind {})", ctx.render_individual(t)),
        ShapeExpr::And(ps) => {
            let parts: Vec<String> = ps.iter().map(|p| render_shape(p, ctx)).collect();
            format!("(and {})", parts.join(" "))
        }
        ShapeExpr::Not(inner) => format!("(not {})", render_shape(inner, ctx)),
        ShapeExpr::Geq { n, path, filler } => {
            format!("(geq {n} {} {})", render_path(path, ctx), render_shape(filler, ctx))
        }
        ShapeExpr::Forall { path, filler } => format!("(all {} {})", render_path(path, ctx), render_shape(filler, ctx)),
        ShapeExpr::PathEq(l, r) => format!("(eq {} {})", render_path(l, ctx), render_path(r, ctx)),
    }
}

/// Renders constraints in the form `parse_shape_dsl` reads. Ids are not
/// part of the syntax and are reassigned on parsing.
pub fn render_shape_dsl(constraints: &[Constraint], ctx: &DslContext) -> String {
    constraints
        .iter()
        .map(|c| format!("(constraint {} {})\n", ctx.render_iri(&c.head), render_shape(&c.body, ctx)))
        .collect()
}

/// Concepts and roles a constraint mentions.
pub fn constraint_names(c: &Constraint) -> (BTreeSet<&str>, BTreeSet<&str>) {
    let mut concepts = BTreeSet::from([c.head.as_str()]);
    let mut roles = BTreeSet::new();
    c.body.visit(&mut concepts, &mut roles);
    (concepts, roles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Assertion;
    use proptest::prelude::*;

    fn ns() -> Namespaces {
        Namespaces::default()
    }

    fn ex(s: &str) -> Term {
        Term::iri(format!("http://e.o/{s}")).unwrap()
    }

    fn names(set: &BTreeSet<Term>) -> Vec<String> {
        set.iter().map(|t| t.local_name().to_string()).collect()
    }

    #[test]
    fn builtins_are_ten_with_unique_ids() {
        let cs = builtin_constraints(&ns());
        assert_eq!(cs.len(), 10);
        let schema = Schema::new(cs.clone()).unwrap();
        assert_eq!(schema.constraints().len(), 10);
        assert_eq!(cs[9].to_string(), "SafeDesignArgument ← ∃hasSubSDA*.SDAI");
        assert_eq!(
            cs[3].to_string(),
            "ControlledRisk ← hasAnalyzedRisk • hasInitialRiskLevel • hasProbability • gt⁻ • hasProbability⁻ ≠ hasResidualRiskLevel"
        );
        assert!(Schema::new(vec![cs[0].clone(), cs[0].clone()]).is_err());
    }

    #[test]
    fn star_is_reflexive_over_all_nodes() {
        let n = ns();
        let sub = n.rm_term("hasSubSDA");
        let g = Graph::from_assertions([
            Assertion::role(sub.clone(), ex("a"), ex("b")),
            Assertion::role(sub, ex("b"), ex("c")),
            Assertion::concept(n.rm_term("Risk"), ex("z")),
        ]);
        let star = PathExpr::role(n.rm("hasSubSDA")).star();
        assert_eq!(names(&eval_path_from(&g, &star, &ex("a"))), ["a", "b", "c"]);
        assert_eq!(names(&eval_path_from(&g, &star, &ex("z"))), ["z"]);
        assert_eq!(names(&eval_path_from(&g, &star.clone().inverse(), &ex("c"))), ["a", "b", "c"]);
        assert_eq!(eval_path(&g, &star).len(), 4 + 2 + 1);
        assert!(eval_path_from(&g, &star, &ex("missing")).is_empty());
    }

    #[test]
    fn path_equality_and_counting() {
        let n = ns();
        let p = n.rm_term("hasProbability");
        let g = Graph::from_assertions([
            Assertion::role(p.clone(), ex("a"), ex("x")),
            Assertion::role(p.clone(), ex("a"), ex("y")),
            Assertion::role(n.rm_term("hasSeverity"), ex("a"), ex("x")),
        ]);
        let rp = PathExpr::role(n.rm("hasProbability"));
        let rs = PathExpr::role(n.rm("hasSeverity"));
        assert_eq!(names(&eval_shape(&g, &ShapeExpr::geq(2, rp.clone(), ShapeExpr::Top))), ["a"]);
        assert_eq!(names(&eval_shape(&g, &ShapeExpr::exactly_one(rs.clone()))), ["a"]);
        assert!(eval_shape(&g, &ShapeExpr::exactly_one(rp.clone())).is_empty());
        // x and y have no successors on either path
        assert_eq!(names(&eval_shape(&g, &ShapeExpr::path_eq(rp.clone(), rs.clone()))), ["x", "y"]);
        assert_eq!(eval_shape(&g, &ShapeExpr::Top).len(), 3);
        assert_eq!(names(&eval_shape(&g, &ShapeExpr::Individual(ex("y")))), ["y"]);
        assert_eq!(names(&eval_shape(&g, &ShapeExpr::forall(rp, ShapeExpr::Individual(ex("x"))))), ["x", "y"]);
    }

    #[test]
    fn failure_messages() {
        let n = ns();
        let c7 = &builtin_constraints(&n)[9];
        let g = Graph::from_assertions([Assertion::concept(n.rm_term("SafeDesignArgument"), ex("sd2"))]);
        let report = validate(&g, &Schema::new(vec![c7.clone()]).unwrap(), Execution::Sequential);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].message, "no SDAI reachable via hasSubSDA*");
        assert_eq!(report.summaries[0].focus_nodes, 1);

        let c6 = &builtin_constraints(&n)[8];
        let g = Graph::from_assertions([
            Assertion::concept(n.rm_term("RiskLevel"), ex("rl")),
            Assertion::role(n.rm_term("hasProbability"), ex("rl"), ex("p1")),
            Assertion::role(n.rm_term("hasProbability"), ex("rl"), ex("p2")),
        ]);
        let report = validate(&g, &Schema::new(vec![c6.clone()]).unwrap(), Execution::Parallel);
        assert_eq!(report.violations[0].message, "more than one hasProbability");
    }

    #[test]
    fn dsl_examples() {
        let n = ns();
        let ctx = DslContext::new(&n);
        let mut vocab = Vocabulary::riskman(&n);
        vocab.declare_concept(&n.rm("CriticalRiskLevel"));
        let cs = parse_shape_dsl(
            "(constraint ControlledRisk (not (some (path hasResidualRiskLevel) (class CriticalRiskLevel))))",
            &ctx,
            &vocab,
        )
        .unwrap();
        assert_eq!(cs[0].id, "E1.ControlledRisk");
        assert_eq!(cs[0].to_string(), "ControlledRisk ← ¬∃hasResidualRiskLevel.CriticalRiskLevel");

        let cs = parse_shape_dsl(
            "(constraint RiskLevel (and (geq 1 (path hasProbability) top) (not (geq 2 (path hasProbability) top))))",
            &ctx,
            &vocab,
        )
        .unwrap();
        let c6 = &builtin_constraints(&n)[8];
        assert_eq!(&cs[0].body, &ShapeExpr::and(c6.body.conjuncts()[..2].to_vec()));

        assert!(matches!(parse_shape_dsl("(constraint Risk (eq (path nope) hasHarm))", &ctx, &vocab), Err(DslError::UnknownName(_))));
        assert!(matches!(parse_shape_dsl("(constraint Nope top)", &ctx, &vocab), Err(DslError::UnknownName(_))));
        assert!(matches!(parse_shape_dsl("(constraint Risk (geq 0 hasHarm top))", &ctx, &vocab), Err(DslError::Syntax { .. })));
        let cs = parse_shape_dsl("(constraint Risk (eq (path hasHarm) (seq hasHarm)))", &ctx, &vocab).unwrap();
        assert!(matches!(cs[0].body, ShapeExpr::PathEq(..)));
    }

    #[test]
    fn builtins_round_trip_through_dsl() {
        let n = ns();
        let ctx = DslContext::new(&n);
        let cs = builtin_constraints(&n);
        let back = parse_shape_dsl(&render_shape_dsl(&cs, &ctx), &ctx, &Vocabulary::riskman(&n)).unwrap();
        let bodies: Vec<_> = back.iter().map(|c| (&c.head, &c.body)).collect();
        assert_eq!(bodies, cs.iter().map(|c| (&c.head, &c.body)).collect::<Vec<_>>());
    }

    fn arb_path() -> impl Strategy<Value = PathExpr> {
        let n = ns();
        let leaf = prop::sample::select(vec!["hasSubSDA", "hasHarm", "gt"]).prop_map(move |r| PathExpr::role(n.rm(r)));
        leaf.prop_recursive(3, 12, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(PathExpr::inverse),
                inner.clone().prop_map(PathExpr::star),
                prop::collection::vec(inner.clone(), 2..4).prop_map(PathExpr::Seq),
                prop::collection::vec(inner, 2..4).prop_map(PathExpr::Union),
            ]
        })
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        let n = ns();
        let roles = ["hasSubSDA", "hasHarm", "gt"];
        prop::collection::vec((0..3usize, 0..8u8, 0..8u8), 0..20).prop_map(move |es| {
            Graph::from_assertions(
                es.into_iter().map(|(r, a, b)| Assertion::role(n.rm_term(roles[r]), ex(&format!("n{a}")), ex(&format!("n{b}")))),
            )
        })
    }

    proptest! {
        #[test]
        fn from_agrees_with_relation(g in arb_graph(), e in arb_path()) {
            let rel = eval_path(&g, &e);
            for a in g.nodes() {
                let expected: BTreeSet<Term> = rel.iter().filter(|(x, _)| *x == a).map(|(_, y)| y.clone()).collect();
                prop_assert_eq!(eval_path_from(&g, &e, &a), expected);
            }
        }

        #[test]
        fn inverse_swaps_pairs(g in arb_graph(), e in arb_path()) {
            let fwd = eval_path(&g, &e);
            let inv: BTreeSet<(Term, Term)> = eval_path(&g, &e.clone().inverse()).into_iter().map(|(a, b)| (b, a)).collect();
            prop_assert_eq!(fwd, inv);
        }
    }
}
