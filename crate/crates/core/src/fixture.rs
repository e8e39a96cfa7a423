//! The infusion-pump controlled risk used as the golden example, the
//! mutation suite built on it and the CriticalRiskLevel extension.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ingest::{render_rdfa_html, standard_prefixes, write_ntriples, write_turtle};
use crate::ps::{probability, severity};
use crate::term::{Assertion, Term, RDFS_NS};
use crate::vocab::Namespaces;

pub const FIXTURE_NS: &str = "https://example.org/infusion-pump#";
pub const FIXTURE_PREFIX: &str = "ex";

/// Asserted role edges (subject, role, object). Objects named `p*`/`s*` are
/// magnitude individuals.
const EDGES: [(&str, &str, &str); 30] = [
    ("cr", "isMitigatedBy", "sd0"),
    ("cr", "hasAnalyzedRisk", "ar"),
    ("cr", "hasResidualRiskLevel", "rrl"),
    ("rrl", "hasProbability", "p3"),
    ("rrl", "hasSeverity", "s4"),
    ("ar", "hasInitialRiskLevel", "irl"),
    ("ar", "hasDomainSpecificHazard", "dsh"),
    ("ar", "hasHazardousSituation", "hs"),
    ("ar", "hasDeviceContext", "dcx"),
    ("ar", "hasPatientProblem", "pp"),
    ("ar", "hasHarm", "hr"),
    ("irl", "hasProbability1", "p5"),
    ("irl", "hasProbability2", "p4"),
    ("irl", "hasSeverity", "s4"),
    ("dsh", "hasDeviceProblem", "dp"),
    ("dsh", "hasDeviceFunction", "df"),
    ("dsh", "hasDeviceComponent", "dcm"),
    ("dsh", "hasHazard", "hz"),
    ("hs", "hasEvent", "ev2"),
    ("ev2", "hasPrecedingEvent", "ev1"),
    ("sd0", "hasSubSDA", "sd1"),
    ("sd0", "hasSubSDA", "sd2"),
    ("sd0", "hasSubSDA", "sd3"),
    ("sd3", "hasSubSDA", "sd4"),
    ("sd3", "hasSubSDA", "sd5"),
    ("sd1", "hasImplementationManifest", "im1"),
    ("sd2", "hasImplementationManifest", "im2"),
    ("sd4", "hasImplementationManifest", "im4"),
    ("sd5", "hasImplementationManifest", "im5"),
    ("sd5", "hasSafetyAssurance", "sa"),
];

/// Individuals of the example, magnitudes included.
pub const INDIVIDUALS: [&str; 30] = [
    "cr", "ar", "dsh", "hz", "dcm", "df", "dp", "hr", "pp", "dcx", "hs", "ev1", "ev2", "irl", "rrl", "sd0", "sd1", "sd2",
    "sd3", "sd4", "sd5", "im1", "im2", "im4", "im5", "sa", "p3", "p4", "p5", "s4",
];

/// Resolves an example name: `p{i}`/`s{i}` are magnitudes, everything else
/// lives in the example namespace.
pub fn node(ns: &Namespaces, name: &str) -> Term {
    let magnitude = |prefix: char| name.strip_prefix(prefix).and_then(|d| d.parse::<u32>().ok()).filter(|&i| i >= 1);
    if let Some(i) = magnitude('p') {
        probability(ns, i)
    } else if let Some(i) = magnitude('s') {
        severity(ns, i)
    } else {
        Term::iri_unchecked(&format!("{FIXTURE_NS}{name}"))
    }
}

pub fn role(ns: &Namespaces, s: &str, r: &str, o: &str) -> Assertion {
    Assertion::role(ns.rm_term(r), node(ns, s), node(ns, o))
}

pub fn concept(ns: &Namespaces, c: &str, x: &str) -> Assertion {
    Assertion::concept(ns.rm_term(c), node(ns, x))
}

#[derive(Clone, Debug)]
pub struct InfusionPump {
    /// Role assertions and IMDRF code annotations only; every class label
    /// is left to the reasoner.
    pub submission: Graph,
    /// Inferred assertions over the example's individuals, excluding the
    /// magnitude constants contributed by the probability-severity ontology.
    pub expected_delta: Vec<Assertion>,
}

pub fn fixture_infusion_pump(ns: &Namespaces) -> InfusionPump {
    let mut submission = Graph::from_assertions(EDGES.iter().map(|(s, r, o)| role(ns, s, r, o)));
    let comment = Term::iri_unchecked(&format!("{RDFS_NS}comment"));
    submission.add_literal_triple(node(ns, "dp"), comment.clone(), Term::literal("Defective Alarm (IMDRF A160106)"));
    submission.add_literal_triple(node(ns, "pp"), comment, Term::literal("Loss of consciousness (IMDRF E0119)"));

    let labels: [(&str, &[&str]); 20] = [
        ("AnalyzedRisk", &["ar"]),
        ("ControlledRisk", &["cr"]),
        ("Risk", &["ar", "cr"]),
        ("SafeDesignArgument", &["sd0", "sd1", "sd2", "sd3", "sd4", "sd5"]),
        ("SDAI", &["sd1", "sd2", "sd4", "sd5"]),
        ("AssuranceSDA", &["sd5"]),
        ("AssuranceSDAI", &["sd5"]),
        ("HazardousSituation", &["hs"]),
        ("Event", &["ev1", "ev2"]),
        ("RiskLevel", &["irl", "rrl"]),
        ("DeviceContext", &["dcx"]),
        ("Harm", &["hr"]),
        ("PatientProblem", &["pp"]),
        ("DomainSpecificHazard", &["dsh"]),
        ("Hazard", &["hz"]),
        ("DeviceComponent", &["dcm"]),
        ("DeviceFunction", &["df"]),
        ("DeviceProblem", &["dp"]),
        ("ImplementationManifest", &["im1", "im2", "im4", "im5"]),
        ("SafetyAssurance", &["sa"]),
    ];
    let mut expected_delta: Vec<Assertion> =
        labels.iter().flat_map(|(c, xs)| xs.iter().map(move |x| concept(ns, c, x))).collect();
    expected_delta.extend([
        role(ns, "cr", "hasHarm", "hr"),
        role(ns, "cr", "hasRiskLevel", "rrl"),
        role(ns, "ar", "hasRiskLevel", "irl"),
        role(ns, "irl", "hasProbability", "p4"),
        role(ns, "p5", "gt", "p3"),
    ]);
    expected_delta.sort();
    expected_delta.dedup();
    InfusionPump { submission, expected_delta }
}

/// Turtle prefixes for writing the example: the standard ones plus `ex`.
pub fn fixture_prefixes(ns: &Namespaces) -> std::collections::BTreeMap<String, String> {
    let mut p = standard_prefixes(ns);
    p.insert(FIXTURE_PREFIX.into(), FIXTURE_NS.into());
    p
}

/// Writes `infusion-pump.{nt,ttl,html}` into `dir` (created if missing).
pub fn write_fixture_files(dir: &Path, ns: &Namespaces) -> Result<Vec<PathBuf>> {
    let io = |path: &Path, e| Error::Io { path: path.to_path_buf(), source: e };
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let graph = fixture_infusion_pump(ns).submission;
    let prefixes = fixture_prefixes(ns);
    let files = [
        ("infusion-pump.nt", write_ntriples(&graph)),
        ("infusion-pump.ttl", write_turtle(&graph, &prefixes)),
        ("infusion-pump.html", render_rdfa_html(&graph, &prefixes, "Infusion pump: controlled risk")),
    ];
    let mut out = Vec::new();
    for (name, text) in files {
        let path = dir.join(name);
        std::fs::write(&path, text).map_err(|e| io(&path, e))?;
        out.push(path);
    }
    Ok(out)
}

/// A named edit of the example submission.
#[derive(Clone, Debug)]
pub struct Mutation {
    pub name: &'static str,
    pub remove: Vec<Assertion>,
    pub add: Vec<Assertion>,
}

impl Mutation {
    pub fn apply(&self, g: &Graph) -> Graph {
        let mut out = Graph::from_assertions(g.assertions().filter(|a| !self.remove.contains(a)).chain(self.add.iter().cloned()));
        for (s, p, o) in g.literal_triples() {
            out.add_literal_triple(s.clone(), p.clone(), o.clone());
        }
        out
    }
}

/// One mutation per built-in constraint (C4 once per variant) plus the
/// disjointness clash.
pub fn mutations(ns: &Namespaces) -> Vec<Mutation> {
    let r = |s, p, o| role(ns, s, p, o);
    let m = |name, remove, add| Mutation { name, remove, add };
    vec![
        m("remove-im2", vec![r("sd2", "hasImplementationManifest", "im2")], vec![]),
        m(
            "assurance-sda-without-assurance",
            vec![r("sd5", "hasSafetyAssurance", "sa")],
            vec![concept(ns, "AssuranceSDA", "sd5")],
        ),
        m("second-harm", vec![], vec![r("ar", "hasHarm", "hr2")]),
        m("second-mitigation", vec![], vec![r("cr", "isMitigatedBy", "sd1")]),
        m("residual-probability-p5", vec![r("rrl", "hasProbability", "p3")], vec![r("rrl", "hasProbability", "p5")]),
        m(
            "residual-probability1-raised",
            vec![r("irl", "hasProbability1", "p5")],
            vec![r("irl", "hasProbability1", "p4"), r("rrl", "hasProbability1", "p5")],
        ),
        m("residual-probability2-raised", vec![], vec![r("rrl", "hasProbability2", "p5")]),
        m("residual-severity-s5", vec![r("rrl", "hasSeverity", "s4")], vec![r("rrl", "hasSeverity", "s5")]),
        m("second-hazard", vec![], vec![r("dsh", "hasHazard", "hz2")]),
        m("remove-residual-severity", vec![r("rrl", "hasSeverity", "s4")], vec![]),
        m("component-is-hazard", vec![], vec![concept(ns, "Hazard", "dcm")]),
    ]
}

/// Axiom file for the extension: a residual probability of p5 together
/// with severity s3 makes a risk level critical.
pub const EXTENSION_AXIOMS_DSL: &str = "\
; critical residual risk levels
(gci (and (some hasProbability (ind p5)) (some hasSeverity (ind s3)))
     (class CriticalRiskLevel))
";

/// Shape file for the extension: no controlled risk may keep a critical
/// residual risk level.
pub const EXTENSION_SHAPES_DSL: &str = "\
(constraint ControlledRisk
  (not (some (path hasResidualRiskLevel) (class CriticalRiskLevel))))
";

/// The example with residual probability p5 and severity s3.
pub fn extension_variant(ns: &Namespaces) -> Graph {
    Mutation {
        name: "critical-residual",
        remove: vec![role(ns, "rrl", "hasProbability", "p3"), role(ns, "rrl", "hasSeverity", "s4")],
        add: vec![role(ns, "rrl", "hasProbability", "p5"), role(ns, "rrl", "hasSeverity", "s3")],
    }
    .apply(&fixture_infusion_pump(ns).submission)
}
