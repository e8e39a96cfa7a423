//! Seeded synthetic submissions shaped like the infusion-pump example, for
//! benchmarks and the desk-scale performance check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::ps::{probability, severity};
use crate::term::{Assertion, Term};
use crate::vocab::Namespaces;

pub const SYNTH_NS: &str = "https://example.org/synthetic#";

const COMPONENTS: usize = 200;
const HAZARDS: usize = 40;

/// `risks` controlled risks, each with its own analyzed risk, risk levels,
/// hazard context, event chain and a random SDA tree. Device components
/// form a shared part-of forest and hazards are drawn from a shared pool.
/// Every risk satisfies the built-in constraints.
pub fn synthetic_corpus(risks: usize, seed: u64, ns: &Namespaces) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new();
    let n = |name: String| Term::iri_unchecked(&format!("{SYNTH_NS}{name}"));
    let roles: Vec<(&str, Term)> = [
        "isMitigatedBy", "hasAnalyzedRisk", "hasResidualRiskLevel", "hasProbability", "hasProbability1",
        "hasProbability2", "hasSeverity", "hasInitialRiskLevel", "hasDomainSpecificHazard", "hasHazardousSituation",
        "hasDeviceContext", "hasPatientProblem", "hasHarm", "hasDeviceProblem", "hasDeviceFunction",
        "hasDeviceComponent", "hasHazard", "hasEvent", "hasPrecedingEvent", "hasSubSDA", "hasImplementationManifest",
        "hasSafetyAssurance", "isPartOfDeviceComponent",
    ]
    .into_iter()
    .map(|r| (r, ns.rm_term(r)))
    .collect();
    let role = |name: &str| roles.iter().find(|(r, _)| *r == name).map(|(_, t)| t.clone()).expect("known role");
    let edge = |g: &mut Graph, r: &str, s: &Term, o: &Term| {
        g.add_assertion(Assertion::role(role(r), s.clone(), o.clone()));
    };

    for c in 1..COMPONENTS {
        let parent = rng.gen_range(0..c);
        edge(&mut g, "isPartOfDeviceComponent", &n(format!("dcm{c}")), &n(format!("dcm{parent}")));
    }

    for i in 0..risks {
        let t = |local: &str| n(format!("{local}_{i}"));
        let (cr, ar, irl, rrl) = (t("cr"), t("ar"), t("irl"), t("rrl"));
        edge(&mut g, "hasAnalyzedRisk", &cr, &ar);
        edge(&mut g, "hasResidualRiskLevel", &cr, &rrl);

        // initial P = P1·P2 and severity; the residual level lowers P strictly
        let p1 = rng.gen_range(3..=5);
        let p2 = rng.gen_range(3..=5);
        let p = crate::ps::multiply_magnitudes(p1, p2, 5).expect("in range");
        let sev = rng.gen_range(1..=5);
        edge(&mut g, "hasProbability1", &irl, &probability(ns, p1));
        edge(&mut g, "hasProbability2", &irl, &probability(ns, p2));
        edge(&mut g, "hasSeverity", &irl, &severity(ns, sev));
        let residual = if p > 1 { rng.gen_range(1..p) } else { 1 };
        edge(&mut g, "hasProbability", &rrl, &probability(ns, residual));
        edge(&mut g, "hasSeverity", &rrl, &severity(ns, sev));

        let dsh = t("dsh");
        edge(&mut g, "hasInitialRiskLevel", &ar, &irl);
        edge(&mut g, "hasDomainSpecificHazard", &ar, &dsh);
        edge(&mut g, "hasDeviceContext", &ar, &t("dcx"));
        edge(&mut g, "hasPatientProblem", &ar, &t("pp"));
        edge(&mut g, "hasHarm", &ar, &t("hr"));
        edge(&mut g, "hasDeviceProblem", &dsh, &t("dp"));
        edge(&mut g, "hasDeviceFunction", &dsh, &t("df"));
        edge(&mut g, "hasDeviceComponent", &dsh, &n(format!("dcm{}", rng.gen_range(0..COMPONENTS))));
        edge(&mut g, "hasHazard", &dsh, &n(format!("hz{}", rng.gen_range(0..HAZARDS))));

        let hs = t("hs");
        edge(&mut g, "hasHazardousSituation", &ar, &hs);
        let events = rng.gen_range(1..=3);
        edge(&mut g, "hasEvent", &hs, &t(&format!("ev{events}")));
        for e in (2..=events).rev() {
            edge(&mut g, "hasPrecedingEvent", &t(&format!("ev{e}")), &t(&format!("ev{}", e - 1)));
        }

        // SDA tree: root → 1..=3 children, each a leaf or a parent of 1..=2 leaves
        let root = t("sd0");
        edge(&mut g, "isMitigatedBy", &cr, &root);
        let mut next = 1;
        let mut leaves = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let child = t(&format!("sd{next}"));
            next += 1;
            edge(&mut g, "hasSubSDA", &root, &child);
            if rng.gen_bool(0.5) {
                leaves.push(child);
            } else {
                for _ in 0..rng.gen_range(1..=2) {
                    let leaf = t(&format!("sd{next}"));
                    next += 1;
                    edge(&mut g, "hasSubSDA", &child, &leaf);
                    leaves.push(leaf);
                }
            }
        }
        for (k, leaf) in leaves.iter().enumerate() {
            edge(&mut g, "hasImplementationManifest", leaf, &t(&format!("im{k}")));
        }
        if rng.gen_bool(0.5) {
            let k = rng.gen_range(0..leaves.len());
            edge(&mut g, "hasSafetyAssurance", &leaves[k], &n(format!("norm{}", rng.gen_range(0..20))));
        }
    }
    g
}
