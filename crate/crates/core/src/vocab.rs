//! The RISKMAN class and property vocabulary.

use std::collections::BTreeSet;

use crate::term::Term;

pub const DEFAULT_RISKMAN_NS: &str = "https://w3id.org/riskman/ontology#";
pub const DEFAULT_PS_NS: &str = "https://w3id.org/riskman/ps#";

/// Namespaces for the vocabulary and for generated magnitude individuals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Namespaces {
    pub riskman: String,
    pub ps: String,
}

impl Default for Namespaces {
    fn default() -> Self {
        Namespaces { riskman: DEFAULT_RISKMAN_NS.to_string(), ps: DEFAULT_PS_NS.to_string() }
    }
}

impl Namespaces {
    pub fn rm(&self, local: &str) -> String {
        format!("{}{local}", self.riskman)
    }

    pub fn rm_term(&self, local: &str) -> Term {
        Term::iri_unchecked(&self.rm(local))
    }
}

pub const CONCEPT_NAMES: [&str; 24] = [
    "AnalyzedRisk",
    "AssuranceSDA",
    "AssuranceSDAI",
    "ControlledRisk",
    "DeviceComponent",
    "DeviceContext",
    "DeviceFunction",
    "DeviceProblem",
    "DomainSpecificHazard",
    "Event",
    "Harm",
    "Hazard",
    "HazardousSituation",
    "ImplementationManifest",
    "PatientProblem",
    "Probability",
    "Risk",
    "RiskLevel",
    "RiskSDA",
    "RiskSDAI",
    "SafeDesignArgument",
    "SafetyAssurance",
    "SDAI",
    "Severity",
];

pub const ROLE_NAMES: [&str; 28] = [
    "hasAnalyzedRisk",
    "hasDeviceComponent",
    "hasDeviceContext",
    "hasDeviceFunction",
    "hasDeviceProblem",
    "hasDomainSpecificHazard",
    "hasEvent",
    "hasHarm",
    "hasHazard",
    "hasHazardousSituation",
    "hasImplementationManifest",
    "hasInitialRiskLevel",
    "hasParentHazard",
    "hasParentSituation",
    "hasPatientProblem",
    "hasPrecedingEvent",
    "hasProbability",
    "hasProbability1",
    "hasProbability2",
    "hasResidualRiskLevel",
    "hasRiskLevel",
    "hasSafetyAssurance",
    "hasSeverity",
    "hasSubSDA",
    "isMitigatedBy",
    "isPartOfDeviceComponent",
    "causesHarm",
    "gt",
];

/// Concept and role names (full IRIs). The two sets are disjoint.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    pub concept_names: BTreeSet<String>,
    pub role_names: BTreeSet<String>,
}

impl Vocabulary {
    pub fn riskman(ns: &Namespaces) -> Self {
        Vocabulary {
            concept_names: CONCEPT_NAMES.iter().map(|c| ns.rm(c)).collect(),
            role_names: ROLE_NAMES.iter().map(|r| ns.rm(r)).collect(),
        }
    }

    pub fn is_concept(&self, iri: &str) -> bool {
        self.concept_names.contains(iri)
    }

    pub fn is_role(&self, iri: &str) -> bool {
        self.role_names.contains(iri)
    }

    /// Adds a concept name; fails if it is already a role name.
    pub fn declare_concept(&mut self, iri: &str) -> bool {
        if self.role_names.contains(iri) {
            return false;
        }
        self.concept_names.insert(iri.to_string());
        true
    }

    pub fn declare_role(&mut self, iri: &str) -> bool {
        if self.concept_names.contains(iri) {
            return false;
        }
        self.role_names.insert(iri.to_string());
        true
    }
}
