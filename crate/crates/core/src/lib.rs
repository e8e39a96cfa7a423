//! Ingestion, EL materialization and shape validation for RISKMAN
//! risk-management graphs.

pub mod axioms;
mod dsl;
pub mod error;
pub mod exec;
pub mod fixture;
pub mod graph;
pub mod ingest;
mod lex;
pub mod pipeline;
pub mod ps;
pub mod reasoner;
pub mod shapes;
pub mod synth;
pub mod term;
pub mod vocab;

pub use dsl::DslContext;
pub use error::{Error, Result};
pub use exec::Execution;
pub use graph::Graph;
pub use term::{Assertion, Term, TermKind};
pub use vocab::{Namespaces, Vocabulary};
