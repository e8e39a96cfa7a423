//! End-to-end runs: ingest submissions, merge the ontologies, saturate,
//! validate and render the report.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::axioms::{builtin_riskman_ontology, parse_axiom_dsl, render_axiom_dsl, Ontology};
use crate::dsl::DslContext;
use crate::error::{Error, ReasonerError, Result};
use crate::exec::Execution;
use crate::graph::Graph;
use crate::ingest::{
    render_rdfa_html, triples_to_abox, triples_to_ntriples, write_ntriples, write_turtle, Format, Triple, TripleDoc,
};
use crate::ps::{generate_ps, PsConfig};
use crate::reasoner::{compile_rules, materialize, ClashRecord, Limits, Materialization, Rule, SaturationOptions};
use crate::shapes::{builtin_constraints, parse_shape_dsl, validate, Constraint, ConstraintSummary, Schema, ShapeReport};
use crate::term::{local_name, Assertion};
use crate::vocab::{Namespaces, Vocabulary};

/// Provenance label of the labels added by `assume_risk_sda`.
pub const ASSUME_RISK_SDA: &str = "assume-risk-sda";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown report format `{other}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub inputs: Vec<PathBuf>,
    /// `None` detects the format from each file extension.
    pub format: Option<Format>,
    /// `None` disables the probability-severity ontology.
    pub ps: Option<PsConfig>,
    pub extra_ontologies: Vec<PathBuf>,
    pub extra_shapes: Vec<PathBuf>,
    /// Extra DSL and output prefixes. `rm` and `ps` remap the vocabulary
    /// and magnitude namespaces.
    pub prefixes: BTreeMap<String, String>,
    pub emit_materialized: Option<PathBuf>,
    pub report_format: ReportFormat,
    /// Label every SafeDesignArgument that is not an AssuranceSDA as RiskSDA.
    pub assume_risk_sda: bool,
    pub limits: Limits,
    pub execution: Execution,
    /// Zero the elapsed time so reports are byte-identical across runs.
    pub deterministic: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            inputs: Vec::new(),
            format: None,
            ps: Some(PsConfig::default()),
            extra_ontologies: Vec::new(),
            extra_shapes: Vec::new(),
            prefixes: BTreeMap::new(),
            emit_materialized: None,
            report_format: ReportFormat::Text,
            assume_risk_sda: false,
            limits: Limits::default(),
            execution: Execution::default(),
            deterministic: false,
        }
    }
}

impl PipelineConfig {
    pub fn namespaces(&self) -> Namespaces {
        let mut ns = Namespaces::default();
        if let Some(rm) = self.prefixes.get("rm") {
            ns.riskman = rm.clone();
        }
        if let Some(ps) = self.prefixes.get("ps") {
            ns.ps = ps.clone();
        }
        ns
    }

    pub fn dsl_context(&self) -> DslContext {
        let mut ctx = DslContext::new(&self.namespaces());
        ctx.prefixes.extend(self.prefixes.iter().map(|(k, v)| (k.clone(), v.clone())));
        ctx
    }

    fn saturation_options(&self) -> SaturationOptions {
        SaturationOptions { limits: self.limits, execution: self.execution }
    }
}

pub(crate) fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub(crate) fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// Parses one submission file. The base IRI is the file's `file://` URL.
pub fn parse_input(path: &Path, format: Option<Format>, ns: &Namespaces) -> Result<TripleDoc> {
    let format = format
        .or_else(|| Format::from_path(path))
        .ok_or_else(|| Error::Usage(format!("{}: cannot detect the format, use --format", path.display())))?;
    let text = read_file(path)?;
    let abs = std::path::absolute(path).unwrap_or_else(|_| path.to_path_buf());
    let base = format!("file://{}", abs.display());
    format.parse(&text, ns, Some(&base)).map_err(|source| Error::Parse { path: path.to_path_buf(), source })
}

#[derive(Clone, Debug, Default)]
pub struct Ingested {
    pub graph: Graph,
    /// Triples outside the vocabulary.
    pub leftover: Vec<Triple>,
    pub warnings: Vec<String>,
}

/// Parses all inputs (concurrently under `Parallel`), renames blank nodes
/// per file and maps the merged triples onto assertions over `vocab`.
pub fn ingest(
    paths: &[PathBuf],
    format: Option<Format>,
    ns: &Namespaces,
    vocab: &Vocabulary,
    exec: Execution,
) -> Result<Ingested> {
    let docs = exec.map(paths, |p| parse_input(p, format, ns));
    let mut merged = TripleDoc::default();
    let mut warnings = Vec::new();
    for (i, (doc, path)) in docs.into_iter().zip(paths).enumerate() {
        let mut doc = doc?;
        doc.skolemize(&format!("d{i}"));
        warnings.extend(doc.warnings.iter().map(|w| format!("{}: {w}", path.display())));
        merged.triples.append(&mut doc.triples);
    }
    let mapping = triples_to_abox(&merged, vocab)?;
    Ok(Ingested { graph: mapping.graph, leftover: mapping.leftover, warnings })
}

/// Built-in ontology, then PS(π, σ) unless disabled, then the extra axiom files.
pub fn build_ontology(config: &PipelineConfig, ctx: &DslContext) -> Result<Ontology> {
    let ns = &ctx.namespaces;
    let mut ontology = builtin_riskman_ontology(ns);
    if let Some(ps) = config.ps {
        let ps = generate_ps(ps, ns)?;
        ontology.merge(ps.into_ontology(ns)).map_err(|source| Error::Dsl { path: "<ps>".into(), source })?;
    }
    for path in &config.extra_ontologies {
        let dsl = |source| Error::Dsl { path: path.clone(), source };
        for axiom in parse_axiom_dsl(&read_file(path)?, ctx).map_err(dsl)? {
            ontology.add_axiom(axiom).map_err(dsl)?;
        }
    }
    Ok(ontology)
}

/// Built-in constraints followed by the extra shape files. Extension
/// constraints are numbered `E1`, `E2`, … across all files.
pub fn build_schema(config: &PipelineConfig, ctx: &DslContext, vocab: &Vocabulary) -> Result<Schema> {
    let mut constraints = builtin_constraints(&ctx.namespaces);
    let mut k = 0;
    for path in &config.extra_shapes {
        let parsed = parse_shape_dsl(&read_file(path)?, ctx, vocab)
            .map_err(|source| Error::Dsl { path: path.clone(), source })?;
        for mut c in parsed {
            k += 1;
            c.id = format!("E{k}.{}", local_name(&c.head));
            constraints.push(c);
        }
    }
    Schema::new(constraints).map_err(|id| Error::Usage(format!("duplicate constraint id {id}")))
}

/// Saturates the submission together with the ontology's ABox constants.
pub fn saturate(submission: &Graph, ontology: &Ontology, config: &PipelineConfig) -> Result<(Materialization, Vec<Rule>)> {
    let mut g = submission.clone();
    for a in &ontology.abox_constants {
        g.add_assertion(a.clone());
    }
    let rules = compile_rules(ontology).map_err(ReasonerError::from)?;
    let options = config.saturation_options();
    let mut m = materialize(&g, &rules, &options)?;
    if config.assume_risk_sda {
        let ns = &config.namespaces();
        let sda = ns.rm_term("SafeDesignArgument");
        let assurance = ns.rm_term("AssuranceSDA");
        let assured = m.closure.instances(&assurance);
        let extra: Vec<Assertion> = m
            .closure
            .instances(&sda)
            .into_iter()
            .filter(|x| !assured.contains(x))
            .map(|x| Assertion::concept(ns.rm_term("RiskSDA"), x))
            .collect();
        m = m.extend(extra, ASSUME_RISK_SDA, &rules, &options)?;
    }
    Ok((m, rules))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportViolation {
    pub constraint: String,
    pub focus: String,
    pub variant: Option<String>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportClash {
    pub individual: String,
    pub concepts: [String; 2],
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportStats {
    pub input_assertions: usize,
    pub derived_assertions: usize,
    pub iterations: usize,
    pub leftover_triples: usize,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub conforms: bool,
    pub inconsistent: bool,
    pub violations: Vec<ReportViolation>,
    pub clashes: Vec<ReportClash>,
    pub stats: ReportStats,
}

impl ValidationReport {
    pub fn new(shapes: &ShapeReport, clashes: &[ClashRecord], stats: ReportStats) -> Self {
        let violations: Vec<ReportViolation> = shapes
            .violations
            .iter()
            .map(|v| ReportViolation {
                constraint: v.constraint.clone(),
                focus: v.focus.report_id(),
                variant: v.variant.clone(),
                message: v.message.clone(),
            })
            .collect();
        let clashes: Vec<ReportClash> = clashes
            .iter()
            .map(|c| ReportClash {
                individual: c.individual.report_id(),
                concepts: [c.concepts.0.clone(), c.concepts.1.clone()],
            })
            .collect();
        ValidationReport { conforms: violations.is_empty(), inconsistent: !clashes.is_empty(), violations, clashes, stats }
    }

    /// 3 on a clash, else 1 on violations, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.inconsistent {
            3
        } else if !self.conforms {
            1
        } else {
            0
        }
    }
}

#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub report: ValidationReport,
    pub summaries: Vec<ConstraintSummary>,
    pub materialization: Materialization,
    pub rules: Vec<Rule>,
    pub leftover: Vec<Triple>,
    pub warnings: Vec<String>,
}

impl PipelineRun {
    pub fn exit_code(&self) -> i32 {
        self.report.exit_code()
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Text => render_report_text(&self.report, &self.summaries),
            ReportFormat::Json => render_report_json(&self.report),
        }
    }
}

/// Saturates and validates already ingested data.
pub fn check(ingested: Ingested, ontology: &Ontology, schema: &Schema, config: &PipelineConfig) -> Result<PipelineRun> {
    let start = Instant::now();
    let (materialization, rules) = saturate(&ingested.graph, ontology, config)?;
    let shapes = validate(&materialization.closure, schema, config.execution);
    let elapsed_ms = if config.deterministic { 0 } else { start.elapsed().as_millis() as u64 };
    let stats = ReportStats {
        input_assertions: materialization.stats.input_assertions,
        derived_assertions: materialization.stats.derived_assertions,
        iterations: materialization.stats.iterations,
        leftover_triples: ingested.leftover.len(),
        elapsed_ms,
    };
    let report = ValidationReport::new(&shapes, &materialization.clashes, stats);
    Ok(PipelineRun {
        report,
        summaries: shapes.summaries,
        materialization,
        rules,
        leftover: ingested.leftover,
        warnings: ingested.warnings,
    })
}

/// The whole pipeline over `config.inputs`; also writes the closure when
/// `emit_materialized` is set.
pub fn run_validate(config: &PipelineConfig) -> Result<PipelineRun> {
    if config.inputs.is_empty() {
        return Err(Error::Usage("no input files".into()));
    }
    let ctx = config.dsl_context();
    let ontology = build_ontology(config, &ctx)?;
    let schema = build_schema(config, &ctx, &ontology.vocabulary)?;
    let ingested = ingest(&config.inputs, config.format, &ctx.namespaces, &ontology.vocabulary, config.execution)?;
    let run = check(ingested, &ontology, &schema, config)?;
    if let Some(path) = &config.emit_materialized {
        write_graph(path, &run.materialization.closure, &ctx.prefixes)?;
    }
    Ok(run)
}

/// Ingests and saturates without validating.
pub fn run_materialize(config: &PipelineConfig) -> Result<(Materialization, Vec<Rule>, Ingested)> {
    if config.inputs.is_empty() {
        return Err(Error::Usage("no input files".into()));
    }
    let ctx = config.dsl_context();
    let ontology = build_ontology(config, &ctx)?;
    let ingested = ingest(&config.inputs, config.format, &ctx.namespaces, &ontology.vocabulary, config.execution)?;
    let (m, rules) = saturate(&ingested.graph, &ontology, config)?;
    Ok((m, rules, ingested))
}

/// Writes a graph as Turtle (`.ttl`), RDFa HTML (`.html`/`.htm`) or
/// N-Triples (anything else).
pub fn write_graph(path: &Path, graph: &Graph, prefixes: &BTreeMap<String, String>) -> Result<()> {
    let text = match Format::from_path(path) {
        Some(Format::Turtle) => write_turtle(graph, prefixes),
        Some(Format::RdfaHtml) => render_rdfa_html(graph, prefixes, "Materialized risk graph"),
        _ => write_ntriples(graph),
    };
    write_file(path, &text)
}

/// One line per derived assertion: the assertion in N-Triples, the rule id
/// and the axiom it came from, tab separated.
pub fn render_provenance(m: &Materialization, rules: &[Rule]) -> String {
    let sources: BTreeMap<&str, &str> = rules.iter().map(|r| (r.id.as_str(), r.source.as_str())).collect();
    let mut out = String::new();
    for (a, rule) in m.provenance() {
        let (s, p, o) = a.to_triple();
        let source = sources.get(rule).copied().unwrap_or("SafeDesignArgument not inferred AssuranceSDA");
        let _ = writeln!(out, "{s} {p} {o} .\t{rule}\t{source}");
    }
    out
}

/// PS(π, σ) as an axiom-DSL file and its ABox (with labels) as N-Triples.
pub fn render_ps(config: PsConfig, ctx: &DslContext) -> Result<(String, String)> {
    let ps = generate_ps(config, &ctx.namespaces)?;
    let mut dsl = format!("; PS({}, {}): magnitude multiplication and the gt ordering\n", config.pi, config.sigma);
    dsl.push_str(&render_axiom_dsl(&ps.tbox, ctx));
    let mut triples: Vec<Triple> = ps.abox.iter().map(Assertion::to_triple).collect();
    triples.extend(ps.labels.iter().cloned());
    Ok((dsl, triples_to_ntriples(&triples)))
}

/// Distills an RDFa page into N-Triples, in document order.
pub fn distill_file(path: &Path, ns: &Namespaces) -> Result<(String, Vec<String>)> {
    let doc = parse_input(path, Some(Format::RdfaHtml), ns)?;
    Ok((triples_to_ntriples(&doc.triples), doc.warnings))
}

/// Human-readable report: status, clashes, violations grouped by
/// constraint (one line per focus node), per-constraint focus counts and
/// saturation statistics. Contains no timing.
pub fn render_report_text(report: &ValidationReport, summaries: &[ConstraintSummary]) -> String {
    let heads: BTreeMap<&str, &str> = summaries.iter().map(|s| (s.id.as_str(), local_name(&s.head))).collect();
    let short = |id: &str| {
        if id.starts_with("_:") {
            id.to_string()
        } else {
            local_name(id).to_string()
        }
    };
    let mut out = String::new();
    let _ = writeln!(out, "RISKMAN validation report");
    if report.conforms {
        let _ = writeln!(out, "result: CONFORMS");
    } else {
        let _ = writeln!(out, "result: VIOLATIONS ({})", report.violations.len());
    }
    if report.inconsistent {
        let _ = writeln!(out, "consistency: INCONSISTENT ({} clash(es))", report.clashes.len());
        for c in &report.clashes {
            let _ = writeln!(
                out,
                "clash {}: {} and {}",
                short(&c.individual),
                local_name(&c.concepts[0]),
                local_name(&c.concepts[1])
            );
        }
    } else {
        let _ = writeln!(out, "consistency: consistent");
    }
    let mut last: Option<&str> = None;
    for v in &report.violations {
        if last != Some(v.constraint.as_str()) {
            out.push('\n');
            last = Some(&v.constraint);
        }
        let head = heads.get(v.constraint.as_str()).copied().unwrap_or("?");
        let _ = writeln!(out, "{} {head} {}: {}", v.constraint, short(&v.focus), v.message);
    }
    if !summaries.is_empty() {
        let _ = writeln!(out, "\nconstraints:");
        for s in summaries {
            let _ = writeln!(
                out,
                "  {} {}: {} focus node(s), {} violation(s)",
                s.id,
                local_name(&s.head),
                s.focus_nodes,
                s.violations
            );
        }
    }
    let st = &report.stats;
    let _ = writeln!(
        out,
        "\nstats: {} input assertions, {} derived, {} iterations, {} leftover triples",
        st.input_assertions, st.derived_assertions, st.iterations, st.leftover_triples
    );
    out
}

pub fn render_report_json(report: &ValidationReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report is plain data");
    s.push('\n');
    s
}

pub fn parse_report_json(text: &str) -> Result<ValidationReport, serde_json::Error> {
    serde_json::from_str(text)
}

/// Constraints from built-ins plus DSL text, numbered as `build_schema` does.
pub fn schema_with_extensions(ns: &Namespaces, vocab: &Vocabulary, shapes_dsl: &[&str]) -> Result<Schema, crate::error::DslError> {
    let ctx = DslContext::new(ns);
    let mut constraints: Vec<Constraint> = builtin_constraints(ns);
    let mut k = 0;
    for text in shapes_dsl {
        for mut c in parse_shape_dsl(text, &ctx, vocab)? {
            k += 1;
            c.id = format!("E{k}.{}", local_name(&c.head));
            constraints.push(c);
        }
    }
    Ok(Schema::new(constraints).expect("numbered ids are unique"))
}
