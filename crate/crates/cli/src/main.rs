//! `riskman`: validate risk-management submissions against the RISKMAN
//! ontology and constraints.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use riskman::fixture::write_fixture_files;
use riskman::ingest::Format;
use riskman::pipeline::{
    distill_file, render_provenance, render_ps, run_materialize, run_validate, write_graph, PipelineConfig,
    ReportFormat,
};
use riskman::ps::PsConfig;
use riskman::reasoner::Limits;
use riskman::{Execution, Namespaces};

#[derive(Parser)]
#[command(name = "riskman", version, about = "Materialize and validate RISKMAN risk-management graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Saturate the inputs and check them against the constraints.
    Validate {
        #[command(flatten)]
        ingest: IngestArgs,
        #[arg(long, value_name = "FILE")]
        shapes_extra: Vec<PathBuf>,
        /// Write the closure (.nt, .ttl or .html).
        #[arg(long, value_name = "FILE")]
        emit_materialized: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ReportArg::Text)]
        report: ReportArg,
        /// Report elapsed_ms as 0 so repeated runs are byte-identical.
        #[arg(long)]
        deterministic: bool,
    },
    /// Saturate the inputs and write the closure.
    Materialize {
        #[command(flatten)]
        ingest: IngestArgs,
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
        /// Write one line per derived assertion with the rule that produced it.
        #[arg(long, value_name = "FILE")]
        emit_provenance: Option<PathBuf>,
    },
    /// Write PS(π, σ) as axiom DSL to FILE and its ABox to FILE.nt.
    PsGen {
        #[arg(long, default_value_t = 5)]
        pi: u32,
        #[arg(long, default_value_t = 5)]
        sigma: u32,
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
    /// Extract the RDFa statements of an HTML page as N-Triples.
    Distill {
        input: PathBuf,
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
    /// Write the infusion-pump example as .nt, .ttl and .html.
    Fixture {
        #[arg(short, long, value_name = "DIR")]
        output: PathBuf,
    },
}

#[derive(Args)]
struct IngestArgs {
    #[arg(required = true, value_name = "INPUT")]
    inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    format: FormatArg,
    #[arg(long, default_value_t = 5)]
    pi: u32,
    #[arg(long, default_value_t = 5)]
    sigma: u32,
    /// Leave out the probability-severity ontology.
    #[arg(long)]
    no_ps: bool,
    #[arg(long, value_name = "FILE")]
    ontology_extra: Vec<PathBuf>,
    /// PFX=IRI; `rm` and `ps` rebind the vocabulary and magnitude namespaces.
    #[arg(long, value_name = "PFX=IRI", value_parser = parse_prefix)]
    prefix: Vec<(String, String)>,
    /// Label every SafeDesignArgument not inferred AssuranceSDA as RiskSDA.
    #[arg(long)]
    assume_risk_sda: bool,
    #[arg(long, value_name = "N")]
    max_assertions: Option<usize>,
    #[arg(long, value_name = "N")]
    max_seconds: Option<u64>,
    /// Run on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Auto,
    Ntriples,
    Turtle,
    RdfaHtml,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportArg {
    Text,
    Json,
}

fn parse_prefix(s: &str) -> Result<(String, String), String> {
    let (pfx, iri) = s.split_once('=').ok_or_else(|| format!("expected PFX=IRI, got `{s}`"))?;
    if pfx.is_empty() || iri.is_empty() {
        return Err(format!("expected PFX=IRI, got `{s}`"));
    }
    Ok((pfx.to_string(), iri.to_string()))
}

impl IngestArgs {
    fn config(self) -> anyhow::Result<PipelineConfig> {
        let defaults = Limits::default();
        Ok(PipelineConfig {
            inputs: self.inputs,
            format: match self.format {
                FormatArg::Auto => None,
                FormatArg::Ntriples => Some(Format::NTriples),
                FormatArg::Turtle => Some(Format::Turtle),
                FormatArg::RdfaHtml => Some(Format::RdfaHtml),
            },
            ps: if self.no_ps { None } else { Some(PsConfig::new(self.pi, self.sigma)?) },
            extra_ontologies: self.ontology_extra,
            prefixes: self.prefix.into_iter().collect(),
            assume_risk_sda: self.assume_risk_sda,
            limits: Limits {
                max_assertions: self.max_assertions.unwrap_or(defaults.max_assertions),
                max_duration: self.max_seconds.map(Duration::from_secs).unwrap_or(defaults.max_duration),
            },
            execution: if self.sequential { Execution::Sequential } else { Execution::default() },
            ..PipelineConfig::default()
        })
    }
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Validate { ingest, shapes_extra, emit_materialized, report, deterministic } => {
            let report_format = match report {
                ReportArg::Text => ReportFormat::Text,
                ReportArg::Json => ReportFormat::Json,
            };
            let config = PipelineConfig {
                extra_shapes: shapes_extra,
                emit_materialized,
                report_format,
                deterministic,
                ..ingest.config()?
            };
            let run = run_validate(&config)?;
            for w in &run.warnings {
                eprintln!("warning: {w}");
            }
            print!("{}", run.render(report_format));
            Ok(run.exit_code() as u8)
        }
        Command::Materialize { ingest, output, emit_provenance } => {
            let config = ingest.config()?;
            let (m, rules, ingested) = run_materialize(&config)?;
            for w in &ingested.warnings {
                eprintln!("warning: {w}");
            }
            write_graph(&output, &m.closure, &config.dsl_context().prefixes)?;
            if let Some(path) = emit_provenance {
                write(&path, &render_provenance(&m, &rules))?;
            }
            for c in &m.clashes {
                eprintln!("clash: {} is both {} and {}", c.individual, c.concepts.0, c.concepts.1);
            }
            eprintln!(
                "{} input, {} derived, {} iterations",
                m.stats.input_assertions, m.stats.derived_assertions, m.stats.iterations
            );
            Ok(if m.clashes.is_empty() { 0 } else { 3 })
        }
        Command::PsGen { pi, sigma, output } => {
            if output.extension().is_some_and(|e| e == "nt") {
                bail!("{}: the axiom file must not end in .nt; the ABox goes to FILE.nt", output.display());
            }
            let ctx = PipelineConfig::default().dsl_context();
            let (dsl, nt) = render_ps(PsConfig::new(pi, sigma)?, &ctx)?;
            write(&output, &dsl)?;
            let mut abox = output.into_os_string();
            abox.push(".nt");
            write(Path::new(&abox), &nt)?;
            Ok(0)
        }
        Command::Distill { input, output } => {
            let (nt, warnings) = distill_file(&input, &Namespaces::default())?;
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            write(&output, &nt)?;
            Ok(0)
        }
        Command::Fixture { output } => {
            for path in write_fixture_files(&output, &Namespaces::default())? {
                println!("{}", path.display());
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            match e.downcast_ref::<riskman::Error>() {
                Some(err) if err.is_resource_limit() => {
                    eprintln!("riskman: {err} (raise --max-assertions or --max-seconds)")
                }
                Some(err) => eprintln!("riskman: error: {err}"),
                None => eprintln!("riskman: error: {e:#}"),
            }
            ExitCode::from(2)
        }
    }
}
