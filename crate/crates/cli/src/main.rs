//! `wisebe` command-line tool.
//!
//! ```bash
//! # full evaluation of a corpus directory
//! wisebe eval data/synthetic --format table
//!
//! # reference agreement only
//! wisebe agreement data/synthetic
//!
//! # one document, explicit files
//! wisebe score --ref a/ref_1.txt --ref a/ref_2.txt --cand a/sys_S1.txt
//! ```

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use wisebe::corpus::document_from_texts;
use wisebe::report::{fmt3, render_agreement_table, round3};
use wisebe::{
    evaluate_corpus, load_corpus, render_report, CorpusLayout, EvalConfig, EvaluationReport, Format,
};

#[derive(Parser, Debug)]
#[command(
    name = "wisebe",
    version,
    about = "Multi-reference sentence boundary evaluation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate every system of every document in a corpus directory
    Eval {
        /// Corpus root: one `<doc_id>/` directory or `<doc_id>.json` file per document
        root: PathBuf,
        #[command(flatten)]
        opts: ScoreOpts,
    },
    /// Reference agreement per document (R_G_AR, Fleiss' kappa) and their correlation
    Agreement {
        root: PathBuf,
        /// Separation limit used for the reported window counts
        #[arg(long, env = "WISEBE_WINDOW_LIMIT", default_value_t = wisebe::DEFAULT_SEPARATION_LIMIT)]
        window_limit: usize,
        #[arg(long, default_value = "table", value_parser = parse_format)]
        format: Format,
    },
    /// Score candidate files for a single document
    Score {
        /// Reference segmentation (repeat for each reference, at least 2)
        #[arg(long = "ref", required = true)]
        refs: Vec<PathBuf>,
        /// Candidate segmentation (repeatable)
        #[arg(long = "cand", required = true)]
        cands: Vec<PathBuf>,
        /// Identifier used in the report
        #[arg(long, default_value = "document")]
        doc_id: String,
        #[command(flatten)]
        opts: ScoreOpts,
    },
}

#[derive(Args, Debug)]
struct ScoreOpts {
    /// Largest run of unvoted tokens allowed inside one window
    #[arg(long, env = "WISEBE_WINDOW_LIMIT", default_value_t = wisebe::DEFAULT_SEPARATION_LIMIT)]
    window_limit: usize,
    #[arg(long, default_value = "table", value_parser = parse_format)]
    format: Format,
    /// Add mean SER and lenient matching scores
    #[arg(long)]
    baselines: bool,
    /// Also score against the consensus of at least K references
    #[arg(long, value_name = "K")]
    threshold: Option<usize>,
}

impl ScoreOpts {
    fn config(&self) -> EvalConfig {
        EvalConfig {
            separation_limit: self.window_limit,
            baselines: self.baselines,
            consensus_threshold: self.threshold,
        }
    }
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: wisebe::Error| e.to_string())
}

fn error_entries(err: &wisebe::Error) -> Vec<serde_json::Value> {
    match err {
        wisebe::Error::Corpus(errors) => errors.iter().flat_map(error_entries).collect(),
        wisebe::Error::Document { doc_id, source } => vec![json!({
            "doc_id": doc_id,
            "kind": err.kind(),
            "message": source.to_string(),
        })],
        wisebe::Error::MissingReferences { doc_id, .. } => vec![json!({
            "doc_id": doc_id,
            "kind": err.kind(),
            "message": err.to_string(),
        })],
        other => vec![json!({
            "doc_id": null,
            "kind": other.kind(),
            "message": other.to_string(),
        })],
    }
}

fn load(root: &Path) -> wisebe::Result<CorpusLayout> {
    let layout = load_corpus(root)?;
    for w in &layout.warnings {
        eprintln!("warning: {w}");
    }
    Ok(layout)
}

fn label(path: &Path, prefix: &str) -> String {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    match stem.strip_prefix(prefix) {
        Some(rest) if !rest.is_empty() => rest.to_string(),
        _ => stem,
    }
}

fn read_all(paths: &[PathBuf], prefix: &str) -> anyhow::Result<Vec<(String, String)>> {
    paths
        .iter()
        .map(|p| {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Ok((label(p, prefix), text))
        })
        .collect()
}

#[derive(Serialize)]
struct AgreementRecord<'a> {
    doc_id: &'a str,
    references: usize,
    tokens: usize,
    windows: usize,
    agreement_ratio: f64,
    kappa: f64,
}

fn render_agreement(report: &EvaluationReport, format: Format) -> anyhow::Result<Vec<u8>> {
    let records: Vec<AgreementRecord> = report
        .documents
        .iter()
        .map(|d| AgreementRecord {
            doc_id: &d.doc_id,
            references: d.reference_boundaries.len(),
            tokens: d.tokens,
            windows: d.windows,
            agreement_ratio: round3(d.agreement_ratio),
            kappa: round3(d.kappa),
        })
        .collect();
    Ok(match format {
        Format::Table => {
            let mut out = String::new();
            render_agreement_table(&mut out, &report.documents, report.correlation);
            out.trim_start().as_bytes().to_vec()
        }
        Format::Json => {
            let value = json!({
                "documents": records,
                "pcc": report.correlation.map(|c| round3(c.pcc)),
                "window_limit": report.separation_limit,
            });
            let mut out = serde_json::to_vec_pretty(&value)?;
            out.push(b'\n');
            out
        }
        Format::Csv => {
            let mut out = String::from("doc_id,references,tokens,windows,agreement_ratio,kappa\n");
            for r in &records {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.doc_id,
                    r.references,
                    r.tokens,
                    r.windows,
                    fmt3(r.agreement_ratio),
                    fmt3(r.kappa)
                ));
            }
            out.into_bytes()
        }
    })
}

fn run(cli: Cli) -> anyhow::Result<Vec<u8>> {
    match cli.command {
        Command::Eval { root, opts } => {
            let layout = load(&root)?;
            let report = evaluate_corpus(&layout, &opts.config())?;
            Ok(render_report(&report, opts.format)?)
        }
        Command::Agreement {
            root,
            window_limit,
            format,
        } => {
            let layout = load(&root)?;
            let config = EvalConfig {
                separation_limit: window_limit,
                ..EvalConfig::default()
            };
            let report = evaluate_corpus(&layout, &config)?;
            render_agreement(&report, format)
        }
        Command::Score {
            refs,
            cands,
            doc_id,
            opts,
        } => {
            let references = read_all(&refs, "")?;
            let systems = read_all(&cands, wisebe::corpus::SYSTEM_PREFIX)?;
            let doc = document_from_texts(&doc_id, PathBuf::new(), &references, &systems).map_err(
                |e| {
                    wisebe::Error::Corpus(vec![wisebe::Error::Document {
                        doc_id: doc_id.clone(),
                        source: Box::new(e),
                    }])
                },
            )?;
            let layout = CorpusLayout {
                root: PathBuf::new(),
                documents: vec![doc],
                warnings: Vec::new(),
            };
            let report = evaluate_corpus(&layout, &opts.config())?;
            Ok(render_report(&report, opts.format)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(bytes) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(&bytes)
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::FAILURE;
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let errors = match e.downcast_ref::<wisebe::Error>() {
                Some(err) => error_entries(err),
                None => vec![json!({ "doc_id": null, "kind": "Io", "message": format!("{e:#}") })],
            };
            let body = json!({ "errors": errors });
            eprintln!(
                "{}",
                serde_json::to_string_pretty(&body).unwrap_or_default()
            );
            ExitCode::FAILURE
        }
    }
}
