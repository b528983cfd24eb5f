//! Corpus evaluation and report rendering.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::aggregation::{
    build_general_reference, build_window_reference, consensus_reference, DEFAULT_SEPARATION_LIMIT,
};
use crate::agreement::{fleiss_kappa, pearson, CorrelationResult};
use crate::baseline::{average, f1, lenient_prf, mean_ser, strict_prf, Prf};
use crate::corpus::{natural_cmp, CorpusLayout, Document};
use crate::error::{Error, Result};
use crate::wisebe::{windowed_precision, windowed_recall, WisebeScore};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalConfig {
    pub separation_limit: usize,
    /// Adds mean SER and lenient matching to every row.
    pub baselines: bool,
    /// Scores every system against the consensus of at least this many references.
    pub consensus_threshold: Option<usize>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            separation_limit: DEFAULT_SEPARATION_LIMIT,
            baselines: false,
            consensus_threshold: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceScore {
    pub reference: String,
    pub prf: Prf,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BaselineScores {
    pub mean_ser: f64,
    pub lenient: Prf,
}

/// Scores of one system on one document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemRow {
    pub doc_id: String,
    pub system: String,
    pub per_reference: Vec<ReferenceScore>,
    pub mean: Prf,
    pub wisebe: WisebeScore,
    pub kappa: f64,
    pub boundaries: usize,
    pub baselines: Option<BaselineScores>,
    pub consensus: Option<Prf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DocumentSummary {
    pub doc_id: String,
    pub tokens: usize,
    /// (reference label, boundary count)
    pub reference_boundaries: Vec<(String, usize)>,
    pub agreement_ratio: f64,
    pub kappa: f64,
    pub windows: usize,
}

/// Per-system means over documents.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemAggregate {
    pub system: String,
    pub documents: usize,
    pub f1_mean: f64,
    pub f1_rw: f64,
    pub agreement_ratio: f64,
    pub wisebe: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub separation_limit: usize,
    pub baselines: bool,
    pub consensus_threshold: Option<usize>,
    pub documents: Vec<DocumentSummary>,
    /// Ordered by doc_id, then system.
    pub rows: Vec<SystemRow>,
    pub aggregates: Vec<SystemAggregate>,
    /// Correlation between agreement ratio and kappa across documents;
    /// absent when fewer than two documents or either series is constant.
    pub correlation: Option<CorrelationResult>,
}

impl EvaluationReport {
    pub fn empty(config: &EvalConfig) -> Self {
        Self {
            separation_limit: config.separation_limit,
            baselines: config.baselines,
            consensus_threshold: config.consensus_threshold,
            documents: Vec::new(),
            rows: Vec::new(),
            aggregates: Vec::new(),
            correlation: None,
        }
    }
}

fn evaluate_document(
    doc: &Document,
    config: &EvalConfig,
) -> Result<(DocumentSummary, Vec<SystemRow>)> {
    let refs = &doc.references;
    let gr = build_general_reference(refs)?;
    let wr = build_window_reference(&gr, config.separation_limit);
    let kappa = fleiss_kappa(refs)?;
    let consensus = config
        .consensus_threshold
        .map(|k| consensus_reference(refs, k))
        .transpose()?;

    let mut rows = Vec::with_capacity(doc.systems.len());
    for cand in &doc.systems {
        let per_reference = refs
            .references()
            .iter()
            .map(|r| {
                Ok(ReferenceScore {
                    reference: r.label().to_string(),
                    prf: strict_prf(cand, r)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mean = average(&per_reference.iter().map(|s| s.prf).collect::<Vec<_>>());
        let wisebe = WisebeScore::from_parts(
            windowed_precision(cand, &wr)?,
            windowed_recall(cand, &wr)?,
            gr.ar,
        );
        let baselines = if config.baselines {
            Some(BaselineScores {
                mean_ser: mean_ser(cand, refs)?,
                lenient: lenient_prf(cand, refs)?,
            })
        } else {
            None
        };
        let consensus = consensus
            .as_ref()
            .map(|c| strict_prf(cand, c))
            .transpose()?;
        rows.push(SystemRow {
            doc_id: doc.doc_id.clone(),
            system: cand.label().to_string(),
            per_reference,
            mean,
            wisebe,
            kappa,
            boundaries: cand.boundary_count(),
            baselines,
            consensus,
        });
    }
    let summary = DocumentSummary {
        doc_id: doc.doc_id.clone(),
        tokens: doc.transcript.len(),
        reference_boundaries: refs
            .references()
            .iter()
            .map(|r| (r.label().to_string(), r.boundary_count()))
            .collect(),
        agreement_ratio: gr.ar,
        kappa,
        windows: wr.p(),
    };
    Ok((summary, rows))
}

/// Evaluates every system of every document. Documents are processed in
/// parallel and merged in doc_id order.
pub fn evaluate_corpus(layout: &CorpusLayout, config: &EvalConfig) -> Result<EvaluationReport> {
    let results: Vec<_> = layout
        .documents
        .par_iter()
        .map(|doc| evaluate_document(doc, config).map_err(|e| e.in_document(&doc.doc_id)))
        .collect();

    let mut report = EvaluationReport::empty(config);
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok((summary, rows)) => {
                report.documents.push(summary);
                report.rows.extend(rows);
            }
            Err(e) => failures.push(e),
        }
    }
    if !failures.is_empty() {
        return Err(Error::Corpus(failures));
    }
    report
        .documents
        .sort_by(|a, b| natural_cmp(&a.doc_id, &b.doc_id));
    report.rows.sort_by(|a, b| {
        natural_cmp(&a.doc_id, &b.doc_id).then_with(|| natural_cmp(&a.system, &b.system))
    });
    report.aggregates = aggregate(&report.rows);
    report.correlation = correlate(&report.documents);
    Ok(report)
}

fn aggregate(rows: &[SystemRow]) -> Vec<SystemAggregate> {
    let mut systems: Vec<&str> = rows.iter().map(|r| r.system.as_str()).collect();
    systems.sort_by(|a, b| natural_cmp(a, b));
    systems.dedup();
    systems
        .into_iter()
        .map(|system| {
            let mine: Vec<&SystemRow> = rows.iter().filter(|r| r.system == system).collect();
            let n = mine.len() as f64;
            let mean = |f: fn(&SystemRow) -> f64| mine.iter().map(|r| f(r)).sum::<f64>() / n;
            SystemAggregate {
                system: system.to_string(),
                documents: mine.len(),
                f1_mean: mean(|r| r.mean.f1),
                f1_rw: mean(|r| r.wisebe.f1_rw),
                agreement_ratio: mean(|r| r.wisebe.agreement_ratio),
                wisebe: mean(|r| r.wisebe.wisebe),
            }
        })
        .collect()
}

fn correlate(docs: &[DocumentSummary]) -> Option<CorrelationResult> {
    let ar: Vec<f64> = docs.iter().map(|d| d.agreement_ratio).collect();
    let kappa: Vec<f64> = docs.iter().map(|d| d.kappa).collect();
    pearson(&ar, &kappa).ok()
}

/// Rounds to 3 decimals, ties to even.
pub fn round3(x: f64) -> f64 {
    let scaled = x * 1000.0;
    let floor = scaled.floor();
    let frac = scaled - floor;
    let r = if (frac - 0.5).abs() < 1e-9 {
        if floor % 2.0 == 0.0 {
            floor
        } else {
            floor + 1.0
        }
    } else {
        scaled.round()
    };
    r / 1000.0
}

pub fn fmt3(x: f64) -> String {
    format!("{:.3}", round3(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

/// Flat machine-readable row. `precision` and `recall` are the means of the
/// per-reference scores and `f1` is their harmonic mean; `f1_mean` is the
/// mean of the per-reference F1 values.
#[derive(Debug, Serialize)]
struct Record<'a> {
    doc_id: &'a str,
    system: &'a str,
    precision: f64,
    recall: f64,
    f1: f64,
    f1_mean: f64,
    f1_rw: f64,
    agreement_ratio: f64,
    wisebe: f64,
    kappa: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    mean_ser: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lenient_precision: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lenient_recall: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lenient_f1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    consensus_precision: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    consensus_recall: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    consensus_f1: Option<f64>,
}

impl<'a> Record<'a> {
    fn new(row: &'a SystemRow) -> Self {
        let r = round3;
        Self {
            doc_id: &row.doc_id,
            system: &row.system,
            precision: r(row.mean.precision),
            recall: r(row.mean.recall),
            f1: r(f1(row.mean.precision, row.mean.recall)),
            f1_mean: r(row.mean.f1),
            f1_rw: r(row.wisebe.f1_rw),
            agreement_ratio: r(row.wisebe.agreement_ratio),
            wisebe: r(row.wisebe.wisebe),
            kappa: r(row.kappa),
            mean_ser: row.baselines.map(|b| r(b.mean_ser)),
            lenient_precision: row.baselines.map(|b| r(b.lenient.precision)),
            lenient_recall: row.baselines.map(|b| r(b.lenient.recall)),
            lenient_f1: row.baselines.map(|b| r(b.lenient.f1)),
            consensus_precision: row.consensus.map(|c| r(c.precision)),
            consensus_recall: row.consensus.map(|c| r(c.recall)),
            consensus_f1: row.consensus.map(|c| r(c.f1)),
        }
    }
}

const BASE_COLUMNS: [&str; 10] = [
    "doc_id",
    "system",
    "precision",
    "recall",
    "f1",
    "f1_mean",
    "f1_rw",
    "agreement_ratio",
    "wisebe",
    "kappa",
];
const BASELINE_COLUMNS: [&str; 4] = [
    "mean_ser",
    "lenient_precision",
    "lenient_recall",
    "lenient_f1",
];
const CONSENSUS_COLUMNS: [&str; 3] = ["consensus_precision", "consensus_recall", "consensus_f1"];

pub fn render_report(report: &EvaluationReport, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let records: Vec<Record> = report.rows.iter().map(Record::new).collect();
            let mut out = serde_json::to_vec_pretty(&records)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => render_csv(report),
        Format::Table => Ok(render_table(report).into_bytes()),
    }
}

fn render_csv(report: &EvaluationReport) -> Result<Vec<u8>> {
    let mut header: Vec<&str> = BASE_COLUMNS.to_vec();
    if report.baselines {
        header.extend(BASELINE_COLUMNS);
    }
    if report.consensus_threshold.is_some() {
        header.extend(CONSENSUS_COLUMNS);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header)?;
    for row in &report.rows {
        let rec = Record::new(row);
        let mut fields = vec![rec.doc_id.to_string(), rec.system.to_string()];
        fields.extend(
            [
                rec.precision,
                rec.recall,
                rec.f1,
                rec.f1_mean,
                rec.f1_rw,
                rec.agreement_ratio,
                rec.wisebe,
                rec.kappa,
            ]
            .map(|x| format!("{x:.3}")),
        );
        let optional = |v: Option<f64>| v.map(|x| format!("{x:.3}")).unwrap_or_default();
        if report.baselines {
            fields.extend(
                [
                    rec.mean_ser,
                    rec.lenient_precision,
                    rec.lenient_recall,
                    rec.lenient_f1,
                ]
                .map(optional),
            );
        }
        if report.consensus_threshold.is_some() {
            fields.extend(
                [
                    rec.consensus_precision,
                    rec.consensus_recall,
                    rec.consensus_f1,
                ]
                .map(optional),
            );
        }
        w.write_record(&fields)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: "<csv>".into(),
        source,
    })?;
    w.into_inner().map_err(|e| Error::Io {
        path: "<csv>".into(),
        source: e.into_error(),
    })
}

fn table(out: &mut String, header: &[String], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |out: &mut String, cells: &[String]| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(out, header);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    line(out, &rule);
    for row in rows {
        line(out, row);
    }
}

fn strings<const N: usize>(xs: [&str; N]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn render_table(report: &EvaluationReport) -> String {
    let mut out = String::new();

    // WiSeBE evaluation, one row per document and system
    let mut header = strings(["doc_id", "system", "F1_mean", "F1_RW", "R_G_AR", "WiSeBE"]);
    if report.baselines {
        header.extend(strings(["mean_SER", "lenient_F1"]));
    }
    if let Some(k) = report.consensus_threshold {
        header.push(format!("F1_consensus>={k}"));
    }
    let mut rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            let mut cells = vec![
                r.doc_id.clone(),
                r.system.clone(),
                fmt3(r.mean.f1),
                fmt3(r.wisebe.f1_rw),
                fmt3(r.wisebe.agreement_ratio),
                fmt3(r.wisebe.wisebe),
            ];
            if let Some(b) = r.baselines {
                cells.push(fmt3(b.mean_ser));
                cells.push(fmt3(b.lenient.f1));
            }
            if let Some(c) = r.consensus {
                cells.push(fmt3(c.f1));
            }
            cells
        })
        .collect();
    for a in &report.aggregates {
        let mut cells = vec![
            "mean".to_string(),
            a.system.clone(),
            fmt3(a.f1_mean),
            fmt3(a.f1_rw),
            fmt3(a.agreement_ratio),
            fmt3(a.wisebe),
        ];
        cells.resize(header.len(), String::new());
        rows.push(cells);
    }
    let _ = writeln!(
        out,
        "WiSeBE evaluation (window separation limit {})",
        report.separation_limit
    );
    table(&mut out, &header, &rows);

    // independent per-reference evaluation
    let labels: Vec<String> = {
        let mut l: Vec<String> = report
            .rows
            .iter()
            .flat_map(|r| r.per_reference.iter().map(|s| s.reference.clone()))
            .collect();
        l.sort_by(|a, b| natural_cmp(a, b));
        l.dedup();
        l
    };
    let mut header = strings(["doc_id", "system"]);
    for l in labels.iter().map(String::as_str).chain(["mean"]) {
        header.extend([format!("{l}:P"), format!("{l}:R"), format!("{l}:F1")]);
    }
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            let mut cells = vec![r.doc_id.clone(), r.system.clone()];
            for l in &labels {
                match r.per_reference.iter().find(|s| &s.reference == l) {
                    Some(s) => {
                        cells.extend([fmt3(s.prf.precision), fmt3(s.prf.recall), fmt3(s.prf.f1)])
                    }
                    None => cells.extend(["-".to_string(), "-".to_string(), "-".to_string()]),
                }
            }
            cells.extend([fmt3(r.mean.precision), fmt3(r.mean.recall), fmt3(r.mean.f1)]);
            cells
        })
        .collect();
    let _ = writeln!(out, "\nPer-reference evaluation");
    table(&mut out, &header, &rows);

    render_agreement_table(&mut out, &report.documents, report.correlation);
    out
}

/// Agreement section: boundary counts, agreement ratio and kappa per document.
pub fn render_agreement_table(
    out: &mut String,
    documents: &[DocumentSummary],
    correlation: Option<CorrelationResult>,
) {
    let header = strings([
        "doc_id",
        "tokens",
        "boundaries",
        "windows",
        "R_G_AR",
        "kappa",
    ]);
    let rows: Vec<Vec<String>> = documents
        .iter()
        .map(|d| {
            let counts: Vec<String> = d
                .reference_boundaries
                .iter()
                .map(|(l, c)| format!("{l}={c}"))
                .collect();
            vec![
                d.doc_id.clone(),
                d.tokens.to_string(),
                counts.join(" "),
                d.windows.to_string(),
                fmt3(d.agreement_ratio),
                fmt3(d.kappa),
            ]
        })
        .collect();
    let _ = writeln!(out, "\nAgreement within dataset");
    table(out, &header, &rows);
    match correlation {
        Some(c) => {
            let _ = writeln!(
                out,
                "PCC(R_G_AR, kappa) = {} over {} documents",
                fmt3(c.pcc),
                c.sample_count
            );
        }
        None => {
            let _ = writeln!(out, "PCC(R_G_AR, kappa) = n/a");
        }
    }
}
