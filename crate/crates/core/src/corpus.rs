//! Corpus discovery and loading.
//!
//! A corpus root holds one entry per document, in either form:
//!
//! * a directory `<doc_id>/` with plain-text segmentations named
//!   `ref_<name>.txt` (references) and `sys_<name>.txt` (systems);
//! * a structured file `<doc_id>.json` with pre-tokenized input:
//!
//! ```json
//! {
//!   "doc_id": "v1",
//!   "tokens": ["so", "we", "left", "then", "it", "rained"],
//!   "references": { "ref_1": [2, 5], "ref_2": [5] },
//!   "systems": { "S1": [2, 5] }
//! }
//! ```
//!
//! Boundary indices are 0-based, strictly increasing and below the token
//! count. `doc_id` defaults to the file stem.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::segmentation::{
    align, parse_segmented_text, BoundaryVector, Origin, ReferenceSet, Transcript,
};

pub const REFERENCE_PREFIX: &str = "ref_";
pub const SYSTEM_PREFIX: &str = "sys_";

/// One loaded, aligned document.
#[derive(Debug, Clone)]
pub struct Document {
    pub doc_id: String,
    pub source: PathBuf,
    pub transcript: Transcript,
    pub references: ReferenceSet,
    /// Candidate segmentations, ordered by system name.
    pub systems: Vec<BoundaryVector>,
}

#[derive(Debug, Clone)]
pub struct CorpusLayout {
    pub root: PathBuf,
    /// Ordered by doc_id.
    pub documents: Vec<Document>,
    /// Entries that were not recognised and therefore not loaded.
    pub warnings: Vec<String>,
}

/// Orders strings so that embedded numbers compare by value (`v2` < `v10`).
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let mut prev: Option<bool> = None;
        for (i, c) in s.char_indices() {
            let digit = c.is_ascii_digit();
            if prev.is_some_and(|p| p != digit) {
                out.push((prev.unwrap(), &s[start..i]));
                start = i;
            }
            prev = Some(digit);
        }
        if let Some(p) = prev {
            out.push((p, &s[start..]));
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for (x, y) in ca.iter().zip(&cb) {
        let ord = match (x, y) {
            ((true, x), (true, y)) => {
                let (xt, yt) = (x.trim_start_matches('0'), y.trim_start_matches('0'));
                xt.len().cmp(&yt.len()).then_with(|| xt.cmp(yt))
            }
            ((_, x), (_, y)) => x.cmp(y),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Builds a document from labelled plain-text segmentations.
pub fn document_from_texts(
    doc_id: &str,
    source: PathBuf,
    references: &[(String, String)],
    systems: &[(String, String)],
) -> Result<Document> {
    if references.len() < 2 {
        return Err(Error::MissingReferences {
            doc_id: doc_id.to_string(),
            found: references.len(),
        });
    }
    let mut transcripts = Vec::new();
    let mut refs = Vec::new();
    for (label, text) in references {
        let (t, bv) = parse_segmented_text(doc_id, Origin::Reference, label, text)?;
        transcripts.push(t);
        refs.push(bv);
    }
    let mut cands = Vec::new();
    for (label, text) in systems {
        let (t, bv) = parse_segmented_text(doc_id, Origin::Candidate, label, text)?;
        transcripts.push(t);
        cands.push(bv);
    }
    let transcript = align(&transcripts)?;
    Ok(Document {
        doc_id: doc_id.to_string(),
        source,
        transcript,
        references: ReferenceSet::new(refs)?,
        systems: cands,
    })
}

/// Loads a `<doc_id>/` directory of `ref_*.txt` and `sys_*.txt` files.
pub fn load_document_dir(dir: &Path, warnings: &mut Vec<String>) -> Result<Document> {
    let doc_id = dir
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut refs = Vec::new();
    let mut systems = Vec::new();
    for entry in sorted_entries(dir)? {
        let name = entry
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let stem = name.strip_suffix(".txt").filter(|_| entry.is_file());
        match stem {
            Some(s) if s.starts_with(REFERENCE_PREFIX) && s.len() > REFERENCE_PREFIX.len() => {
                refs.push((s.to_string(), read(&entry)?));
            }
            Some(s) if s.starts_with(SYSTEM_PREFIX) && s.len() > SYSTEM_PREFIX.len() => {
                systems.push((s[SYSTEM_PREFIX.len()..].to_string(), read(&entry)?));
            }
            _ => warnings.push(format!("ignoring {}", entry.display())),
        }
    }
    refs.sort_by(|a, b| natural_cmp(&a.0, &b.0));
    systems.sort_by(|a, b| natural_cmp(&a.0, &b.0));
    document_from_texts(&doc_id, dir.to_path_buf(), &refs, &systems)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StructuredDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doc_id: Option<String>,
    pub tokens: Vec<String>,
    pub references: BTreeMap<String, Vec<usize>>,
    #[serde(default)]
    pub systems: BTreeMap<String, Vec<usize>>,
}

fn structured_vectors(
    path: &Path,
    doc_id: &str,
    origin: Origin,
    n: usize,
    lists: &BTreeMap<String, Vec<usize>>,
) -> Result<Vec<BoundaryVector>> {
    let mut out = Vec::new();
    for (label, positions) in lists {
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedDocument {
                path: path.to_path_buf(),
                reason: format!("boundary indices of {label} are not strictly increasing"),
            });
        }
        if let Some(&bad) = positions.iter().find(|&&p| p >= n) {
            return Err(Error::MalformedDocument {
                path: path.to_path_buf(),
                reason: format!("boundary index {bad} of {label} is out of range for {n} tokens"),
            });
        }
        out.push(BoundaryVector::from_positions(
            doc_id, origin, label, n, positions,
        )?);
    }
    out.sort_by(|a, b| natural_cmp(a.label(), b.label()));
    Ok(out)
}

/// Loads a structured (pre-tokenized) JSON document.
pub fn load_structured(path: &Path) -> Result<Document> {
    let parsed: StructuredDocument =
        serde_json::from_str(&read(path)?).map_err(|e| Error::MalformedDocument {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
    let doc_id = parsed.doc_id.clone().unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    });
    if parsed.references.len() < 2 {
        return Err(Error::MissingReferences {
            doc_id,
            found: parsed.references.len(),
        });
    }
    let transcript = Transcript::new(&doc_id, parsed.tokens).map_err(|e| match e {
        Error::MalformedDocument { reason, .. } => Error::MalformedDocument {
            path: path.to_path_buf(),
            reason,
        },
        other => other,
    })?;
    let n = transcript.len();
    let refs = structured_vectors(path, &doc_id, Origin::Reference, n, &parsed.references)?;
    let systems = structured_vectors(path, &doc_id, Origin::Candidate, n, &parsed.systems)?;
    Ok(Document {
        doc_id,
        source: path.to_path_buf(),
        transcript,
        references: ReferenceSet::new(refs)?,
        systems,
    })
}

fn sorted_entries(dir: &Path) -> Result<Vec<PathBuf>> {
    let io = |source| Error::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut entries = fs::read_dir(dir)
        .map_err(io)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<Vec<_>>>()
        .map_err(io)?;
    entries.sort();
    Ok(entries)
}

/// Discovers and loads every document under `root`.
///
/// All document failures are collected into [`Error::Corpus`]; the layout is
/// only returned when every document loaded.
pub fn load_corpus(root: &Path) -> Result<CorpusLayout> {
    let mut documents = Vec::new();
    let mut warnings = Vec::new();
    let mut failures = Vec::new();
    for entry in sorted_entries(root)? {
        let stem = entry
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let loaded = if entry.is_dir() {
            load_document_dir(&entry, &mut warnings)
        } else if entry.extension().is_some_and(|e| e == "json") {
            load_structured(&entry)
        } else {
            warnings.push(format!("ignoring {}", entry.display()));
            continue;
        };
        match loaded {
            Ok(doc) => documents.push(doc),
            Err(e) => failures.push(e.in_document(&stem)),
        }
    }
    if !failures.is_empty() {
        return Err(Error::Corpus(failures));
    }
    documents.sort_by(|a, b| natural_cmp(&a.doc_id, &b.doc_id));
    if let Some(w) = documents.windows(2).find(|w| w[0].doc_id == w[1].doc_id) {
        return Err(Error::Corpus(vec![Error::MalformedDocument {
            path: w[1].source.clone(),
            reason: format!("duplicate doc_id {}", w[1].doc_id),
        }]));
    }
    Ok(CorpusLayout {
        root: root.to_path_buf(),
        documents,
        warnings,
    })
}
