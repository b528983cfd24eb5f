//! Transcripts, boundary vectors and the plain-text segmentation format.
//!
//! A segmented text is ordinary prose where `.`, `?`, `!` and `;` close a
//! semantic unit, while `:` and `,` are treated as unit-internal. Every token
//! position carries one bit: `true` when a unit ends right after that token.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{AlignmentError, Error, Result};

/// Characters that end a semantic unit.
pub const UNIT_DELIMITERS: [char; 4] = ['.', '?', '!', ';'];
/// Characters removed from tokens without marking a boundary.
pub const INTERNAL_PUNCTUATION: [char; 2] = [':', ','];

fn is_delimiter(c: char) -> bool {
    UNIT_DELIMITERS.contains(&c)
}

fn is_stripped(c: char) -> bool {
    is_delimiter(c) || INTERNAL_PUNCTUATION.contains(&c)
}

/// Normalized token sequence shared by every segmentation of one document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    doc_id: String,
    tokens: Vec<String>,
}

impl Transcript {
    /// Builds a transcript from already normalized tokens.
    ///
    /// Tokens must be non-empty and free of whitespace and of the six
    /// stripped punctuation characters.
    pub fn new(doc_id: impl Into<String>, tokens: Vec<String>) -> Result<Self> {
        if tokens.is_empty() {
            return Err(Error::EmptyTranscript);
        }
        if let Some(bad) = tokens.iter().find(|t| {
            t.is_empty() || t.chars().any(is_stripped) || t.chars().any(char::is_whitespace)
        }) {
            return Err(Error::MalformedDocument {
                path: Default::default(),
                reason: format!("token {bad:?} is empty or contains punctuation/whitespace"),
            });
        }
        Ok(Self {
            doc_id: doc_id.into(),
            tokens,
        })
    }

    pub fn doc_id(&self) -> &str {
        &self.doc_id
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Reference,
    Candidate,
}

/// One segmentation of a transcript: bit `j` is set when a unit ends after token `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryVector {
    doc_id: String,
    label: String,
    origin: Origin,
    bits: Vec<bool>,
}

impl BoundaryVector {
    pub fn from_bits(
        doc_id: impl Into<String>,
        origin: Origin,
        label: impl Into<String>,
        bits: Vec<bool>,
    ) -> Self {
        Self {
            doc_id: doc_id.into(),
            label: label.into(),
            origin,
            bits,
        }
    }

    /// Builds a vector of length `len` with ones at `positions` (0-based).
    pub fn from_positions(
        doc_id: impl Into<String>,
        origin: Origin,
        label: impl Into<String>,
        len: usize,
        positions: &[usize],
    ) -> Result<Self> {
        let mut bits = vec![false; len];
        for &p in positions {
            if p >= len {
                return Err(AlignmentError::LengthMismatch {
                    expected: len,
                    found: p + 1,
                }
                .into());
            }
            bits[p] = true;
        }
        Ok(Self::from_bits(doc_id, origin, label, bits))
    }

    pub fn doc_id(&self) -> &str {
        &self.doc_id
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_boundary(&self, position: usize) -> bool {
        self.bits.get(position).copied().unwrap_or(false)
    }

    /// Positions carrying a boundary, ascending.
    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(j, &b)| b.then_some(j))
    }

    pub fn boundary_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Fails unless `other` covers the same document with the same length.
    pub fn check_aligned(&self, other: &BoundaryVector) -> Result<()> {
        if self.doc_id != other.doc_id {
            return Err(AlignmentError::DocumentMismatch {
                expected: self.doc_id.clone(),
                found: other.doc_id.clone(),
            }
            .into());
        }
        if self.len() != other.len() {
            return Err(AlignmentError::LengthMismatch {
                expected: self.len(),
                found: other.len(),
            }
            .into());
        }
        Ok(())
    }
}

impl fmt::Display for BoundaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Two or more reference segmentations of the same transcript.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceSet {
    doc_id: String,
    references: Vec<BoundaryVector>,
}

impl ReferenceSet {
    pub fn new(references: Vec<BoundaryVector>) -> Result<Self> {
        if references.len() < 2 {
            return Err(Error::TooFewReferences {
                found: references.len(),
            });
        }
        if let Some(r) = references.iter().find(|r| r.origin != Origin::Reference) {
            return Err(Error::NotAReference(r.label.clone()));
        }
        let first = &references[0];
        for r in &references[1..] {
            first.check_aligned(r)?;
        }
        Ok(Self {
            doc_id: first.doc_id.clone(),
            references,
        })
    }

    pub fn doc_id(&self) -> &str {
        &self.doc_id
    }

    pub fn references(&self) -> &[BoundaryVector] {
        &self.references
    }

    /// Number of references.
    pub fn m(&self) -> usize {
        self.references.len()
    }

    /// Transcript length shared by all references.
    pub fn len(&self) -> usize {
        self.references[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Checks that a candidate can be scored against this set.
    pub fn check_candidate(&self, cand: &BoundaryVector) -> Result<()> {
        self.references[0].check_aligned(cand)
    }
}

/// Splits `raw` into normalized tokens, tracking which tokens close a unit.
///
/// Delimiters leading a whitespace chunk belong to the previous token;
/// delimiters embedded between word characters ("3.5") are stripped but do
/// not mark anything.
fn scan(raw: &str) -> (Vec<String>, Vec<bool>) {
    let mut tokens: Vec<String> = Vec::new();
    let mut bits: Vec<bool> = Vec::new();

    for chunk in raw.split_whitespace() {
        let first_kept = chunk.find(|c: char| !is_stripped(c));
        let Some(start) = first_kept else {
            if chunk.chars().any(is_delimiter) {
                if let Some(last) = bits.last_mut() {
                    *last = true;
                }
            }
            continue;
        };
        let end = chunk
            .rfind(|c: char| !is_stripped(c))
            .map(|i| i + chunk[i..].chars().next().map_or(1, char::len_utf8))
            .unwrap_or(chunk.len());

        if chunk[..start].chars().any(is_delimiter) {
            if let Some(last) = bits.last_mut() {
                *last = true;
            }
        }

        let token: String = chunk[start..end]
            .chars()
            .filter(|&c| !is_stripped(c))
            .flat_map(char::to_lowercase)
            .collect();
        tokens.push(token);
        bits.push(chunk[end..].chars().any(is_delimiter));
    }
    (tokens, bits)
}

/// Lowercases, strips `. ? ! ; : ,` and splits on whitespace.
pub fn normalize_and_tokenize(doc_id: &str, raw_text: &str) -> Result<Transcript> {
    let (tokens, _) = scan(raw_text);
    if tokens.is_empty() {
        return Err(Error::EmptyTranscript);
    }
    Ok(Transcript {
        doc_id: doc_id.to_string(),
        tokens,
    })
}

/// Parses a segmented text into its transcript and boundary vector.
pub fn parse_segmented_text(
    doc_id: &str,
    origin: Origin,
    label: &str,
    raw_text: &str,
) -> Result<(Transcript, BoundaryVector)> {
    let (tokens, bits) = scan(raw_text);
    if tokens.is_empty() {
        return Err(Error::EmptyTranscript);
    }
    Ok((
        Transcript {
            doc_id: doc_id.to_string(),
            tokens,
        },
        BoundaryVector::from_bits(doc_id, origin, label, bits),
    ))
}

/// Writes a transcript back out as segmented text, one `.` per boundary.
pub fn render_segmented_text(transcript: &Transcript, bv: &BoundaryVector) -> Result<String> {
    if transcript.len() != bv.len() {
        return Err(AlignmentError::LengthMismatch {
            expected: transcript.len(),
            found: bv.len(),
        }
        .into());
    }
    let mut out = String::new();
    for (j, token) in transcript.tokens.iter().enumerate() {
        if j > 0 {
            out.push(' ');
        }
        out.push_str(token);
        if bv.bits[j] {
            out.push('.');
        }
    }
    Ok(out)
}

/// Returns the common transcript, or the first point where two inputs diverge.
pub fn align(transcripts: &[Transcript]) -> Result<Transcript> {
    let (first, rest) = transcripts.split_first().ok_or(Error::EmptyTranscript)?;
    for other in rest {
        let len = first.len().max(other.len());
        for j in 0..len {
            let left = first.tokens.get(j);
            let right = other.tokens.get(j);
            if left != right {
                return Err(AlignmentError::TokenMismatch {
                    position: j,
                    left: left.cloned(),
                    right: right.cloned(),
                }
                .into());
            }
        }
    }
    Ok(first.clone())
}
