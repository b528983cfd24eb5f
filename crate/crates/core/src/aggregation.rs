//! General reference, agreement ratio and boundary windows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::segmentation::{BoundaryVector, Origin, ReferenceSet};

/// Separation limit used when none is configured, in tokens.
pub const DEFAULT_SEPARATION_LIMIT: usize = 2;

/// Per-position boundary votes over a reference set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralReference {
    pub doc_id: String,
    pub counts: Vec<usize>,
    /// Number of references that voted.
    pub m: usize,
    /// Ponderated common boundaries: sum of the counts that are at least 2.
    pub pb: usize,
    /// Hypothetical maximum agreement: `m` times the number of voted positions.
    pub ha: usize,
    /// Agreement ratio `pb / ha`.
    pub ar: f64,
}

impl GeneralReference {
    /// Positions at which at least one reference placed a boundary.
    pub fn nonzero_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter_map(|(j, &d)| (d != 0).then_some(j))
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

pub fn build_general_reference(refs: &ReferenceSet) -> Result<GeneralReference> {
    let mut counts = vec![0usize; refs.len()];
    for r in refs.references() {
        for j in r.positions() {
            counts[j] += 1;
        }
    }
    let m = refs.m();
    let pb: usize = counts.iter().filter(|&&d| d >= 2).sum();
    let ha = m * counts.iter().filter(|&&d| d != 0).count();
    if ha == 0 {
        return Err(Error::NoBoundaries(format!(
            "reference set of {}",
            refs.doc_id()
        )));
    }
    Ok(GeneralReference {
        doc_id: refs.doc_id().to_string(),
        counts,
        m,
        pb,
        ha,
        ar: pb as f64 / ha as f64,
    })
}

/// A group of nearby voted positions. Members are ascending and non-empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    members: Vec<usize>,
}

impl Window {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn first(&self) -> usize {
        self.members[0]
    }

    pub fn last(&self) -> usize {
        self.members[self.members.len() - 1]
    }

    /// Inclusive span test.
    pub fn covers(&self, position: usize) -> bool {
        self.first() <= position && position <= self.last()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowReference {
    pub doc_id: String,
    pub windows: Vec<Window>,
    pub separation_limit: usize,
    /// Transcript length the windows were built over.
    pub len: usize,
}

impl WindowReference {
    /// Number of windows.
    pub fn p(&self) -> usize {
        self.windows.len()
    }

    /// Index of the window whose span contains `position`, if any.
    pub fn window_at(&self, position: usize) -> Option<usize> {
        // windows are sorted and disjoint, so spans are too
        let idx = self.windows.partition_point(|w| w.last() < position);
        self.windows
            .get(idx)
            .filter(|w| w.covers(position))
            .map(|_| idx)
    }
}

/// Groups voted positions left to right. A position joins the open window
/// when at most `separation_limit` unvoted tokens separate it from the
/// window's last member.
pub fn build_window_reference(gr: &GeneralReference, separation_limit: usize) -> WindowReference {
    let mut windows: Vec<Window> = Vec::new();
    for j in gr.nonzero_positions() {
        match windows.last_mut() {
            Some(w) if j - w.last() - 1 <= separation_limit => w.members.push(j),
            _ => windows.push(Window { members: vec![j] }),
        }
    }
    WindowReference {
        doc_id: gr.doc_id.clone(),
        windows,
        separation_limit,
        len: gr.len(),
    }
}

/// Boundaries endorsed by at least `threshold` references.
pub fn consensus_reference(refs: &ReferenceSet, threshold: usize) -> Result<BoundaryVector> {
    if threshold == 0 || threshold > refs.m() {
        return Err(Error::BadThreshold {
            threshold,
            references: refs.m(),
        });
    }
    let mut counts = vec![0usize; refs.len()];
    for r in refs.references() {
        for j in r.positions() {
            counts[j] += 1;
        }
    }
    Ok(BoundaryVector::from_bits(
        refs.doc_id(),
        Origin::Reference,
        format!("consensus_{threshold}"),
        counts.into_iter().map(|d| d >= threshold).collect(),
    ))
}
