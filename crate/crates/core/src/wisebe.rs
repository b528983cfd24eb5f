//! Windowed precision/recall against the window reference, and the WiSeBE score.

use serde::{Deserialize, Serialize};

use crate::aggregation::{build_general_reference, build_window_reference, WindowReference};
use crate::baseline::f1;
use crate::error::{AlignmentError, Error, Result};
use crate::segmentation::{BoundaryVector, ReferenceSet};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WisebeScore {
    pub precision_rw: f64,
    pub recall_rw: f64,
    pub f1_rw: f64,
    pub agreement_ratio: f64,
    pub wisebe: f64,
}

impl WisebeScore {
    pub fn from_parts(precision_rw: f64, recall_rw: f64, agreement_ratio: f64) -> Self {
        let f1_rw = f1(precision_rw, recall_rw);
        Self {
            precision_rw,
            recall_rw,
            f1_rw,
            agreement_ratio,
            wisebe: combine(f1_rw, agreement_ratio),
        }
    }
}

/// Scales a windowed F1 by the references' agreement ratio.
pub fn combine(f1_rw: f64, agreement_ratio: f64) -> f64 {
    f1_rw * agreement_ratio
}

fn check(cand: &BoundaryVector, wr: &WindowReference) -> Result<()> {
    if cand.doc_id() != wr.doc_id {
        return Err(AlignmentError::DocumentMismatch {
            expected: wr.doc_id.clone(),
            found: cand.doc_id().to_string(),
        }
        .into());
    }
    if cand.len() != wr.len {
        return Err(AlignmentError::LengthMismatch {
            expected: wr.len,
            found: cand.len(),
        }
        .into());
    }
    Ok(())
}

/// Share of candidate boundaries that fall inside some window span.
/// A candidate without boundaries scores 0.
pub fn windowed_precision(cand: &BoundaryVector, wr: &WindowReference) -> Result<f64> {
    check(cand, wr)?;
    let total = cand.boundary_count();
    if total == 0 {
        return Ok(0.0);
    }
    let inside = cand
        .positions()
        .filter(|&j| wr.window_at(j).is_some())
        .count();
    Ok(inside as f64 / total as f64)
}

/// Share of windows hit by at least one candidate boundary.
pub fn windowed_recall(cand: &BoundaryVector, wr: &WindowReference) -> Result<f64> {
    check(cand, wr)?;
    if wr.p() == 0 {
        return Err(Error::NoBoundaries(format!(
            "window reference of {}",
            wr.doc_id
        )));
    }
    let mut hit = vec![false; wr.p()];
    for j in cand.positions() {
        if let Some(k) = wr.window_at(j) {
            hit[k] = true;
        }
    }
    Ok(hit.iter().filter(|&&h| h).count() as f64 / wr.p() as f64)
}

pub fn wisebe_score(
    cand: &BoundaryVector,
    refs: &ReferenceSet,
    separation_limit: usize,
) -> Result<WisebeScore> {
    refs.check_candidate(cand)?;
    let gr = build_general_reference(refs)?;
    let wr = build_window_reference(&gr, separation_limit);
    Ok(WisebeScore::from_parts(
        windowed_precision(cand, &wr)?,
        windowed_recall(cand, &wr)?,
        gr.ar,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregation::GeneralReference;
    use crate::segmentation::Origin;

    fn cand(len: usize, positions: &[usize]) -> BoundaryVector {
        BoundaryVector::from_positions("d", Origin::Candidate, "S", len, positions).unwrap()
    }

    fn reference(label: &str, len: usize, positions: &[usize]) -> BoundaryVector {
        BoundaryVector::from_positions("d", Origin::Reference, label, len, positions).unwrap()
    }

    // counts [0,2,1,0,0,3] at limit 1 -> windows [1,2] and [5]
    fn sample_windows() -> WindowReference {
        let gr = GeneralReference {
            doc_id: "d".into(),
            counts: vec![0, 2, 1, 0, 0, 3],
            m: 3,
            pb: 5,
            ha: 9,
            ar: 5.0 / 9.0,
        };
        build_window_reference(&gr, 1)
    }

    #[test]
    fn precision_examples() {
        let wr = sample_windows();
        assert_eq!(windowed_precision(&cand(6, &[2, 4]), &wr).unwrap(), 0.5);
        assert_eq!(windowed_precision(&cand(6, &[1, 5]), &wr).unwrap(), 1.0);
        assert_eq!(windowed_precision(&cand(6, &[]), &wr).unwrap(), 0.0);
    }

    #[test]
    fn recall_counts_windows_not_bits() {
        let wr = sample_windows();
        assert_eq!(windowed_recall(&cand(6, &[2, 4]), &wr).unwrap(), 0.5);
        assert_eq!(windowed_recall(&cand(6, &[1, 5]), &wr).unwrap(), 1.0);
        assert_eq!(windowed_recall(&cand(6, &[1, 2]), &wr).unwrap(), 0.5);
    }

    #[test]
    fn span_membership_includes_gap_tokens() {
        let gr = GeneralReference {
            doc_id: "d".into(),
            counts: vec![1, 0, 1, 0, 0, 0],
            m: 2,
            pb: 0,
            ha: 4,
            ar: 0.0,
        };
        let wr = build_window_reference(&gr, 2);
        assert_eq!(windowed_precision(&cand(6, &[1]), &wr).unwrap(), 1.0);
    }

    #[test]
    fn misaligned_candidate() {
        let wr = sample_windows();
        assert!(matches!(
            windowed_precision(&cand(5, &[1]), &wr),
            Err(Error::Alignment(AlignmentError::LengthMismatch { .. }))
        ));
        let other = BoundaryVector::from_positions("e", Origin::Candidate, "S", 6, &[1]).unwrap();
        assert!(matches!(
            windowed_recall(&other, &wr),
            Err(Error::Alignment(AlignmentError::DocumentMismatch { .. }))
        ));
    }

    #[test]
    fn composition_matches_published_row() {
        let w = combine(0.800, 0.578);
        assert!((w - 0.462).abs() <= 0.0005);
    }

    #[test]
    fn unanimous_references_give_plain_f1() {
        let refs = ReferenceSet::new(vec![
            reference("ref_1", 8, &[2, 7]),
            reference("ref_2", 8, &[2, 7]),
            reference("ref_3", 8, &[2, 7]),
        ])
        .unwrap();
        let s = wisebe_score(&cand(8, &[2, 7]), &refs, 2).unwrap();
        assert_eq!(s.agreement_ratio, 1.0);
        assert_eq!(s.f1_rw, 1.0);
        assert_eq!(s.wisebe, 1.0);
    }

    #[test]
    fn total_disagreement_zeroes_the_score() {
        let refs = ReferenceSet::new(vec![
            reference("ref_1", 8, &[1]),
            reference("ref_2", 8, &[6]),
        ])
        .unwrap();
        let s = wisebe_score(&cand(8, &[1, 6]), &refs, 0).unwrap();
        assert_eq!(s.f1_rw, 1.0);
        assert_eq!(s.wisebe, 0.0);
    }

    #[test]
    fn silent_candidate_scores_zero() {
        let refs = ReferenceSet::new(vec![
            reference("ref_1", 4, &[1]),
            reference("ref_2", 4, &[1]),
        ])
        .unwrap();
        let s = wisebe_score(&cand(4, &[]), &refs, 2).unwrap();
        assert_eq!(
            (s.precision_rw, s.recall_rw, s.f1_rw, s.wisebe),
            (0.0, 0.0, 0.0, 0.0)
        );
    }
}
