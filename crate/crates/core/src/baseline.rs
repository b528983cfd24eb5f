//! Exact-position scores against single references, and the older
//! multi-reference schemes (mean SER, lenient matching).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::segmentation::{BoundaryVector, ReferenceSet};

/// Harmonic mean of precision and recall, 0 when both are 0.
pub fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Counts are absent on averaged scores.
    pub tp: Option<usize>,
    pub fp: Option<usize>,
    #[serde(rename = "fn")]
    pub fn_: Option<usize>,
}

impl Prf {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> Self {
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        Self {
            precision,
            recall,
            f1: f1(precision, recall),
            tp: Some(tp),
            fp: Some(fp),
            fn_: Some(fn_),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SerScore {
    pub insertions: usize,
    pub deletions: usize,
    pub ser: f64,
}

pub fn strict_prf(cand: &BoundaryVector, reference: &BoundaryVector) -> Result<Prf> {
    reference.check_aligned(cand)?;
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for (&c, &r) in cand.bits().iter().zip(reference.bits()) {
        match (c, r) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => {}
        }
    }
    Ok(Prf::from_counts(tp, fp, fn_))
}

/// Component-wise mean of the per-reference P, R and F1.
pub fn mean_prf(cand: &BoundaryVector, refs: &ReferenceSet) -> Result<Prf> {
    let per_ref = refs
        .references()
        .iter()
        .map(|r| strict_prf(cand, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(average(&per_ref))
}

pub(crate) fn average(scores: &[Prf]) -> Prf {
    let n = scores.len() as f64;
    let mean = |f: fn(&Prf) -> f64| scores.iter().map(f).sum::<f64>() / n;
    Prf {
        precision: mean(|s| s.precision),
        recall: mean(|s| s.recall),
        f1: mean(|s| s.f1),
        ..Prf::default()
    }
}

/// Slot error rate restricted to insertions and deletions.
pub fn ser(cand: &BoundaryVector, reference: &BoundaryVector) -> Result<SerScore> {
    reference.check_aligned(cand)?;
    let ref_count = reference.boundary_count();
    if ref_count == 0 {
        return Err(Error::NoBoundaries(format!(
            "reference {}",
            reference.label()
        )));
    }
    let prf = strict_prf(cand, reference)?;
    let insertions = prf.fp.unwrap_or_default();
    let deletions = prf.fn_.unwrap_or_default();
    Ok(SerScore {
        insertions,
        deletions,
        ser: (insertions + deletions) as f64 / ref_count as f64,
    })
}

pub fn mean_ser(cand: &BoundaryVector, refs: &ReferenceSet) -> Result<f64> {
    let total = refs
        .references()
        .iter()
        .map(|r| ser(cand, r).map(|s| s.ser))
        .sum::<Result<f64>>()?;
    Ok(total / refs.m() as f64)
}

/// Lenient matching: a candidate boundary is correct when any reference has
/// it; a miss is only counted where every reference agrees on a boundary.
pub fn lenient_prf(cand: &BoundaryVector, refs: &ReferenceSet) -> Result<Prf> {
    refs.check_candidate(cand)?;
    let refs = refs.references();
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for (j, &c) in cand.bits().iter().enumerate() {
        let any = refs.iter().any(|r| r.is_boundary(j));
        let all = refs.iter().all(|r| r.is_boundary(j));
        match (c, any, all) {
            (true, true, _) => tp += 1,
            (true, false, _) => fp += 1,
            (false, _, true) => fn_ += 1,
            _ => {}
        }
    }
    Ok(Prf::from_counts(tp, fp, fn_))
}
