//! Fleiss' kappa over per-token boundary ratings, and Pearson correlation.

use serde::{Deserialize, Serialize};

use crate::aggregation::build_general_reference;
use crate::error::{Error, Result};
use crate::segmentation::ReferenceSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementStats {
    pub doc_id: String,
    pub kappa: f64,
    pub agreement_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub pcc: f64,
    pub sample_count: usize,
}

/// Fleiss' kappa with token positions as items and the references as raters
/// choosing between boundary and non-boundary.
pub fn fleiss_kappa(refs: &ReferenceSet) -> Result<f64> {
    let mut votes = vec![0usize; refs.len()];
    for r in refs.references() {
        for j in r.positions() {
            votes[j] += 1;
        }
    }
    kappa_from_votes(&votes, refs.m())
}

/// Kappa from the number of `raters` voting "boundary" on each item.
pub fn kappa_from_votes(votes: &[usize], raters: usize) -> Result<f64> {
    let items = votes.len();
    let total: usize = votes.iter().sum();
    // all ratings in one category: expected agreement is 1
    if items == 0 || raters < 2 || total == 0 || total == items * raters {
        return Err(Error::DegenerateAgreement);
    }
    let m = raters as f64;
    let observed = votes
        .iter()
        .map(|&c| {
            let (yes, no) = (c as f64, (raters - c) as f64);
            (yes * (yes - 1.0) + no * (no - 1.0)) / (m * (m - 1.0))
        })
        .sum::<f64>()
        / items as f64;
    let p_yes = total as f64 / (items as f64 * m);
    let expected = p_yes * p_yes + (1.0 - p_yes) * (1.0 - p_yes);
    Ok((observed - expected) / (1.0 - expected))
}

pub fn agreement_stats(refs: &ReferenceSet) -> Result<AgreementStats> {
    let gr = build_general_reference(refs)?;
    Ok(AgreementStats {
        doc_id: refs.doc_id().to_string(),
        kappa: fleiss_kappa(refs)?,
        agreement_ratio: gr.ar,
    })
}

/// Pearson product-moment correlation.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<CorrelationResult> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::SampleSize {
            left: xs.len(),
            right: ys.len(),
        });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::ConstantSequence("first sequence"));
    }
    if syy == 0.0 {
        return Err(Error::ConstantSequence("second sequence"));
    }
    Ok(CorrelationResult {
        pcc: (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0),
        sample_count: xs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::segmentation::{BoundaryVector, Origin};

    fn refs(rows: &[&[u8]]) -> ReferenceSet {
        ReferenceSet::new(
            rows.iter()
                .enumerate()
                .map(|(i, r)| {
                    BoundaryVector::from_bits(
                        "d",
                        Origin::Reference,
                        format!("ref_{}", i + 1),
                        r.iter().map(|&b| b == 1).collect(),
                    )
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn perfect_agreement() {
        let row: &[u8] = &[0, 1, 0, 1, 1];
        assert_eq!(fleiss_kappa(&refs(&[row, row, row])).unwrap(), 1.0);
    }

    #[test]
    fn mixed_votes() {
        // votes (3,0),(0,3),(2,1),(1,2): observed 2/3, expected 1/2
        let set = refs(&[&[1, 0, 1, 1], &[1, 0, 1, 0], &[1, 0, 0, 0]]);
        let k = fleiss_kappa(&set).unwrap();
        assert!((k - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn single_category_is_degenerate() {
        let set = refs(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]]);
        assert!(matches!(
            fleiss_kappa(&set),
            Err(Error::DegenerateAgreement)
        ));
        let set = refs(&[&[1, 1], &[1, 1]]);
        assert!(matches!(
            fleiss_kappa(&set),
            Err(Error::DegenerateAgreement)
        ));
    }

    #[test]
    fn pearson_basics() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
        assert!((pearson(&xs, &xs).unwrap().pcc - 1.0).abs() < 1e-12);
        assert!((pearson(&xs, &neg).unwrap().pcc + 1.0).abs() < 1e-12);
        assert_eq!(pearson(&xs, &xs).unwrap().sample_count, 4);
    }

    #[test]
    fn pearson_errors() {
        assert!(matches!(
            pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(Error::ConstantSequence(_))
        ));
        assert!(matches!(
            pearson(&[1.0], &[1.0]),
            Err(Error::SampleSize { .. })
        ));
        assert!(matches!(
            pearson(&[1.0, 2.0], &[1.0, 2.0, 3.0]),
            Err(Error::SampleSize { .. })
        ));
    }
}
