//! Brute-force reference implementations for test suites.
//!
//! Everything here works on raw `Vec<bool>` rows and set enumeration, with no
//! dependency on the `wisebe` crate, so that the two can be checked against
//! each other. None of it is tuned for speed.

use std::collections::{BTreeSet, HashSet};

/// Votes per position.
pub fn counts(refs: &[Vec<bool>]) -> Vec<usize> {
    let n = refs[0].len();
    (0..n)
        .map(|j| refs.iter().filter(|r| r[j]).count())
        .collect()
}

/// Agreement ratio computed from (reference, position) incidences: the
/// numerator counts every mark shared with at least one other reference, the
/// denominator is `m` times the size of the union of marked positions.
/// `None` when no reference marks anything.
pub fn agreement_ratio(refs: &[Vec<bool>]) -> Option<f64> {
    let m = refs.len();
    let mut shared = 0usize;
    let mut union = BTreeSet::new();
    for (i, r) in refs.iter().enumerate() {
        for (j, &b) in r.iter().enumerate() {
            if !b {
                continue;
            }
            union.insert(j);
            if refs.iter().enumerate().any(|(k, o)| k != i && o[j]) {
                shared += 1;
            }
        }
    }
    if union.is_empty() {
        None
    } else {
        Some(shared as f64 / (m * union.len()) as f64)
    }
}

/// Windows as maximal classes of voted positions where two positions belong
/// together iff no run of unvoted tokens between them is longer than `limit`.
pub fn windows(counts: &[usize], limit: usize) -> Vec<Vec<usize>> {
    let voted: Vec<usize> = (0..counts.len()).filter(|&j| counts[j] != 0).collect();
    let longest_zero_run = |a: usize, b: usize| {
        let mut best = 0;
        let mut run = 0;
        for &c in &counts[a + 1..b] {
            if c == 0 {
                run += 1;
                best = best.max(run);
            } else {
                run = 0;
            }
        }
        best
    };
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &j in &voted {
        let home = classes.iter_mut().find(|c| {
            c.iter()
                .all(|&i| longest_zero_run(i.min(j), i.max(j)) <= limit)
        });
        match home {
            Some(c) => c.push(j),
            None => classes.push(vec![j]),
        }
    }
    classes.sort();
    classes
}

fn span_sets(windows: &[Vec<usize>]) -> Vec<HashSet<usize>> {
    windows
        .iter()
        .map(|w| {
            let lo = *w.iter().min().unwrap();
            let hi = *w.iter().max().unwrap();
            (lo..=hi).collect()
        })
        .collect()
}

/// Fraction of candidate boundaries lying in some window span; 0 when the
/// candidate has none.
pub fn windowed_precision(cand: &[bool], windows: &[Vec<usize>]) -> f64 {
    let spans = span_sets(windows);
    let marks: Vec<usize> = (0..cand.len()).filter(|&j| cand[j]).collect();
    if marks.is_empty() {
        return 0.0;
    }
    let inside = marks
        .iter()
        .filter(|j| spans.iter().any(|s| s.contains(j)))
        .count();
    inside as f64 / marks.len() as f64
}

/// Fraction of windows whose span holds at least one candidate boundary.
pub fn windowed_recall(cand: &[bool], windows: &[Vec<usize>]) -> f64 {
    let spans = span_sets(windows);
    let marks: HashSet<usize> = (0..cand.len()).filter(|&j| cand[j]).collect();
    let hit = spans.iter().filter(|s| !s.is_disjoint(&marks)).count();
    hit as f64 / spans.len() as f64
}

/// (tp, fp, fn) by set algebra over marked positions.
pub fn strict_counts(cand: &[bool], reference: &[bool]) -> (usize, usize, usize) {
    let c: HashSet<usize> = (0..cand.len()).filter(|&j| cand[j]).collect();
    let r: HashSet<usize> = (0..reference.len()).filter(|&j| reference[j]).collect();
    (
        c.intersection(&r).count(),
        c.difference(&r).count(),
        r.difference(&c).count(),
    )
}

/// Textbook Fleiss' kappa. `ratings[rater][item]` is a category index in
/// `0..categories`. `None` when expected agreement is 1.
pub fn fleiss_kappa(ratings: &[Vec<usize>], categories: usize) -> Option<f64> {
    let raters = ratings.len();
    let items = ratings[0].len();
    let mut table = vec![vec![0usize; categories]; items];
    for row in ratings {
        for (i, &c) in row.iter().enumerate() {
            table[i][c] += 1;
        }
    }
    let m = raters as f64;
    let big_n = items as f64;
    let p_i: Vec<f64> = table
        .iter()
        .map(|row| {
            let sq: usize = row.iter().map(|&x| x * x).sum();
            (sq as f64 - m) / (m * (m - 1.0))
        })
        .collect();
    let p_bar = p_i.iter().sum::<f64>() / big_n;
    let p_j: Vec<f64> = (0..categories)
        .map(|j| table.iter().map(|row| row[j]).sum::<usize>() as f64 / (big_n * m))
        .collect();
    let p_e: f64 = p_j.iter().map(|p| p * p).sum();
    if (1.0 - p_e).abs() < 1e-15 {
        return None;
    }
    Some((p_bar - p_e) / (1.0 - p_e))
}

/// Fleiss' kappa with boundary = category 1, non-boundary = category 0.
pub fn boundary_kappa(refs: &[Vec<bool>]) -> Option<f64> {
    let ratings: Vec<Vec<usize>> = refs
        .iter()
        .map(|r| r.iter().map(|&b| b as usize).collect())
        .collect();
    fleiss_kappa(&ratings, 2)
}
