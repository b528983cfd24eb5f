use proptest::prelude::*;
use wisebe::{
    build_general_reference, build_window_reference, consensus_reference, fleiss_kappa,
    lenient_prf, mean_prf, mean_ser, normalize_and_tokenize, parse_segmented_text, pearson,
    render_segmented_text, strict_prf, windowed_precision, windowed_recall, wisebe_score,
    BoundaryVector, Origin, ReferenceSet,
};

fn reference_set(rows: &[Vec<bool>]) -> ReferenceSet {
    ReferenceSet::new(
        rows.iter()
            .enumerate()
            .map(|(i, r)| {
                BoundaryVector::from_bits("d", Origin::Reference, format!("ref_{i}"), r.clone())
            })
            .collect(),
    )
    .unwrap()
}

fn candidate(bits: &[bool]) -> BoundaryVector {
    BoundaryVector::from_bits("d", Origin::Candidate, "S", bits.to_vec())
}

fn instance() -> impl Strategy<Value = (Vec<Vec<bool>>, Vec<bool>)> {
    (1usize..=40, 2usize..=5).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(prop::collection::vec(prop::bool::weighted(0.3), n), m),
            prop::collection::vec(prop::bool::weighted(0.3), n),
        )
    })
}

fn word() -> impl Strategy<Value = String> {
    "[A-Za-z0-9']{1,6}"
}

/// Words interleaved with random punctuation and spacing.
fn segmented_text() -> impl Strategy<Value = String> {
    prop::collection::vec(
        (
            word(),
            prop::sample::select(vec!["", "", "", ".", ",", ";", "?!", ":", "...", " ."]),
        ),
        1..30,
    )
    .prop_map(|parts| {
        parts
            .into_iter()
            .map(|(w, p)| format!("{w}{p}"))
            .collect::<Vec<_>>()
            .join(" ")
    })
}

proptest! {
    #[test]
    fn agreement_ratio_bounds((rows, _) in instance()) {
        let Ok(gr) = build_general_reference(&reference_set(&rows)) else { return Ok(()) };
        prop_assert!((0.0..=1.0).contains(&gr.ar));
        let identical = rows.iter().all(|r| r == &rows[0]);
        prop_assert_eq!(gr.ar == 1.0, identical);
        prop_assert_eq!(gr.ar == 0.0, gr.counts.iter().all(|&d| d < 2));
        prop_assert!(gr.counts.iter().all(|&d| d <= gr.m));
    }

    #[test]
    fn scores_bounded_and_scaled((rows, cand) in instance(), limit in 0usize..=5) {
        let Ok(s) = wisebe_score(&candidate(&cand), &reference_set(&rows), limit) else { return Ok(()) };
        for x in [s.precision_rw, s.recall_rw, s.f1_rw, s.wisebe] {
            prop_assert!((0.0..=1.0).contains(&x));
        }
        prop_assert!(s.wisebe <= s.f1_rw);
        if s.f1_rw > 0.0 {
            prop_assert_eq!(s.wisebe == s.f1_rw, s.agreement_ratio == 1.0);
        }
    }

    #[test]
    fn larger_limits_merge_windows((rows, _) in instance(), limit in 0usize..=5) {
        let Ok(gr) = build_general_reference(&reference_set(&rows)) else { return Ok(()) };
        let narrow = build_window_reference(&gr, limit);
        let wide = build_window_reference(&gr, limit + 1);
        prop_assert!(wide.p() <= narrow.p());
    }

    #[test]
    fn zero_limit_windows_are_runs((rows, _) in instance()) {
        let Ok(gr) = build_general_reference(&reference_set(&rows)) else { return Ok(()) };
        let wr = build_window_reference(&gr, 0);
        for w in &wr.windows {
            prop_assert!(w.members().windows(2).all(|p| p[1] == p[0] + 1));
            prop_assert!(w.first() == 0 || gr.counts[w.first() - 1] == 0);
            prop_assert!(w.last() + 1 == gr.counts.len() || gr.counts[w.last() + 1] == 0);
        }
    }

    #[test]
    fn windows_partition_voted_positions((rows, _) in instance(), limit in 0usize..=5) {
        let Ok(gr) = build_general_reference(&reference_set(&rows)) else { return Ok(()) };
        let wr = build_window_reference(&gr, limit);
        let flat: Vec<usize> = wr.windows.iter().flat_map(|w| w.members().to_vec()).collect();
        let voted: Vec<usize> = gr.nonzero_positions().collect();
        prop_assert_eq!(flat, voted);
        for pair in wr.windows.windows(2) {
            prop_assert!(pair[1].first() - pair[0].last() - 1 > limit);
        }
    }

    #[test]
    fn spurious_boundary_lowers_precision((rows, cand) in instance(), limit in 0usize..=5) {
        let Ok(gr) = build_general_reference(&reference_set(&rows)) else { return Ok(()) };
        let wr = build_window_reference(&gr, limit);
        let free: Vec<usize> = (0..cand.len())
            .filter(|&j| !cand[j] && wr.window_at(j).is_none())
            .collect();
        let Some(&extra) = free.first() else { return Ok(()) };
        let before = candidate(&cand);
        let mut bits = cand.clone();
        bits[extra] = true;
        let after = candidate(&bits);
        let (p0, p1) = (windowed_precision(&before, &wr).unwrap(), windowed_precision(&after, &wr).unwrap());
        if p0 > 0.0 {
            prop_assert!(p1 < p0);
        } else {
            prop_assert_eq!(p1, 0.0);
        }
        prop_assert_eq!(windowed_recall(&before, &wr).unwrap(), windowed_recall(&after, &wr).unwrap());
    }

    #[test]
    fn consensus_extremes((rows, _) in instance()) {
        let set = reference_set(&rows);
        let any = consensus_reference(&set, 1).unwrap();
        let all = consensus_reference(&set, rows.len()).unwrap();
        for j in 0..rows[0].len() {
            prop_assert_eq!(any.bits()[j], rows.iter().any(|r| r[j]));
            prop_assert_eq!(all.bits()[j], rows.iter().all(|r| r[j]));
        }
    }

    #[test]
    fn baseline_relations((rows, cand) in instance()) {
        let set = reference_set(&rows);
        let c = candidate(&cand);
        let lenient = lenient_prf(&c, &set).unwrap();
        let per_ref: Vec<_> = set.references().iter().map(|r| strict_prf(&c, r).unwrap()).collect();
        for s in &per_ref {
            prop_assert!(lenient.precision >= s.precision);
        }
        let mean = mean_prf(&c, &set).unwrap();
        let lo = per_ref.iter().map(|s| s.f1).fold(f64::INFINITY, f64::min);
        let hi = per_ref.iter().map(|s| s.f1).fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(lo - 1e-12 <= mean.f1 && mean.f1 <= hi + 1e-12);
        if let Ok(ser) = mean_ser(&c, &set) {
            prop_assert_eq!(ser == 0.0, rows.iter().all(|r| r == &cand));
        }
    }

    #[test]
    fn self_match_is_perfect(bits in prop::collection::vec(any::<bool>(), 1..40)) {
        prop_assume!(bits.iter().any(|&b| b));
        let r = BoundaryVector::from_bits("d", Origin::Reference, "ref", bits.clone());
        let s = strict_prf(&candidate(&bits), &r).unwrap();
        prop_assert_eq!((s.precision, s.recall, s.f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn kappa_permutation_invariant((rows, _) in instance(), seed in any::<u64>()) {
        let Ok(k) = fleiss_kappa(&reference_set(&rows)) else { return Ok(()) };
        prop_assert!(k <= 1.0);
        let mut rev_refs = rows.clone();
        rev_refs.reverse();
        let n = rows[0].len();
        let shift = (seed as usize) % n;
        let rotated: Vec<Vec<bool>> = rows
            .iter()
            .map(|r| (0..n).map(|j| r[(j + shift) % n]).collect())
            .collect();
        prop_assert!((fleiss_kappa(&reference_set(&rev_refs)).unwrap() - k).abs() < 1e-12);
        prop_assert!((fleiss_kappa(&reference_set(&rotated)).unwrap() - k).abs() < 1e-12);
    }

    #[test]
    fn pearson_symmetric_and_affine(
        xs in prop::collection::vec(-100.0f64..100.0, 3..20),
        noise in prop::collection::vec(-10.0f64..10.0, 20),
        scale in 0.1f64..10.0,
        offset in -50.0f64..50.0,
    ) {
        let ys: Vec<f64> = xs.iter().zip(&noise).map(|(x, e)| 0.5 * x + e).collect();
        let (Ok(a), Ok(b)) = (pearson(&xs, &ys), pearson(&ys, &xs)) else { return Ok(()) };
        prop_assert!((a.pcc - b.pcc).abs() < 1e-12);
        let moved: Vec<f64> = xs.iter().map(|x| scale * x + offset).collect();
        prop_assert!((pearson(&moved, &ys).unwrap().pcc - a.pcc).abs() < 1e-9);
        prop_assert!((-1.0..=1.0).contains(&a.pcc));
    }

    #[test]
    fn segmented_text_round_trip(raw in segmented_text()) {
        let (t, bv) = parse_segmented_text("d", Origin::Reference, "r", &raw).unwrap();
        let text = render_segmented_text(&t, &bv).unwrap();
        let (t2, bv2) = parse_segmented_text("d", Origin::Reference, "r", &text).unwrap();
        prop_assert_eq!(t, t2);
        prop_assert_eq!(bv, bv2);
    }

    #[test]
    fn boundary_count_is_unit_count(raw in segmented_text()) {
        let (_, bv) = parse_segmented_text("d", Origin::Reference, "r", &raw).unwrap();
        let t = raw.trim_end();
        if t.ends_with(['.', '?', '!', ';']) {
            // every unit, including the last, is closed by exactly one boundary
            let closed = render_segmented_text(&normalize_and_tokenize("d", &raw).unwrap(), &bv).unwrap();
            prop_assert_eq!(closed.matches('.').count(), bv.boundary_count());
            prop_assert!(bv.bits()[bv.len() - 1]);
        }
    }

    #[test]
    fn normalization_idempotent(raw in segmented_text()) {
        let t = normalize_and_tokenize("d", &raw).unwrap();
        let again = normalize_and_tokenize("d", &t.tokens().join(" ")).unwrap();
        prop_assert_eq!(t, again);
    }
}

// Merging two windows that are both already hit removes one hit and one
// window, so recall h/p drops to (h-1)/(p-1) whenever h < p.
#[test]
fn merging_hit_windows_can_lower_recall() {
    let rows = vec![
        vec![true, false, false, false, false, false, false, false, false],
        vec![false, false, false, true, false, false, false, false, true],
    ];
    let gr = build_general_reference(&reference_set(&rows)).unwrap();
    let mut bits = vec![false; 9];
    bits[0] = true;
    bits[3] = true;
    let c = candidate(&bits);
    let narrow = build_window_reference(&gr, 1);
    let wide = build_window_reference(&gr, 2);
    assert_eq!(narrow.p(), 3);
    assert_eq!(wide.p(), 2);
    assert!((windowed_recall(&c, &narrow).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    assert_eq!(windowed_recall(&c, &wide).unwrap(), 0.5);
}
