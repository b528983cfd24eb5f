//! Multi-reference evaluation of sentence boundary detection.
//!
//! Several human references rarely agree on where semantic units end in a
//! speech transcript. This crate pools them into a general reference of
//! per-token votes, measures how much they agree, groups nearby votes into
//! windows and scores a candidate segmentation against those windows. The
//! final WiSeBE score is the windowed F1 scaled by the agreement ratio.
//!
//! ```
//! use wisebe::{parse_segmented_text, wisebe_score, Origin, ReferenceSet};
//!
//! let text = |label, origin, raw| parse_segmented_text("doc", origin, label, raw).unwrap().1;
//! let refs = ReferenceSet::new(vec![
//!     text("ref_1", Origin::Reference, "so we left. then it rained."),
//!     text("ref_2", Origin::Reference, "so we left then. it rained."),
//! ])
//! .unwrap();
//! let cand = text("S1", Origin::Candidate, "so we left. then it rained.");
//! let score = wisebe_score(&cand, &refs, 2).unwrap();
//! assert_eq!(score.f1_rw, 1.0);
//! assert!((score.wisebe - 1.0 / 3.0).abs() < 1e-12);
//! ```
//!
//! Classic exact-position scores, earlier multi-reference schemes and the
//! agreement statistics live alongside for comparison.

pub mod aggregation;
pub mod agreement;
pub mod baseline;
pub mod corpus;
pub mod error;
pub mod report;
pub mod segmentation;
pub mod wisebe;

pub use aggregation::{
    build_general_reference, build_window_reference, consensus_reference, GeneralReference, Window,
    WindowReference, DEFAULT_SEPARATION_LIMIT,
};
pub use agreement::{agreement_stats, fleiss_kappa, pearson, AgreementStats, CorrelationResult};
pub use baseline::{f1, lenient_prf, mean_prf, mean_ser, ser, strict_prf, Prf, SerScore};
pub use corpus::{load_corpus, CorpusLayout, Document};
pub use error::{AlignmentError, Error, Result};
pub use report::{evaluate_corpus, render_report, EvalConfig, EvaluationReport, Format};
pub use segmentation::{
    align, normalize_and_tokenize, parse_segmented_text, render_segmented_text, BoundaryVector,
    Origin, ReferenceSet, Transcript,
};
pub use wisebe::{combine, windowed_precision, windowed_recall, wisebe_score, WisebeScore};
