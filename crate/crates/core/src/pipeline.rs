//! End-to-end feedback generation: search, align and repair against each
//! nearby correct program, keeping the smallest repair.

use log::{debug, info};
use thiserror::Error;

use crate::align::{alpha_conversion_with, discrepancies, AlphaConfig, Discrepancy};
use crate::feedback::{translate, Feedback, FeedbackLevel};
use crate::interp::{passes, TestSuite};
use crate::lang::{parse, Ast, SyntaxError};
use crate::repair::{apply_fixes, gen_fixes, minimize, MinimalFixSet, MinimizeConfig, RepairError};
use crate::search::{top_k, CorpusIndex, Mode, Query, SearchError, DEFAULT_K};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepairConfig {
    pub k: usize,
    pub mode: Mode,
    pub minimize: MinimizeConfig,
    /// Try every candidate instead of stopping at the first single-change repair.
    pub exhaustive: bool,
    pub alpha: AlphaConfig,
}

impl Default for RepairConfig {
    fn default() -> Self {
        RepairConfig {
            k: DEFAULT_K,
            mode: Mode::default(),
            minimize: MinimizeConfig::default(),
            exhaustive: false,
            alpha: AlphaConfig::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Parse(#[from] SyntaxError),
    #[error("no corpus program shares the submission's control flow")]
    NoCandidates,
    #[error("every candidate needs more than {max_card} change(s)")]
    ExceedsThreshold { max_card: usize },
    #[error("no candidate yields a passing rewrite")]
    NoValidCandidate,
    #[error(transparent)]
    Search(SearchError),
}

/// What happened with one retrieved candidate.
#[derive(Debug, Clone)]
pub struct CandidateReport {
    pub rank: usize,
    pub program_id: String,
    pub distance: f64,
    pub outcome: Result<(usize, usize), RepairError>,
}

#[derive(Debug, Clone)]
pub struct Repair {
    pub fix_set: MinimalFixSet,
    /// Rank and id of the winning candidate; `None` when nothing needed fixing.
    pub source: Option<(usize, String)>,
    pub repaired: Ast,
    /// Discrepancies against the winning candidate.
    pub discrepancies: Vec<Discrepancy>,
    pub candidates: Vec<CandidateReport>,
}

/// Cardinality, edit cost and retrieval rank; smaller wins.
type RankKey = (usize, usize, usize);

pub fn repair_ast(
    pe: &Ast,
    index: &CorpusIndex,
    suite: &TestSuite,
    cfg: &RepairConfig,
) -> Result<Repair, PipelineError> {
    if passes(pe, suite) {
        return Ok(Repair {
            fix_set: minimize(pe, &[], suite, &cfg.minimize).expect("passing program needs no fixes"),
            source: None,
            repaired: pe.clone(),
            discrepancies: Vec::new(),
            candidates: Vec::new(),
        });
    }
    let query = Query::new(pe, index.q);
    let hits = top_k(&query, index, cfg.k, cfg.mode).map_err(|e| match e {
        SearchError::EmptyCandidates => PipelineError::NoCandidates,
        other => PipelineError::Search(other),
    })?;
    let alpha = AlphaConfig {
        q: index.q,
        ..cfg.alpha
    };
    let mut best: Option<(RankKey, MinimalFixSet, Vec<Discrepancy>)> = None;
    let mut candidates = Vec::new();
    for (rank, hit) in hits.iter().enumerate() {
        let entry = &index.entries[hit.entry];
        let (pac, _) = alpha_conversion_with(pe, &entry.ast, &alpha);
        let (found, outcome) = match discrepancies(pe, &pac) {
            Ok(d) => {
                let m = minimize(pe, &gen_fixes(pe, &d), suite, &cfg.minimize);
                (d, m)
            }
            Err(_) => (Vec::new(), Err(RepairError::InvalidCandidate)),
        };
        debug!(
            "candidate {rank} ({}): {:?}",
            entry.program_id,
            outcome.as_ref().map(|m| m.cardinality)
        );
        candidates.push(CandidateReport {
            rank,
            program_id: entry.program_id.clone(),
            distance: hit.distance,
            outcome: outcome
                .as_ref()
                .map(|m| (m.cardinality, m.total_edit_cost))
                .map_err(Clone::clone),
        });
        if let Ok(m) = outcome {
            let key = (m.cardinality, m.total_edit_cost, rank);
            if best.as_ref().is_none_or(|b| key < b.0) {
                best = Some((key, m, found));
            }
            if !cfg.exhaustive && best.as_ref().is_some_and(|b| b.0 .0 <= 1) {
                break;
            }
        }
    }
    match best {
        Some(((_, _, rank), fix_set, discrepancies)) => {
            let repaired = apply_fixes(pe, &fix_set.fixes).expect("minimized fixes are conflict-free");
            info!("repaired with {} change(s) from candidate {rank}", fix_set.fixes.len());
            Ok(Repair {
                fix_set,
                source: Some((rank, candidates[rank].program_id.clone())),
                repaired,
                discrepancies,
                candidates,
            })
        }
        None if candidates
            .iter()
            .any(|c| matches!(c.outcome, Err(RepairError::ExceedsThreshold { .. }))) =>
        {
            Err(PipelineError::ExceedsThreshold {
                max_card: cfg.minimize.max_card,
            })
        }
        None => Err(PipelineError::NoValidCandidate),
    }
}

/// Parses a submission, repairs it and renders the feedback.
pub fn feedback_generation(
    source: &str,
    index: &CorpusIndex,
    suite: &TestSuite,
    cfg: &RepairConfig,
    level: FeedbackLevel,
) -> Result<(Feedback, Repair), PipelineError> {
    let pe = parse(source)?;
    let repair = repair_ast(&pe, index, suite, cfg)?;
    Ok((translate(&repair.fix_set, level), repair))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::build_index;
    use crate::synth::chessboard::{self, Shape};

    fn index() -> (CorpusIndex, TestSuite) {
        let suite = chessboard::suite();
        let report = build_index(chessboard::corpus(30, &Shape::ALL, 4, "c"), &suite, 1);
        assert!(report.rejected.is_empty());
        (report.index, suite)
    }

    #[test]
    fn correct_submission_needs_no_changes() {
        let (index, suite) = index();
        let src = &index.entries[0].source.clone();
        let (fb, repair) =
            feedback_generation(src, &index, &suite, &RepairConfig::default(), FeedbackLevel::MAX).unwrap();
        assert_eq!(fb.to_string(), "The program requires 0 changes\n");
        assert!(repair.source.is_none());
    }

    #[test]
    fn single_mutation_gets_one_change() {
        let (index, suite) = index();
        let src = index.entries[0].source.replace("% 2", "% 3");
        let (fb, repair) =
            feedback_generation(&src, &index, &suite, &RepairConfig::default(), FeedbackLevel::MAX).unwrap();
        assert_eq!(fb.change_count, 1, "{fb}");
        assert!(passes(&repair.repaired, &suite));
    }

    #[test]
    fn unknown_control_flow_has_no_candidates() {
        let (index, suite) = index();
        let src = "func chessboard(n: int) { while (n > 0) { while (n > 1) { while (n > 2) { n = 0; } } } }";
        let err = feedback_generation(src, &index, &suite, &RepairConfig::default(), FeedbackLevel::MAX).unwrap_err();
        assert!(matches!(err, PipelineError::NoCandidates));
    }

    #[test]
    fn syntax_errors_surface() {
        let (index, suite) = index();
        let err =
            feedback_generation("func (", &index, &suite, &RepairConfig::default(), FeedbackLevel::MAX).unwrap_err();
        assert!(matches!(err, PipelineError::Parse(_)));
    }
}
