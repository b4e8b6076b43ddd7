//! Running the repair pipeline over a labelled benchmark and comparing
//! search modes.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::interp::{passes, TestSuite};
use crate::lang::parse;
use crate::pipeline::{repair_ast, PipelineError, RepairConfig};
use crate::search::{CorpusIndex, Mode};
use crate::synth::Benchmark;

#[derive(Debug, Clone, Serialize)]
pub struct CaseResult {
    pub id: String,
    pub repaired: bool,
    /// Number of fixes in the repair.
    pub changes: Option<usize>,
    /// Number of fix groups in the repair.
    pub cardinality: Option<usize>,
    /// The repair needs no more fix groups than the mutations it undoes.
    pub within_label: bool,
    pub millis: f64,
    pub error: Option<String>,
}

/// Repairs every case, in parallel, checking each reported repair against
/// the suite.
pub fn run_benchmark(bench: &Benchmark, index: &CorpusIndex, suite: &TestSuite, cfg: &RepairConfig) -> Vec<CaseResult> {
    bench
        .cases
        .par_iter()
        .map(|case| {
            let start = Instant::now();
            let outcome = parse(&case.source)
                .map_err(PipelineError::from)
                .and_then(|pe| repair_ast(&pe, index, suite, cfg));
            let millis = start.elapsed().as_secs_f64() * 1e3;
            match outcome {
                Ok(r) => {
                    let ok = passes(&r.repaired, suite);
                    let card = r.fix_set.cardinality;
                    CaseResult {
                        id: case.id.clone(),
                        repaired: ok,
                        changes: Some(r.fix_set.fixes.len()),
                        cardinality: Some(card),
                        within_label: ok && card <= case.edits,
                        millis,
                        error: (!ok).then(|| "reported repair fails the suite".to_owned()),
                    }
                }
                Err(e) => CaseResult {
                    id: case.id.clone(),
                    repaired: false,
                    changes: None,
                    cardinality: None,
                    within_label: false,
                    millis,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ModeRow {
    pub mode: Mode,
    pub k: usize,
    pub cases: usize,
    pub repaired: usize,
    pub within_label: usize,
    pub mean_ms: f64,
    pub median_ms: f64,
}

impl ModeRow {
    pub fn capability(&self) -> f64 {
        if self.cases == 0 {
            0.0
        } else {
            self.repaired as f64 / self.cases as f64
        }
    }

    pub fn summarize(mode: Mode, k: usize, results: &[CaseResult]) -> ModeRow {
        let mut times: Vec<f64> = results.iter().map(|r| r.millis).collect();
        times.sort_by(f64::total_cmp);
        let median_ms = match times.len() {
            0 => 0.0,
            n if n % 2 == 1 => times[n / 2],
            n => (times[n / 2 - 1] + times[n / 2]) / 2.0,
        };
        ModeRow {
            mode,
            k,
            cases: results.len(),
            repaired: results.iter().filter(|r| r.repaired).count(),
            within_label: results.iter().filter(|r| r.within_label).count(),
            mean_ms: if times.is_empty() {
                0.0
            } else {
                times.iter().sum::<f64>() / times.len() as f64
            },
            median_ms,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub rows: Vec<ModeRow>,
}

impl CompareReport {
    pub fn row(&self, mode: Mode, k: usize) -> Option<&ModeRow> {
        self.rows.iter().find(|r| r.mode == mode && r.k == k)
    }

    /// A plain-text table; timing columns only when asked for, since they
    /// vary from run to run.
    pub fn render(&self, timing: bool) -> String {
        let mut out = String::new();
        let _ = write!(
            out,
            "{:<6} {:>3} {:>6} {:>9} {:>11}",
            "mode", "k", "cases", "repaired", "capability"
        );
        if timing {
            let _ = write!(out, " {:>10} {:>10}", "mean_ms", "median_ms");
        }
        out.push('\n');
        for r in &self.rows {
            let _ = write!(
                out,
                "{:<6} {:>3} {:>6} {:>9} {:>10.1}%",
                r.mode.to_string(),
                r.k,
                r.cases,
                r.repaired,
                100.0 * r.capability()
            );
            if timing {
                let _ = write!(out, " {:>10.2} {:>10.2}", r.mean_ms, r.median_ms);
            }
            out.push('\n');
        }
        out
    }
}

/// Runs the benchmark once per (mode, k) combination.
pub fn compare_modes(
    bench: &Benchmark,
    index: &CorpusIndex,
    suite: &TestSuite,
    modes: &[Mode],
    ks: &[usize],
    base: &RepairConfig,
) -> CompareReport {
    let mut rows = Vec::new();
    for &mode in modes {
        for &k in ks {
            let cfg = RepairConfig { mode, k, ..*base };
            let results = run_benchmark(bench, index, suite, &cfg);
            rows.push(ModeRow::summarize(mode, k, &results));
        }
    }
    CompareReport { rows }
}
