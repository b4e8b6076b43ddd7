//! Labelled benchmarks of incorrect programs obtained by mutating correct ones.

use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::mutate::{mutate, MutationKind};
use crate::interp::{passes, TestSuite};
use crate::lang::{cf_signature, parse, pretty_print};
use crate::search::Solution;

pub const CASES_FILE: &str = "cases.jsonl";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchCase {
    pub id: String,
    /// Program id of the correct program the case was derived from.
    pub origin: String,
    pub mutations: Vec<MutationKind>,
    /// Number of edits that undo the mutations; an upper bound on the
    /// smallest repair.
    pub edits: usize,
    pub source: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Benchmark {
    pub cases: Vec<BenchCase>,
}

#[derive(Debug, Error)]
pub enum BenchmarkError {
    #[error("benchmark i/o")]
    Io(#[from] std::io::Error),
    #[error("{file} line {line}: {source}")]
    Json {
        file: String,
        line: usize,
        source: serde_json::Error,
    },
}

impl Benchmark {
    /// Writes `cases.jsonl` plus one `{id}.mi` per case into `dir`.
    pub fn save(&self, dir: &Path) -> Result<(), BenchmarkError> {
        fs::create_dir_all(dir)?;
        let mut out = String::new();
        for case in &self.cases {
            out.push_str(&serde_json::to_string(case).expect("case serializes"));
            out.push('\n');
            fs::write(dir.join(format!("{}.mi", case.id)), &case.source)?;
        }
        fs::write(dir.join(CASES_FILE), out)?;
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Benchmark, BenchmarkError> {
        let file = fs::File::open(dir.join(CASES_FILE))?;
        let mut cases = Vec::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            cases.push(serde_json::from_str(&line).map_err(|source| BenchmarkError::Json {
                file: CASES_FILE.into(),
                line: i + 1,
                source,
            })?);
        }
        Ok(Benchmark { cases })
    }
}

/// Draws `count` failing mutants of `origins`, each carrying between one and
/// `max_mutations` mutations. Deterministic under `seed`; duplicate sources
/// are skipped.
pub fn gen_benchmark(
    origins: &[Solution],
    suite: &TestSuite,
    count: usize,
    max_mutations: usize,
    seed: u64,
) -> Benchmark {
    let parsed: Vec<_> = origins
        .iter()
        .filter_map(|s| parse(&s.source).ok().map(|a| (s, a)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::BTreeSet::new();
    let mut cases = Vec::with_capacity(count);
    let mut attempts = 0;
    while cases.len() < count && attempts < count.max(1) * 50 && !parsed.is_empty() {
        attempts += 1;
        let (origin, ast) = parsed.choose(&mut rng).expect("non-empty");
        let wanted = rng.gen_range(1..=max_mutations.max(1));
        let mut mutant = ast.clone();
        let mut mutations = Vec::new();
        while mutations.len() < wanted {
            match mutate(&mutant, &mut rng) {
                Some((m, kind)) => {
                    mutant = m;
                    mutations.push(kind);
                }
                None => break,
            }
        }
        if mutations.is_empty() || cf_signature(&mutant) != cf_signature(ast) || passes(&mutant, suite) {
            continue;
        }
        let source = pretty_print(&mutant);
        if !seen.insert(source.clone()) {
            continue;
        }
        cases.push(BenchCase {
            id: format!("case{:04}", cases.len()),
            origin: origin.program_id.clone(),
            edits: mutations.iter().map(|m| m.edits()).sum(),
            mutations,
            source,
        });
    }
    Benchmark { cases }
}
