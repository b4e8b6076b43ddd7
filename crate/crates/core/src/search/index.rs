use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::embed::{program_pacv, CharacteristicVector, Pacv, SortedPacv};
use crate::interp::{run_tests, Status, TestSuite};
use crate::lang::{cf_signature, parse, Ast, CfSignature, SyntaxError};

use super::SearchError;

/// A correct solution admitted to the index.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub program_id: String,
    pub source: String,
    pub source_path: PathBuf,
    pub ast: Ast,
    pub cf: CfSignature,
    pub pacv: Pacv,
    pub(crate) sorted: SortedPacv,
    pub(crate) cv: CharacteristicVector,
}

impl CorpusEntry {
    fn new(program_id: String, source: String, source_path: PathBuf, ast: Ast, pacv: Pacv) -> Self {
        let cf = cf_signature(&ast);
        CorpusEntry {
            sorted: pacv.sorted(),
            cv: pacv.to_char_vector(),
            program_id,
            source,
            source_path,
            ast,
            cf,
            pacv,
        }
    }
}

/// A candidate solution handed to [`build_index`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub program_id: String,
    pub source: String,
    pub source_path: PathBuf,
}

impl Solution {
    pub fn new(program_id: impl Into<String>, source: impl Into<String>) -> Self {
        let program_id = program_id.into();
        Solution {
            source_path: PathBuf::from(format!("{program_id}.mi")),
            program_id,
            source: source.into(),
        }
    }

    /// Every `*.mi` file directly under `dir`, sorted by file name.
    pub fn read_dir(dir: &Path) -> std::io::Result<Vec<Solution>> {
        let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "mi"))
            .collect();
        paths.sort();
        paths
            .into_iter()
            .map(|p| {
                Ok(Solution {
                    program_id: p.file_stem().unwrap_or_default().to_string_lossy().into_owned(),
                    source: fs::read_to_string(&p)?,
                    source_path: p,
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectReason {
    Parse(SyntaxError),
    /// Names and statuses of the failing tests.
    Tests(Vec<(String, Status)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub program_id: String,
    pub reason: RejectReason,
}

#[derive(Debug, Clone)]
pub struct BuildReport {
    pub index: CorpusIndex,
    pub rejected: Vec<Rejection>,
}

/// An immutable collection of correct programs with precomputed embeddings.
#[derive(Debug, Clone)]
pub struct CorpusIndex {
    pub q: u32,
    pub entries: Vec<CorpusEntry>,
}

#[derive(Serialize, Deserialize)]
struct Record {
    program_id: String,
    cf_signature: CfSignature,
    pacv: Pacv,
    source_path: PathBuf,
}

pub fn build_index(solutions: Vec<Solution>, suite: &TestSuite, q: u32) -> BuildReport {
    let mut entries = Vec::new();
    let mut rejected = Vec::new();
    for s in solutions {
        let ast = match parse(&s.source) {
            Ok(ast) => ast,
            Err(e) => {
                rejected.push(Rejection {
                    program_id: s.program_id,
                    reason: RejectReason::Parse(e),
                });
                continue;
            }
        };
        let (ok, outcomes) = run_tests(&ast, suite);
        if !ok {
            let failed = suite
                .tests
                .iter()
                .zip(&outcomes)
                .filter(|(_, o)| !o.passed())
                .map(|(t, o)| (t.name.clone(), o.status))
                .collect();
            rejected.push(Rejection {
                program_id: s.program_id,
                reason: RejectReason::Tests(failed),
            });
            continue;
        }
        let pacv = program_pacv(&ast, q);
        entries.push(CorpusEntry::new(s.program_id, s.source, s.source_path, ast, pacv));
    }
    BuildReport {
        index: CorpusIndex { q, entries },
        rejected,
    }
}

impl CorpusIndex {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Writes one JSON record per line. Source paths are stored as given.
    pub fn save(&self, path: &Path) -> Result<(), SearchError> {
        let mut out = BufWriter::new(fs::File::create(path)?);
        for e in &self.entries {
            let rec = Record {
                program_id: e.program_id.clone(),
                cf_signature: e.cf.clone(),
                pacv: e.pacv.clone(),
                source_path: e.source_path.clone(),
            };
            serde_json::to_writer(&mut out, &rec)?;
            out.write_all(b"\n")?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads an index file; relative source paths resolve against its directory.
    pub fn load(path: &Path) -> Result<CorpusIndex, SearchError> {
        let base = path.parent().unwrap_or(Path::new("."));
        let reader = BufReader::new(fs::File::open(path)?);
        let mut entries = Vec::new();
        let mut q = None;
        for (n, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: Record = serde_json::from_str(&line)?;
            let full = if rec.source_path.is_absolute() {
                rec.source_path.clone()
            } else {
                base.join(&rec.source_path)
            };
            let source = fs::read_to_string(&full)?;
            let ast = parse(&source).map_err(|e| SearchError::Corrupt {
                line: n + 1,
                message: format!("{}: {e}", rec.program_id),
            })?;
            if cf_signature(&ast) != rec.cf_signature {
                return Err(SearchError::Corrupt {
                    line: n + 1,
                    message: format!("{}: stored signature does not match source", rec.program_id),
                });
            }
            match q {
                None => q = Some(rec.pacv.q),
                Some(q) if q != rec.pacv.q => {
                    return Err(SearchError::Corrupt {
                        line: n + 1,
                        message: "mixed pattern heights".into(),
                    })
                }
                _ => {}
            }
            entries.push(CorpusEntry::new(rec.program_id, source, rec.source_path, ast, rec.pacv));
        }
        Ok(CorpusIndex {
            q: q.unwrap_or(crate::embed::DEFAULT_Q),
            entries,
        })
    }

    /// The same programs embedded with `q`-level patterns.
    pub fn with_q(&self, q: u32) -> CorpusIndex {
        if q == self.q {
            return self.clone();
        }
        CorpusIndex {
            q,
            entries: self
                .entries
                .iter()
                .map(|e| {
                    let pacv = program_pacv(&e.ast, q);
                    CorpusEntry::new(
                        e.program_id.clone(),
                        e.source.clone(),
                        e.source_path.clone(),
                        e.ast.clone(),
                        pacv,
                    )
                })
                .collect(),
        }
    }

    /// A deterministic subset of `round(frac * len)` entries in original order.
    pub fn sample(&self, frac: f64, seed: u64) -> CorpusIndex {
        let frac = frac.clamp(0.0, 1.0);
        let keep = (frac * self.entries.len() as f64).round() as usize;
        let mut order: Vec<usize> = (0..self.entries.len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        order.truncate(keep);
        order.sort_unstable();
        CorpusIndex {
            q: self.q,
            entries: order.into_iter().map(|i| self.entries[i].clone()).collect(),
        }
    }
}
