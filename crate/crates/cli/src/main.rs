use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use minifix_core::align::Site;
use minifix_core::feedback::FeedbackLevel;
use minifix_core::harness::{compare_modes, ModeRow};
use minifix_core::lang::simple_to_string;
use minifix_core::pipeline::{feedback_generation, PipelineError, RepairConfig};
use minifix_core::repair::{MinimizeConfig, DEFAULT_MAX_CARD};
use minifix_core::search::{build_index, CorpusIndex, Mode, RejectReason, Solution, DEFAULT_K};
use minifix_core::synth::chessboard::{self, Shape};
use minifix_core::synth::{gen_benchmark, Benchmark};
use minifix_core::TestSuite;

/// Data-driven feedback for introductory programming exercises.
#[derive(Parser)]
#[command(name = "minifix", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a search index from a directory of correct `.mi` programs.
    Index(IndexArgs),
    /// Produce feedback for one submission.
    Repair(RepairArgs),
    /// Generate a benchmark of failing mutants.
    Bench(BenchArgs),
    /// Run a benchmark under several search modes and k values.
    Compare(CompareArgs),
    /// Write a synthetic chessboard corpus and its test suite.
    Synth(SynthArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct IndexArgs {
    /// Directory of correct programs.
    #[arg(long)]
    solutions: PathBuf,
    #[arg(long)]
    tests: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    q: u32,
}

#[derive(Args, Clone)]
struct SearchArgs {
    #[arg(long, default_value_t = DEFAULT_K)]
    k: usize,
    /// Pattern height; re-embeds the index when it differs.
    #[arg(long)]
    q: Option<u32>,
    #[arg(long = "max-fixes", default_value_t = DEFAULT_MAX_CARD)]
    max_fixes: usize,
    #[arg(long, default_value_t = Mode::Pacv)]
    mode: Mode,
    #[arg(long)]
    no_prune: bool,
    #[arg(long)]
    no_group: bool,
    /// Repair against every retrieved candidate before choosing.
    #[arg(long)]
    exhaustive: bool,
    /// Use a random fraction of the index.
    #[arg(long, default_value_t = 1.0)]
    sample_frac: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report wall time on stderr.
    #[arg(long)]
    timing: bool,
}

impl SearchArgs {
    fn config(&self) -> RepairConfig {
        RepairConfig {
            k: self.k,
            mode: self.mode,
            minimize: MinimizeConfig {
                max_card: self.max_fixes,
                prune: !self.no_prune,
                group: !self.no_group,
            },
            exhaustive: self.exhaustive,
            ..RepairConfig::default()
        }
    }

    fn index(&self, path: &Path) -> Result<CorpusIndex> {
        if !(0.0..=1.0).contains(&self.sample_frac) {
            bail!("--sample-frac must lie in [0, 1]");
        }
        let mut index = CorpusIndex::load(path).with_context(|| format!("loading index {}", path.display()))?;
        if let Some(q) = self.q {
            if q == 0 {
                bail!("--q must be at least 1");
            }
            index = index.with_q(q);
        }
        if self.sample_frac < 1.0 {
            index = index.sample(self.sample_frac, self.seed);
        }
        Ok(index)
    }
}

#[derive(Args)]
struct RepairArgs {
    submission: PathBuf,
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    tests: PathBuf,
    #[command(flatten)]
    search: SearchArgs,
    /// Feedback detail, 1 (change count) to 5 (new code).
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u8).range(1..=5))]
    level: u8,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Print the aligned statement pairs of the winning candidate on stderr.
    #[arg(long)]
    dump_discrepancies: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    tests: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 300)]
    count: usize,
    #[arg(long, default_value_t = 3)]
    max_mutations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Mutate the programs in this directory instead of the indexed ones.
    #[arg(long)]
    from: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    bench: PathBuf,
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    tests: PathBuf,
    #[arg(long, value_delimiter = ',', default_values_t = Mode::ALL)]
    modes: Vec<Mode>,
    #[arg(long, value_delimiter = ',', default_values_t = [1, 3, 5])]
    ks: Vec<usize>,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "c")]
    prefix: String,
    /// Also write this many further distinct programs under `held_out/`.
    #[arg(long, default_value_t = 0)]
    held_out: usize,
}

fn load_suite(path: &Path) -> Result<TestSuite> {
    TestSuite::load(path).with_context(|| format!("loading test suite {}", path.display()))
}

fn exit_code(e: &PipelineError) -> u8 {
    match e {
        PipelineError::NoCandidates => 2,
        PipelineError::ExceedsThreshold { .. } => 3,
        PipelineError::Parse(_) => 4,
        PipelineError::NoValidCandidate => 5,
        PipelineError::Search(_) => 1,
    }
}

fn index(args: IndexArgs) -> Result<ExitCode> {
    if args.q == 0 {
        bail!("--q must be at least 1");
    }
    let suite = load_suite(&args.tests)?;
    let solutions =
        Solution::read_dir(&args.solutions).with_context(|| format!("reading {}", args.solutions.display()))?;
    let out_dir = args
        .out
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let solutions = solutions
        .into_iter()
        .map(|mut s| {
            s.source_path = relative_to(&s.source_path, out_dir);
            s
        })
        .collect();
    let report = build_index(solutions, &suite, args.q);
    for r in &report.rejected {
        match &r.reason {
            RejectReason::Parse(e) => eprintln!("rejected {}: {e}", r.program_id),
            RejectReason::Tests(failed) => {
                let names: Vec<&str> = failed.iter().map(|(n, _)| n.as_str()).collect();
                eprintln!("rejected {}: fails {}", r.program_id, names.join(", "));
            }
        }
    }
    report.index.save(&args.out)?;
    println!(
        "indexed {} program(s), rejected {}",
        report.index.len(),
        report.rejected.len()
    );
    Ok(ExitCode::SUCCESS)
}

/// `path` expressed relative to `base` when both are relative or both are
/// absolute; otherwise an absolute path.
fn relative_to(path: &Path, base: &Path) -> PathBuf {
    let abs = |p: &Path| fs::canonicalize(p).unwrap_or_else(|_| p.to_path_buf());
    let (path, base) = (abs(path), abs(base));
    let common = path
        .components()
        .zip(base.components())
        .take_while(|(a, b)| a == b)
        .count();
    if common == 0 {
        return path;
    }
    let mut out = PathBuf::new();
    for _ in base.components().skip(common) {
        out.push("..");
    }
    for c in path.components().skip(common) {
        out.push(c);
    }
    out
}

fn site_line(d: &minifix_core::align::Discrepancy) -> String {
    match d.site {
        Site::Stmt { container, index } => format!("{container}[{index}]"),
        Site::Header { owner, item } => format!("{owner}.header[{item}]"),
    }
}

fn repair(args: RepairArgs) -> Result<ExitCode> {
    let started = Instant::now();
    let suite = load_suite(&args.tests)?;
    let index = args.search.index(&args.index)?;
    let source =
        fs::read_to_string(&args.submission).with_context(|| format!("reading {}", args.submission.display()))?;
    let level = FeedbackLevel::new(args.level).expect("clap checks the range");
    let result = feedback_generation(&source, &index, &suite, &args.search.config(), level);
    if args.search.timing {
        eprintln!("elapsed: {:.1} ms", started.elapsed().as_secs_f64() * 1e3);
    }
    match result {
        Ok((feedback, repair)) => {
            if let Some((rank, id)) = &repair.source {
                info!("winning candidate {rank}: {id}");
            }
            if args.dump_discrepancies {
                for d in &repair.discrepancies {
                    let show =
                        |n: &Option<minifix_core::Node>| n.as_ref().map(simple_to_string).unwrap_or_else(|| "-".into());
                    eprintln!("{}\t{}\t{}", site_line(d), show(&d.e), show(&d.c));
                }
            }
            match args.format {
                Format::Text => print!("{feedback}"),
                Format::Json => println!("{}", feedback.to_json()),
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            eprintln!("error: {e}");
            Ok(ExitCode::from(exit_code(&e)))
        }
    }
}

fn bench(args: BenchArgs) -> Result<ExitCode> {
    let suite = load_suite(&args.tests)?;
    let origins = match &args.from {
        Some(dir) => Solution::read_dir(dir).with_context(|| format!("reading {}", dir.display()))?,
        None => CorpusIndex::load(&args.index)?
            .entries
            .into_iter()
            .map(|e| Solution::new(e.program_id, e.source))
            .collect(),
    };
    if origins.is_empty() {
        bail!("nothing to mutate");
    }
    let bench = gen_benchmark(&origins, &suite, args.count, args.max_mutations, args.seed);
    bench.save(&args.out)?;
    println!("wrote {} case(s) to {}", bench.cases.len(), args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn compare(args: CompareArgs) -> Result<ExitCode> {
    let suite = load_suite(&args.tests)?;
    let index = args.search.index(&args.index)?;
    let bench = Benchmark::load(&args.bench).with_context(|| format!("loading benchmark {}", args.bench.display()))?;
    let report = compare_modes(&bench, &index, &suite, &args.modes, &args.ks, &args.search.config());
    match args.format {
        Format::Text => print!("{}", report.render(args.search.timing)),
        Format::Json => {
            let rows: Vec<serde_json::Value> = report.rows.iter().map(|r| row_json(r, args.search.timing)).collect();
            println!("{}", serde_json::to_string_pretty(&rows)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn row_json(r: &ModeRow, timing: bool) -> serde_json::Value {
    let mut v = serde_json::json!({
        "mode": r.mode,
        "k": r.k,
        "cases": r.cases,
        "repaired": r.repaired,
        "within_label": r.within_label,
        "capability": r.capability(),
    });
    if timing {
        v["mean_ms"] = r.mean_ms.into();
        v["median_ms"] = r.median_ms.into();
    }
    v
}

fn synth(args: SynthArgs) -> Result<ExitCode> {
    fs::create_dir_all(&args.out)?;
    let corpus = chessboard::corpus(args.count, &Shape::ALL, args.seed, &args.prefix);
    for s in &corpus {
        fs::write(args.out.join(&s.source_path), &s.source)?;
    }
    fs::write(args.out.join("tests.json"), chessboard::suite().to_json())?;
    if args.held_out > 0 {
        let seen: BTreeSet<String> = corpus.iter().map(|s| s.source.clone()).collect();
        let dir = args.out.join("held_out");
        fs::create_dir_all(&dir)?;
        let extra = chessboard::corpus_avoiding(args.held_out, &Shape::ALL, args.seed.wrapping_add(1), "h", &seen);
        for s in &extra {
            fs::write(dir.join(&s.source_path), &s.source)?;
        }
    }
    println!("wrote {} program(s) to {}", corpus.len(), args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Index(a) => index(a),
        Command::Repair(a) => repair(a),
        Command::Bench(a) => bench(a),
        Command::Compare(a) => compare(a),
        Command::Synth(a) => synth(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_paths_climb_out_of_the_index_dir() {
        let tmp = std::env::temp_dir();
        let got = relative_to(&tmp.join("a/b/x.mi"), &tmp.join("a/c"));
        assert_eq!(got, PathBuf::from("../b/x.mi"));
    }
}
