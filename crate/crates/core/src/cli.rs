//! Command-line front end.
//!
//! Every subcommand prints a JSON document on standard output; `--pretty`
//! switches to human-readable tables. Exit status is 0 on success, 1 for
//! usage errors and 2 for data or validation errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::corpus::{self, normalize, CharsetPolicy, NormalizedCorpus, DEFAULT_SPECIALS};
use crate::error::{Error, Result};
use crate::keypad::{abc_baseline, Layout};
use crate::layout_ga::{multi_trial_optimize, Baselines, GaParams, SymbolTable};
use crate::multigram::{run_selection, MultigramSet, SelectionParams};
use crate::session::SessionFile;
use crate::stats::wilcoxon_rank_sum;
use crate::typing::{deprecated_set, evaluate, FitnessBreakdown, FitnessWeights, Metric};

#[derive(Debug, Parser)]
#[command(name = "keypad", version, about = "Personalized multi-tap keypad layout optimizer")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Master seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Special characters kept besides a-z and space.
    #[arg(long, global = true, default_value = DEFAULT_SPECIALS)]
    pub charset: String,
    /// Keep digits in the corpus.
    #[arg(long, global = true)]
    pub digits: bool,
    /// Concurrent optimization trials (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Print tables instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MetricArg {
    TwoThumb,
    Moradi,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::TwoThumb => Metric::TwoThumb,
            MetricArg::Moradi => Metric::Moradi,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BaselineKind {
    Abc,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// N-gram statistics and the multigram candidate table.
    Analyze {
        corpus: PathBuf,
        #[arg(long, default_value_t = corpus::DEFAULT_POOL_SIZE)]
        top: usize,
    },
    /// Select multigrams with the preprocessing GA.
    Multigrams {
        corpus: PathBuf,
        #[arg(long, default_value_t = 1000)]
        iters: usize,
        #[arg(long, default_value_t = 50)]
        pop: usize,
        #[arg(long, default_value_t = corpus::DEFAULT_POOL_SIZE)]
        pool: usize,
        #[arg(long, default_value_t = corpus::MULTIGRAM_SLOTS)]
        size: usize,
    },
    /// Evolve layouts over several independent trials.
    Optimize {
        corpus: PathBuf,
        #[arg(long, value_enum, default_value = "two-thumb")]
        metric: MetricArg,
        /// `auto`, `none`, or a file listing multigrams.
        #[arg(long, default_value = "auto")]
        multigrams: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 50_050)]
        evals: usize,
        #[arg(long, default_value_t = 50)]
        pop: usize,
        /// Where to write the best layout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Skip the random-layout and ABC baselines.
        #[arg(long)]
        no_baselines: bool,
    },
    /// Cost breakdown of a layout on a corpus.
    Evaluate {
        layout: PathBuf,
        corpus: PathBuf,
        #[arg(long, value_enum, default_value = "two-thumb")]
        metric: MetricArg,
    },
    /// Side-by-side breakdowns of two layouts.
    Compare {
        layout_a: PathBuf,
        layout_b: PathBuf,
        corpus: PathBuf,
        #[arg(long, value_enum, default_value = "two-thumb")]
        metric: MetricArg,
    },
    /// Rank-sum test of sample A against sample B (one number per line).
    Wilcoxon { file_a: PathBuf, file_b: PathBuf },
    /// Write a reference layout.
    Baseline {
        #[arg(value_enum)]
        kind: BaselineKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score a session file from the typing trainer.
    ScoreSession { session: PathBuf },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    run_with(args, &mut stdout.lock(), &mut std::io::stderr())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn policy(g: &GlobalOpts) -> CharsetPolicy {
    CharsetPolicy::with_specials(&g.charset).with_digits(g.digits)
}

fn read_corpus(path: &Path, policy: &CharsetPolicy) -> Result<NormalizedCorpus> {
    let raw = std::fs::read(path)?;
    normalize(&String::from_utf8_lossy(&raw), policy)
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    writeln!(out, "{text}")?;
    Ok(())
}

fn read_samples(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.parse::<f64>().map_err(|e| Error::Malformed { path: path.to_owned(), reason: format!("'{l}': {e}") })
        })
        .collect()
}

/// Multigrams from a file: the JSON printed by `multigrams`, or one per line.
fn read_multigram_file(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path)?;
    if let Ok(v) = serde_json::from_str::<serde_json::Value>(&text) {
        let members = v.get("members").or_else(|| v.get("best").and_then(|b| b.get("members")));
        if let Some(arr) = members.and_then(|m| m.as_array()) {
            return arr
                .iter()
                .map(|x| {
                    x.as_str().map(str::to_owned).ok_or_else(|| Error::Malformed {
                        path: path.to_owned(),
                        reason: "multigram entries must be strings".into(),
                    })
                })
                .collect();
        }
    }
    Ok(text.lines().map(str::trim).filter(|l| !l.is_empty()).map(str::to_owned).collect())
}

fn breakdown_table(out: &mut dyn Write, rows: &[(&str, FitnessBreakdown)]) -> Result<()> {
    writeln!(out, "{:<24} | {}", "Layout", FitnessBreakdown::TABLE_HEADER)?;
    for (name, b) in rows {
        writeln!(out, "{:<24} | {}", name, b.table_row())?;
    }
    Ok(())
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut (dyn Write + Send)) -> Result<()> {
    let g = &cli.global;
    let policy = policy(g);
    match &cli.command {
        Command::Analyze { corpus: path, top } => {
            let c = read_corpus(path, &policy)?;
            let unigrams = corpus::ngram_counts(&c, 1);
            let bigrams = corpus::ngram_counts(&c, 2);
            let trigrams = corpus::ngram_counts(&c, 3);
            let candidates = corpus::top_candidates(&c, *top)?;
            if g.pretty {
                writeln!(out, "characters: {} ({} excluding spaces)", c.char_count_all(), c.char_count_layout())?;
                writeln!(out, "distinct: {} unigrams, {} bigrams, {} trigrams", unigrams.len(), bigrams.len(), trigrams.len())?;
                writeln!(out, "{:>4}  {:<6} {:>7}", "rank", "gram", "count")?;
                for cand in &candidates {
                    writeln!(out, "{:>4}  {:<6} {:>7}", cand.rank, cand.text, cand.count)?;
                }
            } else {
                emit(
                    out,
                    &json!({
                        "corpus_digest": c.source_digest(),
                        "char_count_all": c.char_count_all(),
                        "char_count_layout": c.char_count_layout(),
                        "unigrams": unigrams.entries,
                        "bigram_count": bigrams.len(),
                        "trigram_count": trigrams.len(),
                        "candidates": candidates,
                    }),
                )?;
            }
        }
        Command::Multigrams { corpus: path, iters, pop, pool, size } => {
            let c = read_corpus(path, &policy)?;
            let params = SelectionParams {
                pool_size: *pool,
                set_size: *size,
                population: *pop,
                iterations: *iters,
                seed: g.seed,
                ..Default::default()
            };
            let run = run_selection(&c, &params)?;
            let counts = corpus::rank_candidates(&c);
            let with_counts: Vec<_> = run
                .best
                .members
                .iter()
                .map(|m| {
                    let count = counts.iter().find(|x| &x.text == m).map_or(0, |x| x.count);
                    json!({ "text": m, "count": count })
                })
                .collect();
            if g.pretty {
                writeln!(out, "rank-shift fitness: {}", run.best.fitness)?;
                for m in &with_counts {
                    writeln!(out, "{:<6} {:>7}", m["text"].as_str().unwrap_or_default(), m["count"])?;
                }
            } else {
                emit(
                    out,
                    &json!({
                        "members": run.best.members,
                        "fitness": run.best.fitness,
                        "counts": with_counts,
                        "evaluations": run.evaluations,
                        "params": params,
                    }),
                )?;
            }
        }
        Command::Optimize { corpus: path, metric, multigrams, trials, evals, pop, out: out_path, no_baselines } => {
            let c = read_corpus(path, &policy)?;
            let set = match multigrams.as_str() {
                "none" => None,
                "auto" => {
                    let params = SelectionParams { seed: g.seed, ..Default::default() };
                    Some(run_selection(&c, &params)?.best)
                }
                file => {
                    let mut members = read_multigram_file(Path::new(file))?;
                    members.sort();
                    members.dedup();
                    Some(MultigramSet { members, fitness: f64::NAN })
                }
            };
            let table = match &set {
                Some(s) => SymbolTable::with_multigrams(s)?,
                None => SymbolTable::letters_only(),
            };
            let params = GaParams {
                population: *pop,
                evaluations: *evals,
                trials: *trials,
                seed: g.seed,
                weights: FitnessWeights::for_metric((*metric).into()),
                workers: g.workers,
                ..Default::default()
            };
            let baselines = Baselines { random: !no_baselines, abc: !no_baselines };
            let err_lock = Mutex::new(err);
            let progress = |trial: usize, run: &crate::layout_ga::RunResult, took: std::time::Duration| {
                if let Ok(mut e) = err_lock.lock() {
                    let _ = writeln!(
                        e,
                        "trial {trial}: evaluations {}, best {:.5} ({:.1} s)",
                        run.evaluations,
                        run.breakdown.total,
                        took.as_secs_f64()
                    );
                }
            };
            let mut opt = multi_trial_optimize(&c, &table, &params, baselines, Some(&progress))?;
            opt.best_layout.charset = policy.specials_string();
            if let Some(p) = out_path {
                opt.best_layout.save(p)?;
            }
            let report = &opt.report;
            if g.pretty {
                writeln!(out, "metric: {}   multigrams: {}", params.weights.variant.name(), report.multigrams.join(" "))?;
                writeln!(out, "{:<10} | {:<22} | {:<22}", "ABC", "Random best / avg", "Optimized best / avg")?;
                writeln!(
                    out,
                    "{:<10} | {:<22} | {:<22}",
                    report.abc.map_or("--".into(), |b| format!("{:.2}", b.total)),
                    report.random.map_or("--".into(), |s| s.table_cell()),
                    report.optimized.table_cell()
                )?;
                writeln!(out)?;
                breakdown_table(out, &[("best trial", report.best_trial().best)])?;
            } else {
                emit(out, report)?;
            }
        }
        Command::Evaluate { layout, corpus: path, metric } => {
            let l = Layout::load(layout)?;
            let c = read_corpus(path, &policy)?;
            let b = evaluate(&l, &c, &FitnessWeights::for_metric((*metric).into()))?;
            if g.pretty {
                breakdown_table(out, &[(&layout.display().to_string(), b)])?;
            } else {
                let mut deprecated: Vec<String> = deprecated_set(&l).into_iter().map(|s| s.as_str().to_owned()).collect();
                deprecated.sort();
                emit(out, &json!({ "layout": layout, "breakdown": b, "deprecated": deprecated }))?;
            }
        }
        Command::Compare { layout_a, layout_b, corpus: path, metric } => {
            let c = read_corpus(path, &policy)?;
            let weights = FitnessWeights::for_metric((*metric).into());
            let a = evaluate(&Layout::load(layout_a)?, &c, &weights)?;
            let b = evaluate(&Layout::load(layout_b)?, &c, &weights)?;
            if g.pretty {
                breakdown_table(out, &[(&layout_a.display().to_string(), a), (&layout_b.display().to_string(), b)])?;
            } else {
                emit(out, &json!({ "a": { "layout": layout_a, "breakdown": a }, "b": { "layout": layout_b, "breakdown": b } }))?;
            }
        }
        Command::Wilcoxon { file_a, file_b } => {
            let r = wilcoxon_rank_sum(&read_samples(file_a)?, &read_samples(file_b)?)?;
            if g.pretty {
                writeln!(out, "m = {}, n = {}", r.m, r.n)?;
                writeln!(out, "W      {:.1}", r.w)?;
                writeln!(out, "E(W)   {:.1}", r.e_w)?;
                writeln!(out, "sd(W)  {:.1}", r.sigma_w)?;
                writeln!(out, "Z_w    {:.2}", r.z_w)?;
                writeln!(out, "P      {:.3e}", r.p_one_sided)?;
            } else {
                emit(out, &r)?;
            }
        }
        Command::Baseline { kind: BaselineKind::Abc, out: out_path } => {
            let mut l = abc_baseline();
            l.charset = policy.specials_string();
            match out_path {
                Some(p) => l.save(p)?,
                None => writeln!(out, "{}", l.to_json()?)?,
            }
        }
        Command::ScoreSession { session } => {
            let report = SessionFile::load(session)?.score()?;
            if g.pretty {
                writeln!(out, "layout {}  subject {}", report.layout_id, report.subject_id)?;
                for (i, m) in report.messages.iter().enumerate() {
                    writeln!(out, "{:>3}  d={:<3} {:>8.2} s  {:>7.2} CPM", i + 1, m.edit_distance, m.effective_seconds, m.cpm)?;
                }
                if let Some(mean) = report.mean_cpm {
                    writeln!(out, "mean {mean:.2} CPM")?;
                }
            } else {
                emit(out, &report)?;
            }
        }
    }
    Ok(())
}
