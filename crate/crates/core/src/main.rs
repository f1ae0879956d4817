//! Command-line benchmark harness.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use sensebench::algorithms::{Algorithm, AlgorithmParams, BaParams, CsaParams, GaParams, SaParams};
use sensebench::corpus::{generate_corpus, CorpusFile};
use sensebench::document::Configuration;
use sensebench::error::{Error, Result};
use sensebench::harness::{
    read_finals_csv, run_experiment, write_outputs, BudgetScope, ExperimentSpec,
};
use sensebench::levy::LevyParams;
use sensebench::scorer::f1;
use sensebench::stats::mann_whitney_u;
use sensebench::tuning::{split_tuning_subset, tune, TuneJob, TuneResult};

/// Environment variable consulted for the output directory when no flag or
/// config entry names one.
const OUT_DIR_ENV: &str = "SENSEBENCH_OUT";

#[derive(Parser)]
#[command(
    name = "sensebench",
    about = "Budget-limited stochastic search benchmark over sense assignments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write anytime-curve CSVs.
    Run(RunArgs),
    /// Estimate an algorithm's parameters with the cuckoo-search tuner.
    Tune(TuneArgs),
    /// Generate a seeded synthetic corpus.
    GenCorpus(GenCorpusArgs),
    /// Score an assignment file against a corpus gold standard.
    Score(ScoreArgs),
    /// Mann-Whitney U test between two finals CSVs.
    Compare(CompareArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config file (flat `key = value` lines); flags override it.
    config: Option<PathBuf>,
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Scorer-call budget; repeat for several budgets.
    #[arg(long = "budget")]
    budgets: Vec<usize>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Algorithm id (sa, ga, ba, csa); repeat for several.
    #[arg(long = "algo")]
    algos: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use the shipped preset parameter rows for the chosen budgets.
    #[arg(long)]
    preset_table: bool,
    #[arg(long)]
    jobs: Option<usize>,
    /// `document` (default) or `corpus`.
    #[arg(long)]
    budget_scope: Option<String>,
}

#[derive(Args)]
struct TuneArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    algo: String,
    /// Scorer-call budget per tuning run.
    #[arg(long)]
    budget: usize,
    #[arg(long, default_value_t = 20)]
    runs_per_candidate: usize,
    #[arg(long, default_value_t = 30)]
    meta_iterations: usize,
    #[arg(long, default_value_t = 3)]
    meta_nests: usize,
    #[arg(long, default_value_t = 0)]
    meta_destroyed: usize,
    #[arg(long, default_value_t = 0.0)]
    levy_location: f64,
    #[arg(long, default_value_t = 0.05)]
    levy_scale: f64,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Tune on the first N sentences of each document (0 = whole corpus).
    #[arg(long, default_value_t = 0)]
    tuning_sentences: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenCorpusArgs {
    #[arg(long, default_value_t = 1)]
    docs: usize,
    #[arg(long, default_value_t = 100)]
    words: usize,
    #[arg(long, default_value_t = 5)]
    max_senses: usize,
    #[arg(long, default_value_t = 10)]
    sentence_length: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output corpus file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Assignment file: one line per document with space-separated 0-based
    /// sense indices; `#` comments and blank lines are skipped.
    #[arg(long)]
    assignments: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    /// First finals CSV (`<algo>_<budget>_final.csv`).
    #[arg(long)]
    a: PathBuf,
    /// Second finals CSV.
    #[arg(long)]
    b: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Tune(args) => cmd_tune(args),
        Command::GenCorpus(args) => cmd_gen_corpus(args),
        Command::Score(args) => cmd_score(args),
        Command::Compare(args) => cmd_compare(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// Flat `key = value` config file; `#` starts a comment.
fn parse_config(path: &PathBuf) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path)?;
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: idx + 1,
            message: format!("expected `key = value`, got {line:?}"),
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn config_value<T: FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    match map.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse::<T>()
            .map(Some)
            .map_err(|_| Error::Config(format!("bad value {raw:?} for {key}"))),
    }
}

/// Explicit parameters for one algorithm out of `<algo>.<field>` config keys,
/// if any of them are present.
fn explicit_params(
    map: &BTreeMap<String, String>,
    algorithm: Algorithm,
) -> Result<Option<AlgorithmParams>> {
    let has_any = map.keys().any(|k| k.starts_with(&format!("{algorithm}.")));
    if !has_any {
        return Ok(None);
    }
    let need = |key: &str| -> Result<f64> {
        let full = format!("{algorithm}.{key}");
        config_value::<f64>(map, &full)?
            .ok_or_else(|| Error::Config(format!("missing {full} in config")))
    };
    let params = match algorithm {
        Algorithm::SimulatedAnnealing => {
            let mut p = SaParams::new(need("cooling_rate")?, need("iterations")? as usize);
            if let Some(a) = config_value::<f64>(map, "sa.initial_acceptance")? {
                p.initial_acceptance = a;
            }
            AlgorithmParams::Sa(p)
        }
        Algorithm::GeneticAlgorithm => AlgorithmParams::Ga(GaParams::new(
            need("population")? as usize,
            need("crossover_rate")?,
            need("mutation_rate")?,
        )),
        Algorithm::BatAlgorithm => AlgorithmParams::Ba(BaParams {
            bats: need("bats")? as usize,
            min_frequency: need("min_frequency")?,
            max_frequency: need("max_frequency")?,
            min_loudness: need("min_loudness")?,
            max_loudness: need("max_loudness")?,
            alpha: need("alpha")?,
            gamma: need("gamma")?,
        }),
        Algorithm::CuckooSearch => AlgorithmParams::Csa(CsaParams {
            nests: need("nests")? as usize,
            destroyed_per_iteration: need("destroyed")? as usize,
            levy: LevyParams {
                location: need("levy_location")?,
                scale: need("levy_scale")?,
            },
        }),
    };
    params.validate().map_err(|e| Error::Config(e.to_string()))?;
    Ok(Some(params))
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let config = match &args.config {
        Some(path) => parse_config(path)?,
        None => BTreeMap::new(),
    };

    let corpus = args
        .corpus
        .or_else(|| config.get("corpus").map(PathBuf::from))
        .ok_or_else(|| Error::Config("no corpus given (flag --corpus or config key)".into()))?;

    let mut budgets = args.budgets;
    if budgets.is_empty() {
        if let Some(raw) = config.get("budgets") {
            budgets = parse_list(raw, "budgets")?;
        }
    }

    let mut algo_ids = args.algos;
    if algo_ids.is_empty() {
        if let Some(raw) = config.get("algos") {
            algo_ids = raw.split(',').map(|s| s.trim().to_string()).collect();
        }
    }
    let mut algorithms = Vec::new();
    let use_presets =
        args.preset_table || config.get("preset_table").is_some_and(|v| v == "true");
    for id in &algo_ids {
        let algorithm = Algorithm::from_str(id)?;
        let params = if use_presets {
            None
        } else {
            let explicit = explicit_params(&config, algorithm)?;
            if explicit.is_none() {
                return Err(Error::Config(format!(
                    "no parameters for {algorithm}: pass --preset-table or set \
                     {algorithm}.* keys in the config"
                )));
            }
            explicit
        };
        algorithms.push((algorithm, params));
    }

    let out_dir = args
        .out
        .or_else(|| std::env::var(OUT_DIR_ENV).ok().map(PathBuf::from))
        .or_else(|| config.get("out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("results"));

    let spec = ExperimentSpec {
        corpus,
        algorithms,
        budgets,
        runs: match args.runs {
            Some(r) => r,
            None => config_value(&config, "runs")?.unwrap_or(100),
        },
        base_seed: match args.seed {
            Some(s) => s,
            None => config_value(&config, "seed")?.unwrap_or(42),
        },
        out_dir,
        jobs: match args.jobs {
            Some(j) => j,
            None => config_value(&config, "jobs")?.unwrap_or(0),
        },
        budget_scope: match args.budget_scope {
            Some(raw) => BudgetScope::from_str(&raw)?,
            None => match config.get("budget_scope") {
                Some(raw) => BudgetScope::from_str(raw)?,
                None => BudgetScope::Document,
            },
        },
    };

    let curves = run_experiment(&spec)?;
    let files = write_outputs(&spec, &curves)?;
    for curve in &curves {
        println!(
            "{} budget {}: final mean F1 {:.6} over {} runs",
            curve.algorithm,
            curve.budget,
            curve.final_mean(),
            curve.final_f1s.len()
        );
    }
    println!("wrote {} files to {}", files.len(), spec.out_dir.display());
    Ok(())
}

fn parse_list(raw: &str, key: &str) -> Result<Vec<usize>> {
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("bad value {s:?} in {key}")))
        })
        .collect()
}

fn cmd_tune(args: TuneArgs) -> Result<()> {
    let corpus = CorpusFile::load(&args.corpus)?;
    let tuning_corpus = if args.tuning_sentences > 0 {
        let split = split_tuning_subset(&corpus, args.tuning_sentences)?;
        for name in &split.exhausted_docs {
            eprintln!("warning: document {name:?} fully consumed by the tuning split");
        }
        println!("tuning on {} words", split.tuning.word_count());
        split.tuning
    } else {
        corpus
    };
    let algorithm = Algorithm::from_str(&args.algo)?;
    let mut job = TuneJob::new(algorithm, tuning_corpus, args.budget, args.seed);
    job.runs_per_candidate = args.runs_per_candidate;
    job.meta_iterations = args.meta_iterations;
    job.meta_nests = args.meta_nests;
    job.meta_destroyed = args.meta_destroyed;
    job.meta_levy = LevyParams::new(args.levy_location, args.levy_scale)?;
    job.alpha = args.alpha;

    let result = tune(&job)?;
    let report = tune_report(&job, &result);
    print!("{report}");
    if let Some(out) = args.out {
        fs::create_dir_all(&out)?;
        fs::write(out.join("tune_report.txt"), &report)?;
        fs::write(out.join("tune_result.csv"), tune_csv(&job, &result))?;
        println!("wrote report to {}", out.display());
    }
    Ok(())
}

fn tune_report(job: &TuneJob, result: &TuneResult) -> String {
    let mut out = String::new();
    out.push_str(&format!("algorithm: {}\n", job.algorithm));
    out.push_str(&format!("budget_per_run: {}\n", job.budget_per_run));
    out.push_str(&format!("runs_per_candidate: {}\n", job.runs_per_candidate));
    out.push_str(&format!("evaluated_candidates: {}\n", result.evaluated_candidates));
    out.push_str(&format!("total_scorer_calls: {}\n", result.total_scorer_calls));
    out.push_str(&format!("mean_f1: {:.6}\n", result.mean_f1));
    for (dim, value) in job.space.dims().iter().zip(&result.best_point) {
        out.push_str(&format!("{}: {}\n", dim.name, value));
    }
    out
}

fn tune_csv(job: &TuneJob, result: &TuneResult) -> String {
    let mut out = String::from("key,value\n");
    out.push_str(&format!("algorithm,{}\n", job.algorithm));
    out.push_str(&format!("budget_per_run,{}\n", job.budget_per_run));
    out.push_str(&format!("runs_per_candidate,{}\n", job.runs_per_candidate));
    out.push_str(&format!("evaluated_candidates,{}\n", result.evaluated_candidates));
    out.push_str(&format!("total_scorer_calls,{}\n", result.total_scorer_calls));
    out.push_str(&format!("mean_f1,{:.6}\n", result.mean_f1));
    for (dim, value) in job.space.dims().iter().zip(&result.best_point) {
        out.push_str(&format!("{},{}\n", dim.name, value));
    }
    out
}

fn cmd_gen_corpus(args: GenCorpusArgs) -> Result<()> {
    let corpus = generate_corpus(
        args.docs,
        args.words,
        args.max_senses,
        args.sentence_length,
        args.seed,
    )?;
    corpus.save(&args.out)?;
    println!(
        "wrote {} documents ({} words) to {}",
        corpus.documents.len(),
        corpus.word_count(),
        args.out.display()
    );
    Ok(())
}

fn cmd_score(args: ScoreArgs) -> Result<()> {
    let corpus = CorpusFile::load(&args.corpus)?;
    let text = fs::read_to_string(&args.assignments)?;
    let lines: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    if lines.len() != corpus.documents.len() {
        return Err(Error::InvalidInput(format!(
            "assignment file has {} documents but corpus has {}",
            lines.len(),
            corpus.documents.len()
        )));
    }
    let mut total = 0.0;
    for ((doc, gold), line) in corpus.documents.iter().zip(&corpus.golds).zip(&lines) {
        let assignments: Vec<usize> = line
            .split_whitespace()
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| Error::InvalidInput(format!("bad sense index {s:?}")))
            })
            .collect::<Result<_>>()?;
        let cfg = Configuration::new(assignments);
        cfg.validate(doc)?;
        let value = f1(&cfg, gold)?;
        total += value;
        println!("{} {:.6}", doc.name(), value);
    }
    println!("mean {:.6}", total / corpus.documents.len() as f64);
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> Result<()> {
    let a = read_finals_csv(&args.a)?;
    let b = read_finals_csv(&args.b)?;
    let result = mann_whitney_u(&a, &b, args.alpha)?;
    println!("u {:.6}", result.u_statistic);
    println!("p {:.6}", result.p_value);
    println!(
        "significant at alpha {}: {}",
        args.alpha,
        if result.significant { "yes" } else { "no" }
    );
    Ok(())
}
