//! Experiment runner: seeded multi-run executions per algorithm and budget,
//! curve averaging, and CSV emission.
//!
//! Output files per (algorithm, budget) pair:
//!
//! * `<algo>_<budget>.csv` — header `algorithm,budget,call,mean_f1,stddev_f1`,
//!   one row per call index on the grid `1..=budget`, floats with 6 decimals.
//! * `<algo>_<budget>_final.csv` — header `algorithm,budget,run,final_f1,calls`,
//!   one row per run: the run's final corpus F1 and total scorer calls.
//!
//! Plus one `summary.csv` holding final means and pairwise Mann-Whitney U
//! p-values (header `record,algorithm,other,budget,mean_f1,u_statistic,p_value`;
//! `final` rows leave `other` and the test columns empty, `utest` rows leave
//! `mean_f1` empty).
//!
//! Best-so-far F1 is a step function of the call index; averaging carries the
//! last observation forward on the integer grid. Every seed derives from
//! (base seed, algorithm, budget, run, document), so re-running a spec
//! reproduces each CSV byte for byte regardless of `jobs`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::algorithms::{self, Algorithm, AlgorithmParams};
use crate::corpus::CorpusFile;
use crate::error::{Error, Result};
use crate::presets::preset;
use crate::rng::derive_seed;
use crate::scorer::BudgetedScorer;
use crate::stats::{mann_whitney_u, UTestResult};

/// Whether the scorer-call budget applies to each document separately or is
/// shared across the corpus in document order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BudgetScope {
    #[default]
    Document,
    Corpus,
}

impl FromStr for BudgetScope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "document" => Ok(BudgetScope::Document),
            "corpus" => Ok(BudgetScope::Corpus),
            other => Err(Error::Config(format!(
                "unknown budget scope {other:?} (expected document or corpus)"
            ))),
        }
    }
}

/// Best-so-far F1 change points from one seeded run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunCurve {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub budget: usize,
    /// (call index, best F1) with strictly increasing indices and values.
    pub points: Vec<(usize, f64)>,
}

impl RunCurve {
    pub fn from_scorer(algorithm: Algorithm, seed: u64, scorer: &BudgetedScorer) -> Self {
        Self {
            algorithm,
            seed,
            budget: scorer.budget(),
            points: scorer.trace().to_vec(),
        }
    }

    /// Step-interpolated values on the grid `1..=budget`; 0 before the first
    /// change point.
    pub fn grid(&self) -> Vec<f64> {
        fill_grid(&self.points, self.budget, 0)
    }
}

fn fill_grid(points: &[(usize, f64)], budget: usize, offset: usize) -> Vec<f64> {
    let mut grid = vec![0.0; budget];
    let mut value = 0.0;
    let mut next = 0;
    for (call, slot) in grid.iter_mut().enumerate() {
        let call = call + 1;
        while next < points.len() && points[next].0 + offset <= call {
            value = points[next].1;
            next += 1;
        }
        *slot = value;
    }
    grid
}

/// A full experiment: which algorithms at which budgets, how many runs, and
/// where the CSVs go.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub corpus: PathBuf,
    /// Algorithms to run; `None` parameters select the budget's preset row.
    pub algorithms: Vec<(Algorithm, Option<AlgorithmParams>)>,
    pub budgets: Vec<usize>,
    pub runs: usize,
    pub base_seed: u64,
    pub out_dir: PathBuf,
    /// Worker threads; 0 uses the default pool.
    pub jobs: usize,
    pub budget_scope: BudgetScope,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.algorithms.is_empty() {
            return Err(Error::Config("no algorithms selected".into()));
        }
        if self.budgets.is_empty() {
            return Err(Error::Config("no budgets given".into()));
        }
        if self.budgets.contains(&0) {
            return Err(Error::Config("budgets must be positive".into()));
        }
        if self.runs == 0 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        for (algorithm, params) in &self.algorithms {
            if let Some(p) = params {
                if p.algorithm() != *algorithm {
                    return Err(Error::Config(format!(
                        "parameters for {} attached to {algorithm}",
                        p.algorithm()
                    )));
                }
                p.validate().map_err(|e| Error::Config(e.to_string()))?;
            } else {
                for &budget in &self.budgets {
                    if preset(*algorithm, budget).is_none() {
                        return Err(Error::Config(format!(
                            "no preset for {algorithm} at budget {budget}; \
                             supply explicit parameters"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Averaged anytime curve for one (algorithm, budget) cell.
#[derive(Debug, Clone)]
pub struct AveragedCurve {
    pub algorithm: Algorithm,
    pub budget: usize,
    /// Mean best-so-far corpus F1 at each call index `1..=budget`.
    pub mean: Vec<f64>,
    /// Population standard deviation at each call index.
    pub stddev: Vec<f64>,
    /// Final corpus F1 of every run, in run order.
    pub final_f1s: Vec<f64>,
    /// Total scorer calls of every run (summed over documents), in run order.
    pub calls: Vec<usize>,
}

impl AveragedCurve {
    pub fn final_mean(&self) -> f64 {
        self.final_f1s.iter().sum::<f64>() / self.final_f1s.len() as f64
    }
}

/// Executes the whole experiment and returns one averaged curve per
/// (algorithm, budget) pair, in spec order. Does not write files; see
/// [`write_outputs`].
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<AveragedCurve>> {
    spec.validate()?;
    let corpus = CorpusFile::load(&spec.corpus)?;
    run_experiment_on(spec, &corpus)
}

/// [`run_experiment`] with an already-loaded corpus.
pub fn run_experiment_on(spec: &ExperimentSpec, corpus: &CorpusFile) -> Result<Vec<AveragedCurve>> {
    spec.validate()?;
    if corpus.documents.is_empty() {
        return Err(Error::Config("corpus has no documents".into()));
    }
    with_pool(spec.jobs, || {
        let mut curves = Vec::new();
        for &(algorithm, ref explicit) in &spec.algorithms {
            for &budget in &spec.budgets {
                let params = match explicit {
                    Some(p) => p.clone(),
                    None => preset(algorithm, budget)
                        .expect("validated: preset exists for this budget"),
                };
                curves.push(run_cell(spec, corpus, algorithm, &params, budget)?);
            }
        }
        Ok(curves)
    })
}

fn with_pool<T: Send>(jobs: usize, body: impl FnOnce() -> T + Send) -> T {
    if jobs == 0 {
        body()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("worker pool")
            .install(body)
    }
}

fn run_cell(
    spec: &ExperimentSpec,
    corpus: &CorpusFile,
    algorithm: Algorithm,
    params: &AlgorithmParams,
    budget: usize,
) -> Result<AveragedCurve> {
    let runs: Vec<Result<(Vec<f64>, usize)>> = (0..spec.runs as u64)
        .into_par_iter()
        .map(|run_index| match spec.budget_scope {
            BudgetScope::Document => {
                run_documents_scoped(spec, corpus, algorithm, params, budget, run_index)
            }
            BudgetScope::Corpus => {
                run_corpus_scoped(spec, corpus, algorithm, params, budget, run_index)
            }
        })
        .collect();

    let mut sums = vec![0.0; budget];
    let mut squares = vec![0.0; budget];
    let mut final_f1s = Vec::with_capacity(spec.runs);
    let mut calls = Vec::with_capacity(spec.runs);
    for run in runs {
        let (grid, run_calls) = run?;
        for (i, v) in grid.iter().enumerate() {
            sums[i] += v;
            squares[i] += v * v;
        }
        final_f1s.push(*grid.last().expect("budget is positive"));
        calls.push(run_calls);
    }
    let n = spec.runs as f64;
    let mean: Vec<f64> = sums.iter().map(|s| s / n).collect();
    let stddev: Vec<f64> = squares
        .iter()
        .zip(&mean)
        .map(|(sq, m)| (sq / n - m * m).max(0.0).sqrt())
        .collect();
    Ok(AveragedCurve {
        algorithm,
        budget,
        mean,
        stddev,
        final_f1s,
        calls,
    })
}

/// One run under per-document budgets: every document gets its own scorer and
/// the corpus curve is the across-document mean at each call index.
fn run_documents_scoped(
    spec: &ExperimentSpec,
    corpus: &CorpusFile,
    algorithm: Algorithm,
    params: &AlgorithmParams,
    budget: usize,
    run_index: u64,
) -> Result<(Vec<f64>, usize)> {
    let mut grid = vec![0.0; budget];
    let mut calls = 0usize;
    for (doc_index, (doc, gold)) in corpus.documents.iter().zip(&corpus.golds).enumerate() {
        let seed = derive_seed(
            spec.base_seed,
            &[algorithm.seed_tag(), budget as u64, run_index, doc_index as u64],
        );
        let mut scorer = BudgetedScorer::new(gold.clone(), budget)?;
        algorithms::run(doc, &mut scorer, params, seed)?;
        debug_assert!(scorer.call_count() <= budget);
        calls += scorer.call_count();
        let curve = RunCurve::from_scorer(algorithm, seed, &scorer);
        for (slot, value) in grid.iter_mut().zip(curve.grid()) {
            *slot += value;
        }
    }
    let docs = corpus.documents.len() as f64;
    for slot in grid.iter_mut() {
        *slot /= docs;
    }
    Ok((grid, calls))
}

/// One run under a shared corpus budget: documents are processed in order,
/// each consuming from the remaining pool; call indices accumulate across
/// documents and a document contributes 0 until its first evaluation.
fn run_corpus_scoped(
    spec: &ExperimentSpec,
    corpus: &CorpusFile,
    algorithm: Algorithm,
    params: &AlgorithmParams,
    budget: usize,
    run_index: u64,
) -> Result<(Vec<f64>, usize)> {
    let mut grid = vec![0.0; budget];
    let mut consumed = 0usize;
    for (doc_index, (doc, gold)) in corpus.documents.iter().zip(&corpus.golds).enumerate() {
        if consumed >= budget {
            break;
        }
        let seed = derive_seed(
            spec.base_seed,
            &[algorithm.seed_tag(), budget as u64, run_index, doc_index as u64],
        );
        let mut scorer = BudgetedScorer::new(gold.clone(), budget - consumed)?;
        algorithms::run(doc, &mut scorer, params, seed)?;
        for (slot, value) in grid
            .iter_mut()
            .zip(fill_grid(scorer.trace(), budget, consumed))
        {
            *slot += value;
        }
        consumed += scorer.call_count();
    }
    let docs = corpus.documents.len() as f64;
    for slot in grid.iter_mut() {
        *slot /= docs;
    }
    Ok((grid, consumed))
}

/// Mann-Whitney U over two per-run final-F1 samples.
pub fn compare_at_budget(
    finals_a: &[f64],
    finals_b: &[f64],
    alpha: f64,
) -> Result<UTestResult> {
    mann_whitney_u(finals_a, finals_b, alpha)
}

/// Writes every CSV for an experiment; returns the paths written.
pub fn write_outputs(spec: &ExperimentSpec, curves: &[AveragedCurve]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(&spec.out_dir)?;
    let mut written = Vec::new();
    for curve in curves {
        let path = spec
            .out_dir
            .join(format!("{}_{}.csv", curve.algorithm, curve.budget));
        fs::write(&path, curve_csv(curve))?;
        written.push(path);
        let path = spec
            .out_dir
            .join(format!("{}_{}_final.csv", curve.algorithm, curve.budget));
        fs::write(&path, finals_csv(curve))?;
        written.push(path);
    }
    let path = spec.out_dir.join("summary.csv");
    fs::write(&path, summary_csv(curves)?)?;
    written.push(path);
    Ok(written)
}

fn curve_csv(curve: &AveragedCurve) -> String {
    let mut out = String::from("algorithm,budget,call,mean_f1,stddev_f1\n");
    for (i, (mean, sd)) in curve.mean.iter().zip(&curve.stddev).enumerate() {
        writeln!(
            out,
            "{},{},{},{:.6},{:.6}",
            curve.algorithm,
            curve.budget,
            i + 1,
            mean,
            sd
        )
        .unwrap();
    }
    out
}

fn finals_csv(curve: &AveragedCurve) -> String {
    let mut out = String::from("algorithm,budget,run,final_f1,calls\n");
    for (run, (f1, calls)) in curve.final_f1s.iter().zip(&curve.calls).enumerate() {
        writeln!(
            out,
            "{},{},{},{:.6},{}",
            curve.algorithm, curve.budget, run, f1, calls
        )
        .unwrap();
    }
    out
}

fn summary_csv(curves: &[AveragedCurve]) -> Result<String> {
    let mut out = String::from("record,algorithm,other,budget,mean_f1,u_statistic,p_value\n");
    for curve in curves {
        writeln!(
            out,
            "final,{},,{},{:.6},,",
            curve.algorithm,
            curve.budget,
            curve.final_mean()
        )
        .unwrap();
    }
    for (i, a) in curves.iter().enumerate() {
        for b in curves.iter().skip(i + 1) {
            if a.budget != b.budget {
                continue;
            }
            let test = mann_whitney_u(&a.final_f1s, &b.final_f1s, 0.05)?;
            writeln!(
                out,
                "utest,{},{},{},,{:.6},{:.6}",
                a.algorithm, b.algorithm, a.budget, test.u_statistic, test.p_value
            )
            .unwrap();
        }
    }
    Ok(out)
}

/// Parses one finals CSV (as written by [`write_outputs`]) back into its
/// per-run final-F1 sample.
pub fn read_finals_csv(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let text = fs::read_to_string(&path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header.starts_with("algorithm,budget,run,final_f1") => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: "expected a finals CSV header".into(),
            })
        }
    }
    let mut finals = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let field = line.split(',').nth(3).ok_or_else(|| Error::Parse {
            line: idx + 2,
            message: "missing final_f1 column".into(),
        })?;
        finals.push(field.parse::<f64>().map_err(|_| Error::Parse {
            line: idx + 2,
            message: format!("bad final_f1 value {field:?}"),
        })?);
    }
    if finals.is_empty() {
        return Err(Error::Parse {
            line: 2,
            message: "finals CSV holds no runs".into(),
        });
    }
    Ok(finals)
}
