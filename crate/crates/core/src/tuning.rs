//! Black-box parameter estimation.
//!
//! The tuner is a continuous cuckoo search over an algorithm's parameter box.
//! A candidate point is scored by running the target algorithm many times
//! with derived seeds on the tuning documents at a fixed scorer-call budget;
//! its fitness is the mean best F1 of those runs. A challenger replaces an
//! incumbent nest only if its mean is higher *and* either the Mann-Whitney U
//! test on the two run samples is significant or the mean improvement clears
//! a small slack, so noise alone does not churn the nests.

use rand::Rng;
use rayon::prelude::*;

use crate::algorithms::{self, Algorithm, AlgorithmParams, BaParams, CsaParams, GaParams, SaParams};
use crate::corpus::CorpusFile;
use crate::document::Document;
use crate::error::{Error, Result};
use crate::levy::{sample_levy, LevyParams};
use crate::rng::{derive_seed, seed_rng};
use crate::scorer::BudgetedScorer;
use crate::stats::mann_whitney_u;

/// Mean-improvement slack that lets a challenger through when the U test is
/// inconclusive; prevents deadlock on noisy plateaus.
const MEAN_SLACK: f64 = 0.01;

/// Whether a dimension takes real values or is rounded to integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimKind {
    Real,
    Integer,
}

/// One tunable dimension: bounds plus kind. Pinning `lo == hi` freezes it.
#[derive(Debug, Clone)]
pub struct ParamDim {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub kind: DimKind,
}

impl ParamDim {
    fn new(name: &str, lo: f64, hi: f64, kind: DimKind) -> Self {
        Self {
            name: name.to_string(),
            lo,
            hi,
            kind,
        }
    }
}

/// The box one algorithm's parameters live in.
#[derive(Debug, Clone)]
pub struct ParamSpace {
    dims: Vec<ParamDim>,
}

impl ParamSpace {
    pub fn new(dims: Vec<ParamDim>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidInput("parameter space has no dimensions".into()));
        }
        for dim in &dims {
            if dim.lo.is_nan() || dim.hi.is_nan() || dim.lo > dim.hi {
                return Err(Error::InvalidInput(format!(
                    "dimension {:?} has lo {} above hi {}",
                    dim.name, dim.lo, dim.hi
                )));
            }
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[ParamDim] {
        &self.dims
    }

    /// The default search box for an algorithm, in the dimension order the
    /// decoder expects.
    pub fn for_algorithm(algorithm: Algorithm) -> Self {
        let dims = match algorithm {
            Algorithm::SimulatedAnnealing => vec![
                ParamDim::new("cooling_rate", 0.01, 0.99, DimKind::Real),
                ParamDim::new("iterations_per_cycle", 1.0, 200.0, DimKind::Integer),
            ],
            Algorithm::GeneticAlgorithm => vec![
                ParamDim::new("population", 2.0, 200.0, DimKind::Integer),
                ParamDim::new("crossover_rate", 0.0, 1.0, DimKind::Real),
                ParamDim::new("mutation_rate", 0.0, 0.5, DimKind::Real),
            ],
            Algorithm::BatAlgorithm => vec![
                ParamDim::new("bats", 1.0, 100.0, DimKind::Integer),
                ParamDim::new("min_frequency", 0.0, 100.0, DimKind::Real),
                ParamDim::new("max_frequency", 0.0, 100.0, DimKind::Real),
                ParamDim::new("min_loudness", 0.0, 50.0, DimKind::Real),
                ParamDim::new("max_loudness", 0.0, 50.0, DimKind::Real),
                ParamDim::new("alpha", 0.01, 1.0, DimKind::Real),
                ParamDim::new("gamma", 0.01, 1.0, DimKind::Real),
            ],
            Algorithm::CuckooSearch => vec![
                ParamDim::new("nests", 1.0, 50.0, DimKind::Integer),
                ParamDim::new("destroyed", 0.0, 10.0, DimKind::Integer),
                ParamDim::new("levy_location", 0.0, 50.0, DimKind::Real),
                ParamDim::new("levy_scale", 0.01, 10.0, DimKind::Real),
            ],
        };
        Self { dims }
    }

    /// Clamps a point into the box and rounds integer dimensions.
    pub fn clamp(&self, point: &mut [f64]) {
        for (value, dim) in point.iter_mut().zip(&self.dims) {
            *value = value.clamp(dim.lo, dim.hi);
            if dim.kind == DimKind::Integer {
                *value = value.round();
            }
        }
    }

    /// Uniform random point inside the box.
    pub fn random_point(&self, rng: &mut crate::rng::SearchRng) -> Vec<f64> {
        let mut point: Vec<f64> = self
            .dims
            .iter()
            .map(|dim| {
                if dim.lo < dim.hi {
                    rng.random_range(dim.lo..dim.hi)
                } else {
                    dim.lo
                }
            })
            .collect();
        self.clamp(&mut point);
        point
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.dims.len()
            && point
                .iter()
                .zip(&self.dims)
                .all(|(v, d)| *v >= d.lo && *v <= d.hi)
    }
}

/// Decodes a point from the algorithm's canonical box into parameters.
///
/// Ordering constraints the box cannot express are repaired here: swapped
/// frequency or loudness bounds are reordered, and the destroyed-nest count
/// is capped below the nest count.
pub fn params_from_point(algorithm: Algorithm, point: &[f64]) -> Result<AlgorithmParams> {
    let expect = |n: usize| -> Result<()> {
        if point.len() != n {
            return Err(Error::InvalidInput(format!(
                "{algorithm} expects {n} parameter dimensions, got {}",
                point.len()
            )));
        }
        Ok(())
    };
    Ok(match algorithm {
        Algorithm::SimulatedAnnealing => {
            expect(2)?;
            AlgorithmParams::Sa(SaParams::new(point[0], point[1].round() as usize))
        }
        Algorithm::GeneticAlgorithm => {
            expect(3)?;
            AlgorithmParams::Ga(GaParams::new(
                point[0].round() as usize,
                point[1],
                point[2],
            ))
        }
        Algorithm::BatAlgorithm => {
            expect(7)?;
            let (min_f, max_f) = ordered(point[1], point[2]);
            let (min_l, max_l) = ordered(point[3], point[4]);
            AlgorithmParams::Ba(BaParams {
                bats: point[0].round() as usize,
                min_frequency: min_f,
                max_frequency: max_f,
                min_loudness: min_l,
                max_loudness: max_l,
                alpha: point[5],
                gamma: point[6],
            })
        }
        Algorithm::CuckooSearch => {
            expect(4)?;
            let nests = point[0].round() as usize;
            let destroyed = (point[1].round() as usize).min(nests.saturating_sub(1));
            AlgorithmParams::Csa(CsaParams {
                nests,
                destroyed_per_iteration: destroyed,
                levy: LevyParams {
                    location: point[2],
                    scale: point[3],
                },
            })
        }
    })
}

fn ordered(a: f64, b: f64) -> (f64, f64) {
    if a <= b { (a, b) } else { (b, a) }
}

/// Everything a tuning session needs.
#[derive(Debug, Clone)]
pub struct TuneJob {
    pub algorithm: Algorithm,
    pub space: ParamSpace,
    pub budget_per_run: usize,
    pub runs_per_candidate: usize,
    pub corpus: CorpusFile,
    pub meta_iterations: usize,
    pub meta_nests: usize,
    pub meta_destroyed: usize,
    pub meta_levy: LevyParams,
    pub alpha: f64,
    pub seed: u64,
}

impl TuneJob {
    /// A job with default meta-search settings over the algorithm's default
    /// box.
    pub fn new(algorithm: Algorithm, corpus: CorpusFile, budget_per_run: usize, seed: u64) -> Self {
        Self {
            algorithm,
            space: ParamSpace::for_algorithm(algorithm),
            budget_per_run,
            runs_per_candidate: 20,
            corpus,
            meta_iterations: 30,
            meta_nests: 3,
            meta_destroyed: 0,
            meta_levy: LevyParams {
                location: 0.0,
                scale: 0.05,
            },
            alpha: 0.05,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs_per_candidate < 2 {
            return Err(Error::InvalidInput(
                "runs per candidate must be at least 2 for the U test".into(),
            ));
        }
        if self.budget_per_run == 0 {
            return Err(Error::InvalidInput("budget per run must be positive".into()));
        }
        if self.meta_nests == 0 || self.meta_iterations == 0 {
            return Err(Error::InvalidInput(
                "meta nests and meta iterations must be positive".into(),
            ));
        }
        if self.meta_destroyed >= self.meta_nests {
            return Err(Error::InvalidInput(
                "meta destroyed count must be below the meta nest count".into(),
            ));
        }
        if self.corpus.documents.is_empty() {
            return Err(Error::InvalidInput("tuning corpus is empty".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidInput(format!(
                "alpha must be in (0,1), got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// Output of a tuning session.
#[derive(Debug, Clone)]
pub struct TuneResult {
    pub best_params: AlgorithmParams,
    pub best_point: Vec<f64>,
    pub mean_f1: f64,
    pub sample_f1s: Vec<f64>,
    pub evaluated_candidates: usize,
    pub total_scorer_calls: usize,
    /// Best nest mean after each meta-iteration; non-decreasing.
    pub history: Vec<f64>,
}

/// Runs one candidate: `runs_per_candidate` seeded runs on every tuning
/// document, fresh scorer each, returning the per-run best F1 averaged across
/// documents. Seeds derive from (job seed, candidate index, run index,
/// document index), so results do not depend on execution order.
pub fn evaluate_candidate(job: &TuneJob, candidate_index: u64, point: &[f64]) -> Result<Vec<f64>> {
    evaluate_candidate_counted(job, candidate_index, point).map(|(sample, _)| sample)
}

fn evaluate_candidate_counted(
    job: &TuneJob,
    candidate_index: u64,
    point: &[f64],
) -> Result<(Vec<f64>, usize)> {
    if !job.space.contains(point) {
        return Err(Error::InvalidInput(format!(
            "candidate point {point:?} is outside the parameter space"
        )));
    }
    let params = params_from_point(job.algorithm, point)?;
    params.validate()?;
    let runs: Vec<Result<(f64, usize)>> = (0..job.runs_per_candidate as u64)
        .into_par_iter()
        .map(|run_index| {
            let mut total = 0.0;
            let mut calls = 0usize;
            for (doc_index, (doc, gold)) in job
                .corpus
                .documents
                .iter()
                .zip(&job.corpus.golds)
                .enumerate()
            {
                let seed = derive_seed(
                    job.seed,
                    &[candidate_index, run_index, doc_index as u64],
                );
                let mut scorer = BudgetedScorer::new(gold.clone(), job.budget_per_run)?;
                algorithms::run(doc, &mut scorer, &params, seed)?;
                total += scorer.best_score().unwrap_or(0.0);
                calls += scorer.call_count();
            }
            Ok((total / job.corpus.documents.len() as f64, calls))
        })
        .collect();
    let mut sample = Vec::with_capacity(job.runs_per_candidate);
    let mut calls = 0usize;
    for run in runs {
        let (value, run_calls) = run?;
        sample.push(value);
        calls += run_calls;
    }
    Ok((sample, calls))
}

struct MetaNest {
    point: Vec<f64>,
    sample: Vec<f64>,
    mean: f64,
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Runs the meta-search and returns the best nest.
pub fn tune(job: &TuneJob) -> Result<TuneResult> {
    job.validate()?;
    let mut rng = seed_rng(derive_seed(job.seed, &[u64::from(b'm')]));
    let mut candidate_index: u64 = 0;
    let mut total_calls = 0usize;

    let spawn = |point: Vec<f64>,
                     candidate_index: &mut u64,
                     total_calls: &mut usize|
     -> Result<MetaNest> {
        let (sample, calls) = evaluate_candidate_counted(job, *candidate_index, &point)?;
        *candidate_index += 1;
        *total_calls += calls;
        let mean = mean(&sample);
        Ok(MetaNest {
            point,
            sample,
            mean,
        })
    };

    let mut nests = Vec::with_capacity(job.meta_nests);
    for _ in 0..job.meta_nests {
        let point = job.space.random_point(&mut rng);
        nests.push(spawn(point, &mut candidate_index, &mut total_calls)?);
    }

    let mut history = Vec::with_capacity(job.meta_iterations);
    for _ in 0..job.meta_iterations {
        let i = rng.random_range(0..nests.len());
        let mut point = nests[i].point.clone();
        for (value, dim) in point.iter_mut().zip(job.space.dims()) {
            if dim.lo >= dim.hi {
                continue;
            }
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            let step = sample_levy(&job.meta_levy, &mut rng) * (dim.hi - dim.lo);
            *value += sign * step;
        }
        job.space.clamp(&mut point);
        let challenger = spawn(point, &mut candidate_index, &mut total_calls)?;

        let j = if nests.len() == 1 {
            i
        } else {
            loop {
                let j = rng.random_range(0..nests.len());
                if j != i {
                    break j;
                }
            }
        };
        let delta = challenger.mean - nests[j].mean;
        let wins = delta > 0.0 && {
            let test = mann_whitney_u(&challenger.sample, &nests[j].sample, job.alpha)?;
            test.significant || delta > MEAN_SLACK
        };
        if wins {
            nests[j] = challenger;
        }

        nests.sort_by(|a, b| a.mean.partial_cmp(&b.mean).expect("means are never NaN"));
        for slot in nests.iter_mut().take(job.meta_destroyed) {
            let point = job.space.random_point(&mut rng);
            *slot = spawn(point, &mut candidate_index, &mut total_calls)?;
        }

        let best = nests
            .iter()
            .map(|n| n.mean)
            .fold(f64::NEG_INFINITY, f64::max);
        history.push(best);
    }

    let best = nests
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.mean.partial_cmp(&b.1.mean).unwrap())
        .map(|(i, _)| i)
        .expect("at least one nest");
    let best = nests.swap_remove(best);
    Ok(TuneResult {
        best_params: params_from_point(job.algorithm, &best.point)?,
        best_point: best.point,
        mean_f1: best.mean,
        sample_f1s: best.sample,
        evaluated_candidates: candidate_index as usize,
        total_scorer_calls: total_calls,
        history,
    })
}

/// Splits each document at a sentence boundary: the first `sentences_per_doc`
/// sentences (with their gold slices) go to the tuning side, the rest to the
/// evaluation side. A document whose sentences are exhausted contributes
/// nothing to the evaluation side and is reported by name.
pub fn split_tuning_subset(corpus: &CorpusFile, sentences_per_doc: usize) -> Result<SplitCorpus> {
    if sentences_per_doc == 0 {
        return Err(Error::InvalidInput(
            "sentences per document must be positive".into(),
        ));
    }
    let mut tuning_docs = Vec::new();
    let mut tuning_golds = Vec::new();
    let mut eval_docs = Vec::new();
    let mut eval_golds = Vec::new();
    let mut exhausted = Vec::new();

    for (doc, gold) in corpus.documents.iter().zip(&corpus.golds) {
        let mut cut = doc.len();
        let mut distinct = 0usize;
        let mut last = None;
        for (i, slot) in doc.words().iter().enumerate() {
            if last != Some(slot.sentence_index) {
                distinct += 1;
                last = Some(slot.sentence_index);
                if distinct > sentences_per_doc {
                    cut = i;
                    break;
                }
            }
        }
        let head_words = doc.words()[..cut].to_vec();
        let head_gold = gold.assignments()[..cut].to_vec();
        tuning_docs.push(Document::new(doc.name(), head_words)?);
        tuning_golds.push(crate::scorer::GoldStandard::new(head_gold));
        if cut == doc.len() {
            exhausted.push(doc.name().to_string());
        } else {
            let tail_words = doc.words()[cut..].to_vec();
            let tail_gold = gold.assignments()[cut..].to_vec();
            eval_docs.push(Document::new(doc.name(), tail_words)?);
            eval_golds.push(crate::scorer::GoldStandard::new(tail_gold));
        }
    }
    Ok(SplitCorpus {
        tuning: CorpusFile::new(tuning_docs, tuning_golds)?,
        evaluation: CorpusFile::new(eval_docs, eval_golds)?,
        exhausted_docs: exhausted,
    })
}

/// Result of [`split_tuning_subset`].
#[derive(Debug, Clone)]
pub struct SplitCorpus {
    pub tuning: CorpusFile,
    pub evaluation: CorpusFile,
    /// Names of documents whose words all landed on the tuning side.
    pub exhausted_docs: Vec<String>,
}
