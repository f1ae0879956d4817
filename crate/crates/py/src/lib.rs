//! Python bindings: corpora, budgeted scoring, the four search algorithms,
//! the Lévy sampler, the Mann-Whitney U test, and the parameter tuner.
//!
//! The module mirrors the Rust API with plain Python types: configurations
//! are lists of ints, gold standards are lists of ints or `None`, parameters
//! travel as dicts keyed like the CLI config file.

use std::collections::BTreeMap;
use std::str::FromStr;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyModule};

use sensebench::algorithms::{
    self, Algorithm, AlgorithmParams, BaParams, CsaParams, GaParams, SaParams,
};
use sensebench::corpus::{generate_corpus, CorpusFile};
use sensebench::document::{self, Configuration};
use sensebench::levy::LevyParams;
use sensebench::rng::seed_rng;
use sensebench::scorer::{BudgetedScorer, GoldStandard};
use sensebench::tuning::{self, split_tuning_subset, TuneJob};

fn to_py_err(e: sensebench::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_algorithm(name: &str) -> PyResult<Algorithm> {
    Algorithm::from_str(name).map_err(to_py_err)
}

/// Parameter dict (config-file keys) -> typed parameters.
pub(crate) fn params_from_map(
    algorithm: Algorithm,
    map: &BTreeMap<String, f64>,
) -> Result<AlgorithmParams, String> {
    let need = |key: &str| -> Result<f64, String> {
        map.get(key)
            .copied()
            .ok_or_else(|| format!("missing parameter {key:?} for {algorithm}"))
    };
    let params = match algorithm {
        Algorithm::SimulatedAnnealing => {
            let mut p = SaParams::new(need("cooling_rate")?, need("iterations")? as usize);
            if let Some(&a) = map.get("initial_acceptance") {
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
    params.validate().map_err(|e| e.to_string())?;
    Ok(params)
}

pub(crate) fn params_to_map(params: &AlgorithmParams) -> BTreeMap<String, f64> {
    let mut map = BTreeMap::new();
    match params {
        AlgorithmParams::Sa(p) => {
            map.insert("cooling_rate".into(), p.cooling_rate);
            map.insert("iterations".into(), p.iterations_per_cycle as f64);
            map.insert("initial_acceptance".into(), p.initial_acceptance);
        }
        AlgorithmParams::Ga(p) => {
            map.insert("population".into(), p.population as f64);
            map.insert("crossover_rate".into(), p.crossover_rate);
            map.insert("mutation_rate".into(), p.mutation_rate);
        }
        AlgorithmParams::Ba(p) => {
            map.insert("bats".into(), p.bats as f64);
            map.insert("min_frequency".into(), p.min_frequency);
            map.insert("max_frequency".into(), p.max_frequency);
            map.insert("min_loudness".into(), p.min_loudness);
            map.insert("max_loudness".into(), p.max_loudness);
            map.insert("alpha".into(), p.alpha);
            map.insert("gamma".into(), p.gamma);
        }
        AlgorithmParams::Csa(p) => {
            map.insert("nests".into(), p.nests as f64);
            map.insert("destroyed".into(), p.destroyed_per_iteration as f64);
            map.insert("levy_location".into(), p.levy.location);
            map.insert("levy_scale".into(), p.levy.scale);
        }
    }
    map
}

fn resolve_params(
    algorithm: Algorithm,
    params: Option<BTreeMap<String, f64>>,
) -> PyResult<AlgorithmParams> {
    match params {
        None => Ok(AlgorithmParams::default_for(algorithm)),
        Some(map) => params_from_map(algorithm, &map).map_err(PyValueError::new_err),
    }
}

/// A set of documents with gold annotations.
#[pyclass(module = "sensebench_py", skip_from_py_object)]
#[derive(Clone)]
struct Corpus {
    inner: CorpusFile,
}

#[pymethods]
impl Corpus {
    /// Parse a corpus file from disk.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(Self {
            inner: CorpusFile::load(path).map_err(to_py_err)?,
        })
    }

    /// Generate a seeded synthetic corpus.
    #[staticmethod]
    #[pyo3(signature = (docs=1, words=100, max_senses=5, sentence_length=10, seed=42))]
    fn generate(
        docs: usize,
        words: usize,
        max_senses: usize,
        sentence_length: usize,
        seed: u64,
    ) -> PyResult<Self> {
        Ok(Self {
            inner: generate_corpus(docs, words, max_senses, sentence_length, seed)
                .map_err(to_py_err)?,
        })
    }

    fn save(&self, path: &str) -> PyResult<()> {
        self.inner.save(path).map_err(to_py_err)
    }

    fn serialize(&self) -> String {
        self.inner.serialize()
    }

    #[getter]
    fn document_count(&self) -> usize {
        self.inner.documents.len()
    }

    #[getter]
    fn total_words(&self) -> usize {
        self.inner.word_count()
    }

    fn document_name(&self, doc: usize) -> PyResult<String> {
        Ok(self.doc(doc)?.name().to_string())
    }

    fn words(&self, doc: usize) -> PyResult<usize> {
        Ok(self.doc(doc)?.len())
    }

    fn sense_counts(&self, doc: usize) -> PyResult<Vec<usize>> {
        Ok(self.doc(doc)?.words().iter().map(|w| w.sense_count).collect())
    }

    fn gold(&self, doc: usize) -> PyResult<Vec<Option<usize>>> {
        self.check_doc(doc)?;
        Ok(self.inner.golds[doc].assignments().to_vec())
    }

    /// Split into (tuning, evaluation) on the first `sentences` sentences of
    /// each document.
    fn split_tuning(&self, sentences: usize) -> PyResult<(Corpus, Corpus)> {
        let split = split_tuning_subset(&self.inner, sentences).map_err(to_py_err)?;
        Ok((
            Corpus {
                inner: split.tuning,
            },
            Corpus {
                inner: split.evaluation,
            },
        ))
    }

    fn __repr__(&self) -> String {
        format!(
            "Corpus({} documents, {} words)",
            self.inner.documents.len(),
            self.inner.word_count()
        )
    }
}

impl Corpus {
    fn check_doc(&self, doc: usize) -> PyResult<()> {
        if doc >= self.inner.documents.len() {
            return Err(PyValueError::new_err(format!(
                "document index {doc} out of range ({} documents)",
                self.inner.documents.len()
            )));
        }
        Ok(())
    }

    fn doc(&self, doc: usize) -> PyResult<&sensebench::document::Document> {
        self.check_doc(doc)?;
        Ok(&self.inner.documents[doc])
    }
}

/// A call-counting F1 scorer bound to one document of a corpus. Drive your
/// own search from Python: `score` raises `RuntimeError` once the budget is
/// spent, and the best configuration seen so far stays readable.
#[pyclass(module = "sensebench_py")]
struct Scorer {
    doc_len: usize,
    inner: BudgetedScorer,
}

#[pymethods]
impl Scorer {
    #[new]
    fn new(corpus: &Corpus, doc: usize, budget: usize) -> PyResult<Self> {
        corpus.check_doc(doc)?;
        Ok(Self {
            doc_len: corpus.inner.documents[doc].len(),
            inner: BudgetedScorer::new(corpus.inner.golds[doc].clone(), budget)
                .map_err(to_py_err)?,
        })
    }

    fn score(&mut self, assignments: Vec<usize>) -> PyResult<f64> {
        if assignments.len() != self.doc_len {
            return Err(PyValueError::new_err(format!(
                "expected {} assignments, got {}",
                self.doc_len,
                assignments.len()
            )));
        }
        self.inner
            .score(&Configuration::new(assignments))
            .map_err(|_| PyRuntimeError::new_err("scorer budget exhausted"))
    }

    #[getter]
    fn budget(&self) -> usize {
        self.inner.budget()
    }

    #[getter]
    fn call_count(&self) -> usize {
        self.inner.call_count()
    }

    #[getter]
    fn remaining(&self) -> usize {
        self.inner.remaining()
    }

    #[getter]
    fn best_f1(&self) -> Option<f64> {
        self.inner.best_score()
    }

    #[getter]
    fn best_config(&self) -> Option<Vec<usize>> {
        self.inner.best_config().map(|c| c.assignments().to_vec())
    }

    #[getter]
    fn trace(&self) -> Vec<(usize, f64)> {
        self.inner.trace().to_vec()
    }
}

/// F1 of an assignment against a gold list (ints or None).
#[pyfunction(name = "f1")]
fn f1_py(assignments: Vec<usize>, gold: Vec<Option<usize>>) -> PyResult<f64> {
    sensebench::scorer::f1(
        &Configuration::new(assignments),
        &GoldStandard::new(gold),
    )
    .map_err(to_py_err)
}

/// Uniform random configuration for one document.
#[pyfunction]
fn random_configuration(corpus: &Corpus, doc: usize, seed: u64) -> PyResult<Vec<usize>> {
    let document = corpus.doc(doc)?;
    let mut rng = seed_rng(seed);
    Ok(document::random_configuration(document, &mut rng)
        .map_err(to_py_err)?
        .assignments()
        .to_vec())
}

/// Apply `count` sequential random changes to an assignment.
#[pyfunction]
fn make_random_changes(
    corpus: &Corpus,
    doc: usize,
    assignments: Vec<usize>,
    count: u64,
    seed: u64,
) -> PyResult<Vec<usize>> {
    let document = corpus.doc(doc)?;
    let cfg = Configuration::new(assignments);
    cfg.validate(document).map_err(to_py_err)?;
    let mut rng = seed_rng(seed);
    Ok(document::make_random_changes(document, &cfg, count, &mut rng)
        .assignments()
        .to_vec())
}

#[pyfunction]
fn hamming_distance(a: Vec<usize>, b: Vec<usize>) -> PyResult<usize> {
    document::hamming_distance(&Configuration::new(a), &Configuration::new(b))
        .map_err(to_py_err)
}

/// Draws from Lévy(location, scale).
#[pyfunction]
fn levy_samples(location: f64, scale: f64, count: usize, seed: u64) -> PyResult<Vec<f64>> {
    let params = LevyParams::new(location, scale).map_err(to_py_err)?;
    let mut rng = seed_rng(seed);
    Ok((0..count)
        .map(|_| sensebench::levy::sample_levy(&params, &mut rng))
        .collect())
}

/// Two-sided Mann-Whitney U test; returns (u, p, significant).
#[pyfunction]
#[pyo3(signature = (sample_a, sample_b, alpha=0.05))]
fn mann_whitney_u(sample_a: Vec<f64>, sample_b: Vec<f64>, alpha: f64) -> PyResult<(f64, f64, bool)> {
    let r = sensebench::stats::mann_whitney_u(&sample_a, &sample_b, alpha).map_err(to_py_err)?;
    Ok((r.u_statistic, r.p_value, r.significant))
}

/// The shipped preset parameters for an algorithm at a budget, as a dict.
#[pyfunction]
fn preset(py: Python<'_>, algorithm: &str, budget: usize) -> PyResult<Py<PyDict>> {
    let algorithm = parse_algorithm(algorithm)?;
    let params = sensebench::presets::preset(algorithm, budget).ok_or_else(|| {
        PyValueError::new_err(format!("no preset for {algorithm} at budget {budget}"))
    })?;
    let dict = PyDict::new(py);
    for (key, value) in params_to_map(&params) {
        dict.set_item(key, value)?;
    }
    Ok(dict.into())
}

/// Run one algorithm on one document under a fresh budgeted scorer.
///
/// Returns a dict with `best` (assignment list), `best_f1`, `calls`, and
/// `trace` (list of (call, best_f1) change points). `params` defaults to the
/// algorithm's untuned defaults; pass a dict (e.g. from `preset`) to
/// override.
#[pyfunction]
#[pyo3(signature = (corpus, doc, algorithm, budget, seed, params=None))]
fn run_algorithm(
    py: Python<'_>,
    corpus: &Corpus,
    doc: usize,
    algorithm: &str,
    budget: usize,
    seed: u64,
    params: Option<BTreeMap<String, f64>>,
) -> PyResult<Py<PyDict>> {
    let algorithm = parse_algorithm(algorithm)?;
    let params = resolve_params(algorithm, params)?;
    let document = corpus.doc(doc)?;
    let mut scorer = BudgetedScorer::new(corpus.inner.golds[doc].clone(), budget)
        .map_err(to_py_err)?;
    let best = algorithms::run(document, &mut scorer, &params, seed).map_err(to_py_err)?;
    let dict = PyDict::new(py);
    dict.set_item("best", best.assignments().to_vec())?;
    dict.set_item("best_f1", scorer.best_score())?;
    dict.set_item("calls", scorer.call_count())?;
    dict.set_item("trace", scorer.trace().to_vec())?;
    Ok(dict.into())
}

/// Tune an algorithm's parameters on a corpus.
///
/// Returns a dict with `params` (dict), `mean_f1`, `sample_f1s`,
/// `evaluated_candidates`, and `total_scorer_calls`.
#[pyfunction]
#[pyo3(signature = (corpus, algorithm, budget_per_run, seed,
                    runs_per_candidate=20, meta_iterations=30, meta_nests=3,
                    meta_destroyed=0, levy_location=0.0, levy_scale=0.05,
                    alpha=0.05))]
#[allow(clippy::too_many_arguments)]
fn tune(
    py: Python<'_>,
    corpus: &Corpus,
    algorithm: &str,
    budget_per_run: usize,
    seed: u64,
    runs_per_candidate: usize,
    meta_iterations: usize,
    meta_nests: usize,
    meta_destroyed: usize,
    levy_location: f64,
    levy_scale: f64,
    alpha: f64,
) -> PyResult<Py<PyDict>> {
    let algorithm = parse_algorithm(algorithm)?;
    let mut job = TuneJob::new(algorithm, corpus.inner.clone(), budget_per_run, seed);
    job.runs_per_candidate = runs_per_candidate;
    job.meta_iterations = meta_iterations;
    job.meta_nests = meta_nests;
    job.meta_destroyed = meta_destroyed;
    job.meta_levy = LevyParams::new(levy_location, levy_scale).map_err(to_py_err)?;
    job.alpha = alpha;
    let result = tuning::tune(&job).map_err(to_py_err)?;
    let params = PyDict::new(py);
    for (key, value) in params_to_map(&result.best_params) {
        params.set_item(key, value)?;
    }
    let dict = PyDict::new(py);
    dict.set_item("params", params)?;
    dict.set_item("mean_f1", result.mean_f1)?;
    dict.set_item("sample_f1s", result.sample_f1s)?;
    dict.set_item("evaluated_candidates", result.evaluated_candidates)?;
    dict.set_item("total_scorer_calls", result.total_scorer_calls)?;
    Ok(dict.into())
}

#[pymodule]
fn sensebench_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Corpus>()?;
    m.add_class::<Scorer>()?;
    m.add_function(wrap_pyfunction!(f1_py, m)?)?;
    m.add_function(wrap_pyfunction!(random_configuration, m)?)?;
    m.add_function(wrap_pyfunction!(make_random_changes, m)?)?;
    m.add_function(wrap_pyfunction!(hamming_distance, m)?)?;
    m.add_function(wrap_pyfunction!(levy_samples, m)?)?;
    m.add_function(wrap_pyfunction!(mann_whitney_u, m)?)?;
    m.add_function(wrap_pyfunction!(preset, m)?)?;
    m.add_function(wrap_pyfunction!(run_algorithm, m)?)?;
    m.add_function(wrap_pyfunction!(tune, m)?)?;
    m.add("ALGORITHMS", vec!["sa", "ga", "ba", "csa"])?;
    Ok(())
}
