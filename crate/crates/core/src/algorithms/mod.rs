//! The four global search algorithms.
//!
//! Each algorithm consumes a document, a budgeted scorer, a parameter set,
//! and a seed, and runs until the scorer signals budget exhaustion (the bat
//! algorithm can also stop on its own once every bat has converged). All of
//! them return the scorer's recorded best configuration, never a locally
//! tracked one, so the anytime trace and the returned value always agree.

mod ba;
mod csa;
mod ga;
mod sa;

pub use ba::{bat_algorithm, bat_algorithm_with_telemetry, BaTelemetry};
pub use csa::cuckoo_search;
pub use ga::genetic_algorithm;
pub use sa::{simulated_annealing, simulated_annealing_with_telemetry, SaTelemetry};

use std::fmt;
use std::str::FromStr;

use crate::document::{Configuration, Document};
use crate::error::{Error, Result};
use crate::levy::LevyParams;
use crate::scorer::BudgetedScorer;

/// Identifies one of the four search algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    SimulatedAnnealing,
    GeneticAlgorithm,
    BatAlgorithm,
    CuckooSearch,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::SimulatedAnnealing,
        Algorithm::GeneticAlgorithm,
        Algorithm::BatAlgorithm,
        Algorithm::CuckooSearch,
    ];

    /// Short identifier used in CLI flags, file names, and CSV columns.
    pub fn id(&self) -> &'static str {
        match self {
            Algorithm::SimulatedAnnealing => "sa",
            Algorithm::GeneticAlgorithm => "ga",
            Algorithm::BatAlgorithm => "ba",
            Algorithm::CuckooSearch => "csa",
        }
    }

    /// Stable numeric tag used in seed derivation.
    pub fn seed_tag(&self) -> u64 {
        match self {
            Algorithm::SimulatedAnnealing => 1,
            Algorithm::GeneticAlgorithm => 2,
            Algorithm::BatAlgorithm => 3,
            Algorithm::CuckooSearch => 4,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sa" => Ok(Algorithm::SimulatedAnnealing),
            "ga" => Ok(Algorithm::GeneticAlgorithm),
            "ba" => Ok(Algorithm::BatAlgorithm),
            "csa" => Ok(Algorithm::CuckooSearch),
            other => Err(Error::Config(format!(
                "unknown algorithm {other:?} (expected sa, ga, ba, or csa)"
            ))),
        }
    }
}

/// Simulated annealing parameters: geometric cooling applied after every
/// cycle of single-change moves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaParams {
    pub cooling_rate: f64,
    pub iterations_per_cycle: usize,
    pub initial_acceptance: f64,
}

impl SaParams {
    pub fn new(cooling_rate: f64, iterations_per_cycle: usize) -> Self {
        Self {
            cooling_rate,
            iterations_per_cycle,
            initial_acceptance: 0.8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cooling_rate > 0.0 && self.cooling_rate < 1.0) {
            return Err(Error::InvalidInput(format!(
                "cooling rate must be in (0,1), got {}",
                self.cooling_rate
            )));
        }
        if self.iterations_per_cycle == 0 {
            return Err(Error::InvalidInput(
                "iterations per cycle must be positive".into(),
            ));
        }
        if !(self.initial_acceptance > 0.0 && self.initial_acceptance < 1.0) {
            return Err(Error::InvalidInput(format!(
                "initial acceptance must be in (0,1), got {}",
                self.initial_acceptance
            )));
        }
        Ok(())
    }
}

impl Default for SaParams {
    /// Untuned textbook defaults: slow cooling, moderate cycle length.
    fn default() -> Self {
        SaParams::new(0.95, 50)
    }
}

/// Genetic algorithm parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaParams {
    pub population: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
}

impl GaParams {
    pub fn new(population: usize, crossover_rate: f64, mutation_rate: f64) -> Self {
        Self {
            population,
            crossover_rate,
            mutation_rate,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::InvalidInput(format!(
                "population must be at least 2, got {}",
                self.population
            )));
        }
        for (name, rate) in [
            ("crossover rate", self.crossover_rate),
            ("mutation rate", self.mutation_rate),
        ] {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::InvalidInput(format!(
                    "{name} must be in [0,1], got {rate}"
                )));
            }
        }
        Ok(())
    }
}

impl Default for GaParams {
    fn default() -> Self {
        GaParams::new(50, 0.7, 0.01)
    }
}

/// Bat algorithm parameters. Frequencies scale the velocity, loudness bounds
/// the local-search width and gates acceptance, and `alpha`/`gamma` control
/// how fast a bat converges once it improves on the best.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaParams {
    pub bats: usize,
    pub min_frequency: f64,
    pub max_frequency: f64,
    pub min_loudness: f64,
    pub max_loudness: f64,
    pub alpha: f64,
    pub gamma: f64,
}

impl BaParams {
    pub fn validate(&self) -> Result<()> {
        if self.bats == 0 {
            return Err(Error::InvalidInput("bat count must be positive".into()));
        }
        if self.min_frequency > self.max_frequency {
            return Err(Error::InvalidInput(format!(
                "frequency bounds out of order: {} > {}",
                self.min_frequency, self.max_frequency
            )));
        }
        if self.min_loudness > self.max_loudness {
            return Err(Error::InvalidInput(format!(
                "loudness bounds out of order: {} > {}",
                self.min_loudness, self.max_loudness
            )));
        }
        if self.min_loudness < 0.0 {
            return Err(Error::InvalidInput(format!(
                "loudness must be non-negative, got {}",
                self.min_loudness
            )));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "alpha must be in (0,1], got {}",
                self.alpha
            )));
        }
        // Rejects NaN along with non-positive values.
        if self.gamma.is_nan() || self.gamma <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        Ok(())
    }
}

impl Default for BaParams {
    fn default() -> Self {
        BaParams {
            bats: 10,
            min_frequency: 0.0,
            max_frequency: 2.0,
            min_loudness: 0.5,
            max_loudness: 2.0,
            alpha: 0.9,
            gamma: 0.9,
        }
    }
}

/// Cuckoo search parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsaParams {
    pub nests: usize,
    pub destroyed_per_iteration: usize,
    pub levy: LevyParams,
}

impl CsaParams {
    pub fn validate(&self) -> Result<()> {
        if self.nests == 0 {
            return Err(Error::InvalidInput("nest count must be positive".into()));
        }
        if self.destroyed_per_iteration >= self.nests {
            return Err(Error::InvalidInput(format!(
                "destroyed nests per iteration ({}) must be below the nest count ({})",
                self.destroyed_per_iteration, self.nests
            )));
        }
        LevyParams::new(self.levy.location, self.levy.scale)?;
        Ok(())
    }
}

impl Default for CsaParams {
    fn default() -> Self {
        CsaParams {
            nests: 15,
            destroyed_per_iteration: 3,
            levy: LevyParams {
                location: 0.0,
                scale: 1.0,
            },
        }
    }
}

/// Parameter set for any of the four algorithms.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgorithmParams {
    Sa(SaParams),
    Ga(GaParams),
    Ba(BaParams),
    Csa(CsaParams),
}

impl AlgorithmParams {
    pub fn algorithm(&self) -> Algorithm {
        match self {
            AlgorithmParams::Sa(_) => Algorithm::SimulatedAnnealing,
            AlgorithmParams::Ga(_) => Algorithm::GeneticAlgorithm,
            AlgorithmParams::Ba(_) => Algorithm::BatAlgorithm,
            AlgorithmParams::Csa(_) => Algorithm::CuckooSearch,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AlgorithmParams::Sa(p) => p.validate(),
            AlgorithmParams::Ga(p) => p.validate(),
            AlgorithmParams::Ba(p) => p.validate(),
            AlgorithmParams::Csa(p) => p.validate(),
        }
    }

    /// Default parameters for an algorithm, before any tuning.
    pub fn default_for(algorithm: Algorithm) -> Self {
        match algorithm {
            Algorithm::SimulatedAnnealing => AlgorithmParams::Sa(SaParams::default()),
            Algorithm::GeneticAlgorithm => AlgorithmParams::Ga(GaParams::default()),
            Algorithm::BatAlgorithm => AlgorithmParams::Ba(BaParams::default()),
            Algorithm::CuckooSearch => AlgorithmParams::Csa(CsaParams::default()),
        }
    }
}

/// Runs whichever algorithm the parameter set selects.
pub fn run(
    doc: &Document,
    scorer: &mut BudgetedScorer,
    params: &AlgorithmParams,
    seed: u64,
) -> Result<Configuration> {
    match params {
        AlgorithmParams::Sa(p) => simulated_annealing(doc, scorer, p, seed),
        AlgorithmParams::Ga(p) => genetic_algorithm(doc, scorer, p, seed),
        AlgorithmParams::Ba(p) => bat_algorithm(doc, scorer, p, seed),
        AlgorithmParams::Csa(p) => cuckoo_search(doc, scorer, p, seed),
    }
}

/// Entry check shared by all algorithms: there must be budget left to spend.
pub(crate) fn check_entry(scorer: &BudgetedScorer) -> Result<()> {
    if scorer.is_exhausted() {
        return Err(Error::InvalidInput(
            "scorer has no remaining budget".into(),
        ));
    }
    Ok(())
}

/// Normal termination: hand back the scorer's best configuration.
pub(crate) fn finish(scorer: &BudgetedScorer) -> Result<Configuration> {
    scorer.best_config().cloned().ok_or_else(|| {
        Error::InvalidInput("scorer exhausted before any configuration was evaluated".into())
    })
}

/// Uniform draw over `[lo, hi)`, degenerating to `lo` when the bounds
/// coincide (some tuned parameter rows pin them together).
pub(crate) fn uniform_in(rng: &mut crate::rng::SearchRng, lo: f64, hi: f64) -> f64 {
    use rand::Rng;
    if lo < hi {
        rng.random_range(lo..hi)
    } else {
        lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::document::WordSlot;
    use crate::scorer::GoldStandard;

    #[test]
    fn algorithm_ids_round_trip() {
        for algorithm in Algorithm::ALL {
            assert_eq!(algorithm.id().parse::<Algorithm>().unwrap(), algorithm);
        }
        assert!("annealing".parse::<Algorithm>().is_err());
    }

    #[test]
    fn every_algorithm_solves_a_single_word_document() {
        // One word with k senses and a budget of 10k: each algorithm must
        // find the gold sense in at least 99 of 100 seeded runs.
        let senses = 8usize;
        let doc = Document::new(
            "single",
            vec![WordSlot {
                surface: "w0".into(),
                sense_count: senses,
                sentence_index: 0,
            }],
        )
        .unwrap();
        let gold = GoldStandard::new(vec![Some(3)]);
        for algorithm in Algorithm::ALL {
            let params = AlgorithmParams::default_for(algorithm);
            let solved = (0..100u64)
                .filter(|&seed| {
                    let mut scorer =
                        BudgetedScorer::new(gold.clone(), 10 * senses).unwrap();
                    let best = run(&doc, &mut scorer, &params, seed).unwrap();
                    best.assignments() == [3]
                })
                .count();
            assert!(solved >= 99, "{algorithm} solved only {solved}/100");
        }
    }

    #[test]
    fn dispatch_matches_direct_calls() {
        let doc = Document::new(
            "d",
            (0..6)
                .map(|i| WordSlot {
                    surface: format!("w{i}"),
                    sense_count: 4,
                    sentence_index: 0,
                })
                .collect(),
        )
        .unwrap();
        let gold = GoldStandard::new(vec![Some(1); 6]);
        let params = SaParams::default();
        let via_dispatch = {
            let mut scorer = BudgetedScorer::new(gold.clone(), 100).unwrap();
            run(&doc, &mut scorer, &AlgorithmParams::Sa(params), 9).unwrap()
        };
        let direct = {
            let mut scorer = BudgetedScorer::new(gold, 100).unwrap();
            simulated_annealing(&doc, &mut scorer, &params, 9).unwrap()
        };
        assert_eq!(via_dispatch, direct);
    }
}
