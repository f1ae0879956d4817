//! Budget-limited stochastic search over discrete sense assignments.
//!
//! The library models a document as a sequence of words with candidate-sense
//! counts, a configuration as one sense index per word, and an objective as
//! F1 against a gold annotation, metered by a scorer-call budget. Four global
//! search algorithms (simulated annealing, a genetic algorithm, a bat
//! algorithm, and cuckoo search) explore that space; a tuner estimates their
//! parameters by running a continuous cuckoo search over the parameter box;
//! and an experiment harness produces seeded, reproducible anytime curves as
//! CSV.
//!
//! Reproducibility: all randomness flows from explicit 64-bit seeds through
//! ChaCha8 ([`rng::SearchRng`]); identical inputs and seeds give identical
//! runs and byte-identical output files, independent of worker parallelism.

pub mod algorithms;
pub mod corpus;
pub mod document;
pub mod error;
pub mod harness;
pub mod levy;
pub mod presets;
pub mod rng;
pub mod scorer;
pub mod stats;
pub mod tuning;

pub use algorithms::{
    bat_algorithm, cuckoo_search, genetic_algorithm, simulated_annealing, Algorithm,
    AlgorithmParams, BaParams, CsaParams, GaParams, SaParams,
};
pub use corpus::{generate_corpus, CorpusFile};
pub use document::{
    hamming_distance, make_random_changes, random_configuration, Configuration, Document, WordSlot,
};
pub use error::{Error, Result};
pub use harness::{ExperimentSpec, RunCurve};
pub use levy::{flight_distance, sample_levy, LevyParams};
pub use rng::{derive_seed, seed_rng, SearchRng};
pub use scorer::{f1, BudgetExhausted, BudgetedScorer, GoldStandard};
pub use stats::{mann_whitney_u, UTestResult};
pub use tuning::{ParamSpace, TuneJob, TuneResult};
