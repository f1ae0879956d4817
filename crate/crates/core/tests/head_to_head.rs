//! Head-to-head comparison at a small call budget: with the shipped presets
//! on a document large enough that a 20-change flight is a local move,
//! cuckoo search samples the space better than simulated annealing, whose
//! budget is eaten by the temperature probe.

use rayon::prelude::*;

use sensebench::algorithms::{self, Algorithm};
use sensebench::corpus::generate_corpus;
use sensebench::harness::compare_at_budget;
use sensebench::presets::preset;
use sensebench::rng::derive_seed;
use sensebench::scorer::BudgetedScorer;

fn finals(algorithm: Algorithm, budget: usize) -> Vec<f64> {
    let corpus = generate_corpus(1, 250, 5, 10, 3).unwrap();
    let doc = &corpus.documents[0];
    let gold = &corpus.golds[0];
    let params = preset(algorithm, budget).unwrap();
    (0..100u64)
        .into_par_iter()
        .map(|run| {
            let mut scorer = BudgetedScorer::new(gold.clone(), budget).unwrap();
            let seed = derive_seed(7, &[algorithm.seed_tag(), budget as u64, run]);
            algorithms::run(doc, &mut scorer, &params, seed).unwrap();
            scorer.best_score().unwrap()
        })
        .collect()
}

#[test]
fn csa_preset_beats_sa_preset_at_budget_200() {
    let csa = finals(Algorithm::CuckooSearch, 200);
    let sa = finals(Algorithm::SimulatedAnnealing, 200);
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    assert!(
        mean(&csa) > mean(&sa),
        "csa {:.4} vs sa {:.4}",
        mean(&csa),
        mean(&sa)
    );
    let test = compare_at_budget(&csa, &sa, 0.05).unwrap();
    assert!(test.significant, "p = {}", test.p_value);
}
