//! Genetic algorithm: roulette selection, single-point crossover, per-gene
//! mutation, and one elite carried unchanged into each generation.
//!
//! The elite keeps its cached score and is not re-evaluated; every other
//! individual of a generation costs one scorer call, so the budget measures
//! genuinely new evaluations.

use rand::Rng;

use super::{check_entry, finish, GaParams};
use crate::document::{random_configuration, Configuration, Document};
use crate::error::Result;
use crate::rng::{seed_rng, SearchRng};
use crate::scorer::BudgetedScorer;

pub fn genetic_algorithm(
    doc: &Document,
    scorer: &mut BudgetedScorer,
    params: &GaParams,
    seed: u64,
) -> Result<Configuration> {
    params.validate()?;
    check_entry(scorer)?;
    let mut rng = seed_rng(seed);

    let mut population: Vec<(Configuration, f64)> = Vec::with_capacity(params.population);
    for _ in 0..params.population {
        let cfg = random_configuration(doc, &mut rng)?;
        let value = match scorer.score(&cfg) {
            Ok(v) => v,
            Err(_) => return finish(scorer),
        };
        population.push((cfg, value));
    }

    loop {
        let elite = fittest(&population);
        let mut next: Vec<(Configuration, f64)> = Vec::with_capacity(params.population);
        next.push(population[elite].clone());
        'fill: while next.len() < params.population {
            let pa = roulette(&population, &mut rng);
            let pb = roulette(&population, &mut rng);
            let crossed = rng.random::<f64>() < params.crossover_rate;
            let (mut child_a, mut child_b) = if crossed && doc.len() >= 2 {
                let cut = rng.random_range(1..doc.len());
                single_point_crossover(&population[pa].0, &population[pb].0, cut)
            } else {
                (population[pa].0.clone(), population[pb].0.clone())
            };
            mutate(doc, &mut child_a, params.mutation_rate, &mut rng);
            mutate(doc, &mut child_b, params.mutation_rate, &mut rng);
            for child in [child_a, child_b] {
                if next.len() >= params.population {
                    break 'fill;
                }
                let value = match scorer.score(&child) {
                    Ok(v) => v,
                    Err(_) => return finish(scorer),
                };
                next.push((child, value));
            }
        }
        population = next;
    }
}

/// Index of the best-scoring individual, first one on ties.
fn fittest(population: &[(Configuration, f64)]) -> usize {
    let mut best = 0;
    for i in 1..population.len() {
        if population[i].1 > population[best].1 {
            best = i;
        }
    }
    best
}

/// Fitness-proportional pick over raw scores, uniform when all are zero.
fn roulette(population: &[(Configuration, f64)], rng: &mut SearchRng) -> usize {
    let total: f64 = population.iter().map(|(_, s)| s).sum();
    if total <= 0.0 {
        return rng.random_range(0..population.len());
    }
    let mut remaining = rng.random::<f64>() * total;
    for (i, (_, score)) in population.iter().enumerate() {
        remaining -= score;
        if remaining < 0.0 {
            return i;
        }
    }
    population.len() - 1
}

/// Swaps the tails of two parents at `cut` (in `[1, len - 1]`).
fn single_point_crossover(
    a: &Configuration,
    b: &Configuration,
    cut: usize,
) -> (Configuration, Configuration) {
    let (a, b) = (a.assignments(), b.assignments());
    let child_a = a[..cut].iter().chain(&b[cut..]).copied().collect();
    let child_b = b[..cut].iter().chain(&a[cut..]).copied().collect();
    (Configuration::new(child_a), Configuration::new(child_b))
}

/// Re-rolls each gene with the mutation probability; a mutated gene always
/// takes a different sense, and monosemous words stay fixed.
fn mutate(doc: &Document, cfg: &mut Configuration, rate: f64, rng: &mut SearchRng) {
    for i in 0..doc.len() {
        if rng.random::<f64>() < rate {
            let senses = doc.words()[i].sense_count;
            if senses >= 2 {
                let current = cfg.assignments()[i];
                cfg.set_assignment(i, crate::document::different_sense(current, senses, rng));
            }
        }
    }
}
