//! Bat algorithm adapted to the discrete assignment space.
//!
//! Movement is expressed as a number of random changes: a bat either flies
//! locally around the best bat (change count = floor of the population's
//! average loudness) or updates its velocity from the Hamming distance to the
//! best bat scaled by a random frequency, and applies that many changes. A
//! move is kept only when the bat out-scores the current best *and* passes a
//! loudness threshold draw; acceptance shrinks the bat's loudness by `alpha`
//! and once the loudness falls below the minimum the bat counts as finished.
//! The run stops when every bat is finished or the budget signal fires, so
//! the algorithm owns an intrinsic convergence criterion the other three
//! lack.

use rand::Rng;

use super::{check_entry, finish, uniform_in, BaParams};
use crate::document::{
    hamming_distance, make_random_changes, random_configuration, Configuration, Document,
};
use crate::error::Result;
use crate::rng::seed_rng;
use crate::scorer::BudgetedScorer;

struct Bat {
    position: Configuration,
    velocity: usize,
    frequency: f64,
    loudness: f64,
    rate: f64,
    initial_rate: f64,
    score: f64,
    finished: bool,
}

/// Per-iteration snapshots used by invariant tests.
#[derive(Debug, Clone, Default)]
pub struct BaTelemetry {
    pub iterations: usize,
    pub finished_before_budget: bool,
    /// `loudness_history[t][b]` = loudness of bat `b` after iteration `t`.
    pub loudness_history: Vec<Vec<f64>>,
    /// `rate_history[t][b]` = pulse rate of bat `b` after iteration `t`.
    pub rate_history: Vec<Vec<f64>>,
    pub initial_rates: Vec<f64>,
}

pub fn bat_algorithm(
    doc: &Document,
    scorer: &mut BudgetedScorer,
    params: &BaParams,
    seed: u64,
) -> Result<Configuration> {
    run_internal(doc, scorer, params, seed, None)
}

pub fn bat_algorithm_with_telemetry(
    doc: &Document,
    scorer: &mut BudgetedScorer,
    params: &BaParams,
    seed: u64,
) -> Result<(Configuration, BaTelemetry)> {
    let mut telemetry = BaTelemetry::default();
    let cfg = run_internal(doc, scorer, params, seed, Some(&mut telemetry))?;
    Ok((cfg, telemetry))
}

fn run_internal(
    doc: &Document,
    scorer: &mut BudgetedScorer,
    params: &BaParams,
    seed: u64,
    mut telemetry: Option<&mut BaTelemetry>,
) -> Result<Configuration> {
    params.validate()?;
    check_entry(scorer)?;
    let mut rng = seed_rng(seed);
    let word_count = doc.len();

    let mut bats: Vec<Bat> = Vec::with_capacity(params.bats);
    for _ in 0..params.bats {
        let position = random_configuration(doc, &mut rng)?;
        let frequency = uniform_in(&mut rng, params.min_frequency, params.max_frequency);
        let loudness = uniform_in(&mut rng, params.min_loudness, params.max_loudness);
        let rate = rng.random::<f64>();
        let score = match scorer.score(&position) {
            Ok(v) => v,
            Err(_) => return finish(scorer),
        };
        bats.push(Bat {
            position,
            velocity: 0,
            frequency,
            loudness,
            rate,
            initial_rate: rate,
            score,
            finished: false,
        });
    }
    if let Some(t) = telemetry.as_deref_mut() {
        t.initial_rates = bats.iter().map(|b| b.initial_rate).collect();
    }
    let mut best = fittest(&bats);

    let mut finished_count = 0usize;
    let mut iteration = 0usize;
    while finished_count < params.bats {
        iteration += 1;
        for i in 0..bats.len() {
            let prev_position = bats[i].position.clone();
            let prev_velocity = bats[i].velocity;
            let prev_score = bats[i].score;

            if bats[i].rate < rng.random::<f64>() {
                // Local flight: perturb a copy of the best position by the
                // floor of the average loudness across the population.
                let width = average_loudness(&bats).max(0.0) as u64;
                let base = bats[best].position.clone();
                bats[i].position = make_random_changes(doc, &base, width, &mut rng);
            } else {
                bats[i].frequency =
                    uniform_in(&mut rng, params.min_frequency, params.max_frequency);
                let distance = hamming_distance(&bats[i].position, &bats[best].position)
                    .expect("bats share one document");
                let scaled =
                    ((bats[i].velocity + distance) as f64 * bats[i].frequency) as i64;
                bats[i].velocity = scaled.clamp(0, word_count as i64) as usize;
                bats[i].position =
                    make_random_changes(doc, &prev_position, bats[i].velocity as u64, &mut rng);
            }

            bats[i].score = match scorer.score(&bats[i].position) {
                Ok(v) => v,
                Err(_) => return finish(scorer),
            };

            let threshold = uniform_in(&mut rng, params.min_loudness, params.max_loudness);
            // Note `bats[best].score` aliases the fresh score when i == best,
            // so the best bat can never accept its own move.
            if bats[i].loudness >= threshold && bats[i].score > bats[best].score {
                bats[i].loudness *= params.alpha;
                if bats[i].loudness < params.min_loudness && !bats[i].finished {
                    bats[i].finished = true;
                    finished_count += 1;
                }
                bats[i].rate =
                    bats[i].initial_rate * (1.0 - (-params.gamma * iteration as f64).exp());
                best = i;
            } else {
                bats[i].position = prev_position;
                bats[i].velocity = prev_velocity;
                bats[i].score = prev_score;
            }
        }
        if let Some(t) = telemetry.as_deref_mut() {
            t.iterations = iteration;
            t.loudness_history
                .push(bats.iter().map(|b| b.loudness).collect());
            t.rate_history.push(bats.iter().map(|b| b.rate).collect());
        }
    }
    if let Some(t) = telemetry {
        t.finished_before_budget = !scorer.is_exhausted();
    }
    finish(scorer)
}

fn fittest(bats: &[Bat]) -> usize {
    let mut best = 0;
    for i in 1..bats.len() {
        if bats[i].score > bats[best].score {
            best = i;
        }
    }
    best
}

fn average_loudness(bats: &[Bat]) -> f64 {
    bats.iter().map(|b| b.loudness).sum::<f64>() / bats.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::document::WordSlot;
    use crate::scorer::GoldStandard;

    fn doc_and_gold(senses: &[usize]) -> (Document, GoldStandard) {
        let words = senses
            .iter()
            .enumerate()
            .map(|(i, &s)| WordSlot {
                surface: format!("w{i}"),
                sense_count: s,
                sentence_index: 0,
            })
            .collect();
        let doc = Document::new("test", words).unwrap();
        let gold = GoldStandard::new(senses.iter().map(|&s| Some(s - 1)).collect());
        (doc, gold)
    }

    fn eager_params() -> BaParams {
        // Loudness pinned at 1 with alpha 0.1: the first accepted move of any
        // bat drops its loudness below the minimum and finishes it.
        BaParams {
            bats: 3,
            min_frequency: 0.0,
            max_frequency: 5.0,
            min_loudness: 1.0,
            max_loudness: 1.0,
            alpha: 0.1,
            gamma: 0.9,
        }
    }

    #[test]
    fn small_alpha_terminates_before_the_budget() {
        let (doc, gold) = doc_and_gold(&[4; 40]);
        let mut scorer = BudgetedScorer::new(gold, 4000).unwrap();
        let (_, telemetry) =
            bat_algorithm_with_telemetry(&doc, &mut scorer, &eager_params(), 5).unwrap();
        assert!(telemetry.finished_before_budget);
        assert!(scorer.call_count() < 4000);
    }

    #[test]
    fn loudness_never_increases_and_rates_trend_to_initial() {
        let (doc, gold) = doc_and_gold(&[4; 30]);
        let params = BaParams {
            bats: 4,
            min_frequency: 0.0,
            max_frequency: 3.0,
            min_loudness: 0.2,
            max_loudness: 2.0,
            alpha: 0.6,
            gamma: 0.5,
        };
        let mut scorer = BudgetedScorer::new(gold, 600).unwrap();
        let (_, telemetry) =
            bat_algorithm_with_telemetry(&doc, &mut scorer, &params, 8).unwrap();
        let bats = params.bats;
        for b in 0..bats {
            let mut prev_loudness = f64::INFINITY;
            let mut changed_rates = Vec::new();
            let mut prev_rate = telemetry.initial_rates[b];
            for t in 0..telemetry.loudness_history.len() {
                let loudness = telemetry.loudness_history[t][b];
                assert!(loudness <= prev_loudness + 1e-12);
                prev_loudness = loudness;
                let rate = telemetry.rate_history[t][b];
                assert!(rate <= telemetry.initial_rates[b] + 1e-12);
                if rate != prev_rate {
                    changed_rates.push(rate);
                    prev_rate = rate;
                }
            }
            // Rates set at later accepts are closer to the initial rate.
            for pair in changed_rates.windows(2) {
                assert!(pair[0] <= pair[1] + 1e-12);
            }
        }
    }

    #[test]
    fn budget_signal_also_terminates() {
        // min_loudness of 0 can never be undercut, so only the budget stops
        // the run.
        let (doc, gold) = doc_and_gold(&[3; 10]);
        let params = BaParams {
            bats: 5,
            min_frequency: 0.0,
            max_frequency: 2.0,
            min_loudness: 0.0,
            max_loudness: 1.0,
            alpha: 0.5,
            gamma: 0.9,
        };
        let mut scorer = BudgetedScorer::new(gold, 300).unwrap();
        let result = bat_algorithm(&doc, &mut scorer, &params, 3).unwrap();
        assert_eq!(scorer.call_count(), 300);
        assert_eq!(Some(&result), scorer.best_config());
    }

    #[test]
    fn degenerate_equal_frequency_bounds_run_fine() {
        let (doc, gold) = doc_and_gold(&[3; 8]);
        let params = BaParams {
            bats: 2,
            min_frequency: 38.0,
            max_frequency: 38.0,
            min_loudness: 6.0,
            max_loudness: 10.0,
            alpha: 0.65,
            gamma: 0.95,
        };
        let mut scorer = BudgetedScorer::new(gold, 100).unwrap();
        bat_algorithm(&doc, &mut scorer, &params, 1).unwrap();
        assert_eq!(scorer.call_count(), 100);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let (doc, gold) = doc_and_gold(&[4, 2, 6, 3]);
        let run = |seed| {
            let mut scorer = BudgetedScorer::new(gold.clone(), 150).unwrap();
            bat_algorithm(&doc, &mut scorer, &BaParams::default(), seed).unwrap();
            (scorer.trace().to_vec(), scorer.call_count())
        };
        assert_eq!(run(21), run(21));
    }
}
