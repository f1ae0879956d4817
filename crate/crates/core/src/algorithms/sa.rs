//! Simulated annealing over sense assignments.
//!
//! The walk makes one random change per iteration, always accepts an equal or
//! better configuration, and accepts a worse one with Boltzmann probability
//! `exp(delta / T)`. The temperature starts at a value calibrated so that an
//! average-sized worsening move is accepted with the configured initial
//! probability, and shrinks geometrically after every cycle.

use rand::Rng;

use super::{check_entry, finish, SaParams};
use crate::document::{make_random_changes, random_configuration, Configuration, Document};
use crate::error::Result;
use crate::rng::seed_rng;
use crate::scorer::BudgetedScorer;

/// Moves sampled to estimate the initial temperature. Each probe costs one
/// scorer call, so the calibration is charged against the budget.
const TEMPERATURE_PROBES: usize = 50;

/// Counters observed while running; used to verify the acceptance-rate
/// calibration.
#[derive(Debug, Clone, Copy, Default)]
pub struct SaTelemetry {
    pub initial_temperature: f64,
    pub first_cycle_worse_proposed: usize,
    pub first_cycle_worse_accepted: usize,
}

pub fn simulated_annealing(
    doc: &Document,
    scorer: &mut BudgetedScorer,
    params: &SaParams,
    seed: u64,
) -> Result<Configuration> {
    simulated_annealing_with_telemetry(doc, scorer, params, seed).map(|(cfg, _)| cfg)
}

pub fn simulated_annealing_with_telemetry(
    doc: &Document,
    scorer: &mut BudgetedScorer,
    params: &SaParams,
    seed: u64,
) -> Result<(Configuration, SaTelemetry)> {
    params.validate()?;
    check_entry(scorer)?;
    let mut rng = seed_rng(seed);
    let mut telemetry = SaTelemetry::default();

    let mut current = random_configuration(doc, &mut rng)?;
    let mut current_score = match scorer.score(&current) {
        Ok(v) => v,
        Err(_) => return finish(scorer).map(|c| (c, telemetry)),
    };

    // Probe single-change moves from the start point; the mean worsening
    // magnitude fixes T0 via exp(-mean / T0) = initial_acceptance.
    let mut worse_sum = 0.0;
    let mut worse_count = 0usize;
    for _ in 0..TEMPERATURE_PROBES {
        let probe = make_random_changes(doc, &current, 1, &mut rng);
        let value = match scorer.score(&probe) {
            Ok(v) => v,
            Err(_) => return finish(scorer).map(|c| (c, telemetry)),
        };
        let delta = value - current_score;
        if delta < 0.0 {
            worse_sum -= delta;
            worse_count += 1;
        }
    }
    let mut temperature = if worse_count == 0 {
        1.0
    } else {
        -(worse_sum / worse_count as f64) / params.initial_acceptance.ln()
    };
    telemetry.initial_temperature = temperature;

    let mut first_cycle = true;
    loop {
        for _ in 0..params.iterations_per_cycle {
            let candidate = make_random_changes(doc, &current, 1, &mut rng);
            let value = match scorer.score(&candidate) {
                Ok(v) => v,
                Err(_) => return finish(scorer).map(|c| (c, telemetry)),
            };
            let delta = value - current_score;
            let accept = if delta >= 0.0 {
                true
            } else {
                if first_cycle {
                    telemetry.first_cycle_worse_proposed += 1;
                }
                let accepted = rng.random::<f64>() < (delta / temperature).exp();
                if accepted && first_cycle {
                    telemetry.first_cycle_worse_accepted += 1;
                }
                accepted
            };
            if accept {
                current = candidate;
                current_score = value;
            }
        }
        temperature *= params.cooling_rate;
        first_cycle = false;
    }
}
