//! Shipped parameter presets, one row per scorer-call budget.
//!
//! These are the tuned parameter sets published for the 200, 800, 2000, and
//! 4000 call budgets. Budgets above 4000 reuse the 4000 row; any other budget
//! has no preset and callers must supply explicit parameters.

use crate::algorithms::{Algorithm, AlgorithmParams, BaParams, CsaParams, GaParams, SaParams};
use crate::levy::LevyParams;

/// The budgets with published presets.
pub const PRESET_BUDGETS: [usize; 4] = [200, 800, 2000, 4000];

/// Looks up the preset for an algorithm at a budget. Exact matches use their
/// row; budgets above 4000 fall back to the 4000 row; anything else is
/// `None`.
pub fn preset(algorithm: Algorithm, budget: usize) -> Option<AlgorithmParams> {
    let row = match budget {
        200 => 0,
        800 => 1,
        2000 => 2,
        b if b >= 4000 => 3,
        _ => return None,
    };
    Some(match algorithm {
        Algorithm::SimulatedAnnealing => {
            let (cooling, iterations) = [(0.95, 1), (0.1, 100), (0.1, 50), (0.1, 77)][row];
            AlgorithmParams::Sa(SaParams::new(cooling, iterations))
        }
        Algorithm::GeneticAlgorithm => {
            let (population, crossover, mutation) = [
                (100, 0.02, 0.01),
                (100, 0.01, 0.01),
                (100, 0.01, 0.01),
                (73, 0.01, 0.01),
            ][row];
            AlgorithmParams::Ga(GaParams::new(population, crossover, mutation))
        }
        Algorithm::BatAlgorithm => {
            let (bats, min_f, max_f, min_l, max_l, alpha, gamma) = [
                (50, 45.0, 100.0, 23.0, 24.0, 0.40, 0.14),
                (50, 38.0, 38.0, 6.0, 10.0, 0.65, 0.95),
                (50, 28.0, 100.0, 0.0, 38.0, 0.1, 0.72),
                (50, 0.0, 100.0, 0.0, 38.0, 0.1, 0.95),
            ][row];
            AlgorithmParams::Ba(BaParams {
                bats,
                min_frequency: min_f,
                max_frequency: max_f,
                min_loudness: min_l,
                max_loudness: max_l,
                alpha,
                gamma,
            })
        }
        Algorithm::CuckooSearch => {
            let (nests, destroyed, location, scale) = [
                (1, 0, 20.0, 5.0),
                (1, 0, 0.37, 5.0),
                (1, 0, 5.0, 0.5),
                (1, 0, 5.0, 0.5),
            ][row];
            AlgorithmParams::Csa(CsaParams {
                nests,
                destroyed_per_iteration: destroyed,
                levy: LevyParams { location, scale },
            })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_row_validates() {
        for algorithm in Algorithm::ALL {
            for budget in PRESET_BUDGETS {
                let params = preset(algorithm, budget).unwrap();
                params.validate().unwrap();
                assert_eq!(params.algorithm(), algorithm);
            }
        }
    }

    #[test]
    fn large_budgets_reuse_the_4000_row() {
        for algorithm in Algorithm::ALL {
            assert_eq!(preset(algorithm, 8000), preset(algorithm, 4000));
            assert_eq!(preset(algorithm, 16000), preset(algorithm, 4000));
        }
    }

    #[test]
    fn unknown_budgets_have_no_preset() {
        assert_eq!(preset(Algorithm::SimulatedAnnealing, 100), None);
        assert_eq!(preset(Algorithm::CuckooSearch, 300), None);
    }

    #[test]
    fn spot_check_rows() {
        match preset(Algorithm::SimulatedAnnealing, 800).unwrap() {
            AlgorithmParams::Sa(p) => {
                assert_eq!(p.cooling_rate, 0.1);
                assert_eq!(p.iterations_per_cycle, 100);
                assert_eq!(p.initial_acceptance, 0.8);
            }
            _ => unreachable!(),
        }
        match preset(Algorithm::CuckooSearch, 200).unwrap() {
            AlgorithmParams::Csa(p) => {
                assert_eq!(p.nests, 1);
                assert_eq!(p.destroyed_per_iteration, 0);
                assert_eq!(p.levy.location, 20.0);
                assert_eq!(p.levy.scale, 5.0);
            }
            _ => unreachable!(),
        }
        match preset(Algorithm::BatAlgorithm, 2000).unwrap() {
            AlgorithmParams::Ba(p) => {
                assert_eq!(p.bats, 50);
                assert_eq!(p.min_frequency, 28.0);
                assert_eq!(p.max_frequency, 100.0);
                assert_eq!(p.min_loudness, 0.0);
                assert_eq!(p.max_loudness, 38.0);
                assert_eq!(p.alpha, 0.1);
                assert_eq!(p.gamma, 0.72);
            }
            _ => unreachable!(),
        }
        match preset(Algorithm::GeneticAlgorithm, 4000).unwrap() {
            AlgorithmParams::Ga(p) => {
                assert_eq!(p.population, 73);
                assert_eq!(p.crossover_rate, 0.01);
                assert_eq!(p.mutation_rate, 0.01);
            }
            _ => unreachable!(),
        }
    }
}
