//! Cuckoo search with Lévy flights over the assignment space.
//!
//! Each iteration clones a random nest, moves the clone by a Lévy-distributed
//! number of random changes, and lets it challenge another random nest: the
//! challenged nest is replaced only on a strictly better score. Nests are
//! then sorted ascending and the worst few are abandoned and regenerated at
//! random. With a single nest the clone challenges its own parent, which
//! reduces the algorithm to Lévy-flight hill climbing.

use rand::Rng;

use super::{check_entry, finish, CsaParams};
use crate::document::{make_random_changes, random_configuration, Configuration, Document};
use crate::error::Result;
use crate::levy::flight_distance;
use crate::rng::seed_rng;
use crate::scorer::BudgetedScorer;

struct Nest {
    config: Configuration,
    score: f64,
}

pub fn cuckoo_search(
    doc: &Document,
    scorer: &mut BudgetedScorer,
    params: &CsaParams,
    seed: u64,
) -> Result<Configuration> {
    params.validate()?;
    check_entry(scorer)?;
    let mut rng = seed_rng(seed);

    let mut nests: Vec<Nest> = Vec::with_capacity(params.nests);
    for _ in 0..params.nests {
        let config = random_configuration(doc, &mut rng)?;
        let score = match scorer.score(&config) {
            Ok(v) => v,
            Err(_) => return finish(scorer),
        };
        nests.push(Nest { config, score });
    }

    loop {
        let i = rng.random_range(0..nests.len());
        let distance = flight_distance(&params.levy, &mut rng);
        let candidate = make_random_changes(doc, &nests[i].config, distance, &mut rng);
        let value = match scorer.score(&candidate) {
            Ok(v) => v,
            Err(_) => return finish(scorer),
        };

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
        if value > nests[j].score {
            nests[j] = Nest {
                config: candidate,
                score: value,
            };
        }

        nests.sort_by(|a, b| a.score.partial_cmp(&b.score).expect("scores are never NaN"));

        for slot in nests.iter_mut().take(params.destroyed_per_iteration) {
            let config = random_configuration(doc, &mut rng)?;
            match scorer.score(&config) {
                Ok(score) => *slot = Nest { config, score },
                Err(_) => return finish(scorer),
            }
        }
    }
}
