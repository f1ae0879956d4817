//! The discrete search space: documents, sense assignments, and the single
//! mutation primitive shared by every search algorithm.
//!
//! A [`Document`] is an ordered list of words, each with a number of candidate
//! senses. A [`Configuration`] assigns one sense index to every word and is a
//! point in the search space; the size of that space is the product of the
//! per-word sense counts. Configurations are immutable values: mutation
//! operations return a new configuration and leave their input untouched.

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::rng::SearchRng;

/// One word position: its surface form, candidate-sense count, and the index
/// of the sentence it belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSlot {
    pub surface: String,
    pub sense_count: usize,
    pub sentence_index: usize,
}

/// An ordered sequence of word slots defining a search space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    name: String,
    words: Vec<WordSlot>,
    /// Indices of words with at least two senses; only these can be mutated.
    polysemous: Vec<usize>,
}

impl Document {
    /// Builds a document, validating that every slot has at least one sense
    /// and that sentence indices never decrease along the word sequence.
    pub fn new(name: impl Into<String>, words: Vec<WordSlot>) -> Result<Self> {
        let mut prev_sentence = 0usize;
        for (i, slot) in words.iter().enumerate() {
            if slot.sense_count == 0 {
                return Err(Error::Validation(format!(
                    "word {} ({:?}) has zero senses",
                    i, slot.surface
                )));
            }
            if i > 0 && slot.sentence_index < prev_sentence {
                return Err(Error::Validation(format!(
                    "sentence index decreases at word {} ({:?})",
                    i, slot.surface
                )));
            }
            prev_sentence = slot.sentence_index;
        }
        let polysemous = words
            .iter()
            .enumerate()
            .filter(|(_, w)| w.sense_count >= 2)
            .map(|(i, _)| i)
            .collect();
        Ok(Self {
            name: name.into(),
            words,
            polysemous,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn words(&self) -> &[WordSlot] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Indices of words that have at least two candidate senses.
    pub fn polysemous(&self) -> &[usize] {
        &self.polysemous
    }

    /// Number of distinct sentences in the document.
    pub fn sentence_count(&self) -> usize {
        let mut count = 0;
        let mut last = None;
        for w in &self.words {
            if last != Some(w.sentence_index) {
                count += 1;
                last = Some(w.sentence_index);
            }
        }
        count
    }

    /// Total number of configurations, saturating at `usize::MAX`.
    pub fn space_size(&self) -> usize {
        self.words
            .iter()
            .fold(1usize, |acc, w| acc.saturating_mul(w.sense_count))
    }
}

/// A full sense assignment: one sense index per document word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    assignments: Vec<usize>,
}

impl Configuration {
    pub fn new(assignments: Vec<usize>) -> Self {
        Self { assignments }
    }

    pub fn assignments(&self) -> &[usize] {
        &self.assignments
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub(crate) fn set_assignment(&mut self, index: usize, sense: usize) {
        self.assignments[index] = sense;
    }

    /// Checks that the assignment vector matches `doc` in length and that
    /// every entry is within its slot's sense range.
    pub fn validate(&self, doc: &Document) -> Result<()> {
        if self.assignments.len() != doc.len() {
            return Err(Error::InvalidInput(format!(
                "configuration has {} assignments but document {:?} has {} words",
                self.assignments.len(),
                doc.name(),
                doc.len()
            )));
        }
        for (i, (&a, slot)) in self.assignments.iter().zip(doc.words()).enumerate() {
            if a >= slot.sense_count {
                return Err(Error::InvalidInput(format!(
                    "assignment {} at word {} exceeds sense count {}",
                    a, i, slot.sense_count
                )));
            }
        }
        Ok(())
    }
}

/// Draws a configuration uniformly at random: each word's sense is chosen
/// independently and uniformly from its range.
pub fn random_configuration(doc: &Document, rng: &mut SearchRng) -> Result<Configuration> {
    if doc.is_empty() {
        return Err(Error::InvalidInput("document is empty".into()));
    }
    let assignments = doc
        .words()
        .iter()
        .map(|w| {
            if w.sense_count == 1 {
                0
            } else {
                rng.random_range(0..w.sense_count)
            }
        })
        .collect();
    Ok(Configuration::new(assignments))
}

/// Applies `count` sequential random changes to a copy of `cfg`.
///
/// Each change picks a word uniformly among the words with at least two
/// senses and reassigns it a sense drawn uniformly from the *other* senses,
/// so a single change always lands somewhere different. Changes may hit the
/// same word twice and may revert earlier changes. If no word has two or
/// more senses the input is returned unchanged.
pub fn make_random_changes(
    doc: &Document,
    cfg: &Configuration,
    count: u64,
    rng: &mut SearchRng,
) -> Configuration {
    let mut out = cfg.clone();
    let poly = doc.polysemous();
    if poly.is_empty() || count == 0 {
        return out;
    }
    if count <= SEQUENTIAL_CHANGE_LIMIT {
        changes_sequential(doc, &mut out, count, rng);
    } else {
        changes_closed_form(doc, &mut out, count, rng);
    }
    out
}

/// Above this count the closed-form sampler takes over; both paths draw from
/// exactly the same outcome distribution.
const SEQUENTIAL_CHANGE_LIMIT: u64 = 1024;

fn changes_sequential(doc: &Document, cfg: &mut Configuration, count: u64, rng: &mut SearchRng) {
    let poly = doc.polysemous();
    for _ in 0..count {
        let word = poly[rng.random_range(0..poly.len())];
        let senses = doc.words()[word].sense_count;
        cfg.assignments[word] = different_sense(cfg.assignments[word], senses, rng);
    }
}

/// Samples the end state of the change chain without walking every step.
///
/// Conditioned on how many of the `count` changes land on each word (a
/// multinomial split), the words evolve independently, and a word with `s`
/// senses that receives `k` changes keeps its sense with probability
/// `(1 + (s-1) * (-1/(s-1))^k) / s` and otherwise moves to a uniformly chosen
/// other sense. This makes astronomically long flights O(words) instead of
/// O(count).
fn changes_closed_form(doc: &Document, cfg: &mut Configuration, count: u64, rng: &mut SearchRng) {
    let poly = doc.polysemous();
    let mut remaining = count;
    for (drawn, &word) in poly.iter().enumerate() {
        let left = (poly.len() - drawn) as f64;
        let hits = if remaining == 0 {
            0
        } else if drawn + 1 == poly.len() {
            remaining
        } else {
            Binomial::new(remaining, 1.0 / left)
                .expect("binomial probability in (0,1]")
                .sample(rng)
        };
        remaining -= hits;
        if hits == 0 {
            continue;
        }
        let senses = doc.words()[word].sense_count;
        let spread = (senses - 1) as f64;
        // |r|^k with r = -1/(s-1); exact for s = 2, underflows to 0 for long walks.
        let magnitude = (-(hits as f64) * spread.ln()).exp();
        let signed = if hits % 2 == 1 { -magnitude } else { magnitude };
        let p_same = (1.0 + spread * signed) / senses as f64;
        let current = cfg.assignments[word];
        if rng.random::<f64>() >= p_same {
            cfg.assignments[word] = different_sense(current, senses, rng);
        }
    }
}

/// Uniform draw over the senses of a slot excluding `current`.
pub(crate) fn different_sense(current: usize, sense_count: usize, rng: &mut SearchRng) -> usize {
    debug_assert!(sense_count >= 2);
    let pick = rng.random_range(0..sense_count - 1);
    if pick >= current { pick + 1 } else { pick }
}

/// Number of positions at which two configurations differ.
pub fn hamming_distance(a: &Configuration, b: &Configuration) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!(
            "hamming distance over unequal lengths: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.assignments
        .iter()
        .zip(&b.assignments)
        .filter(|(x, y)| x != y)
        .count())
}
