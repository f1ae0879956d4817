//! The objective function: F1 against a gold standard, wrapped in a
//! call-counting budget.
//!
//! Search algorithms never compute F1 themselves; they receive a
//! [`BudgetedScorer`] and treat its exhaustion signal as their stop
//! condition. The scorer records the best configuration it has ever seen and
//! a trace of (call index, best score) change points, which is what the
//! harness turns into anytime curves.

use crate::document::{Configuration, Document};
use crate::error::{Error, Result};

/// Reference sense annotation aligned with a document. `None` marks a word
/// with no gold annotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldStandard {
    assignments: Vec<Option<usize>>,
}

impl GoldStandard {
    pub fn new(assignments: Vec<Option<usize>>) -> Self {
        Self { assignments }
    }

    pub fn assignments(&self) -> &[Option<usize>] {
        &self.assignments
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    /// Number of annotated words.
    pub fn annotated(&self) -> usize {
        self.assignments.iter().filter(|a| a.is_some()).count()
    }

    /// Checks alignment with a document: equal length, annotations in range.
    pub fn validate(&self, doc: &Document) -> Result<()> {
        if self.assignments.len() != doc.len() {
            return Err(Error::Validation(format!(
                "gold standard has {} entries but document {:?} has {} words",
                self.assignments.len(),
                doc.name(),
                doc.len()
            )));
        }
        for (i, (entry, slot)) in self.assignments.iter().zip(doc.words()).enumerate() {
            if let Some(sense) = entry {
                if *sense >= slot.sense_count {
                    return Err(Error::Validation(format!(
                        "gold sense {} at word {} exceeds sense count {}",
                        sense, i, slot.sense_count
                    )));
                }
            }
        }
        Ok(())
    }
}

/// F1 of a configuration against a gold standard.
///
/// Precision counts correct assignments over attempted (a configuration
/// assigns every word, so attempted is the word count); recall counts correct
/// over annotated. F1 is `2PR / (P + R)`, and 0 when `P + R` is 0. On a fully
/// annotated document this reduces to the fraction of correct assignments.
pub fn f1(cfg: &Configuration, gold: &GoldStandard) -> Result<f64> {
    if cfg.len() != gold.len() {
        return Err(Error::InvalidInput(format!(
            "configuration length {} does not match gold length {}",
            cfg.len(),
            gold.len()
        )));
    }
    let attempted = cfg.len();
    let mut annotated = 0usize;
    let mut correct = 0usize;
    for (&a, entry) in cfg.assignments().iter().zip(gold.assignments()) {
        if let Some(g) = entry {
            annotated += 1;
            if a == *g {
                correct += 1;
            }
        }
    }
    if attempted == 0 || annotated == 0 {
        return Ok(0.0);
    }
    let precision = correct as f64 / attempted as f64;
    let recall = correct as f64 / annotated as f64;
    if precision + recall == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * precision * recall / (precision + recall))
}

/// Signal returned by [`BudgetedScorer::score`] once the call budget is spent.
/// Algorithms treat it as their termination condition; the scorer's state
/// (best configuration, trace) stays intact and readable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetExhausted;

/// A call-counting F1 evaluator that remembers the best configuration ever
/// scored and the call indices at which the best improved.
#[derive(Debug, Clone)]
pub struct BudgetedScorer {
    gold: GoldStandard,
    budget: usize,
    call_count: usize,
    best_score: f64,
    best_config: Option<Configuration>,
    trace: Vec<(usize, f64)>,
}

impl BudgetedScorer {
    /// Creates a scorer for one run. `budget` must be positive.
    pub fn new(gold: GoldStandard, budget: usize) -> Result<Self> {
        if budget == 0 {
            return Err(Error::InvalidInput("budget must be positive".into()));
        }
        Ok(Self {
            gold,
            budget,
            call_count: 0,
            best_score: f64::NEG_INFINITY,
            best_config: None,
            trace: Vec::new(),
        })
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn call_count(&self) -> usize {
        self.call_count
    }

    pub fn remaining(&self) -> usize {
        self.budget - self.call_count
    }

    pub fn is_exhausted(&self) -> bool {
        self.call_count >= self.budget
    }

    /// Best F1 seen so far, if anything has been scored.
    pub fn best_score(&self) -> Option<f64> {
        self.best_config.as_ref().map(|_| self.best_score)
    }

    /// Best configuration seen so far.
    pub fn best_config(&self) -> Option<&Configuration> {
        self.best_config.as_ref()
    }

    /// Change points (call index, best score), with strictly increasing call
    /// indices and strictly increasing scores.
    pub fn trace(&self) -> &[(usize, f64)] {
        &self.trace
    }

    /// Scores a configuration, consuming one budgeted call.
    ///
    /// Returns the F1 value, or [`BudgetExhausted`] when the budget is
    /// already spent (the call then has no effect). On a strict improvement
    /// the best configuration and the trace are updated; ties keep the
    /// first-seen configuration.
    pub fn score(&mut self, cfg: &Configuration) -> std::result::Result<f64, BudgetExhausted> {
        if self.call_count >= self.budget {
            return Err(BudgetExhausted);
        }
        self.call_count += 1;
        let value = f1(cfg, &self.gold).expect("configuration aligned with gold");
        if value > self.best_score {
            self.best_score = value;
            self.best_config = Some(cfg.clone());
            self.trace.push((self.call_count, value));
        }
        Ok(value)
    }
}
