//! Truth oracles: total, deterministic verdicts on sentences.
//!
//! An oracle stands in wherever a truth predicate is consulted. Concrete
//! instances are the bounded-domain evaluator ([`crate::eval::EvalConfig`]),
//! finite labeled sentence sets ([`crate::truth_class::LabeledSentenceSet`]),
//! and constant oracles.

use crate::error::Result;
use crate::syntax::Formula;

pub trait TruthOracle {
    /// Verdict for a sentence. Must be deterministic; errs when queried
    /// outside the oracle's domain.
    fn holds(&self, sentence: &Formula) -> Result<bool>;
}

/// Answers every query with a fixed value.
pub struct ConstOracle(pub bool);

impl TruthOracle for ConstOracle {
    fn holds(&self, _sentence: &Formula) -> Result<bool> {
        Ok(self.0)
    }
}
