//! A workbench for the syntax and truth-theoretic machinery of first-order
//! arithmetic: hash-consed terms and formulas, arithmetization (numeric codes
//! for syntax), desk-scale truth evaluation with bounded quantifiers,
//! propositional skeletons with tautology and entailment checking, the
//! stopping-disjunction / rank constructions that drive saturation arguments
//! about compositional truth predicates, and auditing of finite labeled
//! sentence sets against compositional clauses.
//!
//! Start with the runnable examples (`cargo run --example <name>`):
//!
//! - `parse_print` — concrete grammar, parsing, substitution
//! - `numerals_and_values` — closed-term valuation
//! - `godel_codes` — encoding syntax as big naturals
//! - `bounded_eval` — bounded-domain and delta0 evaluation
//! - `tautologies` — skeletons, tautology and entailment checking
//! - `stopping_chain` — disjunctions with stopping conditions
//! - `rank_ladder` — the rank construction climbing to its maximum
//! - `outer_disjunction` — indexed disjunctions with extraction clauses
//! - `progression` — chained implication families and their audit
//! - `distinctness` — pigeonhole sentences under bounded evaluation
//! - `truth_class_audit` — checking labeled sentence sets
//!
//! The `truthlab` binary exposes the same operations as subcommands; see the
//! README for the command reference.

mod error;

pub mod coding;
pub mod eval;
pub mod oracle;
pub mod overspill;
pub mod pipeline;
pub mod prop;
pub mod syntax;
pub mod truth_class;

pub use error::{Error, Result};
pub use syntax::{Formula, SentenceSeq, Term, VarName};
