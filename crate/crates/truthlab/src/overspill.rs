//! Disjunctions with stopping conditions, the rank function and its ascent
//! search, outer disjunctions, chained-implication sentence families, and
//! distinctness sentences — each with a finite, mechanically checkable
//! contract.
//!
//! The central object is the stopping disjunction built by
//! [`stopping_disjunction`]: a right-nested guard chain whose value, under
//! every boolean valuation of its guards and payloads, equals the payload at
//! the least true guard, and is false when no guard fires. [`rank`] measures
//! how long a prefix of a fixed sentence sequence a sentence propositionally
//! proves, after rewriting stopping chains to their selected payloads via
//! [`collapse_stopping`]; iterating [`gamma_step`] then drives the rank
//! strictly upward until it tops out, which [`find_max_rank_index`] verifies.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::TruthOracle;
use crate::prop::{max_prefix_entailment, PrefixEntailment};
use crate::syntax::{
    big_and, big_or, dag_size, numeral, Formula, FormulaKind, SentenceSeq, Term, VarName,
};

/// Builders abort once a formula reaches this many distinct nodes.
pub const NODE_CAP: usize = 10_000_000;

// ---------------------------------------------------------------------------
// Rank values.

/// An element of the order `0 < 1 < ... < omega`: the rank of a sentence.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Rank {
    Finite(u64),
    Omega,
}

impl PartialOrd for Rank {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rank {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Rank::Finite(a), Rank::Finite(b)) => a.cmp(b),
            (Rank::Finite(_), Rank::Omega) => std::cmp::Ordering::Less,
            (Rank::Omega, Rank::Finite(_)) => std::cmp::Ordering::Greater,
            (Rank::Omega, Rank::Omega) => std::cmp::Ordering::Equal,
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(k) => write!(f, "{k}"),
            Rank::Omega => f.write_str("omega"),
        }
    }
}

// ---------------------------------------------------------------------------
// Stopping disjunctions.

/// Guard sentences `alphas` and payload sentences `betas` of equal, nonzero
/// length `c + 1`.
#[derive(Clone, Debug)]
pub struct StoppingSpec {
    alphas: Vec<Formula>,
    betas: Vec<Formula>,
}

impl StoppingSpec {
    pub fn new(alphas: Vec<Formula>, betas: Vec<Formula>) -> Result<StoppingSpec> {
        if alphas.is_empty() {
            return Err(Error::EmptySequence);
        }
        if alphas.len() != betas.len() {
            return Err(Error::Invalid(format!(
                "guard and payload counts differ: {} vs {}",
                alphas.len(),
                betas.len()
            )));
        }
        for f in alphas.iter().chain(betas.iter()) {
            if !f.is_sentence() {
                return Err(Error::NotASentence {
                    formula: f.to_string(),
                    free: f.free_vars().iter().map(|v| v.to_string()).collect(),
                });
            }
        }
        Ok(StoppingSpec { alphas, betas })
    }

    pub fn stage_count(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[Formula] {
        &self.alphas
    }

    pub fn betas(&self) -> &[Formula] {
        &self.betas
    }
}

/// The right-nested guard chain
///
/// ```text
/// chain(i) = (a_i & b_i) | (!a_i & chain(i+1))      for i < c
/// chain(c) = (a_c & b_c)
/// ```
///
/// Its contract: under every valuation, the chain's value equals the value of
/// `b_k` for the least `k` with `a_k` true, and is false when no guard is
/// true. Sharing keeps the output linear in the number of distinct inputs.
pub fn stopping_disjunction(spec: &StoppingSpec) -> Formula {
    let n = spec.stage_count();
    let mut chain = Formula::and(spec.alphas[n - 1].clone(), spec.betas[n - 1].clone());
    for i in (0..n - 1).rev() {
        let a = spec.alphas[i].clone();
        let b = spec.betas[i].clone();
        chain = Formula::or(
            Formula::and(a.clone(), b),
            Formula::and(Formula::not(a), chain),
        );
    }
    chain
}

/// Recognizes a guard chain of at least two stages, returning its
/// `(guard, payload)` pairs in order. One-stage chains are plain
/// conjunctions and are deliberately not recognized.
pub fn stopping_stages(f: &Formula) -> Option<Vec<(Formula, Formula)>> {
    let mut stages = Vec::new();
    let mut cur = f.clone();
    loop {
        match cur.kind() {
            FormulaKind::Or(left, right) => {
                let FormulaKind::And(guard, payload) = left.kind() else {
                    return None;
                };
                let FormulaKind::And(neg, rest) = right.kind() else {
                    return None;
                };
                let FormulaKind::Not(again) = neg.kind() else {
                    return None;
                };
                if again != guard {
                    return None;
                }
                stages.push((guard.clone(), payload.clone()));
                cur = rest.clone();
            }
            FormulaKind::And(guard, payload) if !stages.is_empty() => {
                stages.push((guard.clone(), payload.clone()));
                return Some(stages);
            }
            _ => return None,
        }
    }
}

/// Rewrites every stopping chain in `phi` to the payload at its least true
/// guard, as judged by `oracle`. Chains with no true guard, and chains whose
/// guards the oracle has no verdict for, are left in place (their
/// subformulas are still visited). Provability-atom payloads are opaque and
/// never rewritten. Other oracle errors propagate.
pub fn collapse_stopping(phi: &Formula, oracle: &dyn TruthOracle) -> Result<Formula> {
    let mut memo = HashMap::new();
    collapse_rec(phi, oracle, &mut memo)
}

fn collapse_rec(
    f: &Formula,
    oracle: &dyn TruthOracle,
    memo: &mut HashMap<u64, Formula>,
) -> Result<Formula> {
    if let Some(done) = memo.get(&f.id()) {
        return Ok(done.clone());
    }
    let mut collapsed: Option<Formula> = None;
    if f.is_sentence() {
        if let Some(stages) = stopping_stages(f) {
            for (guard, payload) in &stages {
                match oracle.holds(guard) {
                    Ok(true) => {
                        collapsed = Some(collapse_rec(payload, oracle, memo)?);
                        break;
                    }
                    Ok(false) => continue,
                    Err(Error::OracleUndefined(_)) => break,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    let result = match collapsed {
        Some(r) => r,
        None => match f.kind() {
            FormulaKind::Eq(_, _) | FormulaKind::PrProp(_) => f.clone(),
            FormulaKind::Not(g) => Formula::not(collapse_rec(g, oracle, memo)?),
            FormulaKind::And(l, r) => Formula::and(
                collapse_rec(l, oracle, memo)?,
                collapse_rec(r, oracle, memo)?,
            ),
            FormulaKind::Or(l, r) => Formula::or(
                collapse_rec(l, oracle, memo)?,
                collapse_rec(r, oracle, memo)?,
            ),
            FormulaKind::Forall(v, g) => Formula::forall(*v, collapse_rec(g, oracle, memo)?),
            FormulaKind::Exists(v, g) => Formula::exists(*v, collapse_rec(g, oracle, memo)?),
        },
    };
    memo.insert(f.id(), result.clone());
    Ok(result)
}

// ---------------------------------------------------------------------------
// The alpha/beta/gamma construction.

/// `![psi & @PrProp(psi -> (phi_0 & ... & phi_i))]`: the guard that fires
/// when `psi` fails to be true or fails to prove the prefix through `i`.
pub fn build_alpha(psi: &Formula, i: usize, phis: &[Formula]) -> Result<Formula> {
    if i >= phis.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: phis.len(),
        });
    }
    let prefix = big_and(&phis[..=i])?;
    let provable = Formula::prprop(Formula::implies(psi.clone(), prefix))?;
    Ok(Formula::not(Formula::and(psi.clone(), provable)))
}

/// The left-grouped conjunction of `phis[0..=i]`.
pub fn build_beta(i: usize, phis: &[Formula]) -> Result<Formula> {
    if i >= phis.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: phis.len(),
        });
    }
    big_and(&phis[..=i])
}

/// One step of the iterated construction: the stopping disjunction with
/// guards `alpha_j[current]` and payloads `beta_j` for `j <= c`.
pub fn gamma_step(current: &Formula, phis: &[Formula], c: usize) -> Result<Formula> {
    let alphas: Vec<Formula> = (0..=c)
        .map(|j| build_alpha(current, j, phis))
        .collect::<Result<_>>()?;
    let betas: Vec<Formula> = (0..=c).map(|j| build_beta(j, phis)).collect::<Result<_>>()?;
    Ok(stopping_disjunction(&StoppingSpec::new(alphas, betas)?))
}

/// The sequence `gamma_0 = phis[0]`, `gamma_{i+1} = gamma_step(gamma_i)`,
/// through `gamma_steps`. Aborts with a resource error past [`NODE_CAP`]
/// distinct nodes.
pub fn build_gamma_sequence(phis: &[Formula], c: usize, steps: usize) -> Result<Vec<Formula>> {
    if steps == 0 {
        return Err(Error::Invalid("steps must be at least 1".into()));
    }
    if c >= phis.len() {
        return Err(Error::Invalid(format!(
            "c = {c} requires at least {} sentences, got {}",
            c + 1,
            phis.len()
        )));
    }
    let mut out = Vec::with_capacity(steps + 1);
    out.push(phis[0].clone());
    for _ in 0..steps {
        let next = gamma_step(out.last().unwrap(), phis, c)?;
        let size = dag_size(&next);
        if size > NODE_CAP {
            return Err(Error::ResourceLimit(format!(
                "construction reached {size} nodes (cap {NODE_CAP})"
            )));
        }
        out.push(next);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Rank.

/// Rank of `psi` against the sequence `phis` under `oracle`:
///
/// - `Finite(0)` when the oracle rejects `psi` (also when `psi` is true but
///   proves not even `phis[0]`);
/// - `Finite(k + 1)` when `k` is the largest index such that `psi` proves the
///   left-grouped conjunction of `phis[0..=k]` in propositional logic;
/// - `Omega` when every prefix, up to the whole sequence, is proved.
///
/// Stopping chains inside `psi` are first rewritten to their selected
/// payloads ([`collapse_stopping`]); on chain-free sentences the rank is the
/// plain maximal-prefix measurement.
pub fn rank(psi: &Formula, phis: &[Formula], oracle: &dyn TruthOracle) -> Result<Rank> {
    if !oracle.holds(psi)? {
        return Ok(Rank::Finite(0));
    }
    let collapsed = collapse_stopping(psi, oracle)?;
    Ok(match max_prefix_entailment(&collapsed, phis) {
        PrefixEntailment::None => Rank::Finite(0),
        PrefixEntailment::UpTo(k) => Rank::Finite(k as u64 + 1),
        PrefixEntailment::All => Rank::Omega,
    })
}

/// Outcome of scanning a rank list for its first maximal entry.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MaxRankOutcome {
    /// Least index holding `Omega`; the progress condition held before it.
    Found(usize),
    /// Index of the first non-maximal entry not strictly below its successor.
    ProgressViolation(usize),
    /// Progress holds but no entry is maximal within this finite list.
    NoOmega,
}

/// Finite ascent search: if every non-maximal entry is strictly below its
/// successor and some entry is `Omega`, returns the least such index.
/// Otherwise reports the first progress violation, or the absence of a
/// maximal entry.
pub fn find_max_rank_index(ranks: &[Rank]) -> MaxRankOutcome {
    for i in 0..ranks.len().saturating_sub(1) {
        if ranks[i] != Rank::Omega && ranks[i] >= ranks[i + 1] {
            return MaxRankOutcome::ProgressViolation(i);
        }
    }
    match ranks.iter().position(|r| *r == Rank::Omega) {
        Some(i) => MaxRankOutcome::Found(i),
        None => MaxRankOutcome::NoOmega,
    }
}

// ---------------------------------------------------------------------------
// Outer disjunctions and the chained-implication family.

/// `exists x (x <= numeral(b) & ((x = numeral(0) & phi_0) | ... ))` with `b`
/// the last index, `x` and the witness of `<=` fresh, and the inner
/// disjunction left-grouped. Behaves as a disjunction whose truth is always
/// witnessed by a true member.
pub fn outer_disjunction(phis: &[Formula]) -> Result<Formula> {
    if phis.is_empty() {
        return Err(Error::EmptySequence);
    }
    for f in phis {
        if !f.is_sentence() {
            return Err(Error::NotASentence {
                formula: f.to_string(),
                free: f.free_vars().iter().map(|v| v.to_string()).collect(),
            });
        }
    }
    let b = phis.len() - 1;
    let ceiling = phis.iter().map(|f| f.var_ceiling()).max().unwrap_or(0);
    let x = VarName(ceiling);
    let w = VarName(ceiling + 1);
    let disjuncts: Vec<Formula> = phis
        .iter()
        .enumerate()
        .map(|(i, phi)| Formula::and(Formula::eq(Term::var(x), numeral(i as u64)), phi.clone()))
        .collect();
    let guard = Formula::exists(
        w,
        Formula::eq(Term::add(Term::var(w), Term::var(x)), numeral(b as u64)),
    );
    Ok(Formula::exists(
        x,
        Formula::and(guard, big_or(&disjuncts)?),
    ))
}

/// The chained-implication witnesses: `psi_0 = phis[0]` and
/// `psi_{i+1} = !phis[i+1] -> D(<!psi_0, ..., !psi_i>)` with the implication
/// desugared and `D` the outer disjunction.
pub fn build_psi_sequence(phis: &[Formula]) -> Result<Vec<Formula>> {
    if phis.is_empty() {
        return Err(Error::EmptySequence);
    }
    let mut psis = vec![phis[0].clone()];
    for phi in &phis[1..] {
        let negs: Vec<Formula> = psis.iter().map(|p| Formula::not(p.clone())).collect();
        let d = outer_disjunction(&negs)?;
        let next = Formula::or(Formula::not(Formula::not(phi.clone())), d);
        let size = dag_size(&next);
        if size > NODE_CAP {
            return Err(Error::ResourceLimit(format!(
                "construction reached {size} nodes (cap {NODE_CAP})"
            )));
        }
        psis.push(next);
    }
    Ok(psis)
}

// ---------------------------------------------------------------------------
// Distinctness sentences.

/// `exists x_1 ... exists x_c` of the left-grouped conjunction of
/// `!(x_i = x_j)` over ordered pairs `i != j`. True over a bounded domain
/// `[0, B]` exactly when it offers `c` distinct values, i.e. `B + 1 >= c`.
/// For `c = 1` the body degenerates to `x_1 = x_1`.
pub fn distinctness_sentence(c: usize) -> Result<Formula> {
    if c == 0 {
        return Err(Error::Invalid("at least one witness is required".into()));
    }
    let body = if c == 1 {
        Formula::eq(Term::var(VarName(1)), Term::var(VarName(1)))
    } else {
        let mut conjuncts = Vec::with_capacity(c * (c - 1));
        for i in 1..=c {
            for j in 1..=c {
                if i != j {
                    conjuncts.push(Formula::not(Formula::eq(
                        Term::var(VarName(i as u32)),
                        Term::var(VarName(j as u32)),
                    )));
                }
            }
        }
        big_and(&conjuncts)?
    };
    let mut f = body;
    for i in (1..=c).rev() {
        f = Formula::exists(VarName(i as u32), f);
    }
    Ok(f)
}

/// Two true numeral-distinctness conjunctions:
///
/// - the left-grouped conjunction of `!(numeral(i) = numeral(b + 1))` for
///   `i <= b` (`b + 1` conjuncts), and
/// - the left-grouped conjunction of `!(numeral(i) = numeral(j))` over
///   ordered pairs `i, j <= b`, `i != j` (`b * (b + 1)` conjuncts;
///   degenerates to `0 = 0` when `b = 0`).
pub fn numeral_distinctness(b: u64) -> (Formula, Formula) {
    let fresh: Vec<Formula> = (0..=b)
        .map(|i| Formula::not(Formula::eq(numeral(i), numeral(b + 1))))
        .collect();
    let first = big_and(&fresh).expect("nonempty by construction");

    let mut pairs = Vec::new();
    for i in 0..=b {
        for j in 0..=b {
            if i != j {
                pairs.push(Formula::not(Formula::eq(numeral(i), numeral(j))));
            }
        }
    }
    let second = match big_and(&pairs) {
        Ok(f) => f,
        Err(_) => Formula::eq(Term::zero(), Term::zero()),
    };
    (first, second)
}

// ---------------------------------------------------------------------------
// The two case-analysis tautologies behind outer disjunctions.
//
// Numeral equations are oriented running-index-first (`numeral(i) = ...`)
// throughout, so the premises and the disjuncts share atoms; mixed
// orientations would make the equations distinct atoms and neither sentence
// a tautology.

/// `(/\_{i<=b} numeral(i) != numeral(b+1)) -> !(\/_{i<=b} (numeral(i) =
/// numeral(b+1) & phi_i))`: a fresh index selects no existing disjunct.
pub fn extension_case_tautology(phis: &[Formula]) -> Result<Formula> {
    if phis.is_empty() {
        return Err(Error::EmptySequence);
    }
    let b = (phis.len() - 1) as u64;
    let (premise, _) = numeral_distinctness(b);
    let disjuncts: Vec<Formula> = phis
        .iter()
        .enumerate()
        .map(|(i, phi)| {
            Formula::and(
                Formula::eq(numeral(i as u64), numeral(b + 1)),
                phi.clone(),
            )
        })
        .collect();
    Ok(Formula::implies(
        premise,
        Formula::not(big_or(&disjuncts)?),
    ))
}

/// `[numeral(j) = numeral(j) & /\_{i<=b, i!=j} numeral(i) != numeral(j) &
/// \/_{i<=b} (numeral(i) = numeral(j) & phi_i)] -> phi_j`: a witnessed index
/// extracts its disjunct.
pub fn selection_case_tautology(phis: &[Formula], j: usize) -> Result<Formula> {
    if j >= phis.len() {
        return Err(Error::IndexOutOfRange {
            index: j,
            len: phis.len(),
        });
    }
    let b = phis.len() - 1;
    let mut parts = vec![Formula::eq(numeral(j as u64), numeral(j as u64))];
    for i in 0..=b {
        if i != j {
            parts.push(Formula::not(Formula::eq(
                numeral(i as u64),
                numeral(j as u64),
            )));
        }
    }
    let disjuncts: Vec<Formula> = phis
        .iter()
        .enumerate()
        .map(|(i, phi)| {
            Formula::and(
                Formula::eq(numeral(i as u64), numeral(j as u64)),
                phi.clone(),
            )
        })
        .collect();
    parts.push(big_or(&disjuncts)?);
    Ok(Formula::implies(big_and(&parts)?, phis[j].clone()))
}

/// Convenience: a sequence of pairwise-independent true sentences (the
/// distinctness family), suitable as the base of the rank construction for
/// any evaluator bound `B >= c`.
pub fn distinctness_family(c: usize) -> Result<SentenceSeq> {
    let phis: Vec<Formula> = (0..=c)
        .map(|i| distinctness_sentence(i + 1))
        .collect::<Result<_>>()?;
    SentenceSeq::new(phis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{eval_bounded, eval_delta0, EvalConfig, PrPropRule};
    use crate::oracle::ConstOracle;
    use crate::prop::{proves_prop, skeletonize};
    use crate::syntax::and_spine;

    /// Distinct atomic sentences: true for even seeds, false for odd ones.
    fn atom(i: u64) -> Formula {
        Formula::eq(numeral(i), numeral(i))
    }

    fn false_atom(i: u64) -> Formula {
        Formula::eq(numeral(i), numeral(i + 1))
    }

    fn spec_of(alphas: &[Formula], betas: &[Formula]) -> StoppingSpec {
        StoppingSpec::new(alphas.to_vec(), betas.to_vec()).unwrap()
    }

    #[test]
    fn single_stage_chain_is_a_guarded_payload() {
        let cfg = EvalConfig::new(1).unwrap();
        for (guard, payload) in [
            (atom(0), atom(1)),
            (atom(0), false_atom(1)),
            (false_atom(0), atom(1)),
        ] {
            let chain = stopping_disjunction(&spec_of(&[guard.clone()], &[payload.clone()]));
            let expected = eval_bounded(&guard, &cfg).unwrap() && eval_bounded(&payload, &cfg).unwrap();
            assert_eq!(eval_bounded(&chain, &cfg).unwrap(), expected);
        }
    }

    /// Exhaustive value contract on small chains: the chain equals the
    /// payload at the least true guard, or false if no guard fires.
    #[test]
    fn stopping_value_contract_small() {
        for stages in 1..=4usize {
            let alphas: Vec<Formula> = (0..stages as u64).map(atom).collect();
            let betas: Vec<Formula> = (10..10 + stages as u64).map(atom).collect();
            let chain = stopping_disjunction(&spec_of(&alphas, &betas));
            let (skel, table) = skeletonize(&chain);
            let n = table.len();
            assert_eq!(n, 2 * stages);
            let a_idx: Vec<usize> = alphas.iter().map(|a| table.atom_of(a).unwrap()).collect();
            let b_idx: Vec<usize> = betas.iter().map(|b| table.atom_of(b).unwrap()).collect();
            for assignment in 0u64..1 << n {
                let got = skel.eval_assignment(assignment);
                let expected = match a_idx.iter().position(|i| assignment >> i & 1 == 1) {
                    Some(k) => assignment >> b_idx[k] & 1 == 1,
                    None => false,
                };
                assert_eq!(got, expected, "stages {stages}, assignment {assignment:b}");
            }
        }
    }

    #[test]
    fn stopping_selects_the_least_true_guard() {
        // Guard values (false, true, false): the chain tracks payload 1.
        let alphas = [false_atom(0), atom(1), false_atom(2)];
        let betas = [atom(10), atom(11), false_atom(12)];
        let chain = stopping_disjunction(&spec_of(&alphas, &betas));
        let cfg = EvalConfig::new(1).unwrap();
        assert_eq!(
            eval_bounded(&chain, &cfg).unwrap(),
            eval_bounded(&betas[1], &cfg).unwrap()
        );

        // All guards false: the chain defaults to false.
        let dead = [false_atom(0), false_atom(1), false_atom(2)];
        let chain = stopping_disjunction(&spec_of(&dead, &betas));
        assert!(!eval_bounded(&chain, &cfg).unwrap());
    }

    #[test]
    fn stages_round_trip_through_recognition() {
        let alphas: Vec<Formula> = (0..3).map(atom).collect();
        let betas: Vec<Formula> = (10..13).map(atom).collect();
        let chain = stopping_disjunction(&spec_of(&alphas, &betas));
        let stages = stopping_stages(&chain).unwrap();
        assert_eq!(stages.len(), 3);
        for (i, (g, b)) in stages.iter().enumerate() {
            assert_eq!(*g, alphas[i]);
            assert_eq!(*b, betas[i]);
        }
        // Plain conjunctions and disjunctions are not chains.
        assert!(stopping_stages(&Formula::and(atom(0), atom(1))).is_none());
        assert!(stopping_stages(&Formula::or(atom(0), atom(1))).is_none());
    }

    #[test]
    fn collapse_rewrites_to_the_selected_payload() {
        let alphas = [false_atom(0), atom(1), false_atom(2)];
        let betas: Vec<Formula> = (10..13).map(atom).collect();
        let chain = stopping_disjunction(&spec_of(&alphas, &betas));
        let cfg = EvalConfig::new(1).unwrap();
        assert_eq!(collapse_stopping(&chain, &cfg).unwrap(), betas[1]);

        // No true guard: left in place.
        let dead = [false_atom(0), false_atom(1), false_atom(2)];
        let chain = stopping_disjunction(&spec_of(&dead, &betas));
        assert_eq!(collapse_stopping(&chain, &cfg).unwrap(), chain);

        // An oracle with no verdicts leaves everything alone.
        let undefined = crate::truth_class::LabeledSentenceSet::new(1);
        assert_eq!(collapse_stopping(&chain, &undefined).unwrap(), chain);
    }

    #[test]
    fn alpha_shape_and_value() {
        let phis: Vec<Formula> = (0..3).map(atom).collect();
        let alpha = build_alpha(&phis[0], 0, &phis).unwrap();
        assert!(matches!(alpha.kind(), FormulaKind::Not(_)));

        // With psi = phis[0], the provability atom is true, so the guard
        // value is the negation of psi's value.
        let cfg = EvalConfig::new(1).unwrap().with_prprop(PrPropRule::Direct);
        let psi_value = eval_bounded(&phis[0], &cfg).unwrap();
        assert_eq!(eval_bounded(&alpha, &cfg).unwrap(), !psi_value);

        // A psi unrelated to phis[0] proves nothing: the guard is true no
        // matter psi's own value.
        let unrelated = atom(7);
        assert!(!proves_prop(&[unrelated.clone()], &phis[0]));
        let alpha = build_alpha(&unrelated, 0, &phis).unwrap();
        assert!(eval_bounded(&alpha, &cfg).unwrap());
    }

    #[test]
    fn beta_is_the_prefix_conjunction() {
        let phis: Vec<Formula> = (0..4).map(atom).collect();
        assert_eq!(build_beta(0, &phis).unwrap(), phis[0]);
        assert_eq!(
            build_beta(2, &phis).unwrap(),
            Formula::and(Formula::and(phis[0].clone(), phis[1].clone()), phis[2].clone())
        );
        assert_eq!(and_spine(&build_beta(2, &phis).unwrap()).len(), 3);
        assert!(build_beta(4, &phis).is_err());
    }

    #[test]
    fn gamma_one_unfolds_to_the_chain() {
        let phis: Vec<Formula> = (0..3).map(atom).collect();
        let c = 2;
        let gammas = build_gamma_sequence(&phis, c, 1).unwrap();
        assert_eq!(gammas.len(), 2);
        assert_eq!(gammas[0], phis[0]);
        let alphas: Vec<Formula> = (0..=c)
            .map(|j| build_alpha(&phis[0], j, &phis).unwrap())
            .collect();
        let betas: Vec<Formula> = (0..=c).map(|j| build_beta(j, &phis).unwrap()).collect();
        assert_eq!(
            gammas[1],
            stopping_disjunction(&spec_of(&alphas, &betas))
        );
    }

    #[test]
    fn rank_ladder_over_distinct_atoms() {
        let c = 5;
        let phis: Vec<Formula> = (0..=c as u64).map(atom).collect();
        let cfg = EvalConfig::with_prop_attachment(4).unwrap();
        let gammas = build_gamma_sequence(&phis, c, c).unwrap();
        let ranks: Vec<Rank> = gammas
            .iter()
            .map(|g| rank(g, &phis, &cfg).unwrap())
            .collect();
        for i in 0..ranks.len() - 1 {
            if ranks[i] != Rank::Omega {
                assert!(ranks[i] < ranks[i + 1], "no progress at {i}: {ranks:?}");
            }
        }
        assert!(ranks.contains(&Rank::Omega));
        match find_max_rank_index(&ranks) {
            MaxRankOutcome::Found(d) => assert!(d <= c + 1),
            other => panic!("expected an omega index, got {other:?}"),
        }
    }

    #[test]
    fn identical_conjuncts_collapse_immediately() {
        // With every element equal to phis[0], idempotence makes the very
        // first sentence prove every prefix.
        let phis: Vec<Formula> = vec![atom(0); 4];
        let cfg = EvalConfig::with_prop_attachment(2).unwrap();
        assert_eq!(rank(&phis[0], &phis, &cfg).unwrap(), Rank::Omega);
        for k in 0..phis.len() {
            assert!(proves_prop(&[phis[0].clone()], &build_beta(k, &phis).unwrap()));
        }
    }

    #[test]
    fn rank_examples() {
        let phis: Vec<Formula> = (0..5).map(atom).collect();
        let truthful = EvalConfig::new(1).unwrap();

        // Oracle rejects psi: rank 0 regardless of strength.
        assert_eq!(
            rank(&big_and(&phis).unwrap(), &phis, &ConstOracle(false)).unwrap(),
            Rank::Finite(0)
        );

        let psi = big_and(&phis[..3]).unwrap();
        assert_eq!(rank(&psi, &phis, &truthful).unwrap(), Rank::Finite(3));

        let full = big_and(&phis).unwrap();
        assert_eq!(rank(&full, &phis, &truthful).unwrap(), Rank::Omega);

        // True but proving nothing relevant: rank 0.
        assert_eq!(rank(&atom(9), &phis, &truthful).unwrap(), Rank::Finite(0));
    }

    #[test]
    fn max_rank_scan_examples() {
        use Rank::{Finite, Omega};
        assert_eq!(
            find_max_rank_index(&[Finite(1), Finite(2), Omega]),
            MaxRankOutcome::Found(2)
        );
        assert_eq!(
            find_max_rank_index(&[Finite(0), Finite(0), Omega]),
            MaxRankOutcome::ProgressViolation(0)
        );
        assert_eq!(
            find_max_rank_index(&[Finite(0), Finite(3)]),
            MaxRankOutcome::NoOmega
        );
        // A violation after an omega still counts: the scan checks the
        // progress condition everywhere first.
        assert_eq!(
            find_max_rank_index(&[Finite(0), Omega, Finite(0), Finite(0)]),
            MaxRankOutcome::ProgressViolation(2)
        );
    }

    #[test]
    fn ascending_lists_hit_omega_within_their_headroom() {
        // Strictly ascending through finite values capped at 10: a list
        // starting at Finite(k) with more than 11 - k entries must contain
        // Omega. Exhaustive over all ascending lists up to length 12.
        fn extend(list: &mut Vec<Rank>, max_len: usize, out: &mut Vec<Vec<Rank>>) {
            if list.len() >= 1 {
                out.push(list.clone());
            }
            if list.len() == max_len {
                return;
            }
            let floor = match list.last() {
                Some(Rank::Finite(k)) => *k + 1,
                Some(Rank::Omega) => return,
                None => 0,
            };
            for v in floor..=10 {
                list.push(Rank::Finite(v));
                extend(list, max_len, out);
                list.pop();
            }
            list.push(Rank::Omega);
            extend(list, max_len, out);
            list.pop();
        }
        let mut all = Vec::new();
        extend(&mut Vec::new(), 12, &mut all);
        for list in &all {
            if let Rank::Finite(k) = list[0] {
                if list.len() > (11 - k) as usize {
                    assert!(
                        list.contains(&Rank::Omega),
                        "ascending list exceeded its finite headroom: {list:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn outer_disjunction_examples() {
        let cfg = EvalConfig::new(4).unwrap();
        // Singleton: same value as its only member.
        for phi in [atom(0), false_atom(0)] {
            let d = outer_disjunction(&[phi.clone()]).unwrap();
            assert!(d.is_sentence());
            assert_eq!(
                eval_bounded(&d, &cfg).unwrap(),
                eval_bounded(&phi, &cfg).unwrap()
            );
        }
        // Pair: join of the values, over all four combinations.
        for a in [atom(0), false_atom(0)] {
            for b in [atom(1), false_atom(1)] {
                let d = outer_disjunction(&[a.clone(), b.clone()]).unwrap();
                let expected =
                    eval_bounded(&a, &cfg).unwrap() || eval_bounded(&b, &cfg).unwrap();
                assert_eq!(eval_bounded(&d, &cfg).unwrap(), expected);
            }
        }
        // Appending one sentence adds one disjunct's worth of truth.
        let base = [atom(0), false_atom(1)];
        for psi in [atom(2), false_atom(2)] {
            let extended: Vec<Formula> =
                base.iter().cloned().chain([psi.clone()]).collect();
            let lhs = eval_bounded(&outer_disjunction(&extended).unwrap(), &cfg).unwrap();
            let rhs = eval_bounded(&outer_disjunction(&base).unwrap(), &cfg).unwrap()
                || eval_bounded(&psi, &cfg).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn psi_sequence_shape() {
        let phis: Vec<Formula> = (0..2).map(atom).collect();
        let psis = build_psi_sequence(&phis).unwrap();
        assert_eq!(psis[0], phis[0]);
        let expected = Formula::or(
            Formula::not(Formula::not(phis[1].clone())),
            outer_disjunction(&[Formula::not(phis[0].clone())]).unwrap(),
        );
        assert_eq!(psis[1], expected);
    }

    #[test]
    fn distinctness_examples() {
        // c = 1 degenerates to a reflexive equation under one quantifier.
        let one = distinctness_sentence(1).unwrap();
        assert!(one.is_sentence());
        let cfg1 = EvalConfig::new(1).unwrap();
        assert!(eval_bounded(&one, &cfg1).unwrap());

        // Brute-force oracle: c distinct values exist in [0, B] iff B+1 >= c.
        for c in 1..=5usize {
            let f = distinctness_sentence(c).unwrap();
            for bound in 1..=6u64 {
                let cfg = EvalConfig::new(bound).unwrap();
                let expected = bound + 1 >= c as u64;
                assert_eq!(
                    eval_bounded(&f, &cfg).unwrap(),
                    expected,
                    "c = {c}, bound = {bound}"
                );
            }
        }

        let f3 = distinctness_sentence(3).unwrap();
        assert!(eval_bounded(&f3, &EvalConfig::new(2).unwrap()).unwrap());
        assert!(eval_bounded(&f3, &EvalConfig::new(3).unwrap()).unwrap());
        let f5 = distinctness_sentence(5).unwrap();
        assert!(!eval_bounded(&f5, &EvalConfig::new(3).unwrap()).unwrap());
    }

    #[test]
    fn numeral_distinctness_counts_and_truth() {
        let (first, second) = numeral_distinctness(0);
        assert_eq!(first, Formula::not(Formula::eq(Term::zero(), numeral(1))));
        assert_eq!(second, Formula::eq(Term::zero(), Term::zero()));

        for b in 0..=20u64 {
            let (first, second) = numeral_distinctness(b);
            assert_eq!(and_spine(&first).len(), (b + 1) as usize);
            if b > 0 {
                assert_eq!(and_spine(&second).len(), (b * (b + 1)) as usize);
            }
            assert!(eval_delta0(&first).unwrap(), "b = {b}");
            assert!(eval_delta0(&second).unwrap(), "b = {b}");
        }
    }

    #[test]
    fn case_tautology_atom_budget() {
        // At b = 3 the extension tautology spans exactly eight atoms: four
        // shared numeral equations and four payload sentences.
        let phis: Vec<Formula> = (20..24).map(atom).collect();
        let taut = extension_case_tautology(&phis).unwrap();
        let (_, table) = skeletonize(&taut);
        assert_eq!(table.len(), 8);
        assert!(crate::prop::is_tautology(&taut));
    }

    #[test]
    fn case_tautologies_hold_and_are_tight() {
        for b in 0..=6u64 {
            let phis: Vec<Formula> = (0..=b).map(|i| atom(30 + i)).collect();
            assert!(crate::prop::is_tautology(
                &extension_case_tautology(&phis).unwrap()
            ));
            for j in 0..phis.len() {
                assert!(crate::prop::is_tautology(
                    &selection_case_tautology(&phis, j).unwrap()
                ));
            }
        }
        // Dropping the freshness premise breaks the extension tautology.
        let phis: Vec<Formula> = (0..3).map(|i| atom(40 + i)).collect();
        let b = (phis.len() - 1) as u64;
        let disjuncts: Vec<Formula> = phis
            .iter()
            .enumerate()
            .map(|(i, phi)| {
                Formula::and(Formula::eq(numeral(i as u64), numeral(b + 1)), phi.clone())
            })
            .collect();
        let bare = Formula::not(big_or(&disjuncts).unwrap());
        assert!(!crate::prop::is_tautology(&bare));
    }
}
