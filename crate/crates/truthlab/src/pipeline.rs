//! End-to-end demo pipelines: the rank ladder driven by stopping
//! disjunctions, and the chained-implication family with its outer
//! disjunctions. Both return structured reports that render as a human trace
//! and as deterministic JSON.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::{eval_bounded, EvalConfig};
use crate::overspill::{
    build_psi_sequence, gamma_step, numeral_distinctness, outer_disjunction, rank, Rank, NODE_CAP,
};
use crate::syntax::{big_and, dag_size, numeral, Formula};

// ---------------------------------------------------------------------------
// Rank ladder.

#[derive(Serialize)]
pub struct RankStep {
    pub index: usize,
    pub dag_size: usize,
    pub tree_size: String,
    pub rank: Rank,
    pub value: bool,
}

#[derive(Serialize)]
pub struct RankLadderReport {
    pub c: usize,
    pub bound: u64,
    pub hypothesis_ok: bool,
    pub steps: Vec<RankStep>,
    pub omega_index: Option<usize>,
    pub final_conjunction: Option<bool>,
    pub failure: Option<String>,
}

impl RankLadderReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "rank ladder: c = {}, domain bound = {}\n",
            self.c, self.bound
        ));
        out.push_str(&format!(
            "hypothesis (every base sentence true): {}\n",
            if self.hypothesis_ok { "holds" } else { "FAILS" }
        ));
        for step in &self.steps {
            out.push_str(&format!(
                "  gamma_{}: value {}, rank {}, dag {} nodes, tree {} nodes\n",
                step.index, step.value, step.rank, step.dag_size, step.tree_size
            ));
        }
        match self.omega_index {
            Some(d) => out.push_str(&format!("maximal rank reached at index {d}\n")),
            None => out.push_str("maximal rank not reached\n"),
        }
        if let Some(v) = self.final_conjunction {
            out.push_str(&format!("full conjunction evaluates {v}\n"));
        }
        match &self.failure {
            Some(msg) => out.push_str(&format!("FAILED: {msg}\n")),
            None => out.push_str("all pipeline invariants confirmed\n"),
        }
        out
    }
}

/// Runs the iterated stopping-disjunction construction over `phis`,
/// measuring the rank at each step and checking, in order: every base
/// sentence is true; ranks strictly increase while finite; the maximal rank
/// arrives within `c + 1` steps; the full conjunction is true.
pub fn run_rank_ladder(phis: &[Formula], c: usize, bound: u64) -> Result<RankLadderReport> {
    if c == 0 || c >= phis.len() {
        return Err(Error::Invalid(format!(
            "c must satisfy 1 <= c < {}, got {c}",
            phis.len()
        )));
    }
    let cfg = EvalConfig::with_prop_attachment(bound)?;
    let mut report = RankLadderReport {
        c,
        bound,
        hypothesis_ok: true,
        steps: Vec::new(),
        omega_index: None,
        final_conjunction: None,
        failure: None,
    };

    for (i, phi) in phis.iter().enumerate() {
        if !eval_bounded(phi, &cfg)? {
            report.hypothesis_ok = false;
            if report.failure.is_none() {
                report.failure = Some(format!(
                    "hypothesis fails: base sentence {i} is not true under the evaluator"
                ));
            }
        }
    }

    let mut gamma = phis[0].clone();
    let mut prev_rank: Option<Rank> = None;
    for index in 0..=c + 1 {
        let value = eval_bounded(&gamma, &cfg)?;
        let r = rank(&gamma, phis, &cfg)?;
        report.steps.push(RankStep {
            index,
            dag_size: dag_size(&gamma),
            tree_size: gamma.tree_size().to_string(),
            rank: r,
            value,
        });
        if let Some(prev) = prev_rank {
            if prev != Rank::Omega && r <= prev && report.failure.is_none() {
                report.failure = Some(format!(
                    "rank progress fails at step {index}: {r} does not exceed {prev}"
                ));
            }
        }
        if r == Rank::Omega {
            report.omega_index = Some(index);
            break;
        }
        prev_rank = Some(r);
        if index == c + 1 {
            break;
        }
        gamma = gamma_step(&gamma, phis, c)?;
        let size = dag_size(&gamma);
        if size > NODE_CAP {
            return Err(Error::ResourceLimit(format!(
                "construction reached {size} nodes (cap {NODE_CAP})"
            )));
        }
    }

    if report.omega_index.is_none() && report.failure.is_none() {
        report.failure = Some(format!(
            "maximal rank not reached within {} steps",
            c + 1
        ));
    }

    let full = big_and(phis)?;
    let final_value = eval_bounded(&full, &cfg)?;
    report.final_conjunction = Some(final_value);
    if !final_value && report.failure.is_none() {
        report.failure = Some("full conjunction evaluates false".into());
    }

    Ok(report)
}

/// The default base family for the rank ladder: the numeral-distinctness
/// conjunctions, one per index. They are true under any bound, quantifier
/// free, and propositionally independent across indices (their atom sets are
/// disjoint), which is what the ladder needs.
pub fn default_rank_family(c: usize) -> Result<Vec<Formula>> {
    Ok((0..=c as u64).map(|i| numeral_distinctness(i).0).collect())
}

// ---------------------------------------------------------------------------
// Chained-implication progression.

#[derive(Serialize)]
pub struct ProgressionStep {
    pub index: usize,
    pub phi: bool,
    pub psi: bool,
    /// Value of the outer disjunction over the negated witnesses through this
    /// index, where defined.
    pub outer: Option<bool>,
}

#[derive(Serialize)]
pub struct ProgressionReport {
    pub c: usize,
    pub bound: u64,
    pub steps: Vec<ProgressionStep>,
    pub failure: Option<ProgressionFailure>,
}

#[derive(Serialize, Clone, Debug)]
#[serde(tag = "step")]
pub enum ProgressionFailure {
    /// The base sentence itself is false.
    Hypothesis { index: usize },
    /// A witness sentence fails: both refuting conjuncts are recorded.
    WitnessStep {
        index: usize,
        neg_phi: bool,
        neg_outer: bool,
    },
    /// All witnesses are true yet some base sentence is false; the outer
    /// disjunction then extracts a refuted witness.
    Extraction { index: usize, witness: Option<usize> },
}

impl ProgressionReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "progression: c = {}, domain bound = {}\n",
            self.c, self.bound
        ));
        for s in &self.steps {
            let outer = match s.outer {
                Some(v) => v.to_string(),
                None => "-".into(),
            };
            out.push_str(&format!(
                "  i = {}: phi {}, witness {}, outer disjunction {}\n",
                s.index, s.phi, s.psi, outer
            ));
        }
        match &self.failure {
            None => out.push_str("every witness and every base sentence is true\n"),
            Some(ProgressionFailure::Hypothesis { index }) => {
                out.push_str(&format!("FAILED at the base: sentence {index} is false\n"))
            }
            Some(ProgressionFailure::WitnessStep {
                index,
                neg_phi,
                neg_outer,
            }) => out.push_str(&format!(
                "FAILED at witness {index}: negated base is {neg_phi}, negated outer disjunction is {neg_outer}\n"
            )),
            Some(ProgressionFailure::Extraction { index, witness }) => {
                out.push_str(&format!(
                    "FAILED at extraction: base sentence {index} is false; refuted witness: {witness:?}\n"
                ))
            }
        }
        out
    }
}

/// Builds the witness sequence over `phis`, evaluates everything, and locates
/// the first failing step of the argument when the family does not satisfy
/// the progression hypothesis. Evaluation goes through `oracle_cfg`.
pub fn run_progression(phis: &[Formula], cfg: &EvalConfig) -> Result<ProgressionReport> {
    if phis.is_empty() {
        return Err(Error::EmptySequence);
    }
    let c = phis.len() - 1;
    let psis = build_psi_sequence(phis)?;

    let mut steps = Vec::with_capacity(phis.len());
    for i in 0..phis.len() {
        let phi_v = eval_bounded(&phis[i], cfg)?;
        let psi_v = eval_bounded(&psis[i], cfg)?;
        let outer = if i + 1 < phis.len() {
            let negs: Vec<Formula> = psis[..=i].iter().map(|p| Formula::not(p.clone())).collect();
            Some(eval_bounded(&outer_disjunction(&negs)?, cfg)?)
        } else {
            None
        };
        steps.push(ProgressionStep {
            index: i,
            phi: phi_v,
            psi: psi_v,
            outer,
        });
    }

    let failure = locate_failure(&steps, &psis, cfg)?;
    Ok(ProgressionReport {
        c,
        bound: cfg.bound(),
        steps,
        failure,
    })
}

fn locate_failure(
    steps: &[ProgressionStep],
    psis: &[Formula],
    cfg: &EvalConfig,
) -> Result<Option<ProgressionFailure>> {
    if !steps[0].psi {
        return Ok(Some(ProgressionFailure::Hypothesis { index: 0 }));
    }
    for i in 1..steps.len() {
        if !steps[i].psi {
            // psi_i = !!phi_i | D(...): both components are false here.
            let neg_phi = !steps[i].phi;
            let neg_outer = steps[i - 1].outer.map(|v| !v).unwrap_or(false);
            return Ok(Some(ProgressionFailure::WitnessStep {
                index: i,
                neg_phi,
                neg_outer,
            }));
        }
    }
    for (i, s) in steps.iter().enumerate() {
        if !s.phi {
            // Witnesses all true yet a base sentence is false: the outer
            // disjunction over the negated witnesses through i must then be
            // true, and extraction names a refuted witness.
            let witness = if i > 0 {
                let mut found = None;
                for (j, psi) in psis[..i].iter().enumerate() {
                    if eval_bounded(&Formula::not(psi.clone()), cfg)? {
                        found = Some(j);
                        break;
                    }
                }
                found
            } else {
                None
            };
            return Ok(Some(ProgressionFailure::Extraction { index: i, witness }));
        }
    }
    Ok(None)
}

/// The default progression family: true numeral equations, optionally broken
/// (made false) from index `break_at` on by equating adjacent numerals.
pub fn default_progression_family(c: usize, break_at: Option<usize>) -> Vec<Formula> {
    (0..=c)
        .map(|i| {
            let broken = break_at.map(|k| i >= k).unwrap_or(false);
            if broken {
                Formula::eq(numeral(i as u64), numeral(i as u64 + 1))
            } else {
                Formula::eq(numeral(i as u64), numeral(i as u64))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::overspill::MaxRankOutcome;

    #[test]
    fn ladder_climbs_to_omega() {
        let c = 4;
        let phis = default_rank_family(c).unwrap();
        let report = run_rank_ladder(&phis, c, 8).unwrap();
        assert!(report.ok(), "{:?}", report.failure);
        let d = report.omega_index.unwrap();
        assert!(d <= c + 1);
        assert_eq!(report.final_conjunction, Some(true));
        let ranks: Vec<Rank> = report.steps.iter().map(|s| s.rank).collect();
        assert_eq!(
            crate::overspill::find_max_rank_index(&ranks),
            MaxRankOutcome::Found(d)
        );
    }

    #[test]
    fn smallest_ladder() {
        let phis = default_rank_family(1).unwrap();
        let report = run_rank_ladder(&phis, 1, 2).unwrap();
        assert!(report.ok());
        assert!(report.omega_index.unwrap() <= 2);
    }

    #[test]
    fn broken_family_is_detected() {
        // A false base sentence trips the hypothesis bullet.
        let mut phis = default_rank_family(4).unwrap();
        phis[2] = Formula::eq(numeral(0), numeral(1));
        let report = run_rank_ladder(&phis, 4, 4).unwrap();
        assert!(!report.ok());
        assert!(!report.hypothesis_ok);
        assert!(report.failure.unwrap().contains("hypothesis"));
    }

    #[test]
    fn progression_all_true() {
        let phis = default_progression_family(4, None);
        let cfg = EvalConfig::new(6).unwrap();
        let report = run_progression(&phis, &cfg).unwrap();
        assert!(report.ok());
        assert!(report.steps.iter().all(|s| s.phi && s.psi));
    }

    #[test]
    fn progression_break_is_pinpointed() {
        let phis = default_progression_family(4, Some(2));
        let cfg = EvalConfig::new(6).unwrap();
        let report = run_progression(&phis, &cfg).unwrap();
        match report.failure {
            Some(ProgressionFailure::WitnessStep {
                index,
                neg_phi,
                neg_outer,
            }) => {
                assert_eq!(index, 2);
                assert!(neg_phi);
                assert!(neg_outer);
            }
            other => panic!("expected a witness-step failure, got {other:?}"),
        }
    }

    #[test]
    fn progression_degenerate_single() {
        let phis = default_progression_family(0, None);
        let cfg = EvalConfig::new(2).unwrap();
        let report = run_progression(&phis, &cfg).unwrap();
        assert!(report.ok());
    }
}
