//! Auditing finite labeled sentence sets against the compositional clauses,
//! regularity, propositional soundness, and disjunctive correctness.
//!
//! A [`LabeledSentenceSet`] maps sentences to truth labels, with a numeral
//! bound fixing which instances a quantified key is answerable for. Each
//! checker walks the set and reports every violated clause with concrete
//! witnesses; keys whose required subsentences or instances are absent are
//! reported as inapplicable rather than silently passed.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::val;
use crate::oracle::TruthOracle;
use crate::prop::is_tautology;
use crate::syntax::{numeral, or_spine, parse_formula, substitute, Formula, FormulaKind, Term};

/// A finite map from sentences to truth labels.
#[derive(Clone, Debug)]
pub struct LabeledSentenceSet {
    entries: HashMap<Formula, bool>,
    numeral_bound: u64,
}

impl LabeledSentenceSet {
    pub fn new(numeral_bound: u64) -> LabeledSentenceSet {
        LabeledSentenceSet {
            entries: HashMap::new(),
            numeral_bound,
        }
    }

    /// Inserts a labeled sentence; non-sentences are rejected.
    pub fn insert(&mut self, sentence: Formula, value: bool) -> Result<()> {
        if !sentence.is_sentence() {
            return Err(Error::NotASentence {
                formula: sentence.to_string(),
                free: sentence.free_vars().iter().map(|v| v.to_string()).collect(),
            });
        }
        self.entries.insert(sentence, value);
        Ok(())
    }

    pub fn from_entries(
        numeral_bound: u64,
        entries: impl IntoIterator<Item = (Formula, bool)>,
    ) -> Result<LabeledSentenceSet> {
        let mut set = LabeledSentenceSet::new(numeral_bound);
        for (f, v) in entries {
            set.insert(f, v)?;
        }
        Ok(set)
    }

    pub fn get(&self, sentence: &Formula) -> Option<bool> {
        self.entries.get(sentence).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn numeral_bound(&self) -> u64 {
        self.numeral_bound
    }

    /// Entries sorted by rendered formula, for deterministic iteration.
    pub fn sorted_entries(&self) -> Vec<(Formula, bool)> {
        let mut out: Vec<(Formula, bool)> =
            self.entries.iter().map(|(f, v)| (f.clone(), *v)).collect();
        out.sort_by_key(|(f, _)| f.to_string());
        out
    }
}

impl TruthOracle for LabeledSentenceSet {
    fn holds(&self, sentence: &Formula) -> Result<bool> {
        self.get(sentence)
            .ok_or_else(|| Error::OracleUndefined(sentence.to_string()))
    }
}

// ---------------------------------------------------------------------------
// Manifest interchange format.

#[derive(Serialize, Deserialize)]
struct Manifest {
    numeral_bound: u64,
    entries: Vec<ManifestEntry>,
}

#[derive(Serialize, Deserialize)]
struct ManifestEntry {
    formula: String,
    value: bool,
}

/// Reads the manifest format:
/// `{"numeral_bound": N, "entries": [{"formula": "...", "value": true}, ...]}`.
pub fn from_manifest_json(text: &str) -> Result<LabeledSentenceSet> {
    let manifest: Manifest =
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("bad manifest: {e}")))?;
    let mut set = LabeledSentenceSet::new(manifest.numeral_bound);
    for entry in manifest.entries {
        set.insert(parse_formula(&entry.formula)?, entry.value)?;
    }
    Ok(set)
}

/// Writes the manifest format with entries sorted by formula text.
pub fn to_manifest_json(set: &LabeledSentenceSet) -> String {
    let manifest = Manifest {
        numeral_bound: set.numeral_bound(),
        entries: set
            .sorted_entries()
            .into_iter()
            .map(|(f, v)| ManifestEntry {
                formula: f.to_string(),
                value: v,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&manifest).expect("manifest serializes")
}

// ---------------------------------------------------------------------------
// Reports.

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CheckKind {
    Compositional,
    Regularity,
    PropSnd,
    Dc,
    DcIn,
}

impl CheckKind {
    pub const ALL: [CheckKind; 5] = [
        CheckKind::Compositional,
        CheckKind::Regularity,
        CheckKind::PropSnd,
        CheckKind::Dc,
        CheckKind::DcIn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Compositional => "compositional",
            CheckKind::Regularity => "regularity",
            CheckKind::PropSnd => "propsnd",
            CheckKind::Dc => "dc",
            CheckKind::DcIn => "dcin",
        }
    }
}

impl std::str::FromStr for CheckKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<CheckKind> {
        match s {
            "compositional" => Ok(CheckKind::Compositional),
            "regularity" => Ok(CheckKind::Regularity),
            "propsnd" => Ok(CheckKind::PropSnd),
            "dc" => Ok(CheckKind::Dc),
            "dcin" => Ok(CheckKind::DcIn),
            other => Err(Error::Invalid(format!("unknown check `{other}`"))),
        }
    }
}

impl std::fmt::Display for CheckKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One violated clause, with enough material to re-check it in isolation.
#[derive(Clone, Debug)]
pub struct Violation {
    pub clause: &'static str,
    pub subject: Formula,
    pub subject_value: bool,
    pub witnesses: Vec<(Formula, bool)>,
    pub detail: String,
}

/// A key some clause could not be checked for, and why.
#[derive(Clone, Debug)]
pub struct Inapplicable {
    pub subject: Formula,
    pub reason: String,
    pub missing: Vec<Formula>,
}

#[derive(Clone, Debug)]
pub struct ViolationReport {
    pub check: CheckKind,
    pub violations: Vec<Violation>,
    pub inapplicable: Vec<Inapplicable>,
}

impl ViolationReport {
    fn new(check: CheckKind) -> ViolationReport {
        ViolationReport {
            check,
            violations: Vec::new(),
            inapplicable: Vec::new(),
        }
    }

    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }

    fn finish(mut self) -> ViolationReport {
        self.violations
            .sort_by_key(|v| (v.subject.to_string(), v.clause, v.detail.clone()));
        self.inapplicable
            .sort_by_key(|i| (i.subject.to_string(), i.reason.clone()));
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "check": self.check.name(),
            "violations": self.violations.iter().map(|v| serde_json::json!({
                "clause": v.clause,
                "sentence": v.subject.to_string(),
                "value": v.subject_value,
                "witnesses": v.witnesses.iter().map(|(f, b)| serde_json::json!({
                    "formula": f.to_string(),
                    "value": b,
                })).collect::<Vec<_>>(),
                "detail": v.detail,
            })).collect::<Vec<_>>(),
            "inapplicable": self.inapplicable.iter().map(|i| serde_json::json!({
                "sentence": i.subject.to_string(),
                "reason": i.reason,
                "missing": i.missing.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

// ---------------------------------------------------------------------------
// Checkers.

/// Checks every labeled sentence against its compositional clause: equations
/// by term values, negation flips, conjunction and disjunction as meet and
/// join, quantified keys against their numeral instances up to the set's
/// bound. Keys with absent operands or instances are inapplicable.
pub fn check_compositional(set: &LabeledSentenceSet) -> ViolationReport {
    let mut report = ViolationReport::new(CheckKind::Compositional);
    for (key, value) in set.sorted_entries() {
        match key.kind() {
            FormulaKind::Eq(l, r) => {
                let expected = val(l).expect("sentence keys have closed terms")
                    == val(r).expect("sentence keys have closed terms");
                if value != expected {
                    report.violations.push(Violation {
                        clause: "atomic",
                        subject: key.clone(),
                        subject_value: value,
                        witnesses: vec![],
                        detail: format!("term values make this {expected}"),
                    });
                }
            }
            FormulaKind::Not(inner) => match set.get(inner) {
                Some(iv) => {
                    if value == iv {
                        report.violations.push(Violation {
                            clause: "negation",
                            subject: key.clone(),
                            subject_value: value,
                            witnesses: vec![(inner.clone(), iv)],
                            detail: "negation must flip the label".into(),
                        });
                    }
                }
                None => report.inapplicable.push(Inapplicable {
                    subject: key.clone(),
                    reason: "operand missing".into(),
                    missing: vec![inner.clone()],
                }),
            },
            FormulaKind::And(l, r) | FormulaKind::Or(l, r) => {
                let conj = matches!(key.kind(), FormulaKind::And(_, _));
                match (set.get(l), set.get(r)) {
                    (Some(lv), Some(rv)) => {
                        let expected = if conj { lv && rv } else { lv || rv };
                        if value != expected {
                            report.violations.push(Violation {
                                clause: if conj { "conjunction" } else { "disjunction" },
                                subject: key.clone(),
                                subject_value: value,
                                witnesses: vec![(l.clone(), lv), (r.clone(), rv)],
                                detail: format!("operand labels make this {expected}"),
                            });
                        }
                    }
                    (lv, rv) => {
                        let mut missing = Vec::new();
                        if lv.is_none() {
                            missing.push(l.clone());
                        }
                        if rv.is_none() {
                            missing.push(r.clone());
                        }
                        report.inapplicable.push(Inapplicable {
                            subject: key.clone(),
                            reason: "operand missing".into(),
                            missing,
                        });
                    }
                }
            }
            FormulaKind::Forall(v, body) | FormulaKind::Exists(v, body) => {
                let universal = matches!(key.kind(), FormulaKind::Forall(_, _));
                let mut instance_values = Vec::new();
                let mut missing = Vec::new();
                for x in 0..=set.numeral_bound() {
                    let inst = substitute(body, *v, &numeral(x))
                        .expect("numerals are closed");
                    match set.get(&inst) {
                        Some(iv) => instance_values.push((inst, iv)),
                        None => missing.push(inst),
                    }
                }
                if !missing.is_empty() {
                    report.inapplicable.push(Inapplicable {
                        subject: key.clone(),
                        reason: "instances missing".into(),
                        missing,
                    });
                    continue;
                }
                let expected = if universal {
                    instance_values.iter().all(|(_, v)| *v)
                } else {
                    instance_values.iter().any(|(_, v)| *v)
                };
                if value != expected {
                    report.violations.push(Violation {
                        clause: if universal { "universal" } else { "existential" },
                        subject: key.clone(),
                        subject_value: value,
                        witnesses: instance_values,
                        detail: format!(
                            "instances up to {} make this {expected}",
                            set.numeral_bound()
                        ),
                    });
                }
            }
            // No internal clause constrains a provability atom.
            FormulaKind::PrProp(_) => report.inapplicable.push(Inapplicable {
                subject: key.clone(),
                reason: "oracle atom has no compositional clause".into(),
                missing: vec![],
            }),
        }
    }
    report.finish()
}

enum PairShape {
    Mismatch,
    Ambiguous,
    Holes(Vec<(Term, Term)>),
}

/// Anti-unifies two sentences: identical formula structure with whole-term
/// disagreements at term positions. Open disagreeing terms make the pair
/// ambiguous rather than guessed at.
fn anti_unify(f: &Formula, g: &Formula) -> PairShape {
    let mut holes = Vec::new();
    let mut ambiguous = false;
    if au_formula(f, g, &mut holes, &mut ambiguous) {
        if ambiguous {
            PairShape::Ambiguous
        } else {
            PairShape::Holes(holes)
        }
    } else {
        PairShape::Mismatch
    }
}

fn au_formula(
    f: &Formula,
    g: &Formula,
    holes: &mut Vec<(Term, Term)>,
    ambiguous: &mut bool,
) -> bool {
    match (f.kind(), g.kind()) {
        (FormulaKind::Eq(s1, t1), FormulaKind::Eq(s2, t2)) => {
            au_term(s1, s2, holes, ambiguous);
            au_term(t1, t2, holes, ambiguous);
            true
        }
        (FormulaKind::Not(a), FormulaKind::Not(b)) => au_formula(a, b, holes, ambiguous),
        (FormulaKind::And(a, b), FormulaKind::And(c, d))
        | (FormulaKind::Or(a, b), FormulaKind::Or(c, d)) => {
            au_formula(a, c, holes, ambiguous) && au_formula(b, d, holes, ambiguous)
        }
        (FormulaKind::Forall(v, a), FormulaKind::Forall(w, b))
        | (FormulaKind::Exists(v, a), FormulaKind::Exists(w, b)) => {
            v == w && au_formula(a, b, holes, ambiguous)
        }
        (FormulaKind::PrProp(a), FormulaKind::PrProp(b)) => a == b,
        _ => false,
    }
}

fn au_term(s: &Term, t: &Term, holes: &mut Vec<(Term, Term)>, ambiguous: &mut bool) {
    if s == t {
        return;
    }
    if s.is_closed() && t.is_closed() {
        holes.push((s.clone(), t.clone()));
    } else {
        *ambiguous = true;
    }
}

/// Checks regularity: whenever two keys are instances of one template under
/// closed-term sequences of pointwise equal values, their labels must agree.
pub fn check_regularity(set: &LabeledSentenceSet) -> ViolationReport {
    let mut report = ViolationReport::new(CheckKind::Regularity);
    let entries = set.sorted_entries();
    for (i, (f, fv)) in entries.iter().enumerate() {
        for (g, gv) in entries.iter().skip(i + 1) {
            if f == g {
                continue;
            }
            match anti_unify(f, g) {
                PairShape::Mismatch => {}
                PairShape::Ambiguous => report.inapplicable.push(Inapplicable {
                    subject: f.clone(),
                    reason: format!("ambiguous pair with {g}"),
                    missing: vec![g.clone()],
                }),
                PairShape::Holes(holes) => {
                    let equal_values = holes
                        .iter()
                        .all(|(s, t)| val(s).ok() == val(t).ok() && val(s).is_ok());
                    if equal_values && fv != gv {
                        let detail = holes
                            .iter()
                            .map(|(s, t)| format!("{s} ~ {t}"))
                            .collect::<Vec<_>>()
                            .join(", ");
                        report.violations.push(Violation {
                            clause: "regularity",
                            subject: f.clone(),
                            subject_value: *fv,
                            witnesses: vec![(g.clone(), *gv)],
                            detail: format!("equal-valued term sequences: {detail}"),
                        });
                    }
                }
            }
        }
    }
    report.finish()
}

/// Checks propositional soundness: every key that is a propositional
/// tautology must be labeled true.
pub fn check_propsnd(set: &LabeledSentenceSet) -> ViolationReport {
    let mut report = ViolationReport::new(CheckKind::PropSnd);
    for (key, value) in set.sorted_entries() {
        if !value && is_tautology(&key) {
            report.violations.push(Violation {
                clause: "propositional soundness",
                subject: key.clone(),
                subject_value: value,
                witnesses: vec![],
                detail: "a propositional tautology must be labeled true".into(),
            });
        }
    }
    report.finish()
}

fn disjunction_components(key: &Formula) -> Option<Vec<Formula>> {
    let spine = or_spine(key);
    if spine.len() >= 2 {
        Some(spine)
    } else {
        None
    }
}

/// Checks disjunctive correctness both ways: a left-grouped disjunction of
/// present keys must be labeled true exactly when some disjunct is.
pub fn check_dc(set: &LabeledSentenceSet) -> ViolationReport {
    let mut report = ViolationReport::new(CheckKind::Dc);
    for (key, value) in set.sorted_entries() {
        let Some(parts) = disjunction_components(&key) else {
            continue;
        };
        let labels: Vec<Option<bool>> = parts.iter().map(|p| set.get(p)).collect();
        if labels.iter().any(|l| l.is_none()) {
            let missing = parts
                .iter()
                .zip(&labels)
                .filter(|(_, l)| l.is_none())
                .map(|(p, _)| p.clone())
                .collect();
            report.inapplicable.push(Inapplicable {
                subject: key.clone(),
                reason: "disjuncts missing".into(),
                missing,
            });
            continue;
        }
        let expected = labels.iter().any(|l| l.unwrap());
        if value != expected {
            report.violations.push(Violation {
                clause: "disjunctive correctness",
                subject: key.clone(),
                subject_value: value,
                witnesses: parts
                    .iter()
                    .zip(&labels)
                    .map(|(p, l)| (p.clone(), l.unwrap()))
                    .collect(),
                detail: format!("disjunct labels make this {expected}"),
            });
        }
    }
    report.finish()
}

/// Checks only the inward half: a disjunction labeled true must have a true
/// disjunct. A false disjunction constrains nothing here.
pub fn check_dcin(set: &LabeledSentenceSet) -> ViolationReport {
    let mut report = ViolationReport::new(CheckKind::DcIn);
    for (key, value) in set.sorted_entries() {
        if !value {
            continue;
        }
        let Some(parts) = disjunction_components(&key) else {
            continue;
        };
        let labels: Vec<Option<bool>> = parts.iter().map(|p| set.get(p)).collect();
        if labels.iter().flatten().any(|l| *l) {
            continue;
        }
        if labels.iter().any(|l| l.is_none()) {
            let missing = parts
                .iter()
                .zip(&labels)
                .filter(|(_, l)| l.is_none())
                .map(|(p, _)| p.clone())
                .collect();
            report.inapplicable.push(Inapplicable {
                subject: key.clone(),
                reason: "disjuncts missing; no present disjunct is true".into(),
                missing,
            });
            continue;
        }
        report.violations.push(Violation {
            clause: "inward disjunctive correctness",
            subject: key.clone(),
            subject_value: value,
            witnesses: parts
                .iter()
                .zip(&labels)
                .map(|(p, l)| (p.clone(), l.unwrap()))
                .collect(),
            detail: "true disjunction with every disjunct false".into(),
        });
    }
    report.finish()
}

pub fn run_check(set: &LabeledSentenceSet, check: CheckKind) -> ViolationReport {
    match check {
        CheckKind::Compositional => check_compositional(set),
        CheckKind::Regularity => check_regularity(set),
        CheckKind::PropSnd => check_propsnd(set),
        CheckKind::Dc => check_dc(set),
        CheckKind::DcIn => check_dcin(set),
    }
}

pub fn run_checks(set: &LabeledSentenceSet, checks: &[CheckKind]) -> Vec<ViolationReport> {
    checks.iter().map(|c| run_check(set, *c)).collect()
}
