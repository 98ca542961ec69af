//! Propositional skeletons of arithmetical sentences, tautology checking,
//! finite-premise propositional entailment, and the maximal-prefix search
//! used by the rank construction.
//!
//! A skeleton keeps the boolean structure (`!`, `&`, `|`) of a sentence and
//! abstracts every maximal subsentence with any other head — equations,
//! quantified subsentences, provability atoms — into an opaque propositional
//! atom. Structurally equal subsentences share one atom, and one
//! [`Atomization`] table can be threaded through several sentences so that
//! premises and goals of an entailment query agree on their atoms.
//!
//! Validity is decided semantically. Up to [`EXHAUSTIVE_ATOM_LIMIT`] atoms
//! all assignments are enumerated (64 per machine word); above that, the
//! negation goes through a Tseitin transform into CNF and a deterministic
//! DPLL search: lowest-numbered unassigned variable first, `false` branch
//! before `true`.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use crate::syntax::{big_and, Formula, FormulaKind};

/// Threshold between exhaustive assignment enumeration and CNF search.
pub const EXHAUSTIVE_ATOM_LIMIT: usize = 20;

/// A propositional formula over numbered atoms.
#[derive(Clone)]
pub struct PropFormula(Rc<PropNode>);

pub enum PropNode {
    Atom(usize),
    Not(PropFormula),
    And(PropFormula, PropFormula),
    Or(PropFormula, PropFormula),
}

impl PropFormula {
    pub fn atom(i: usize) -> PropFormula {
        PropFormula(Rc::new(PropNode::Atom(i)))
    }

    pub fn not(f: PropFormula) -> PropFormula {
        PropFormula(Rc::new(PropNode::Not(f)))
    }

    pub fn and(l: PropFormula, r: PropFormula) -> PropFormula {
        PropFormula(Rc::new(PropNode::And(l, r)))
    }

    pub fn or(l: PropFormula, r: PropFormula) -> PropFormula {
        PropFormula(Rc::new(PropNode::Or(l, r)))
    }

    pub fn node(&self) -> &PropNode {
        &self.0
    }

    fn key(&self) -> usize {
        Rc::as_ptr(&self.0) as usize
    }

    /// Atoms occurring in the formula, sorted.
    pub fn atoms(&self) -> Vec<usize> {
        let mut seen = std::collections::HashSet::new();
        let mut out = std::collections::BTreeSet::new();
        fn walk(
            f: &PropFormula,
            seen: &mut std::collections::HashSet<usize>,
            out: &mut std::collections::BTreeSet<usize>,
        ) {
            if !seen.insert(f.key()) {
                return;
            }
            match f.node() {
                PropNode::Atom(i) => {
                    out.insert(*i);
                }
                PropNode::Not(g) => walk(g, seen, out),
                PropNode::And(l, r) | PropNode::Or(l, r) => {
                    walk(l, seen, out);
                    walk(r, seen, out);
                }
            }
        }
        walk(self, &mut seen, &mut out);
        out.into_iter().collect()
    }

    /// Evaluates under an assignment given as a bitmask over atom numbers.
    pub fn eval_assignment(&self, assignment: u64) -> bool {
        fn walk(f: &PropFormula, a: u64, memo: &mut HashMap<usize, bool>) -> bool {
            if let Some(&v) = memo.get(&f.key()) {
                return v;
            }
            let v = match f.node() {
                PropNode::Atom(i) => a >> i & 1 == 1,
                PropNode::Not(g) => !walk(g, a, memo),
                PropNode::And(l, r) => walk(l, a, memo) && walk(r, a, memo),
                PropNode::Or(l, r) => walk(l, a, memo) || walk(r, a, memo),
            };
            memo.insert(f.key(), v);
            v
        }
        walk(self, assignment, &mut HashMap::new())
    }
}

impl fmt::Debug for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            PropNode::Atom(i) => write!(f, "p{i}"),
            PropNode::Not(g) => write!(f, "!{g:?}"),
            PropNode::And(l, r) => write!(f, "({l:?} & {r:?})"),
            PropNode::Or(l, r) => write!(f, "({l:?} | {r:?})"),
        }
    }
}

/// Bijection between propositional atoms and the subsentences they abstract.
#[derive(Default)]
pub struct Atomization {
    atoms: Vec<Formula>,
    index: HashMap<Formula, usize>,
    skeletons: HashMap<u64, PropFormula>,
}

impl Atomization {
    pub fn new() -> Atomization {
        Atomization::default()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// The sentence a given atom stands for.
    pub fn sentence(&self, atom: usize) -> Option<&Formula> {
        self.atoms.get(atom)
    }

    pub fn atom_of(&self, sentence: &Formula) -> Option<usize> {
        self.index.get(sentence).copied()
    }

    fn intern(&mut self, sentence: &Formula) -> usize {
        if let Some(&i) = self.index.get(sentence) {
            return i;
        }
        let i = self.atoms.len();
        self.atoms.push(sentence.clone());
        self.index.insert(sentence.clone(), i);
        i
    }

    /// Substitutes sentences back for atoms, recovering the original.
    pub fn realize(&self, skeleton: &PropFormula) -> Option<Formula> {
        match skeleton.node() {
            PropNode::Atom(i) => self.atoms.get(*i).cloned(),
            PropNode::Not(g) => Some(Formula::not(self.realize(g)?)),
            PropNode::And(l, r) => Some(Formula::and(self.realize(l)?, self.realize(r)?)),
            PropNode::Or(l, r) => Some(Formula::or(self.realize(l)?, self.realize(r)?)),
        }
    }
}

/// Skeletonizes against a shared atom table.
pub fn skeletonize_with(table: &mut Atomization, phi: &Formula) -> PropFormula {
    if let Some(done) = table.skeletons.get(&phi.id()) {
        return done.clone();
    }
    let skel = match phi.kind() {
        FormulaKind::Not(g) => PropFormula::not(skeletonize_with(table, g)),
        FormulaKind::And(l, r) => {
            let ls = skeletonize_with(table, l);
            let rs = skeletonize_with(table, r);
            PropFormula::and(ls, rs)
        }
        FormulaKind::Or(l, r) => {
            let ls = skeletonize_with(table, l);
            let rs = skeletonize_with(table, r);
            PropFormula::or(ls, rs)
        }
        // Equations, quantified sentences, and provability atoms are opaque.
        _ => PropFormula::atom(table.intern(phi)),
    };
    table.skeletons.insert(phi.id(), skel.clone());
    skel
}

/// Propositional skeleton of a sentence with a fresh atom table.
pub fn skeletonize(phi: &Formula) -> (PropFormula, Atomization) {
    let mut table = Atomization::new();
    let skel = skeletonize_with(&mut table, phi);
    (skel, table)
}

// ---------------------------------------------------------------------------
// Exhaustive validity over 64-wide assignment words.

/// Evaluates 64 assignments at once: bit `j` of the result is the value under
/// assignment `word_base + j`, where atom `i` reads bit `i` of the assignment
/// number.
fn eval_word(f: &PropFormula, word: u64, memo: &mut HashMap<usize, u64>) -> u64 {
    const PATTERNS: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    if let Some(&v) = memo.get(&f.key()) {
        return v;
    }
    let v = match f.node() {
        PropNode::Atom(i) => {
            if *i < 6 {
                PATTERNS[*i]
            } else if word >> (i - 6) & 1 == 1 {
                u64::MAX
            } else {
                0
            }
        }
        PropNode::Not(g) => !eval_word(g, word, memo),
        PropNode::And(l, r) => eval_word(l, word, memo) & eval_word(r, word, memo),
        PropNode::Or(l, r) => eval_word(l, word, memo) | eval_word(r, word, memo),
    };
    memo.insert(f.key(), v);
    v
}

fn valid_exhaustive(f: &PropFormula, atom_count: usize) -> bool {
    if atom_count <= 6 {
        let bits = 1usize << atom_count;
        let mask = if bits >= 64 {
            u64::MAX
        } else {
            (1u64 << bits) - 1
        };
        let got = eval_word(f, 0, &mut HashMap::new());
        return got & mask == mask;
    }
    let words = 1u64 << (atom_count - 6);
    for w in 0..words {
        if eval_word(f, w, &mut HashMap::new()) != u64::MAX {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Tseitin CNF + DPLL for wide formulas.

struct Cnf {
    clauses: Vec<Vec<i32>>,
    n_vars: usize,
}

/// Variables 1..=atom_count name the atoms; fresh variables name shared
/// subformulas. Returns the literal equivalent to the root.
fn tseitin(f: &PropFormula, atom_count: usize) -> (Cnf, i32) {
    let mut cnf = Cnf {
        clauses: Vec::new(),
        n_vars: atom_count,
    };
    let mut memo: HashMap<usize, i32> = HashMap::new();
    let root = tseitin_walk(f, &mut cnf, &mut memo);
    (cnf, root)
}

fn tseitin_walk(f: &PropFormula, cnf: &mut Cnf, memo: &mut HashMap<usize, i32>) -> i32 {
    if let Some(&lit) = memo.get(&f.key()) {
        return lit;
    }
    let lit = match f.node() {
        PropNode::Atom(i) => (*i + 1) as i32,
        PropNode::Not(g) => -tseitin_walk(g, cnf, memo),
        PropNode::And(l, r) => {
            let (a, b) = (tseitin_walk(l, cnf, memo), tseitin_walk(r, cnf, memo));
            cnf.n_vars += 1;
            let x = cnf.n_vars as i32;
            cnf.clauses.push(vec![-x, a]);
            cnf.clauses.push(vec![-x, b]);
            cnf.clauses.push(vec![x, -a, -b]);
            x
        }
        PropNode::Or(l, r) => {
            let (a, b) = (tseitin_walk(l, cnf, memo), tseitin_walk(r, cnf, memo));
            cnf.n_vars += 1;
            let x = cnf.n_vars as i32;
            cnf.clauses.push(vec![-x, a, b]);
            cnf.clauses.push(vec![x, -a]);
            cnf.clauses.push(vec![x, -b]);
            x
        }
    };
    memo.insert(f.key(), lit);
    lit
}

fn lit_value(assignment: &[Option<bool>], lit: i32) -> Option<bool> {
    assignment[lit.unsigned_abs() as usize].map(|v| if lit > 0 { v } else { !v })
}

/// Plain DPLL with unit propagation. Branch order is fixed: the
/// lowest-numbered unassigned variable, `false` before `true`.
fn dpll(clauses: &[Vec<i32>], assignment: &mut Vec<Option<bool>>) -> bool {
    loop {
        let mut unit: Option<i32> = None;
        for clause in clauses {
            let mut unassigned: Option<i32> = None;
            let mut satisfied = false;
            let mut open = 0;
            for &lit in clause {
                match lit_value(assignment, lit) {
                    Some(true) => {
                        satisfied = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        open += 1;
                        unassigned = Some(lit);
                    }
                }
            }
            if satisfied {
                continue;
            }
            match open {
                0 => return false,
                1 => {
                    unit = unassigned;
                    break;
                }
                _ => {}
            }
        }
        match unit {
            Some(lit) => assignment[lit.unsigned_abs() as usize] = Some(lit > 0),
            None => break,
        }
    }
    let var = match assignment.iter().skip(1).position(|v| v.is_none()) {
        Some(i) => i + 1,
        None => return true,
    };
    for value in [false, true] {
        let mut branch = assignment.clone();
        branch[var] = Some(value);
        if dpll(clauses, &mut branch) {
            return true;
        }
    }
    false
}

fn satisfiable(f: &PropFormula, atom_count: usize) -> bool {
    let (mut cnf, root) = tseitin(f, atom_count);
    cnf.clauses.push(vec![root]);
    let mut assignment = vec![None; cnf.n_vars + 1];
    dpll(&cnf.clauses, &mut assignment)
}

/// Validity of a propositional formula over `atom_count` atoms.
pub fn prop_valid(f: &PropFormula, atom_count: usize) -> bool {
    if atom_count <= EXHAUSTIVE_ATOM_LIMIT {
        valid_exhaustive(f, atom_count)
    } else {
        !satisfiable(&PropFormula::not(f.clone()), atom_count)
    }
}

// ---------------------------------------------------------------------------
// Sentence-level interface.

/// Is the sentence a propositional tautology? Arithmetical truth plays no
/// part: `0 = 0` alone is an atom, not a tautology.
pub fn is_tautology(phi: &Formula) -> bool {
    let (skel, table) = skeletonize(phi);
    prop_valid(&skel, table.len())
}

/// Does `gamma` prove `phi` in propositional logic? Decided semantically over
/// a single atom table shared by premises and goal, which by completeness
/// coincides with derivability. An empty premise list asks for a tautology.
pub fn proves_prop(gamma: &[Formula], phi: &Formula) -> bool {
    let mut table = Atomization::new();
    let goal = skeletonize_with(&mut table, phi);
    let query = match gamma {
        [] => goal,
        _ => {
            let premise = big_and(gamma).expect("nonempty premise list");
            let premise_skel = skeletonize_with(&mut table, &premise);
            PropFormula::or(PropFormula::not(premise_skel), goal)
        }
    };
    prop_valid(&query, table.len())
}

/// Outcome of the maximal-prefix entailment search.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PrefixEntailment {
    /// Not even the first element is entailed.
    None,
    /// Largest index `k` such that the left-grouped conjunction of
    /// `phis[0..=k]` is entailed, with `k + 1 < phis.len()`.
    UpTo(usize),
    /// Every prefix, including the whole sequence, is entailed.
    All,
}

/// Largest prefix of `phis` whose conjunction `psi` proves propositionally.
///
/// Entailment of a longer prefix implies entailment of every shorter one, so
/// the scan is linear with early exit.
pub fn max_prefix_entailment(psi: &Formula, phis: &[Formula]) -> PrefixEntailment {
    let mut table = Atomization::new();
    let premise = skeletonize_with(&mut table, psi);
    let mut goal: Option<PropFormula> = None;
    for (k, phi) in phis.iter().enumerate() {
        let conjunct = skeletonize_with(&mut table, phi);
        let extended = match goal.take() {
            None => conjunct,
            Some(g) => PropFormula::and(g, conjunct),
        };
        let query = PropFormula::or(PropFormula::not(premise.clone()), extended.clone());
        if !prop_valid(&query, table.len()) {
            return match k {
                0 => PrefixEntailment::None,
                _ => PrefixEntailment::UpTo(k - 1),
            };
        }
        goal = Some(extended);
    }
    PrefixEntailment::All
}
