//! Abstract syntax for the first-order language of arithmetic: terms over
//! `0`, `S`, `+`, `*` and formulas over `=`, `!`, `&`, `|`, `forall`,
//! `exists`, plus a designated propositional-provability atom.
//!
//! All values are immutable and hash-consed (see [`intern`]), so structural
//! equality coincides with pointer equality and heavily shared constructions
//! such as left-grouped big conjunctions stay compact. Implication is surface
//! sugar: the parser accepts `->` and desugars to `!a | b`.

mod intern;
mod parse;
mod print;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

use intern::{intern_formula, intern_term, FormulaData, TermData};

pub use parse::{parse_formula, parse_term};

/// Canonical first-order variable `vN`, identified by its index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VarName(pub u32);

impl VarName {
    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Shape of a term node.
#[derive(Clone)]
pub enum TermKind {
    Zero,
    Succ(Term),
    Add(Term, Term),
    Mul(Term, Term),
    Var(VarName),
}

/// A hash-consed arithmetical term.
#[derive(Clone)]
pub struct Term(Arc<TermData>);

impl Term {
    pub fn zero() -> Term {
        intern_term(TermKind::Zero)
    }

    pub fn succ(inner: Term) -> Term {
        intern_term(TermKind::Succ(inner))
    }

    pub fn add(left: Term, right: Term) -> Term {
        intern_term(TermKind::Add(left, right))
    }

    pub fn mul(left: Term, right: Term) -> Term {
        intern_term(TermKind::Mul(left, right))
    }

    pub fn var(v: VarName) -> Term {
        intern_term(TermKind::Var(v))
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    /// Stable node identifier within this process (interner-assigned).
    pub fn id(&self) -> u64 {
        self.0.id
    }

    /// Variables occurring in the term, sorted.
    pub fn vars(&self) -> &[VarName] {
        &self.0.vars
    }

    /// A term is closed when it mentions no variable.
    pub fn is_closed(&self) -> bool {
        self.0.vars.is_empty()
    }

    pub fn var_ceiling(&self) -> u32 {
        self.0.var_ceiling
    }

    /// Node count of the fully expanded tree (ignores sharing, saturating).
    pub fn tree_size(&self) -> u128 {
        self.0.tree_size
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}
impl Eq for Term {}

impl std::hash::Hash for Term {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.id);
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Term {
    /// Orders by interner id: arbitrary but fixed within a process run.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.id.cmp(&other.0.id)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::fmt_term(self, f)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Shape of a formula node.
#[derive(Clone)]
pub enum FormulaKind {
    Eq(Term, Term),
    Not(Formula),
    And(Formula, Formula),
    Or(Formula, Formula),
    Forall(VarName, Formula),
    Exists(VarName, Formula),
    /// Designated oracle atom asserting that its payload sentence is provable
    /// in propositional logic. Atomic for every structural purpose; only an
    /// evaluator with an attached decision procedure gives it a value.
    PrProp(Formula),
}

/// A hash-consed arithmetical formula.
#[derive(Clone)]
pub struct Formula(Arc<FormulaData>);

impl Formula {
    pub fn eq(left: Term, right: Term) -> Formula {
        intern_formula(FormulaKind::Eq(left, right))
    }

    pub fn not(inner: Formula) -> Formula {
        intern_formula(FormulaKind::Not(inner))
    }

    pub fn and(left: Formula, right: Formula) -> Formula {
        intern_formula(FormulaKind::And(left, right))
    }

    pub fn or(left: Formula, right: Formula) -> Formula {
        intern_formula(FormulaKind::Or(left, right))
    }

    /// `a -> b` desugared to `!a | b`; implication is not a primitive.
    pub fn implies(antecedent: Formula, consequent: Formula) -> Formula {
        Formula::or(Formula::not(antecedent), consequent)
    }

    pub fn forall(v: VarName, body: Formula) -> Formula {
        intern_formula(FormulaKind::Forall(v, body))
    }

    pub fn exists(v: VarName, body: Formula) -> Formula {
        intern_formula(FormulaKind::Exists(v, body))
    }

    /// Provability atom over a payload sentence. The payload must be closed,
    /// so the atom itself is a sentence.
    pub fn prprop(payload: Formula) -> Result<Formula> {
        if !payload.is_sentence() {
            return Err(Error::NotASentence {
                formula: payload.to_string(),
                free: payload.free_vars().iter().map(|v| v.to_string()).collect(),
            });
        }
        Ok(intern_formula(FormulaKind::PrProp(payload)))
    }

    pub fn kind(&self) -> &FormulaKind {
        &self.0.kind
    }

    pub fn id(&self) -> u64 {
        self.0.id
    }

    /// Exact set of free variables, sorted.
    pub fn free_vars(&self) -> &[VarName] {
        &self.0.free
    }

    pub fn is_sentence(&self) -> bool {
        self.0.free.is_empty()
    }

    pub fn var_ceiling(&self) -> u32 {
        self.0.var_ceiling
    }

    pub fn tree_size(&self) -> u128 {
        self.0.tree_size
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}
impl Eq for Formula {}

impl std::hash::Hash for Formula {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.id);
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Formula {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.id.cmp(&other.0.id)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::fmt_formula(self, f)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for Formula {
    type Err = Error;
    fn from_str(s: &str) -> Result<Formula> {
        parse_formula(s)
    }
}

/// Renders a formula in the concrete grammar; `parse_formula` inverts it.
pub fn pretty_print(phi: &Formula) -> String {
    phi.to_string()
}

/// The canonical numeral `S...S(0)` with `x` applications of `S`.
pub fn numeral(x: u64) -> Term {
    let mut t = Term::zero();
    for _ in 0..x {
        t = Term::succ(t);
    }
    t
}

/// An ordered sequence of sentences.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SentenceSeq(Vec<Formula>);

impl SentenceSeq {
    /// Validates that every element is a sentence.
    pub fn new(items: Vec<Formula>) -> Result<SentenceSeq> {
        for f in &items {
            if !f.is_sentence() {
                return Err(Error::NotASentence {
                    formula: f.to_string(),
                    free: f.free_vars().iter().map(|v| v.to_string()).collect(),
                });
            }
        }
        Ok(SentenceSeq(items))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Formula] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Formula> {
        self.0
    }
}

impl std::ops::Deref for SentenceSeq {
    type Target = [Formula];
    fn deref(&self) -> &[Formula] {
        &self.0
    }
}

impl<'a> IntoIterator for &'a SentenceSeq {
    type Item = &'a Formula;
    type IntoIter = std::slice::Iter<'a, Formula>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Left-grouped conjunction: `((f0 & f1) & f2) ...`. Errors on empty input.
pub fn big_and(phis: &[Formula]) -> Result<Formula> {
    let (first, rest) = phis.split_first().ok_or(Error::EmptySequence)?;
    Ok(rest
        .iter()
        .fold(first.clone(), |acc, f| Formula::and(acc, f.clone())))
}

/// Left-grouped disjunction, dual to [`big_and`].
pub fn big_or(phis: &[Formula]) -> Result<Formula> {
    let (first, rest) = phis.split_first().ok_or(Error::EmptySequence)?;
    Ok(rest
        .iter()
        .fold(first.clone(), |acc, f| Formula::or(acc, f.clone())))
}

/// Peels the left spine of `And` nodes, recovering `big_and`'s input order.
pub fn and_spine(phi: &Formula) -> Vec<Formula> {
    let mut out = Vec::new();
    let mut cur = phi.clone();
    loop {
        match cur.kind() {
            FormulaKind::And(l, r) => {
                out.push(r.clone());
                cur = l.clone();
            }
            _ => {
                out.push(cur);
                break;
            }
        }
    }
    out.reverse();
    out
}

/// Peels the left spine of `Or` nodes.
pub fn or_spine(phi: &Formula) -> Vec<Formula> {
    let mut out = Vec::new();
    let mut cur = phi.clone();
    loop {
        match cur.kind() {
            FormulaKind::Or(l, r) => {
                out.push(r.clone());
                cur = l.clone();
            }
            _ => {
                out.push(cur);
                break;
            }
        }
    }
    out.reverse();
    out
}

/// Replaces every free occurrence of `v` in `phi` by the closed term `t`.
///
/// Only closed terms may be substituted, so variable capture cannot arise;
/// open terms are rejected rather than silently captured.
pub fn substitute(phi: &Formula, v: VarName, t: &Term) -> Result<Formula> {
    if !t.is_closed() {
        return Err(Error::OpenTermSubstitution(t.to_string()));
    }
    let mut memo = std::collections::HashMap::new();
    Ok(subst_formula(phi, v, t, &mut memo))
}

fn subst_formula(
    phi: &Formula,
    v: VarName,
    t: &Term,
    memo: &mut std::collections::HashMap<u64, Formula>,
) -> Formula {
    if phi.free_vars().binary_search(&v).is_err() {
        return phi.clone();
    }
    if let Some(done) = memo.get(&phi.id()) {
        return done.clone();
    }
    let result = match phi.kind() {
        FormulaKind::Eq(l, r) => Formula::eq(subst_term(l, v, t), subst_term(r, v, t)),
        FormulaKind::Not(f) => Formula::not(subst_formula(f, v, t, memo)),
        FormulaKind::And(l, r) => {
            Formula::and(subst_formula(l, v, t, memo), subst_formula(r, v, t, memo))
        }
        FormulaKind::Or(l, r) => {
            Formula::or(subst_formula(l, v, t, memo), subst_formula(r, v, t, memo))
        }
        // v is free in phi, so it cannot be the bound variable here.
        FormulaKind::Forall(u, f) => Formula::forall(*u, subst_formula(f, v, t, memo)),
        FormulaKind::Exists(u, f) => Formula::exists(*u, subst_formula(f, v, t, memo)),
        // Atoms have no free variables; unreachable given the guard above.
        FormulaKind::PrProp(_) => phi.clone(),
    };
    memo.insert(phi.id(), result.clone());
    result
}

fn subst_term(term: &Term, v: VarName, t: &Term) -> Term {
    if term.vars().binary_search(&v).is_err() {
        return term.clone();
    }
    match term.kind() {
        TermKind::Zero => term.clone(),
        TermKind::Succ(inner) => Term::succ(subst_term(inner, v, t)),
        TermKind::Add(l, r) => Term::add(subst_term(l, v, t), subst_term(r, v, t)),
        TermKind::Mul(l, r) => Term::mul(subst_term(l, v, t), subst_term(r, v, t)),
        TermKind::Var(u) => {
            if *u == v {
                t.clone()
            } else {
                term.clone()
            }
        }
    }
}

/// A variable index above everything occurring (free or bound) in `phis`.
pub fn fresh_var(phis: &[Formula]) -> VarName {
    VarName(phis.iter().map(|f| f.var_ceiling()).max().unwrap_or(0))
}

/// `v <= bound` rendered arithmetically as `exists w. (w + v) = bound`,
/// with `w` chosen fresh.
pub fn leq(v: VarName, bound: &Term) -> Formula {
    let w = VarName(bound.var_ceiling().max(v.index() + 1));
    Formula::exists(w, Formula::eq(Term::add(Term::var(w), Term::var(v)), bound.clone()))
}

/// `forall v (!(v <= bound) | body)`: the bounded universal quantifier idiom.
pub fn bounded_forall(v: VarName, bound: &Term, body: Formula) -> Formula {
    let guard = leq_avoiding(v, bound, &body);
    Formula::forall(v, Formula::or(Formula::not(guard), body))
}

/// `exists v ((v <= bound) & body)`: the bounded existential quantifier idiom.
pub fn bounded_exists(v: VarName, bound: &Term, body: Formula) -> Formula {
    let guard = leq_avoiding(v, bound, &body);
    Formula::exists(v, Formula::and(guard, body))
}

fn leq_avoiding(v: VarName, bound: &Term, body: &Formula) -> Formula {
    let w = VarName(
        bound
            .var_ceiling()
            .max(v.index() + 1)
            .max(body.var_ceiling()),
    );
    Formula::exists(w, Formula::eq(Term::add(Term::var(w), Term::var(v)), bound.clone()))
}

/// Number of distinct nodes (terms, formulas, and provability-atom payloads)
/// reachable from `phi`. This is the size that resource caps meter, as
/// opposed to [`Formula::tree_size`].
pub fn dag_size(phi: &Formula) -> usize {
    let mut seen_f = std::collections::HashSet::new();
    let mut seen_t = std::collections::HashSet::new();
    let mut stack = vec![phi.clone()];
    while let Some(f) = stack.pop() {
        if !seen_f.insert(f.id()) {
            continue;
        }
        match f.kind() {
            FormulaKind::Eq(l, r) => {
                count_term(l, &mut seen_t);
                count_term(r, &mut seen_t);
            }
            FormulaKind::Not(g) => stack.push(g.clone()),
            FormulaKind::And(l, r) | FormulaKind::Or(l, r) => {
                stack.push(l.clone());
                stack.push(r.clone());
            }
            FormulaKind::Forall(_, g) | FormulaKind::Exists(_, g) => stack.push(g.clone()),
            FormulaKind::PrProp(payload) => stack.push(payload.clone()),
        }
    }
    seen_f.len() + seen_t.len()
}

fn count_term(t: &Term, seen: &mut std::collections::HashSet<u64>) {
    let mut stack = vec![t.clone()];
    while let Some(t) = stack.pop() {
        if !seen.insert(t.id()) {
            continue;
        }
        match t.kind() {
            TermKind::Zero | TermKind::Var(_) => {}
            TermKind::Succ(inner) => stack.push(inner.clone()),
            TermKind::Add(l, r) | TermKind::Mul(l, r) => {
                stack.push(l.clone());
                stack.push(r.clone());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VarName {
        VarName(i)
    }

    #[test]
    fn hash_consing_shares_nodes() {
        let a = Formula::eq(numeral(2), numeral(2));
        let b = Formula::eq(numeral(2), numeral(2));
        assert_eq!(a, b);
        assert_eq!(a.id(), b.id());
    }

    #[test]
    fn numeral_spine() {
        assert_eq!(numeral(0), Term::zero());
        assert_eq!(numeral(3), Term::succ(Term::succ(Term::succ(Term::zero()))));
        let mut n = 0;
        let mut t = numeral(10);
        while let TermKind::Succ(inner) = t.kind() {
            n += 1;
            t = inner.clone();
        }
        assert_eq!(n, 10);
        assert!(matches!(t.kind(), TermKind::Zero));
        assert!(numeral(10).is_closed());
        assert_eq!(numeral(10).tree_size(), 11);
    }

    #[test]
    fn free_vars_examples() {
        let closed = Formula::eq(Term::zero(), Term::zero());
        assert!(closed.free_vars().is_empty());

        let f = Formula::forall(v(0), Formula::eq(Term::var(v(0)), Term::var(v(1))));
        assert_eq!(f.free_vars(), &[v(1)]);

        // v0 free on the left, bound on the right: still free overall.
        let g = Formula::and(
            Formula::eq(Term::var(v(0)), Term::zero()),
            Formula::exists(v(0), Formula::eq(Term::var(v(0)), Term::zero())),
        );
        assert_eq!(g.free_vars(), &[v(0)]);
    }

    #[test]
    fn substitute_examples() {
        let f = Formula::eq(Term::var(v(0)), Term::zero());
        let got = substitute(&f, v(0), &numeral(2)).unwrap();
        assert_eq!(got, Formula::eq(numeral(2), Term::zero()));

        // No free v0: substitution is the identity (same allocation).
        let g = Formula::forall(v(0), Formula::eq(Term::var(v(0)), Term::var(v(0))));
        let unchanged = substitute(&g, v(0), &numeral(1)).unwrap();
        assert_eq!(unchanged, g);

        // Only the free occurrence of v1 is replaced.
        let h = Formula::and(
            Formula::eq(Term::var(v(1)), Term::zero()),
            Formula::exists(v(1), Formula::eq(Term::var(v(1)), Term::zero())),
        );
        let got = substitute(&h, v(1), &numeral(0)).unwrap();
        let expected = Formula::and(
            Formula::eq(Term::zero(), Term::zero()),
            Formula::exists(v(1), Formula::eq(Term::var(v(1)), Term::zero())),
        );
        assert_eq!(got, expected);
    }

    #[test]
    fn substitute_rejects_open_terms() {
        let f = Formula::eq(Term::var(v(0)), Term::zero());
        let open = Term::add(Term::var(v(3)), Term::zero());
        assert!(substitute(&f, v(0), &open).is_err());
    }

    #[test]
    fn substitution_removes_the_variable() {
        let f = Formula::and(
            Formula::eq(Term::var(v(0)), Term::var(v(1))),
            Formula::eq(Term::var(v(0)), Term::zero()),
        );
        let got = substitute(&f, v(0), &numeral(4)).unwrap();
        assert_eq!(got.free_vars(), &[v(1)]);
    }

    #[test]
    fn big_and_examples() {
        let atoms: Vec<Formula> = (0..3)
            .map(|i| Formula::eq(numeral(i), numeral(i)))
            .collect();
        assert_eq!(big_and(&atoms[..1]).unwrap(), atoms[0]);
        let f = big_and(&atoms).unwrap();
        assert_eq!(
            f,
            Formula::and(Formula::and(atoms[0].clone(), atoms[1].clone()), atoms[2].clone())
        );
        assert_eq!(
            big_or(&atoms[..2]).unwrap(),
            Formula::or(atoms[0].clone(), atoms[1].clone())
        );
        assert!(big_and(&[]).is_err());
    }

    #[test]
    fn spine_recovers_sequence() {
        let atoms: Vec<Formula> = (0..5)
            .map(|i| Formula::eq(numeral(i), numeral(i)))
            .collect();
        let f = big_and(&atoms).unwrap();
        assert_eq!(and_spine(&f), atoms);
        // n-1 And nodes on the spine.
        let mut count = 0;
        let mut cur = f;
        while let FormulaKind::And(l, _) = cur.kind() {
            count += 1;
            cur = l.clone();
        }
        assert_eq!(count, atoms.len() - 1);
    }

    #[test]
    fn prprop_requires_sentence_payload() {
        let open = Formula::eq(Term::var(v(0)), Term::zero());
        assert!(Formula::prprop(open).is_err());
        let closed = Formula::eq(Term::zero(), Term::zero());
        let atom = Formula::prprop(closed).unwrap();
        assert!(atom.is_sentence());
    }

    #[test]
    fn dag_size_counts_unique_nodes() {
        let n = numeral(4);
        let f = Formula::and(
            Formula::eq(n.clone(), n.clone()),
            Formula::eq(n.clone(), n.clone()),
        );
        // 5 term nodes (numeral spine) + Eq + And.
        assert_eq!(dag_size(&f), 7);
        assert_eq!(f.tree_size(), 1 + 2 * (1 + 5 + 5));
    }

    #[test]
    fn sentence_seq_validates() {
        assert!(SentenceSeq::new(vec![Formula::eq(Term::zero(), Term::zero())]).is_ok());
        assert!(SentenceSeq::new(vec![Formula::eq(Term::var(v(0)), Term::zero())]).is_err());
    }
}
