//! Global hash-consing tables for terms and formulas.
//!
//! Every constructor in [`crate::syntax`] funnels through this interner, so
//! structurally equal objects always share one allocation. Equality and
//! hashing on `Term` and `Formula` are therefore pointer-based, and the
//! multiplicative constructions elsewhere in the crate stay linear in the
//! number of distinct subobjects. The table is guarded by a mutex and behaves
//! as if all constructions were serialized.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::{Formula, FormulaKind, Term, TermKind, VarName};

pub(super) struct TermData {
    pub kind: TermKind,
    pub id: u64,
    /// Variables occurring in the term, sorted and deduplicated.
    pub vars: Box<[VarName]>,
    /// One past the largest variable index occurring anywhere below, 0 if none.
    pub var_ceiling: u32,
    /// Node count of the fully expanded tree (saturating).
    pub tree_size: u128,
}

pub(super) struct FormulaData {
    pub kind: FormulaKind,
    pub id: u64,
    /// Free variables, sorted and deduplicated.
    pub free: Box<[VarName]>,
    pub var_ceiling: u32,
    pub tree_size: u128,
}

#[derive(PartialEq, Eq, Hash)]
enum TermKey {
    Zero,
    Succ(u64),
    Add(u64, u64),
    Mul(u64, u64),
    Var(u32),
}

#[derive(PartialEq, Eq, Hash)]
enum FormulaKey {
    Eq(u64, u64),
    Not(u64),
    And(u64, u64),
    Or(u64, u64),
    Forall(u32, u64),
    Exists(u32, u64),
    PrProp(u64),
}

#[derive(Default)]
struct Interner {
    terms: HashMap<TermKey, Term>,
    formulas: HashMap<FormulaKey, Formula>,
    next_id: u64,
}

fn table() -> &'static Mutex<Interner> {
    static TABLE: OnceLock<Mutex<Interner>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(Interner::default()))
}

fn merge_vars(a: &[VarName], b: &[VarName]) -> Box<[VarName]> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out.into_boxed_slice()
}

fn remove_var(vars: &[VarName], v: VarName) -> Box<[VarName]> {
    vars.iter().copied().filter(|x| *x != v).collect()
}

fn term_key(kind: &TermKind) -> TermKey {
    match kind {
        TermKind::Zero => TermKey::Zero,
        TermKind::Succ(t) => TermKey::Succ(t.id()),
        TermKind::Add(l, r) => TermKey::Add(l.id(), r.id()),
        TermKind::Mul(l, r) => TermKey::Mul(l.id(), r.id()),
        TermKind::Var(v) => TermKey::Var(v.index()),
    }
}

fn formula_key(kind: &FormulaKind) -> FormulaKey {
    match kind {
        FormulaKind::Eq(l, r) => FormulaKey::Eq(l.id(), r.id()),
        FormulaKind::Not(f) => FormulaKey::Not(f.id()),
        FormulaKind::And(l, r) => FormulaKey::And(l.id(), r.id()),
        FormulaKind::Or(l, r) => FormulaKey::Or(l.id(), r.id()),
        FormulaKind::Forall(v, f) => FormulaKey::Forall(v.index(), f.id()),
        FormulaKind::Exists(v, f) => FormulaKey::Exists(v.index(), f.id()),
        FormulaKind::PrProp(f) => FormulaKey::PrProp(f.id()),
    }
}

pub(super) fn intern_term(kind: TermKind) -> Term {
    let key = term_key(&kind);
    let mut tbl = table().lock().unwrap();
    if let Some(t) = tbl.terms.get(&key) {
        return t.clone();
    }
    let (vars, ceiling, tree) = match &kind {
        TermKind::Zero => (Box::from([]), 0, 1u128),
        TermKind::Succ(t) => (
            t.vars().to_vec().into_boxed_slice(),
            t.var_ceiling(),
            t.tree_size().saturating_add(1),
        ),
        TermKind::Add(l, r) | TermKind::Mul(l, r) => (
            merge_vars(l.vars(), r.vars()),
            l.var_ceiling().max(r.var_ceiling()),
            l.tree_size()
                .saturating_add(r.tree_size())
                .saturating_add(1),
        ),
        TermKind::Var(v) => (Box::from([*v]), v.index() + 1, 1u128),
    };
    let id = tbl.next_id;
    tbl.next_id += 1;
    let term = Term(Arc::new(TermData {
        kind,
        id,
        vars,
        var_ceiling: ceiling,
        tree_size: tree,
    }));
    tbl.terms.insert(key, term.clone());
    term
}

pub(super) fn intern_formula(kind: FormulaKind) -> Formula {
    let key = formula_key(&kind);
    let mut tbl = table().lock().unwrap();
    if let Some(f) = tbl.formulas.get(&key) {
        return f.clone();
    }
    let (free, ceiling, tree) = match &kind {
        FormulaKind::Eq(l, r) => (
            merge_vars(l.vars(), r.vars()),
            l.var_ceiling().max(r.var_ceiling()),
            l.tree_size()
                .saturating_add(r.tree_size())
                .saturating_add(1),
        ),
        FormulaKind::Not(f) => (
            f.free_vars().to_vec().into_boxed_slice(),
            f.var_ceiling(),
            f.tree_size().saturating_add(1),
        ),
        FormulaKind::And(l, r) | FormulaKind::Or(l, r) => (
            merge_vars(l.free_vars(), r.free_vars()),
            l.var_ceiling().max(r.var_ceiling()),
            l.tree_size()
                .saturating_add(r.tree_size())
                .saturating_add(1),
        ),
        FormulaKind::Forall(v, f) | FormulaKind::Exists(v, f) => (
            remove_var(f.free_vars(), *v),
            f.var_ceiling().max(v.index() + 1),
            f.tree_size().saturating_add(1),
        ),
        // Provability atoms are atomic sentences; their payload contributes
        // no free variables but is kept for sharing and size accounting.
        FormulaKind::PrProp(f) => (Box::from([]), f.var_ceiling(), f.tree_size().saturating_add(1)),
    };
    let id = tbl.next_id;
    tbl.next_id += 1;
    let formula = Formula(Arc::new(FormulaData {
        kind,
        id,
        free,
        var_ceiling: ceiling,
        tree_size: tree,
    }));
    tbl.formulas.insert(key, formula.clone());
    formula
}
