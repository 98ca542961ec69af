//! Desk-scale truth oracles: exact closed-term valuation, bounded-domain
//! evaluation of sentences (quantifiers sweep `[0, B]`), and exact evaluation
//! of sentences whose quantifiers are syntactically bounded.
//!
//! The bounded evaluator realizes the compositional clauses verbatim —
//! equations by term values, the connectives classically, quantifiers by
//! numeral-instance sweeps over `[0, B]` — with the domain bound standing in
//! for a horizon no finite machine can cross. Provability atoms are answered
//! by an attached decision procedure; without one they are an error.

use std::cell::Cell;
use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::oracle::TruthOracle;
use crate::prop::is_tautology;
use crate::syntax::{Formula, FormulaKind, Term, TermKind, VarName};

/// How an attached procedure decides `@PrProp(payload)` atoms.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PrPropRule {
    /// The payload sentence must be a propositional tautology as written.
    Direct,
    /// The payload is first rewritten by the oracle-guided stopping collapse
    /// ([`crate::overspill::collapse_stopping`]), then checked for
    /// tautology. This is the rule the rank constructions rely on: it treats
    /// a disjunction with stopping conditions as interchangeable with the
    /// payload at its least true guard.
    StoppingAware,
}

/// Bounded-domain evaluation context: the quantifier bound, the provability
/// rule, and memo tables. Evaluation through one config is deterministic and
/// the tables behave as if queries were serialized.
pub struct EvalConfig {
    bound: u64,
    prprop: Option<PrPropRule>,
    sentence_cache: Mutex<HashMap<u64, bool>>,
    prprop_cache: Mutex<HashMap<u64, bool>>,
}

impl EvalConfig {
    /// A config with no provability attachment; the domain bound must be at
    /// least 1.
    pub fn new(bound: u64) -> Result<EvalConfig> {
        if bound == 0 {
            return Err(Error::Invalid("domain bound must be at least 1".into()));
        }
        Ok(EvalConfig {
            bound,
            prprop: None,
            sentence_cache: Mutex::new(HashMap::new()),
            prprop_cache: Mutex::new(HashMap::new()),
        })
    }

    /// Attaches a decision procedure for `@PrProp` atoms.
    pub fn with_prprop(mut self, rule: PrPropRule) -> EvalConfig {
        self.prprop = Some(rule);
        self
    }

    /// Shorthand for the stopping-aware attachment used by the demos.
    pub fn with_prop_attachment(bound: u64) -> Result<EvalConfig> {
        Ok(EvalConfig::new(bound)?.with_prprop(PrPropRule::StoppingAware))
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }
}

impl TruthOracle for EvalConfig {
    fn holds(&self, sentence: &Formula) -> Result<bool> {
        eval_bounded(sentence, self)
    }
}

/// Standard value of a closed term.
pub fn val(t: &Term) -> Result<BigUint> {
    if !t.is_closed() {
        return Err(Error::OpenTerm(t.to_string()));
    }
    val_env(t, &[])
}

fn val_env(t: &Term, env: &[(VarName, u64)]) -> Result<BigUint> {
    match t.kind() {
        TermKind::Zero => Ok(BigUint::zero()),
        TermKind::Succ(inner) => Ok(val_env(inner, env)? + BigUint::one()),
        TermKind::Add(l, r) => Ok(val_env(l, env)? + val_env(r, env)?),
        TermKind::Mul(l, r) => Ok(val_env(l, env)? * val_env(r, env)?),
        TermKind::Var(v) => env
            .iter()
            .rev()
            .find(|(u, _)| u == v)
            .map(|(_, x)| BigUint::from(*x))
            .ok_or_else(|| Error::OpenTerm(t.to_string())),
    }
}

// Provability atoms may nest through stopping collapses; the depth guard
// turns a runaway recursion into an error instead of a stack overflow.
thread_local! {
    static PRPROP_DEPTH: Cell<usize> = const { Cell::new(0) };
}
const PRPROP_DEPTH_LIMIT: usize = 200;

struct DepthGuard;

impl DepthGuard {
    fn enter() -> Result<DepthGuard> {
        PRPROP_DEPTH.with(|d| {
            if d.get() >= PRPROP_DEPTH_LIMIT {
                Err(Error::ResourceLimit(format!(
                    "provability atoms nested deeper than {PRPROP_DEPTH_LIMIT}"
                )))
            } else {
                d.set(d.get() + 1);
                Ok(DepthGuard)
            }
        })
    }
}

impl Drop for DepthGuard {
    fn drop(&mut self) {
        PRPROP_DEPTH.with(|d| d.set(d.get() - 1));
    }
}

/// Evaluates a sentence over the domain `[0, B]`.
pub fn eval_bounded(phi: &Formula, cfg: &EvalConfig) -> Result<bool> {
    if !phi.is_sentence() {
        return Err(Error::NotASentence {
            formula: phi.to_string(),
            free: phi.free_vars().iter().map(|v| v.to_string()).collect(),
        });
    }
    let mut ev = Evaluator {
        cfg,
        memo: HashMap::new(),
    };
    ev.eval(phi, &mut Vec::new())
}

// Open subformulas are memoized only when their environment key is narrow:
// under deep quantifier nests a wide key almost never repeats, so caching it
// would cost unbounded memory for no hits.
const ENV_MEMO_WIDTH: usize = 3;

struct Evaluator<'c> {
    cfg: &'c EvalConfig,
    /// Per-call memo for open subformulas, keyed by node and the bindings of
    /// its free variables.
    memo: HashMap<(u64, Box<[(u32, u64)]>), bool>,
}

impl Evaluator<'_> {
    fn eval(&mut self, f: &Formula, env: &mut Vec<(VarName, u64)>) -> Result<bool> {
        let closed = f.is_sentence();
        let key = if closed {
            if let Some(&v) = self.cfg.sentence_cache.lock().unwrap().get(&f.id()) {
                return Ok(v);
            }
            None
        } else {
            let key = restrict_env(f, env);
            if let Some(ref k) = key {
                if let Some(&v) = self.memo.get(&(f.id(), k.clone())) {
                    return Ok(v);
                }
            }
            key
        };

        let value = match f.kind() {
            FormulaKind::Eq(l, r) => val_env(l, env)? == val_env(r, env)?,
            FormulaKind::Not(g) => !self.eval(g, env)?,
            FormulaKind::And(l, r) => self.eval(l, env)? && self.eval(r, env)?,
            FormulaKind::Or(l, r) => self.eval(l, env)? || self.eval(r, env)?,
            FormulaKind::Forall(v, body) => {
                let mut all = true;
                for x in 0..=self.cfg.bound {
                    env.push((*v, x));
                    let r = self.eval(body, env);
                    env.pop();
                    if !r? {
                        all = false;
                        break;
                    }
                }
                all
            }
            FormulaKind::Exists(v, body) => {
                let mut some = false;
                for x in 0..=self.cfg.bound {
                    env.push((*v, x));
                    let r = self.eval(body, env);
                    env.pop();
                    if r? {
                        some = true;
                        break;
                    }
                }
                some
            }
            FormulaKind::PrProp(payload) => self.decide_prprop(payload)?,
        };

        if closed {
            self.cfg
                .sentence_cache
                .lock()
                .unwrap()
                .insert(f.id(), value);
        } else if let Some(k) = key {
            self.memo.insert((f.id(), k), value);
        }
        Ok(value)
    }

    fn decide_prprop(&self, payload: &Formula) -> Result<bool> {
        let rule = self.cfg.prprop.ok_or(Error::NoPrPropAttachment)?;
        match rule {
            PrPropRule::Direct => Ok(is_tautology(payload)),
            PrPropRule::StoppingAware => {
                if let Some(&v) = self.cfg.prprop_cache.lock().unwrap().get(&payload.id()) {
                    return Ok(v);
                }
                let _guard = DepthGuard::enter()?;
                let collapsed = crate::overspill::collapse_stopping(payload, self.cfg)?;
                let v = is_tautology(&collapsed);
                self.cfg
                    .prprop_cache
                    .lock()
                    .unwrap()
                    .insert(payload.id(), v);
                Ok(v)
            }
        }
    }
}

fn restrict_env(f: &Formula, env: &[(VarName, u64)]) -> Option<Box<[(u32, u64)]>> {
    if f.free_vars().len() > ENV_MEMO_WIDTH {
        return None;
    }
    let mut key = Vec::with_capacity(f.free_vars().len());
    for v in f.free_vars() {
        let x = env.iter().rev().find(|(u, _)| u == v)?.1;
        key.push((v.index(), x));
    }
    Some(key.into_boxed_slice())
}

// ---------------------------------------------------------------------------
// Exact evaluation of syntactically bounded sentences.

const DELTA0_SWEEP_CAP: u64 = 1_000_000;

/// Exact truth value of a sentence whose quantifiers all match the bounded
/// idioms `forall v (!(v <= t) | body)` / `exists v ((v <= t) & body)`, where
/// `v <= t` is spelled exactly `exists w. (w + v) = t` with `w` distinct from
/// `v` and absent from `t`, and `t` does not mention `v`. Unbounded
/// quantifiers and provability atoms are rejected.
pub fn eval_delta0(phi: &Formula) -> Result<bool> {
    if !phi.is_sentence() {
        return Err(Error::NotASentence {
            formula: phi.to_string(),
            free: phi.free_vars().iter().map(|v| v.to_string()).collect(),
        });
    }
    delta0_rec(phi, &mut Vec::new())
}

fn delta0_rec(f: &Formula, env: &mut Vec<(VarName, u64)>) -> Result<bool> {
    match f.kind() {
        FormulaKind::Eq(l, r) => Ok(val_env(l, env)? == val_env(r, env)?),
        FormulaKind::Not(g) => Ok(!delta0_rec(g, env)?),
        FormulaKind::And(l, r) => Ok(delta0_rec(l, env)? && delta0_rec(r, env)?),
        FormulaKind::Or(l, r) => Ok(delta0_rec(l, env)? || delta0_rec(r, env)?),
        FormulaKind::Forall(v, body) => {
            let (bound, inner) = match body.kind() {
                FormulaKind::Or(guard, inner) => match guard.kind() {
                    FormulaKind::Not(leq) => (bound_of_leq(leq, *v)?, inner),
                    _ => return Err(Error::UnboundedQuantifier(f.to_string())),
                },
                _ => return Err(Error::UnboundedQuantifier(f.to_string())),
            };
            let n = sweep_limit(&bound, env)?;
            for x in 0..=n {
                env.push((*v, x));
                let r = delta0_rec(inner, env);
                env.pop();
                if !r? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        FormulaKind::Exists(v, body) => {
            let (bound, inner) = match body.kind() {
                FormulaKind::And(guard, inner) => (bound_of_leq(guard, *v)?, inner),
                _ => return Err(Error::UnboundedQuantifier(f.to_string())),
            };
            let n = sweep_limit(&bound, env)?;
            for x in 0..=n {
                env.push((*v, x));
                let r = delta0_rec(inner, env);
                env.pop();
                if r? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        FormulaKind::PrProp(_) => Err(Error::OracleAtomInDelta0(f.to_string())),
    }
}

/// Matches `exists w. (w + v) = t` and returns `t`.
fn bound_of_leq(guard: &Formula, v: VarName) -> Result<Term> {
    if let FormulaKind::Exists(w, eq) = guard.kind() {
        if let FormulaKind::Eq(sum, t) = eq.kind() {
            if let TermKind::Add(wv, vv) = sum.kind() {
                let w_ok = matches!(wv.kind(), TermKind::Var(u) if u == w);
                let v_ok = matches!(vv.kind(), TermKind::Var(u) if *u == v);
                let distinct = *w != v;
                let t_clean = t.vars().binary_search(w).is_err()
                    && t.vars().binary_search(&v).is_err();
                if w_ok && v_ok && distinct && t_clean {
                    return Ok(t.clone());
                }
            }
        }
    }
    Err(Error::UnboundedQuantifier(guard.to_string()))
}

fn sweep_limit(bound: &Term, env: &[(VarName, u64)]) -> Result<u64> {
    let n = val_env(bound, env)?;
    u64::try_from(&n)
        .ok()
        .filter(|n| *n <= DELTA0_SWEEP_CAP)
        .ok_or_else(|| Error::ResourceLimit(format!("quantifier bound {n} too large to sweep")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{
        bounded_exists, bounded_forall, numeral, parse_formula, substitute, big_and,
    };

    fn cfg(bound: u64) -> EvalConfig {
        EvalConfig::new(bound).unwrap()
    }

    #[test]
    fn val_examples() {
        assert_eq!(val(&numeral(7)).unwrap(), BigUint::from(7u32));
        let t = Term::add(numeral(2), Term::mul(numeral(3), numeral(4)));
        assert_eq!(val(&t).unwrap(), BigUint::from(14u32));
        assert_eq!(
            val(&Term::mul(Term::zero(), numeral(1))).unwrap(),
            BigUint::zero()
        );
        assert!(val(&Term::var(VarName(0))).is_err());
    }

    #[test]
    fn eval_equation() {
        let f = Formula::eq(numeral(2), Term::add(numeral(1), numeral(1)));
        assert!(eval_bounded(&f, &cfg(1)).unwrap());
    }

    #[test]
    fn eval_reflexive_universal_any_bound() {
        let f = parse_formula("forall v0. v0 = v0").unwrap();
        for b in [1, 2, 9] {
            assert!(eval_bounded(&f, &cfg(b)).unwrap());
        }
    }

    #[test]
    fn exists_chain_of_distinct_values() {
        // exists v1..v5, all pairwise distinct. Brute force is the oracle.
        let f = crate::overspill::distinctness_sentence(5).unwrap();
        let brute = |b: u64| -> bool {
            let dom = (b + 1) as usize;
            let mut stack = vec![Vec::<u64>::new()];
            while let Some(partial) = stack.pop() {
                if partial.len() == 5 {
                    return true;
                }
                for x in 0..dom as u64 {
                    if !partial.contains(&x) {
                        let mut next = partial.clone();
                        next.push(x);
                        stack.push(next);
                    }
                }
            }
            false
        };
        assert!(brute(10));
        assert!(!brute(3));
        assert!(eval_bounded(&f, &cfg(10)).unwrap());
        assert!(!eval_bounded(&f, &cfg(3)).unwrap());
    }

    #[test]
    fn quantifiers_agree_with_instance_sweeps() {
        let v0 = VarName(0);
        let body = Formula::eq(
            Term::mul(Term::var(v0), Term::var(v0)),
            Term::add(Term::var(v0), Term::var(v0)),
        );
        let b = 5;
        let config = cfg(b);
        let all = eval_bounded(&Formula::forall(v0, body.clone()), &config).unwrap();
        let some = eval_bounded(&Formula::exists(v0, body.clone()), &config).unwrap();
        let mut sweep_all = true;
        let mut sweep_some = false;
        for x in 0..=b {
            let inst = substitute(&body, v0, &numeral(x)).unwrap();
            let v = eval_bounded(&inst, &config).unwrap();
            sweep_all &= v;
            sweep_some |= v;
        }
        assert_eq!(all, sweep_all);
        assert_eq!(some, sweep_some);
    }

    #[test]
    fn prprop_without_attachment_errors() {
        let atom = Formula::prprop(parse_formula("0 = 0").unwrap()).unwrap();
        assert!(matches!(
            eval_bounded(&atom, &cfg(1)),
            Err(Error::NoPrPropAttachment)
        ));
        let with = cfg(1).with_prprop(PrPropRule::Direct);
        assert!(!eval_bounded(&atom, &with).unwrap());
        let p = parse_formula("0 = 0").unwrap();
        let taut = Formula::prprop(Formula::or(p.clone(), Formula::not(p))).unwrap();
        assert!(eval_bounded(&taut, &with).unwrap());
    }

    #[test]
    fn delta0_examples() {
        let v0 = VarName(0);
        // exists v0 <= 3. v0 = S(S(0))
        let f = bounded_exists(v0, &numeral(3), Formula::eq(Term::var(v0), numeral(2)));
        assert!(eval_delta0(&f).unwrap());

        // forall v0 <= 4. v0 * 0 = 0
        let g = bounded_forall(
            v0,
            &numeral(4),
            Formula::eq(Term::mul(Term::var(v0), Term::zero()), Term::zero()),
        );
        assert!(eval_delta0(&g).unwrap());

        // Unbounded existential is rejected.
        let h = Formula::exists(v0, Formula::eq(Term::var(v0), Term::var(v0)));
        assert!(matches!(eval_delta0(&h), Err(Error::UnboundedQuantifier(_))));
    }

    #[test]
    fn delta0_agrees_with_bounded_eval_beyond_the_bounds() {
        let v0 = VarName(0);
        let f = bounded_exists(v0, &numeral(3), Formula::eq(Term::var(v0), numeral(2)));
        let g = bounded_forall(
            v0,
            &numeral(4),
            Formula::eq(Term::mul(Term::var(v0), Term::zero()), Term::zero()),
        );
        for phi in [f, g] {
            let exact = eval_delta0(&phi).unwrap();
            for b in [5, 8, 12] {
                assert_eq!(eval_bounded(&phi, &cfg(b)).unwrap(), exact);
            }
        }
    }

    #[test]
    fn regularity_spot_check() {
        // Pointwise equal closed-term sequences give equal values.
        let v0 = VarName(0);
        let template = Formula::exists(
            v0,
            Formula::eq(Term::add(Term::var(v0), Term::var(VarName(1))), numeral(4)),
        );
        let s = Term::add(numeral(1), numeral(1));
        let t = Term::mul(numeral(2), numeral(1));
        assert_eq!(val(&s).unwrap(), val(&t).unwrap());
        let config = cfg(6);
        let fs = substitute(&template, VarName(1), &s).unwrap();
        let ft = substitute(&template, VarName(1), &t).unwrap();
        assert_eq!(
            eval_bounded(&fs, &config).unwrap(),
            eval_bounded(&ft, &config).unwrap()
        );
    }

    #[test]
    fn conjunction_clause_at_root() {
        let parts: Vec<Formula> = (0..4)
            .map(|i| Formula::eq(numeral(i), numeral(i)))
            .collect();
        let f = big_and(&parts).unwrap();
        let config = cfg(2);
        let direct = eval_bounded(&f, &config).unwrap();
        let childwise = parts
            .iter()
            .all(|p| eval_bounded(p, &config).unwrap());
        assert_eq!(direct, childwise);
    }
}
