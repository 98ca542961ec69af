//! Seeded random generators shared by the integration suites. Everything is
//! driven by ChaCha with fixed seeds, so failures reproduce exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use truthlab::syntax::{numeral, Formula, Term, VarName};

pub struct FormulaGen {
    pub rng: ChaCha8Rng,
}

#[allow(dead_code)]
impl FormulaGen {
    pub fn new(seed: u64) -> FormulaGen {
        FormulaGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn term(&mut self, depth: u32, scope: &[VarName]) -> Term {
        if depth == 0 || self.rng.gen_ratio(2, 5) {
            return match self.rng.gen_range(0..3) {
                0 => Term::zero(),
                1 if !scope.is_empty() => {
                    Term::var(scope[self.rng.gen_range(0..scope.len())])
                }
                _ => numeral(self.rng.gen_range(0..6)),
            };
        }
        match self.rng.gen_range(0..3) {
            0 => Term::succ(self.term(depth - 1, scope)),
            1 => Term::add(self.term(depth - 1, scope), self.term(depth - 1, scope)),
            _ => Term::mul(self.term(depth - 1, scope), self.term(depth - 1, scope)),
        }
    }

    /// Formula of connective depth at most `depth` with at most
    /// `quant_budget` quantifiers per path; free variables come from `scope`,
    /// so a formula generated with an empty scope is a sentence.
    pub fn formula(
        &mut self,
        depth: u32,
        quant_budget: u32,
        scope: &mut Vec<VarName>,
    ) -> Formula {
        if depth == 0 || self.rng.gen_ratio(1, 4) {
            return Formula::eq(self.term(2, scope), self.term(2, scope));
        }
        let choices = if quant_budget > 0 { 6 } else { 4 };
        match self.rng.gen_range(0..choices) {
            0 => Formula::eq(self.term(2, scope), self.term(2, scope)),
            1 => Formula::not(self.formula(depth - 1, quant_budget, scope)),
            2 => {
                let l = self.formula(depth - 1, quant_budget, scope);
                let r = self.formula(depth - 1, quant_budget, scope);
                Formula::and(l, r)
            }
            3 => {
                let l = self.formula(depth - 1, quant_budget, scope);
                let r = self.formula(depth - 1, quant_budget, scope);
                Formula::or(l, r)
            }
            q => {
                let v = VarName(self.rng.gen_range(0..4));
                scope.push(v);
                let body = self.formula(depth - 1, quant_budget - 1, scope);
                scope.pop();
                if q == 4 {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                }
            }
        }
    }

    pub fn sentence(&mut self, depth: u32, quant_budget: u32) -> Formula {
        self.formula(depth, quant_budget, &mut Vec::new())
    }

    /// A formula that may mention `free` as a free variable.
    pub fn open_formula(&mut self, depth: u32, quant_budget: u32, free: VarName) -> Formula {
        self.formula(depth, quant_budget, &mut vec![free])
    }

    /// A mixed formula for coding tests: sentences, open formulas, and the
    /// occasional provability atom.
    pub fn any_formula(&mut self, depth: u32) -> Formula {
        if self.rng.gen_ratio(1, 12) {
            let payload = self.sentence(3, 1);
            return Formula::prprop(payload).expect("payload is a sentence");
        }
        let mut scope = if self.rng.gen_bool(0.5) {
            vec![VarName(0), VarName(1)]
        } else {
            Vec::new()
        };
        self.formula(depth, 2, &mut scope)
    }

    /// A random closed term whose value is exactly `n`.
    pub fn closed_term_with_value(&mut self, n: u64, depth: u32) -> Term {
        if depth == 0 {
            return numeral(n);
        }
        match self.rng.gen_range(0..4) {
            0 => numeral(n),
            1 => {
                let a = self.rng.gen_range(0..=n);
                Term::add(
                    self.closed_term_with_value(a, depth - 1),
                    self.closed_term_with_value(n - a, depth - 1),
                )
            }
            2 => {
                if n == 0 {
                    let filler = self.rng.gen_range(0..4);
                    Term::mul(
                        Term::zero(),
                        self.closed_term_with_value(filler, depth - 1),
                    )
                } else {
                    let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
                    let d = divisors[self.rng.gen_range(0..divisors.len())];
                    Term::mul(
                        self.closed_term_with_value(d, depth - 1),
                        self.closed_term_with_value(n / d, depth - 1),
                    )
                }
            }
            _ => {
                if n == 0 {
                    Term::zero()
                } else {
                    Term::succ(self.closed_term_with_value(n - 1, depth - 1))
                }
            }
        }
    }
}

/// A true atomic sentence, distinct per seed.
#[allow(dead_code)]
pub fn true_atom(i: u64) -> Formula {
    Formula::eq(numeral(i), numeral(i))
}

/// A false atomic sentence, distinct per seed.
#[allow(dead_code)]
pub fn false_atom(i: u64) -> Formula {
    Formula::eq(numeral(i), numeral(i + 1))
}
