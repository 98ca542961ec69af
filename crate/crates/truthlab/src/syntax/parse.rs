//! Recursive-descent parser for the concrete grammar.
//!
//! Terms: `0 | S(t) | (t + t) | (t * t) | vN`.
//! Formulas: `t = t | !f | (f & f) | (f | f) | (f -> f) | forall vN. f |
//! exists vN. f`, whitespace insignificant, `->` desugared to `!a | b`.
//!
//! Two tolerated extensions beyond the strict grammar: binary connectives may
//! be chained without outer parentheses (left-associatively, all at one
//! precedence level), and `@PrProp(f)` reads a provability atom, which is how
//! the printer renders one.

use crate::error::{Error, Result};

use super::{Formula, Term, VarName};

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

/// Parses a formula from its concrete syntax.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser {
        input: text.as_bytes(),
        pos: 0,
    };
    let f = p.formula()?;
    p.expect_eof()?;
    Ok(f)
}

/// Parses a term from its concrete syntax.
pub fn parse_term(text: &str) -> Result<Term> {
    let mut p = Parser {
        input: text.as_bytes(),
        pos: 0,
    };
    let t = p.term()?;
    p.expect_eof()?;
    Ok(t)
}

impl<'a> Parser<'a> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.input.get(self.pos).copied()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.input[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            self.error(format!("expected `{token}`"))
        }
    }

    fn expect_eof(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos == self.input.len() {
            Ok(())
        } else {
            self.error("trailing input")
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected a decimal number");
        }
        std::str::from_utf8(&self.input[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| Error::Parse {
                position: start,
                message: "number out of range".into(),
            })
    }

    fn variable(&mut self) -> Result<VarName> {
        self.skip_ws();
        if !self.eat("v") {
            return self.error("expected a variable `vN`");
        }
        let idx = self.number()?;
        if idx > u32::MAX as u64 {
            return self.error("variable index out of range");
        }
        Ok(VarName(idx as u32))
    }

    fn term(&mut self) -> Result<Term> {
        match self.peek() {
            Some(b'0') => {
                self.pos += 1;
                Ok(Term::zero())
            }
            Some(b'S') => {
                self.pos += 1;
                self.expect("(")?;
                let inner = self.term()?;
                self.expect(")")?;
                Ok(Term::succ(inner))
            }
            Some(b'v') => Ok(Term::var(self.variable()?)),
            Some(b'(') => {
                self.pos += 1;
                let left = self.term()?;
                self.skip_ws();
                let op = match self.peek() {
                    Some(b'+') => '+',
                    Some(b'*') => '*',
                    _ => return self.error("expected `+` or `*` in a compound term"),
                };
                self.pos += 1;
                let right = self.term()?;
                self.expect(")")?;
                Ok(match op {
                    '+' => Term::add(left, right),
                    _ => Term::mul(left, right),
                })
            }
            _ => self.error("expected a term"),
        }
    }

    /// One formula without trailing connectives.
    fn formula_primary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                Ok(Formula::not(self.formula_primary()?))
            }
            Some(b'@') => {
                self.expect("@PrProp(")?;
                let payload = self.formula()?;
                self.expect(")")?;
                Formula::prprop(payload)
            }
            Some(b'f') if self.eat("forall") => {
                let v = self.variable()?;
                self.expect(".")?;
                Ok(Formula::forall(v, self.formula()?))
            }
            Some(b'e') if self.eat("exists") => {
                let v = self.variable()?;
                self.expect(".")?;
                Ok(Formula::exists(v, self.formula()?))
            }
            Some(b'(') => {
                // `(` opens either a compound term of an equation or a
                // parenthesized formula; try the term reading first and
                // rewind on failure.
                let save = self.pos;
                if let Ok(f) = self.equation() {
                    return Ok(f);
                }
                self.pos = save;
                self.expect("(")?;
                let inner = self.formula()?;
                self.expect(")")?;
                Ok(inner)
            }
            Some(_) => self.equation(),
            None => self.error("unexpected end of input"),
        }
    }

    fn equation(&mut self) -> Result<Formula> {
        let left = self.term()?;
        self.expect("=")?;
        let right = self.term()?;
        Ok(Formula::eq(left, right))
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut acc = self.formula_primary()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'&') => {
                    self.pos += 1;
                    let rhs = self.formula_primary()?;
                    acc = Formula::and(acc, rhs);
                }
                Some(b'|') => {
                    self.pos += 1;
                    let rhs = self.formula_primary()?;
                    acc = Formula::or(acc, rhs);
                }
                Some(b'-') if self.input[self.pos..].starts_with(b"->") => {
                    self.pos += 2;
                    let rhs = self.formula_primary()?;
                    acc = Formula::implies(acc, rhs);
                }
                _ => return Ok(acc),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{numeral, FormulaKind, TermKind};

    #[test]
    fn smallest_sentence() {
        let f = parse_formula("0 = 0").unwrap();
        assert_eq!(f, Formula::eq(Term::zero(), Term::zero()));
    }

    #[test]
    fn canonical_universal() {
        let f = parse_formula("forall v0. v0 = v0").unwrap();
        let v0 = VarName(0);
        assert_eq!(
            f,
            Formula::forall(v0, Formula::eq(Term::var(v0), Term::var(v0)))
        );
    }

    #[test]
    fn connective_mix_round_trips() {
        let text = "!(S(0) = 0) & (exists v1. v1 = S(0))";
        let f = parse_formula(text).unwrap();
        let expected = Formula::and(
            Formula::not(Formula::eq(numeral(1), Term::zero())),
            Formula::exists(VarName(1), Formula::eq(Term::var(VarName(1)), numeral(1))),
        );
        assert_eq!(f, expected);
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn implication_desugars() {
        let f = parse_formula("(0 = 0 -> S(0) = S(0))").unwrap();
        assert!(matches!(f.kind(), FormulaKind::Or(l, _) if matches!(l.kind(), FormulaKind::Not(_))));
    }

    #[test]
    fn compound_terms() {
        let t = parse_term("((v2 + S(0)) * 0)").unwrap();
        assert!(matches!(t.kind(), TermKind::Mul(_, _)));
        assert_eq!(parse_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn prprop_atom_round_trips() {
        let atom = Formula::prprop(parse_formula("0 = 0").unwrap()).unwrap();
        assert_eq!(parse_formula(&atom.to_string()).unwrap(), atom);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_formula("0 = )").unwrap_err();
        match err {
            Error::Parse { position, .. } => assert_eq!(position, 4),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(parse_formula("").is_err());
        assert!(parse_formula("0 = 0 junk").is_err());
    }
}
