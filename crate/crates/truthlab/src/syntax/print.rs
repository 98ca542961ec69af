//! Pretty-printer emitting the strict concrete grammar (binary connectives
//! always parenthesized, implication never re-sugared), so parsing the output
//! reproduces the input formula exactly.

use std::fmt;

use super::{Formula, FormulaKind, Term, TermKind};

pub(super) fn fmt_term(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t.kind() {
        TermKind::Zero => f.write_str("0"),
        TermKind::Succ(inner) => {
            f.write_str("S(")?;
            fmt_term(inner, f)?;
            f.write_str(")")
        }
        TermKind::Add(l, r) => {
            f.write_str("(")?;
            fmt_term(l, f)?;
            f.write_str(" + ")?;
            fmt_term(r, f)?;
            f.write_str(")")
        }
        TermKind::Mul(l, r) => {
            f.write_str("(")?;
            fmt_term(l, f)?;
            f.write_str(" * ")?;
            fmt_term(r, f)?;
            f.write_str(")")
        }
        TermKind::Var(v) => write!(f, "{v}"),
    }
}

pub(super) fn fmt_formula(phi: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match phi.kind() {
        FormulaKind::Eq(l, r) => {
            fmt_term(l, f)?;
            f.write_str(" = ")?;
            fmt_term(r, f)
        }
        FormulaKind::Not(inner) => {
            f.write_str("!")?;
            match inner.kind() {
                // Equations need brackets under negation: `!0 = 0` would
                // otherwise read as a negated term.
                FormulaKind::Eq(_, _)
                | FormulaKind::Forall(_, _)
                | FormulaKind::Exists(_, _) => {
                    f.write_str("(")?;
                    fmt_formula(inner, f)?;
                    f.write_str(")")
                }
                _ => fmt_formula(inner, f),
            }
        }
        FormulaKind::And(l, r) => {
            f.write_str("(")?;
            fmt_formula(l, f)?;
            f.write_str(" & ")?;
            fmt_formula(r, f)?;
            f.write_str(")")
        }
        FormulaKind::Or(l, r) => {
            f.write_str("(")?;
            fmt_formula(l, f)?;
            f.write_str(" | ")?;
            fmt_formula(r, f)?;
            f.write_str(")")
        }
        FormulaKind::Forall(v, body) => {
            write!(f, "forall {v}. ")?;
            fmt_formula(body, f)
        }
        FormulaKind::Exists(v, body) => {
            write!(f, "exists {v}. ")?;
            fmt_formula(body, f)
        }
        FormulaKind::PrProp(payload) => {
            f.write_str("@PrProp(")?;
            fmt_formula(payload, f)?;
            f.write_str(")")
        }
    }
}
