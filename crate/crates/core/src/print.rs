//! Canonical text form for formulas and proof terms: fixed spacing and
//! minimal parentheses. Application binds tightest and associates left;
//! `par` is lowest and associates right; lambda bodies extend as far right
//! as possible.

use std::fmt;

use crate::formula::{Formula, IndTerm, PredAbs};
use crate::term::{CaseArm, ExClause, ProofTerm};

impl fmt::Display for IndTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndTerm::Var(v) => write!(f, "{v}"),
            IndTerm::Const(c) => write!(f, "{c}"),
            IndTerm::App(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

// Formula precedence: 0 implication/quantifiers, 1 disjunction,
// 2 conjunction, 3 atoms. Implication, | and & all associate right.
fn formula_level(f: &Formula) -> u8 {
    match f {
        Formula::Imp(_, _)
        | Formula::ForallInd(_, _)
        | Formula::ExistsInd(_, _)
        | Formula::ForallPred(_, _) => 0,
        Formula::Or(_, _) => 1,
        Formula::And(_, _) => 2,
        Formula::Atom(_, _) | Formula::PredVarAtom(_, _) | Formula::Falsum => 3,
    }
}

fn fmt_formula(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let level = formula_level(f);
    if level < min {
        write!(out, "(")?;
        fmt_formula(f, 0, out)?;
        return write!(out, ")");
    }
    match f {
        Formula::Atom(p, args) => {
            write!(out, "{p}")?;
            if !args.is_empty() {
                write!(out, "(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(out, ", ")?;
                    }
                    write!(out, "{a}")?;
                }
                write!(out, ")")?;
            }
            Ok(())
        }
        Formula::PredVarAtom(x, m) => write!(out, "{x}({m})"),
        Formula::Falsum => write!(out, "bot"),
        Formula::And(a, b) => {
            fmt_formula(a, 3, out)?;
            write!(out, " & ")?;
            fmt_formula(b, 2, out)
        }
        Formula::Or(a, b) => {
            fmt_formula(a, 2, out)?;
            write!(out, " | ")?;
            fmt_formula(b, 1, out)
        }
        Formula::Imp(a, b) => {
            fmt_formula(a, 1, out)?;
            write!(out, " -> ")?;
            fmt_formula(b, 0, out)
        }
        Formula::ForallInd(v, a) => {
            write!(out, "forall {v}. ")?;
            fmt_formula(a, 0, out)
        }
        Formula::ExistsInd(v, a) => {
            write!(out, "exists {v}. ")?;
            fmt_formula(a, 0, out)
        }
        Formula::ForallPred(x, a) => {
            write!(out, "Forall {x}. ")?;
            fmt_formula(a, 0, out)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_formula(self, 0, f)
    }
}

impl fmt::Display for PredAbs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}. ", self.binder)?;
        fmt_formula(&self.body, 0, f)?;
        write!(f, "}}")
    }
}

// Term precedence: 0 par and the binder forms, 1 application chains,
// 2 atoms.
fn term_level(t: &ProofTerm) -> u8 {
    match t {
        ProofTerm::Par { .. }
        | ProofTerm::Lam { .. }
        | ProofTerm::IndLam { .. }
        | ProofTerm::PredLam { .. } => 0,
        ProofTerm::App(_, _)
        | ProofTerm::IndApp(_, _)
        | ProofTerm::Proj(_, _)
        | ProofTerm::Case { .. }
        | ProofTerm::ExCase { .. }
        | ProofTerm::PredApp(_, _) => 1,
        ProofTerm::Var { .. }
        | ProofTerm::Pair(_, _)
        | ProofTerm::Inj { .. }
        | ProofTerm::Witness { .. }
        | ProofTerm::Efq { .. }
        | ProofTerm::Abort { .. } => 2,
    }
}

fn fmt_arm(arm: &CaseArm, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(out, "{}", arm.var)?;
    if let Some(a) = &arm.ann {
        write!(out, " : ")?;
        fmt_formula(a, 0, out)?;
    }
    write!(out, " => ")?;
    fmt_term(&arm.body, 0, out)
}

fn fmt_clause(clause: &ExClause, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(out, "({}, {}", clause.ind_var, clause.var)?;
    if let Some(a) = &clause.ann {
        write!(out, " : ")?;
        fmt_formula(a, 0, out)?;
    }
    write!(out, ") => ")?;
    fmt_term(&clause.body, 0, out)
}

fn fmt_term(t: &ProofTerm, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let level = term_level(t);
    if level < min {
        write!(out, "(")?;
        fmt_term(t, 0, out)?;
        return write!(out, ")");
    }
    match t {
        ProofTerm::Var { name, .. } => write!(out, "{name}"),
        ProofTerm::Lam { var, ann, body } => {
            write!(out, "fun {var}")?;
            if let Some(a) = ann {
                write!(out, " : ")?;
                fmt_formula(a, 0, out)?;
            }
            write!(out, " => ")?;
            fmt_term(body, 0, out)
        }
        ProofTerm::App(f, x) => {
            fmt_term(f, 1, out)?;
            write!(out, " ")?;
            fmt_term(x, 2, out)
        }
        ProofTerm::Pair(a, b) => {
            write!(out, "<")?;
            fmt_term(a, 0, out)?;
            write!(out, ", ")?;
            fmt_term(b, 0, out)?;
            write!(out, ">")
        }
        ProofTerm::Proj(b, i) => {
            fmt_term(b, 1, out)?;
            write!(out, " pi{i}")
        }
        ProofTerm::Inj { side, ann, body } => {
            write!(out, "inj{side}")?;
            if let Some(a) = ann {
                write!(out, "[")?;
                fmt_formula(a, 0, out)?;
                write!(out, "]")?;
            }
            write!(out, "(")?;
            fmt_term(body, 0, out)?;
            write!(out, ")")
        }
        ProofTerm::Case { scrut, arms } => {
            fmt_term(scrut, 1, out)?;
            write!(out, " [case ")?;
            fmt_arm(&arms.0, out)?;
            write!(out, ", ")?;
            fmt_arm(&arms.1, out)?;
            write!(out, "]")
        }
        ProofTerm::IndLam { var, body } => {
            write!(out, "ifun {var} => ")?;
            fmt_term(body, 0, out)
        }
        ProofTerm::IndApp(f, m) => {
            fmt_term(f, 1, out)?;
            write!(out, " @ {m}")
        }
        ProofTerm::Witness { witness, ann, body } => {
            write!(out, "wit")?;
            if let Some(a) = ann {
                write!(out, "[")?;
                fmt_formula(a, 0, out)?;
                write!(out, "]")?;
            }
            write!(out, " {witness} ")?;
            fmt_term(body, 2, out)
        }
        ProofTerm::ExCase { scrut, clause } => {
            fmt_term(scrut, 1, out)?;
            write!(out, " [excase ")?;
            fmt_clause(clause, out)?;
            write!(out, "]")
        }
        ProofTerm::Efq { target, body } => {
            write!(out, "efq[")?;
            fmt_formula(target, 0, out)?;
            write!(out, "](")?;
            fmt_term(body, 0, out)?;
            write!(out, ")")
        }
        ProofTerm::Par {
            comm,
            hyps,
            left,
            right,
        } => {
            fmt_term(left, 1, out)?;
            match hyps {
                None => write!(out, " par {comm} ")?,
                Some(h) => {
                    let dual = swap_imp(&h.0).map(|s| s == h.1).unwrap_or(false);
                    write!(out, " par[{comm} : ")?;
                    fmt_formula(&h.0, 0, out)?;
                    if !dual {
                        write!(out, " / ")?;
                        fmt_formula(&h.1, 0, out)?;
                    }
                    write!(out, "] ")?;
                }
            }
            fmt_term(right, 0, out)
        }
        ProofTerm::Abort { ann } => {
            write!(out, "abort[")?;
            fmt_formula(ann, 0, out)?;
            write!(out, "]")
        }
        ProofTerm::PredLam { var, body } => {
            write!(out, "Fun {var} => ")?;
            fmt_term(body, 0, out)
        }
        ProofTerm::PredApp(f, abs) => {
            fmt_term(f, 1, out)?;
            write!(out, " @ {abs}")
        }
    }
}

fn swap_imp(f: &Formula) -> Option<Formula> {
    match f {
        Formula::Imp(a, b) => Some(Formula::imp((**b).clone(), (**a).clone())),
        _ => None,
    }
}

impl fmt::Display for ProofTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_term(self, 0, f)
    }
}
