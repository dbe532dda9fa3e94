//! Canonical renaming of bound variables. Bound proof variables become
//! x1, x2, ..., bound individual variables v1, v2, ... and bound predicate
//! variables X1, X2, ..., numbered in pre-order; free variables keep their
//! names. Canonicalization is idempotent and alpha-invariant.

use std::collections::BTreeSet;

use crate::formula::{Formula, IndTerm, PredAbs};
use crate::term::{CaseArm, ExClause, ProofTerm};

struct Canon {
    counter: usize,
    avoid: BTreeSet<String>,
    proof: Vec<(String, String)>,
    ind: Vec<(String, String)>,
    pred: Vec<(String, String)>,
}

impl Canon {
    fn fresh(&mut self, prefix: &str) -> String {
        loop {
            self.counter += 1;
            let name = format!("{prefix}{}", self.counter);
            if !self.avoid.contains(&name) {
                return name;
            }
        }
    }

    fn lookup(map: &[(String, String)], name: &str) -> Option<String> {
        map.iter()
            .rev()
            .find(|(old, _)| old == name)
            .map(|(_, new)| new.clone())
    }

    fn ind_var(&self, name: &str) -> String {
        Self::lookup(&self.ind, name).unwrap_or_else(|| name.to_owned())
    }

    fn proof_var(&self, name: &str) -> String {
        Self::lookup(&self.proof, name).unwrap_or_else(|| name.to_owned())
    }

    fn pred_var(&self, name: &str) -> String {
        Self::lookup(&self.pred, name).unwrap_or_else(|| name.to_owned())
    }
}

/// Renames all bound variables of the term to the canonical scheme.
pub fn canonicalize(t: &ProofTerm) -> ProofTerm {
    let mut avoid = BTreeSet::new();
    avoid.extend(t.free_proof_vars());
    avoid.extend(t.free_ind_vars());
    avoid.extend(t.free_pred_vars());
    let mut canon = Canon {
        counter: 0,
        avoid,
        proof: Vec::new(),
        ind: Vec::new(),
        pred: Vec::new(),
    };
    canon_term(t, &mut canon)
}

/// Renames all bound variables of a standalone formula.
pub fn canonicalize_formula(f: &Formula) -> Formula {
    let mut avoid = BTreeSet::new();
    avoid.extend(f.free_ind_vars());
    avoid.extend(f.free_pred_vars());
    let mut canon = Canon {
        counter: 0,
        avoid,
        proof: Vec::new(),
        ind: Vec::new(),
        pred: Vec::new(),
    };
    canon_formula(f, &mut canon)
}

fn canon_ind(m: &IndTerm, c: &Canon) -> IndTerm {
    match m {
        IndTerm::Var(v) => IndTerm::Var(c.ind_var(v)),
        IndTerm::Const(_) => m.clone(),
        IndTerm::App(f, args) => {
            IndTerm::App(f.clone(), args.iter().map(|a| canon_ind(a, c)).collect())
        }
    }
}

fn canon_formula(f: &Formula, c: &mut Canon) -> Formula {
    match f {
        Formula::Atom(p, args) => {
            Formula::Atom(p.clone(), args.iter().map(|a| canon_ind(a, c)).collect())
        }
        Formula::PredVarAtom(x, m) => Formula::PredVarAtom(c.pred_var(x), canon_ind(m, c)),
        Formula::Falsum => Formula::Falsum,
        Formula::And(a, b) => Formula::and(canon_formula(a, c), canon_formula(b, c)),
        Formula::Or(a, b) => Formula::or(canon_formula(a, c), canon_formula(b, c)),
        Formula::Imp(a, b) => Formula::imp(canon_formula(a, c), canon_formula(b, c)),
        Formula::ForallInd(v, a) => {
            let v2 = c.fresh("v");
            c.ind.push((v.clone(), v2.clone()));
            let a2 = canon_formula(a, c);
            c.ind.pop();
            Formula::ForallInd(v2, Box::new(a2))
        }
        Formula::ExistsInd(v, a) => {
            let v2 = c.fresh("v");
            c.ind.push((v.clone(), v2.clone()));
            let a2 = canon_formula(a, c);
            c.ind.pop();
            Formula::ExistsInd(v2, Box::new(a2))
        }
        Formula::ForallPred(x, a) => {
            let x2 = c.fresh("X");
            c.pred.push((x.clone(), x2.clone()));
            let a2 = canon_formula(a, c);
            c.pred.pop();
            Formula::ForallPred(x2, Box::new(a2))
        }
    }
}

fn canon_abs(abs: &PredAbs, c: &mut Canon) -> PredAbs {
    let v2 = c.fresh("v");
    c.ind.push((abs.binder.clone(), v2.clone()));
    let body = canon_formula(&abs.body, c);
    c.ind.pop();
    PredAbs { binder: v2, body }
}

fn canon_ann(ann: &Option<Formula>, c: &mut Canon) -> Option<Formula> {
    ann.as_ref().map(|f| canon_formula(f, c))
}

fn canon_term(t: &ProofTerm, c: &mut Canon) -> ProofTerm {
    use ProofTerm::*;
    match t {
        Var { name, ann } => Var {
            name: c.proof_var(name),
            ann: canon_ann(ann, c),
        },
        Lam { var, ann, body } => {
            let ann = canon_ann(ann, c);
            let v2 = c.fresh("x");
            c.proof.push((var.clone(), v2.clone()));
            let body = canon_term(body, c);
            c.proof.pop();
            Lam {
                var: v2,
                ann,
                body: Box::new(body),
            }
        }
        App(f, x) => App(Box::new(canon_term(f, c)), Box::new(canon_term(x, c))),
        Pair(a, b) => Pair(Box::new(canon_term(a, c)), Box::new(canon_term(b, c))),
        Proj(b, i) => Proj(Box::new(canon_term(b, c)), *i),
        Inj { side, ann, body } => Inj {
            side: *side,
            ann: canon_ann(ann, c),
            body: Box::new(canon_term(body, c)),
        },
        Case { scrut, arms } => {
            let scrut = Box::new(canon_term(scrut, c));
            let arm = |a: &CaseArm, c: &mut Canon| {
                let ann = canon_ann(&a.ann, c);
                let v2 = c.fresh("x");
                c.proof.push((a.var.clone(), v2.clone()));
                let body = canon_term(&a.body, c);
                c.proof.pop();
                CaseArm { var: v2, ann, body }
            };
            Case {
                scrut,
                arms: Box::new((arm(&arms.0, c), arm(&arms.1, c))),
            }
        }
        IndLam { var, body } => {
            let v2 = c.fresh("v");
            c.ind.push((var.clone(), v2.clone()));
            let body = canon_term(body, c);
            c.ind.pop();
            IndLam {
                var: v2,
                body: Box::new(body),
            }
        }
        IndApp(f, m) => IndApp(Box::new(canon_term(f, c)), canon_ind(m, c)),
        Witness { witness, ann, body } => Witness {
            witness: canon_ind(witness, c),
            ann: canon_ann(ann, c),
            body: Box::new(canon_term(body, c)),
        },
        ExCase { scrut, clause } => {
            let scrut = Box::new(canon_term(scrut, c));
            let iv2 = c.fresh("v");
            c.ind.push((clause.ind_var.clone(), iv2.clone()));
            let ann = canon_ann(&clause.ann, c);
            let pv2 = c.fresh("x");
            c.proof.push((clause.var.clone(), pv2.clone()));
            let body = canon_term(&clause.body, c);
            c.proof.pop();
            c.ind.pop();
            ExCase {
                scrut,
                clause: Box::new(ExClause {
                    ind_var: iv2,
                    var: pv2,
                    ann,
                    body,
                }),
            }
        }
        Efq { target, body } => Efq {
            target: canon_formula(target, c),
            body: Box::new(canon_term(body, c)),
        },
        Par {
            comm,
            hyps,
            left,
            right,
        } => {
            let hyps = hyps
                .as_ref()
                .map(|h| Box::new((canon_formula(&h.0, c), canon_formula(&h.1, c))));
            let a2 = c.fresh("x");
            c.proof.push((comm.clone(), a2.clone()));
            let left = canon_term(left, c);
            let right = canon_term(right, c);
            c.proof.pop();
            Par {
                comm: a2,
                hyps,
                left: Box::new(left),
                right: Box::new(right),
            }
        }
        Abort { ann } => Abort {
            ann: canon_formula(ann, c),
        },
        PredLam { var, body } => {
            let x2 = c.fresh("X");
            c.pred.push((var.clone(), x2.clone()));
            let body = canon_term(body, c);
            c.pred.pop();
            PredLam {
                var: x2,
                body: Box::new(body),
            }
        }
        PredApp(f, abs) => PredApp(Box::new(canon_term(f, c)), Box::new(canon_abs(abs, c))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::alpha_eq_term;

    fn v(n: &str) -> ProofTerm {
        ProofTerm::var(n)
    }

    #[test]
    fn canonicalize_is_idempotent_and_alpha_invariant() {
        let t = ProofTerm::par(
            "a",
            None,
            ProofTerm::lam("q", None, ProofTerm::app(v("a"), v("q"))),
            ProofTerm::lam("r", None, v("r")),
        );
        let once = canonicalize(&t);
        let twice = canonicalize(&once);
        assert_eq!(once, twice);
        assert!(alpha_eq_term(&t, &once));
    }

    #[test]
    fn alpha_equal_terms_canonicalize_identically() {
        let t1 = ProofTerm::lam("x", None, ProofTerm::lam("y", None, v("x")));
        let t2 = ProofTerm::lam("u", None, ProofTerm::lam("w", None, v("u")));
        assert_eq!(canonicalize(&t1), canonicalize(&t2));
    }

    #[test]
    fn free_variables_keep_their_names() {
        let t = ProofTerm::app(v("free"), ProofTerm::lam("b", None, v("b")));
        let c = canonicalize(&t);
        assert!(c.free_proof_vars().contains("free"));
    }
}
