//! Capture-avoiding substitution over proof terms, for all three sorts of
//! variables. Renaming is performed on demand; the replacement's free
//! variables are never captured by binders of the host term, including the
//! parallel-operator binder.

use std::collections::BTreeSet;

use crate::formula::{fresh_name, Formula, IndTerm, PredAbs};
use crate::term::{CaseArm, ExClause, ProofTerm};

/// t[u/x] on proof variables.
pub fn subst_proof(t: &ProofTerm, x: &str, u: &ProofTerm) -> ProofTerm {
    let fv = FreeVars {
        proof: u.free_proof_vars(),
        ind: u.free_ind_vars(),
        pred: u.free_pred_vars(),
    };
    subst_proof_rec(t, x, u, &fv)
}

struct FreeVars {
    proof: BTreeSet<String>,
    ind: BTreeSet<String>,
    pred: BTreeSet<String>,
}

fn subst_proof_rec(t: &ProofTerm, x: &str, u: &ProofTerm, fv: &FreeVars) -> ProofTerm {
    use ProofTerm::*;
    match t {
        Var { name, .. } if name == x => u.clone(),
        Var { .. } | Abort { .. } => t.clone(),
        Lam { var, ann, body } => {
            if var == x {
                return t.clone();
            }
            let (var, body) = unshadow_proof(var, body, x, &fv.proof);
            Lam {
                var,
                ann: ann.clone(),
                body: Box::new(subst_proof_rec(&body, x, u, fv)),
            }
        }
        App(f, a) => App(
            Box::new(subst_proof_rec(f, x, u, fv)),
            Box::new(subst_proof_rec(a, x, u, fv)),
        ),
        Pair(a, b) => Pair(
            Box::new(subst_proof_rec(a, x, u, fv)),
            Box::new(subst_proof_rec(b, x, u, fv)),
        ),
        Proj(b, i) => Proj(Box::new(subst_proof_rec(b, x, u, fv)), *i),
        Inj { side, ann, body } => Inj {
            side: *side,
            ann: ann.clone(),
            body: Box::new(subst_proof_rec(body, x, u, fv)),
        },
        Case { scrut, arms } => {
            let scrut = Box::new(subst_proof_rec(scrut, x, u, fv));
            let subst_arm = |arm: &CaseArm| -> CaseArm {
                if arm.var == x {
                    return arm.clone();
                }
                let (var, body) = unshadow_proof(&arm.var, &arm.body, x, &fv.proof);
                CaseArm {
                    var,
                    ann: arm.ann.clone(),
                    body: subst_proof_rec(&body, x, u, fv),
                }
            };
            Case {
                scrut,
                arms: Box::new((subst_arm(&arms.0), subst_arm(&arms.1))),
            }
        }
        IndLam { var, body } => {
            // The individual binder cannot capture proof variables, but it
            // can capture individual variables free in the replacement.
            let (var, body) = unshadow_ind_in_term(var, body, x, &fv.ind);
            IndLam {
                var,
                body: Box::new(subst_proof_rec(&body, x, u, fv)),
            }
        }
        IndApp(f, m) => IndApp(Box::new(subst_proof_rec(f, x, u, fv)), m.clone()),
        Witness { witness, ann, body } => Witness {
            witness: witness.clone(),
            ann: ann.clone(),
            body: Box::new(subst_proof_rec(body, x, u, fv)),
        },
        ExCase { scrut, clause } => {
            let scrut = Box::new(subst_proof_rec(scrut, x, u, fv));
            if clause.var == x {
                // Proof binder shadows x; the individual binder still needs
                // a capture check for the replacement used in `scrut` only,
                // which is already done. Body untouched.
                return ExCase {
                    scrut,
                    clause: clause.clone(),
                };
            }
            let mut clause = (**clause).clone();
            // Rename the individual binder if it would capture.
            if fv.ind.contains(&clause.ind_var)
                && clause.body.free_proof_vars().contains(x)
            {
                let mut avoid = fv.ind.clone();
                avoid.extend(clause.body.free_ind_vars());
                if let Some(f) = &clause.ann {
                    avoid.extend(f.free_ind_vars());
                }
                let fresh = fresh_name(&clause.ind_var, &avoid);
                clause.ann = clause
                    .ann
                    .map(|f| f.subst_ind(&clause.ind_var, &IndTerm::Var(fresh.clone())));
                clause.body =
                    subst_ind_term(&clause.body, &clause.ind_var, &IndTerm::Var(fresh.clone()));
                clause.ind_var = fresh;
            }
            // Rename the proof binder if it would capture.
            let (var, body) = unshadow_proof(&clause.var, &clause.body, x, &fv.proof);
            ExCase {
                scrut,
                clause: Box::new(ExClause {
                    ind_var: clause.ind_var,
                    var,
                    ann: clause.ann,
                    body: subst_proof_rec(&body, x, u, fv),
                }),
            }
        }
        Efq { target, body } => Efq {
            target: target.clone(),
            body: Box::new(subst_proof_rec(body, x, u, fv)),
        },
        Par {
            comm,
            hyps,
            left,
            right,
        } => {
            if comm == x {
                return t.clone();
            }
            let (comm, left, right) = if fv.proof.contains(comm)
                && (left.free_proof_vars().contains(x) || right.free_proof_vars().contains(x))
            {
                let mut avoid = fv.proof.clone();
                avoid.extend(left.free_proof_vars());
                avoid.extend(right.free_proof_vars());
                avoid.insert(x.to_owned());
                let fresh = fresh_name(comm, &avoid);
                let renamer = ProofTerm::var(fresh.clone());
                (
                    fresh,
                    subst_proof(left, comm, &renamer),
                    subst_proof(right, comm, &renamer),
                )
            } else {
                (comm.clone(), (**left).clone(), (**right).clone())
            };
            Par {
                comm,
                hyps: hyps.clone(),
                left: Box::new(subst_proof_rec(&left, x, u, fv)),
                right: Box::new(subst_proof_rec(&right, x, u, fv)),
            }
        }
        PredLam { var, body } => {
            let (var, body) = unshadow_pred_in_term(var, body, x, &fv.pred);
            PredLam {
                var,
                body: Box::new(subst_proof_rec(&body, x, u, fv)),
            }
        }
        PredApp(f, abs) => PredApp(Box::new(subst_proof_rec(f, x, u, fv)), abs.clone()),
    }
}

/// Renames a proof binder when it would capture a free proof variable of
/// the replacement. Returns the (possibly renamed) binder and body.
fn unshadow_proof(
    var: &str,
    body: &ProofTerm,
    x: &str,
    replacement_fv: &BTreeSet<String>,
) -> (String, ProofTerm) {
    if replacement_fv.contains(var) && body.free_proof_vars().contains(x) {
        let mut avoid = replacement_fv.clone();
        avoid.extend(body.free_proof_vars());
        avoid.insert(x.to_owned());
        let fresh = fresh_name(var, &avoid);
        let body2 = subst_proof(body, var, &ProofTerm::var(fresh.clone()));
        (fresh, body2)
    } else {
        (var.to_owned(), body.clone())
    }
}

/// Renames an individual binder inside a term when it would capture a free
/// individual variable of a proof-term replacement.
fn unshadow_ind_in_term(
    var: &str,
    body: &ProofTerm,
    x: &str,
    replacement_ind_fv: &BTreeSet<String>,
) -> (String, ProofTerm) {
    if replacement_ind_fv.contains(var) && body.free_proof_vars().contains(x) {
        let mut avoid = replacement_ind_fv.clone();
        avoid.extend(body.free_ind_vars());
        let fresh = fresh_name(var, &avoid);
        let body2 = subst_ind_term(body, var, &IndTerm::Var(fresh.clone()));
        (fresh, body2)
    } else {
        (var.to_owned(), body.clone())
    }
}

/// Renames a predicate binder inside a term when it would capture a free
/// predicate variable of a proof-term replacement.
fn unshadow_pred_in_term(
    var: &str,
    body: &ProofTerm,
    x: &str,
    replacement_pred_fv: &BTreeSet<String>,
) -> (String, ProofTerm) {
    if replacement_pred_fv.contains(var) && body.free_proof_vars().contains(x) {
        let mut avoid = replacement_pred_fv.clone();
        avoid.extend(body.free_pred_vars());
        let fresh = fresh_name(var, &avoid);
        let body2 = rename_pred_in_term(body, var, &fresh);
        (fresh, body2)
    } else {
        (var.to_owned(), body.clone())
    }
}

fn rename_pred_in_term(t: &ProofTerm, from: &str, to: &str) -> ProofTerm {
    let renamer = PredAbs::new(
        "__renamed",
        Formula::PredVarAtom(to.to_owned(), IndTerm::Var("__renamed".to_owned())),
    );
    subst_pred_term(t, from, &renamer)
}

/// t[m/alpha] on individual variables, including all formula annotations.
pub fn subst_ind_term(t: &ProofTerm, alpha: &str, m: &IndTerm) -> ProofTerm {
    use ProofTerm::*;
    let sf = |f: &Formula| f.subst_ind(alpha, m);
    let sann = |f: &Option<Formula>| f.as_ref().map(sf);
    match t {
        Var { name, ann } => Var {
            name: name.clone(),
            ann: sann(ann),
        },
        Lam { var, ann, body } => Lam {
            var: var.clone(),
            ann: sann(ann),
            body: Box::new(subst_ind_term(body, alpha, m)),
        },
        App(f, a) => App(
            Box::new(subst_ind_term(f, alpha, m)),
            Box::new(subst_ind_term(a, alpha, m)),
        ),
        Pair(a, b) => Pair(
            Box::new(subst_ind_term(a, alpha, m)),
            Box::new(subst_ind_term(b, alpha, m)),
        ),
        Proj(b, i) => Proj(Box::new(subst_ind_term(b, alpha, m)), *i),
        Inj { side, ann, body } => Inj {
            side: *side,
            ann: sann(ann),
            body: Box::new(subst_ind_term(body, alpha, m)),
        },
        Case { scrut, arms } => {
            let arm = |a: &CaseArm| CaseArm {
                var: a.var.clone(),
                ann: sann(&a.ann),
                body: subst_ind_term(&a.body, alpha, m),
            };
            Case {
                scrut: Box::new(subst_ind_term(scrut, alpha, m)),
                arms: Box::new((arm(&arms.0), arm(&arms.1))),
            }
        }
        IndLam { var, body } => {
            if var == alpha {
                return t.clone();
            }
            let (var, body) = rebind_ind_binder(var, body, alpha, m);
            IndLam {
                var,
                body: Box::new(subst_ind_term(&body, alpha, m)),
            }
        }
        IndApp(f, arg) => IndApp(
            Box::new(subst_ind_term(f, alpha, m)),
            arg.subst(alpha, m),
        ),
        Witness { witness, ann, body } => Witness {
            witness: witness.subst(alpha, m),
            ann: sann(ann),
            body: Box::new(subst_ind_term(body, alpha, m)),
        },
        ExCase { scrut, clause } => {
            let scrut = Box::new(subst_ind_term(scrut, alpha, m));
            if clause.ind_var == alpha {
                return ExCase {
                    scrut,
                    clause: clause.clone(),
                };
            }
            let mut cl = (**clause).clone();
            let binder_free_in_repl = m.free_vars().contains(&cl.ind_var);
            let alpha_free_below = cl.body.free_ind_vars().contains(alpha)
                || cl
                    .ann
                    .as_ref()
                    .map(|f| f.free_ind_vars().contains(alpha))
                    .unwrap_or(false);
            if binder_free_in_repl && alpha_free_below {
                let mut avoid = m.free_vars();
                avoid.extend(cl.body.free_ind_vars());
                if let Some(f) = &cl.ann {
                    avoid.extend(f.free_ind_vars());
                }
                avoid.insert(alpha.to_owned());
                let fresh = fresh_name(&cl.ind_var, &avoid);
                cl.ann = cl
                    .ann
                    .map(|f| f.subst_ind(&cl.ind_var, &IndTerm::Var(fresh.clone())));
                cl.body = subst_ind_term(&cl.body, &cl.ind_var, &IndTerm::Var(fresh.clone()));
                cl.ind_var = fresh;
            }
            ExCase {
                scrut,
                clause: Box::new(ExClause {
                    ind_var: cl.ind_var,
                    var: cl.var,
                    ann: cl.ann.as_ref().map(sf),
                    body: subst_ind_term(&cl.body, alpha, m),
                }),
            }
        }
        Efq { target, body } => Efq {
            target: sf(target),
            body: Box::new(subst_ind_term(body, alpha, m)),
        },
        Par {
            comm,
            hyps,
            left,
            right,
        } => Par {
            comm: comm.clone(),
            hyps: hyps.as_ref().map(|h| Box::new((sf(&h.0), sf(&h.1)))),
            left: Box::new(subst_ind_term(left, alpha, m)),
            right: Box::new(subst_ind_term(right, alpha, m)),
        },
        Abort { ann } => Abort { ann: sf(ann) },
        PredLam { var, body } => PredLam {
            var: var.clone(),
            body: Box::new(subst_ind_term(body, alpha, m)),
        },
        PredApp(f, abs) => PredApp(
            Box::new(subst_ind_term(f, alpha, m)),
            Box::new(abs.subst_ind(alpha, m)),
        ),
    }
}

fn rebind_ind_binder(
    var: &str,
    body: &ProofTerm,
    alpha: &str,
    m: &IndTerm,
) -> (String, ProofTerm) {
    if m.free_vars().contains(var) && body.free_ind_vars().contains(alpha) {
        let mut avoid = m.free_vars();
        avoid.extend(body.free_ind_vars());
        avoid.insert(alpha.to_owned());
        let fresh = fresh_name(var, &avoid);
        let body2 = subst_ind_term(body, var, &IndTerm::Var(fresh.clone()));
        (fresh, body2)
    } else {
        (var.to_owned(), body.clone())
    }
}

/// t[abs/X] on predicate variables, rewriting every annotation.
pub fn subst_pred_term(t: &ProofTerm, x: &str, abs: &PredAbs) -> ProofTerm {
    use ProofTerm::*;
    let sf = |f: &Formula| f.subst_pred(x, abs);
    let sann = |f: &Option<Formula>| f.as_ref().map(sf);
    match t {
        Var { name, ann } => Var {
            name: name.clone(),
            ann: sann(ann),
        },
        Lam { var, ann, body } => Lam {
            var: var.clone(),
            ann: sann(ann),
            body: Box::new(subst_pred_term(body, x, abs)),
        },
        App(f, a) => App(
            Box::new(subst_pred_term(f, x, abs)),
            Box::new(subst_pred_term(a, x, abs)),
        ),
        Pair(a, b) => Pair(
            Box::new(subst_pred_term(a, x, abs)),
            Box::new(subst_pred_term(b, x, abs)),
        ),
        Proj(b, i) => Proj(Box::new(subst_pred_term(b, x, abs)), *i),
        Inj { side, ann, body } => Inj {
            side: *side,
            ann: sann(ann),
            body: Box::new(subst_pred_term(body, x, abs)),
        },
        Case { scrut, arms } => {
            let arm = |a: &CaseArm| CaseArm {
                var: a.var.clone(),
                ann: sann(&a.ann),
                body: subst_pred_term(&a.body, x, abs),
            };
            Case {
                scrut: Box::new(subst_pred_term(scrut, x, abs)),
                arms: Box::new((arm(&arms.0), arm(&arms.1))),
            }
        }
        IndLam { var, body } => {
            // Rename when the individual binder would capture an individual
            // variable free in the abstraction.
            let needs = abs.free_ind_vars().contains(var)
                && body.free_pred_vars().contains(x);
            let (var, body) = if needs {
                let mut avoid = abs.free_ind_vars();
                avoid.extend(body.free_ind_vars());
                let fresh = fresh_name(var, &avoid);
                (
                    fresh.clone(),
                    subst_ind_term(body, var, &IndTerm::Var(fresh)),
                )
            } else {
                (var.to_owned(), (**body).clone())
            };
            IndLam {
                var,
                body: Box::new(subst_pred_term(&body, x, abs)),
            }
        }
        IndApp(f, arg) => IndApp(Box::new(subst_pred_term(f, x, abs)), arg.clone()),
        Witness { witness, ann, body } => Witness {
            witness: witness.clone(),
            ann: sann(ann),
            body: Box::new(subst_pred_term(body, x, abs)),
        },
        ExCase { scrut, clause } => {
            let scrut = Box::new(subst_pred_term(scrut, x, abs));
            let mut cl = (**clause).clone();
            let mentions = cl.body.free_pred_vars().contains(x)
                || cl
                    .ann
                    .as_ref()
                    .map(|f| f.free_pred_vars().contains(x))
                    .unwrap_or(false);
            if mentions && abs.free_ind_vars().contains(&cl.ind_var) {
                let mut avoid = abs.free_ind_vars();
                avoid.extend(cl.body.free_ind_vars());
                if let Some(f) = &cl.ann {
                    avoid.extend(f.free_ind_vars());
                }
                let fresh = fresh_name(&cl.ind_var, &avoid);
                cl.ann = cl
                    .ann
                    .map(|f| f.subst_ind(&cl.ind_var, &IndTerm::Var(fresh.clone())));
                cl.body = subst_ind_term(&cl.body, &cl.ind_var, &IndTerm::Var(fresh.clone()));
                cl.ind_var = fresh;
            }
            ExCase {
                scrut,
                clause: Box::new(ExClause {
                    ind_var: cl.ind_var,
                    var: cl.var,
                    ann: cl.ann.as_ref().map(sf),
                    body: subst_pred_term(&cl.body, x, abs),
                }),
            }
        }
        Efq { target, body } => Efq {
            target: sf(target),
            body: Box::new(subst_pred_term(body, x, abs)),
        },
        Par {
            comm,
            hyps,
            left,
            right,
        } => Par {
            comm: comm.clone(),
            hyps: hyps.as_ref().map(|h| Box::new((sf(&h.0), sf(&h.1)))),
            left: Box::new(subst_pred_term(left, x, abs)),
            right: Box::new(subst_pred_term(right, x, abs)),
        },
        Abort { ann } => Abort { ann: sf(ann) },
        PredLam { var, body } => {
            if var == x {
                return t.clone();
            }
            let needs = abs.free_pred_vars().contains(var)
                && body.free_pred_vars().contains(x);
            let (var, body) = if needs {
                let mut avoid = abs.free_pred_vars();
                avoid.extend(body.free_pred_vars());
                avoid.insert(x.to_owned());
                let fresh = fresh_name(var, &avoid);
                (fresh.clone(), rename_pred_in_term(body, var, &fresh))
            } else {
                (var.to_owned(), (**body).clone())
            };
            PredLam {
                var,
                body: Box::new(subst_pred_term(&body, x, abs)),
            }
        }
        PredApp(f, a) => PredApp(
            Box::new(subst_pred_term(f, x, abs)),
            Box::new(a.subst_pred(x, abs)),
        ),
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
    fn identity_substitution() {
        // x[lam y. y / x] = lam y. y
        let t = v("x");
        let id = ProofTerm::lam("y", None, v("y"));
        assert_eq!(subst_proof(&t, "x", &id), id);
    }

    #[test]
    fn capture_forces_rename() {
        // (lam y. x y)[y/x] = lam y'. y y'
        let t = ProofTerm::lam("y", None, ProofTerm::app(v("x"), v("y")));
        let s = subst_proof(&t, "x", &v("y"));
        let expected = ProofTerm::lam("y2", None, ProofTerm::app(v("y"), v("y2")));
        assert!(alpha_eq_term(&s, &expected), "got {s:?}");
        // and specifically the binder is no longer literally `y`
        match &s {
            ProofTerm::Lam { var, .. } => assert_ne!(var, "y"),
            _ => panic!(),
        }
    }

    #[test]
    fn substitution_respects_shadowing() {
        // (lam x. x)[u/x] = lam x. x
        let t = ProofTerm::lam("x", None, v("x"));
        assert_eq!(subst_proof(&t, "x", &v("u")), t);
    }

    #[test]
    fn par_binder_can_capture_and_renames() {
        // (u par_a z)[a t / z] must rename the par binder
        let t = ProofTerm::par("a", None, v("u"), v("z"));
        let repl = ProofTerm::app(v("a"), v("t"));
        let s = subst_proof(&t, "z", &repl);
        match &s {
            ProofTerm::Par { comm, right, .. } => {
                assert_ne!(comm, "a");
                assert!(alpha_eq_term(right, &repl));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn subst_proof_var_with_itself_is_alpha_identity() {
        let t = ProofTerm::par(
            "a",
            None,
            ProofTerm::lam("x", None, ProofTerm::app(v("a"), v("x"))),
            v("y"),
        );
        let s = subst_proof(&t, "y", &v("y"));
        assert!(alpha_eq_term(&s, &t));
    }

    #[test]
    fn ind_subst_in_annotations() {
        use crate::formula::Formula;
        // (fun x : P(alpha) => x)[c/alpha] rewrites the annotation
        let p_alpha = Formula::Atom("P".into(), vec![IndTerm::Var("alpha".into())]);
        let p_c = Formula::Atom("P".into(), vec![IndTerm::Const("c".into())]);
        let t = ProofTerm::lam("x", Some(p_alpha), v("x"));
        let s = subst_ind_term(&t, "alpha", &IndTerm::Const("c".into()));
        assert_eq!(s, ProofTerm::lam("x", Some(p_c), v("x")));
    }

    #[test]
    fn substitution_lemma() {
        // t[u/x][v/y] = t[v/y][u[v/y]/x] when x not free in v, x != y
        let t = ProofTerm::app(
            ProofTerm::lam("z", None, ProofTerm::app(v("x"), v("z"))),
            v("y"),
        );
        let u = ProofTerm::app(v("y"), v("w"));
        let vv = ProofTerm::lam("q", None, v("q"));
        let lhs = subst_proof(&subst_proof(&t, "x", &u), "y", &vv);
        let rhs = subst_proof(
            &subst_proof(&t, "y", &vv),
            "x",
            &subst_proof(&u, "y", &vv),
        );
        assert!(alpha_eq_term(&lhs, &rhs));
    }
}
