//! Type checking for the four system flavors. Terms must be fully
//! annotated (Church style); the checker synthesizes the unique type of a
//! term under a context or reports why there is none.

use std::fmt;

use thiserror::Error;

use crate::formula::Formula;
use crate::term::{CaseArm, ProofTerm};

/// Which system the judgment lives in. The starred flavors admit the abort
/// constant; the subscript-2 flavors admit predicate variables, predicate
/// abstraction and application.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemFlavor {
    Lc,
    LcStar,
    Lc2,
    Lc2Star,
}

impl SystemFlavor {
    pub fn admits_abort(self) -> bool {
        matches!(self, SystemFlavor::LcStar | SystemFlavor::Lc2Star)
    }

    pub fn second_order(self) -> bool {
        matches!(self, SystemFlavor::Lc2 | SystemFlavor::Lc2Star)
    }

    /// The starred extension of this flavor (used when running the
    /// simulation, whose realizers live in the starred system).
    pub fn starred(self) -> SystemFlavor {
        match self {
            SystemFlavor::Lc | SystemFlavor::LcStar => SystemFlavor::LcStar,
            SystemFlavor::Lc2 | SystemFlavor::Lc2Star => SystemFlavor::Lc2Star,
        }
    }
}

impl fmt::Display for SystemFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SystemFlavor::Lc => "lc",
            SystemFlavor::LcStar => "lcstar",
            SystemFlavor::Lc2 => "lc2",
            SystemFlavor::Lc2Star => "lc2star",
        };
        write!(f, "{name}")
    }
}

impl std::str::FromStr for SystemFlavor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lc" => Ok(SystemFlavor::Lc),
            "lcstar" => Ok(SystemFlavor::LcStar),
            "lc2" => Ok(SystemFlavor::Lc2),
            "lc2star" => Ok(SystemFlavor::Lc2Star),
            other => Err(format!(
                "unknown flavor `{other}` (expected lc, lcstar, lc2 or lc2star)"
            )),
        }
    }
}

/// A typing context: an ordered list of proof-variable bindings. Lookup is
/// by name, innermost binding first.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Context {
    entries: Vec<(String, Formula)>,
}

impl Context {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a context from user-supplied bindings; duplicate names are
    /// rejected.
    pub fn from_bindings(
        bindings: impl IntoIterator<Item = (String, Formula)>,
    ) -> Result<Self, TypeError> {
        let mut ctx = Context::empty();
        for (name, formula) in bindings {
            if ctx.lookup(&name).is_some() {
                return Err(TypeError::DuplicateBinding(name));
            }
            ctx.entries.push((name, formula));
        }
        Ok(ctx)
    }

    pub fn lookup(&self, name: &str) -> Option<&Formula> {
        self.entries
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, f)| f)
    }

    /// Extends the context for checking under a binder; shadowing is fine
    /// here.
    pub fn extended(&self, name: impl Into<String>, formula: Formula) -> Context {
        let mut ctx = self.clone();
        ctx.entries.push((name.into(), formula));
        ctx
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Formula)> {
        self.entries.iter().map(|(n, f)| (n.as_str(), f))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound proof variable `{0}`")]
    UnboundVariable(String),
    #[error("duplicate context binding `{0}`")]
    DuplicateBinding(String),
    #[error("missing annotation on {0}")]
    MissingAnnotation(&'static str),
    #[error("annotation mismatch on {construct}: declared `{declared}`, derived `{derived}`")]
    AnnotationMismatch {
        construct: &'static str,
        declared: String,
        derived: String,
    },
    #[error("{construct} eliminates `{found}`, which is not of the required shape ({expected})")]
    ShapeMismatch {
        construct: &'static str,
        expected: &'static str,
        found: String,
    },
    #[error("branches disagree: `{left}` vs `{right}`")]
    BranchMismatch { left: String, right: String },
    #[error("argument has type `{found}`, expected `{expected}`")]
    ArgumentMismatch { expected: String, found: String },
    #[error("eigenvariable violation: {0}")]
    EigenvariableViolation(String),
    #[error("par hypotheses are not dual: `{left}` / `{right}`")]
    ParHypothesesNotDual { left: String, right: String },
    #[error("the abort constant is not admitted in flavor {0}")]
    AbortNotAdmitted(SystemFlavor),
    #[error("second-order syntax is not admitted in flavor {0}")]
    SecondOrderNotAdmitted(SystemFlavor),
    #[error("ex falso target `{0}` is not atomic")]
    EfqNonAtomicTarget(String),
    #[error("existential elimination binder `{0}` occurs free in the scrutinee type")]
    ExCaseBinderNotFresh(String),
}

fn check_first_order(f: &Formula, flavor: SystemFlavor) -> Result<(), TypeError> {
    if !flavor.second_order() && f.is_second_order() {
        return Err(TypeError::SecondOrderNotAdmitted(flavor));
    }
    Ok(())
}

/// Synthesizes the type of `t` under `ctx`. All side conditions of the
/// typing rules are enforced.
pub fn typecheck(ctx: &Context, t: &ProofTerm, flavor: SystemFlavor) -> Result<Formula, TypeError> {
    match t {
        ProofTerm::Var { name, ann } => {
            let formula = ctx
                .lookup(name)
                .ok_or_else(|| TypeError::UnboundVariable(name.clone()))?;
            if let Some(a) = ann {
                if !a.alpha_eq(formula) {
                    return Err(TypeError::AnnotationMismatch {
                        construct: "variable",
                        declared: a.to_string(),
                        derived: formula.to_string(),
                    });
                }
            }
            Ok(formula.clone())
        }
        ProofTerm::Lam { var, ann, body } => {
            let domain = ann
                .clone()
                .ok_or(TypeError::MissingAnnotation("a lambda binder"))?;
            check_first_order(&domain, flavor)?;
            let codomain = typecheck(&ctx.extended(var.clone(), domain.clone()), body, flavor)?;
            Ok(Formula::imp(domain, codomain))
        }
        ProofTerm::App(f, x) => {
            let fun_ty = typecheck(ctx, f, flavor)?;
            let Formula::Imp(domain, codomain) = fun_ty else {
                return Err(TypeError::ShapeMismatch {
                    construct: "application",
                    expected: "an implication",
                    found: fun_ty.to_string(),
                });
            };
            let arg_ty = typecheck(ctx, x, flavor)?;
            if !arg_ty.alpha_eq(&domain) {
                return Err(TypeError::ArgumentMismatch {
                    expected: domain.to_string(),
                    found: arg_ty.to_string(),
                });
            }
            Ok(*codomain)
        }
        ProofTerm::Pair(a, b) => Ok(Formula::and(
            typecheck(ctx, a, flavor)?,
            typecheck(ctx, b, flavor)?,
        )),
        ProofTerm::Proj(body, i) => {
            let ty = typecheck(ctx, body, flavor)?;
            let Formula::And(l, r) = ty else {
                return Err(TypeError::ShapeMismatch {
                    construct: "projection",
                    expected: "a conjunction",
                    found: ty.to_string(),
                });
            };
            Ok(if *i == 0 { *l } else { *r })
        }
        ProofTerm::Inj { side, ann, body } => {
            let target = ann
                .clone()
                .ok_or(TypeError::MissingAnnotation("an injection"))?;
            check_first_order(&target, flavor)?;
            let Formula::Or(l, r) = &target else {
                return Err(TypeError::ShapeMismatch {
                    construct: "injection",
                    expected: "a disjunction",
                    found: target.to_string(),
                });
            };
            let body_ty = typecheck(ctx, body, flavor)?;
            let expected = if *side == 0 { l } else { r };
            if !body_ty.alpha_eq(expected) {
                return Err(TypeError::AnnotationMismatch {
                    construct: "injection",
                    declared: expected.to_string(),
                    derived: body_ty.to_string(),
                });
            }
            Ok(target)
        }
        ProofTerm::Case { scrut, arms } => {
            let scrut_ty = typecheck(ctx, scrut, flavor)?;
            let Formula::Or(l, r) = scrut_ty else {
                return Err(TypeError::ShapeMismatch {
                    construct: "case",
                    expected: "a disjunction",
                    found: scrut_ty.to_string(),
                });
            };
            let check_arm = |arm: &CaseArm, hyp: &Formula| -> Result<Formula, TypeError> {
                if let Some(a) = &arm.ann {
                    if !a.alpha_eq(hyp) {
                        return Err(TypeError::AnnotationMismatch {
                            construct: "case arm",
                            declared: a.to_string(),
                            derived: hyp.to_string(),
                        });
                    }
                }
                typecheck(&ctx.extended(arm.var.clone(), hyp.clone()), &arm.body, flavor)
            };
            let left_ty = check_arm(&arms.0, &l)?;
            let right_ty = check_arm(&arms.1, &r)?;
            if !left_ty.alpha_eq(&right_ty) {
                return Err(TypeError::BranchMismatch {
                    left: left_ty.to_string(),
                    right: right_ty.to_string(),
                });
            }
            Ok(left_ty)
        }
        ProofTerm::IndLam { var, body } => {
            let body_ty = typecheck(ctx, body, flavor)?;
            // The generalized variable must not occur free in the type of
            // any free variable of the body.
            for free in body.free_proof_vars() {
                if let Some(hyp) = ctx.lookup(&free) {
                    if hyp.free_ind_vars().contains(var) {
                        return Err(TypeError::EigenvariableViolation(format!(
                            "`{var}` occurs free in the type of `{free}`"
                        )));
                    }
                }
            }
            Ok(Formula::forall(var.clone(), body_ty))
        }
        ProofTerm::IndApp(f, m) => {
            let fun_ty = typecheck(ctx, f, flavor)?;
            let Formula::ForallInd(v, body) = fun_ty else {
                return Err(TypeError::ShapeMismatch {
                    construct: "individual application",
                    expected: "a universal formula",
                    found: fun_ty.to_string(),
                });
            };
            Ok(body.subst_ind(&v, m))
        }
        ProofTerm::Witness { witness, ann, body } => {
            let target = ann
                .clone()
                .ok_or(TypeError::MissingAnnotation("a witness pair"))?;
            check_first_order(&target, flavor)?;
            let Formula::ExistsInd(v, matrix) = &target else {
                return Err(TypeError::ShapeMismatch {
                    construct: "witness pair",
                    expected: "an existential formula",
                    found: target.to_string(),
                });
            };
            let expected = matrix.subst_ind(v, witness);
            let body_ty = typecheck(ctx, body, flavor)?;
            if !body_ty.alpha_eq(&expected) {
                return Err(TypeError::AnnotationMismatch {
                    construct: "witness pair",
                    declared: expected.to_string(),
                    derived: body_ty.to_string(),
                });
            }
            Ok(target)
        }
        ProofTerm::ExCase { scrut, clause } => {
            let scrut_ty = typecheck(ctx, scrut, flavor)?;
            let Formula::ExistsInd(v, matrix) = &scrut_ty else {
                return Err(TypeError::ShapeMismatch {
                    construct: "existential elimination",
                    expected: "an existential formula",
                    found: scrut_ty.to_string(),
                });
            };
            // Open the existential with the clause's own binder.
            let opened = if *v == clause.ind_var {
                (**matrix).clone()
            } else {
                if matrix.free_ind_vars().contains(&clause.ind_var) {
                    return Err(TypeError::ExCaseBinderNotFresh(clause.ind_var.clone()));
                }
                matrix.subst_ind(v, &crate::formula::IndTerm::Var(clause.ind_var.clone()))
            };
            if let Some(a) = &clause.ann {
                if !a.alpha_eq(&opened) {
                    return Err(TypeError::AnnotationMismatch {
                        construct: "existential elimination binder",
                        declared: a.to_string(),
                        derived: opened.to_string(),
                    });
                }
            }
            let body_ctx = ctx.extended(clause.var.clone(), opened);
            let result = typecheck(&body_ctx, &clause.body, flavor)?;
            // Eigenvariable conditions: the opened variable is not free in
            // the conclusion nor in the type of any other free variable of
            // the body.
            if result.free_ind_vars().contains(&clause.ind_var) {
                return Err(TypeError::EigenvariableViolation(format!(
                    "`{}` occurs free in the conclusion `{result}`",
                    clause.ind_var
                )));
            }
            for free in clause.body.free_proof_vars() {
                if free == clause.var {
                    continue;
                }
                if let Some(hyp) = ctx.lookup(&free) {
                    if hyp.free_ind_vars().contains(&clause.ind_var) {
                        return Err(TypeError::EigenvariableViolation(format!(
                            "`{}` occurs free in the type of `{free}`",
                            clause.ind_var
                        )));
                    }
                }
            }
            Ok(result)
        }
        ProofTerm::Efq { target, body } => {
            check_first_order(target, flavor)?;
            if !target.is_atomic() {
                return Err(TypeError::EfqNonAtomicTarget(target.to_string()));
            }
            let body_ty = typecheck(ctx, body, flavor)?;
            if !matches!(body_ty, Formula::Falsum) {
                return Err(TypeError::ShapeMismatch {
                    construct: "ex falso",
                    expected: "bot",
                    found: body_ty.to_string(),
                });
            }
            Ok(target.clone())
        }
        ProofTerm::Par {
            comm,
            hyps,
            left,
            right,
        } => {
            let hyps = hyps
                .as_ref()
                .ok_or(TypeError::MissingAnnotation("a par binder"))?;
            let (left_hyp, right_hyp) = (&hyps.0, &hyps.1);
            check_first_order(left_hyp, flavor)?;
            check_first_order(right_hyp, flavor)?;
            let dual = match (left_hyp, right_hyp) {
                (Formula::Imp(a, b), Formula::Imp(b2, a2)) => {
                    a.alpha_eq(a2) && b.alpha_eq(b2)
                }
                _ => false,
            };
            if !dual {
                return Err(TypeError::ParHypothesesNotDual {
                    left: left_hyp.to_string(),
                    right: right_hyp.to_string(),
                });
            }
            let left_ty = typecheck(&ctx.extended(comm.clone(), left_hyp.clone()), left, flavor)?;
            let right_ty =
                typecheck(&ctx.extended(comm.clone(), right_hyp.clone()), right, flavor)?;
            if !left_ty.alpha_eq(&right_ty) {
                return Err(TypeError::BranchMismatch {
                    left: left_ty.to_string(),
                    right: right_ty.to_string(),
                });
            }
            Ok(left_ty)
        }
        ProofTerm::Abort { ann } => {
            if !flavor.admits_abort() {
                return Err(TypeError::AbortNotAdmitted(flavor));
            }
            check_first_order(ann, flavor)?;
            if !matches!(ann, Formula::Imp(_, _)) {
                return Err(TypeError::ShapeMismatch {
                    construct: "abort",
                    expected: "an implication",
                    found: ann.to_string(),
                });
            }
            Ok(ann.clone())
        }
        ProofTerm::PredLam { var, body } => {
            if !flavor.second_order() {
                return Err(TypeError::SecondOrderNotAdmitted(flavor));
            }
            let body_ty = typecheck(ctx, body, flavor)?;
            for free in body.free_proof_vars() {
                if let Some(hyp) = ctx.lookup(&free) {
                    if hyp.free_pred_vars().contains(var) {
                        return Err(TypeError::EigenvariableViolation(format!(
                            "`{var}` occurs free in the type of `{free}`"
                        )));
                    }
                }
            }
            Ok(Formula::forall_pred(var.clone(), body_ty))
        }
        ProofTerm::PredApp(f, abs) => {
            if !flavor.second_order() {
                return Err(TypeError::SecondOrderNotAdmitted(flavor));
            }
            let fun_ty = typecheck(ctx, f, flavor)?;
            let Formula::ForallPred(x, body) = fun_ty else {
                return Err(TypeError::ShapeMismatch {
                    construct: "predicate application",
                    expected: "a second-order universal",
                    found: fun_ty.to_string(),
                });
            };
            Ok(body.subst_pred(&x, abs))
        }
    }
}

/// What `audit_step` certifies for one reduction step.
#[derive(Debug, Clone)]
pub struct AuditReport {
    pub type_before: Formula,
    pub type_after: Formula,
}

#[derive(Debug, Clone, Error)]
pub enum AuditError {
    #[error("the pre-step term does not typecheck: {0}")]
    BeforeIllTyped(TypeError),
    #[error(
        "subject reduction violation: type changed from `{before}` to `{after}` (kernel bug)"
    )]
    TypeChanged { before: String, after: String },
    #[error("subject reduction violation: step does not typecheck ({0}) (kernel bug)")]
    AfterIllTyped(TypeError),
    #[error("subject reduction violation: new free variables {0:?} (kernel bug)")]
    NewFreeVariables(Vec<String>),
}

/// Checks one reduction step for subject reduction: the type is preserved
/// and no free variables appear. A failure indicates a kernel bug, not a
/// user error.
pub fn audit_step(
    ctx: &Context,
    before: &ProofTerm,
    after: &ProofTerm,
    flavor: SystemFlavor,
) -> Result<AuditReport, AuditError> {
    let type_before = typecheck(ctx, before, flavor).map_err(AuditError::BeforeIllTyped)?;
    let type_after = typecheck(ctx, after, flavor).map_err(AuditError::AfterIllTyped)?;
    if !type_before.alpha_eq(&type_after) {
        return Err(AuditError::TypeChanged {
            before: type_before.to_string(),
            after: type_after.to_string(),
        });
    }
    let fv_before = before.free_proof_vars();
    let new: Vec<String> = after
        .free_proof_vars()
        .into_iter()
        .filter(|v| !fv_before.contains(v))
        .collect();
    if !new.is_empty() {
        return Err(AuditError::NewFreeVariables(new));
    }
    Ok(AuditReport {
        type_before,
        type_after,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_formula, parse_term};
    use crate::sig::Signature;

    fn check(src: &str, flavor: SystemFlavor) -> Result<Formula, TypeError> {
        let sig = Signature::standard();
        let t = parse_term(src, &sig).expect("parse");
        typecheck(&Context::empty(), &t, flavor)
    }

    fn formula(src: &str) -> Formula {
        parse_formula(src, &Signature::standard()).unwrap()
    }

    #[test]
    fn dummett_axiom_instance() {
        let d = "(P(c0) -> Q(c0)) | (Q(c0) -> P(c0))";
        let src = format!("inj0[{d}](a) par[a : P(c0) -> Q(c0)] inj1[{d}](a)");
        let ty = check(&src, SystemFlavor::Lc).unwrap();
        assert!(ty.alpha_eq(&formula(d)));
    }

    #[test]
    fn weak_excluded_middle_term() {
        // The two-branch proof of ~A | ~~A at A := P(c0).
        let d = "(P(c0) -> bot) | ((P(c0) -> bot) -> bot)";
        let src = format!(
            "inj0[{d}](fun x : P(c0) => a (fun y : P(c0) -> bot => y x) x) \
             par[a : ((P(c0) -> bot) -> bot) -> P(c0) -> bot] \
             inj1[{d}](fun z : P(c0) -> bot => a z z)"
        );
        let ty = check(&src, SystemFlavor::Lc).unwrap();
        assert!(ty.alpha_eq(&formula(d)));
    }

    #[test]
    fn existential_dummett_example() {
        let e = "exists b. P(c0) -> P(b)";
        let src = format!(
            "wit[{e}] c1 a par[a : P(c0) -> P(c1)] wit[{e}] c0 (fun x : P(c0) => x)"
        );
        let ty = check(&src, SystemFlavor::Lc).unwrap();
        assert!(ty.alpha_eq(&formula(e)));
    }

    #[test]
    fn abort_needs_star_flavor() {
        let src = "abort[P(c0) -> Q(c0)]";
        assert!(matches!(
            check(src, SystemFlavor::Lc),
            Err(TypeError::AbortNotAdmitted(_))
        ));
        assert!(check(src, SystemFlavor::LcStar).is_ok());
    }

    #[test]
    fn second_order_needs_subscript_flavor() {
        let src = "Fun X => fun x : X(c0) => x";
        assert!(matches!(
            check(src, SystemFlavor::Lc),
            Err(TypeError::SecondOrderNotAdmitted(_))
        ));
        let ty = check(src, SystemFlavor::Lc2).unwrap();
        assert_eq!(ty.to_string(), "Forall X. X(c0) -> X(c0)");
    }

    #[test]
    fn predicate_application_instantiates() {
        let src = "(Fun X => fun x : X(c0) => x) @ {b. P(b)}";
        let ty = check(src, SystemFlavor::Lc2).unwrap();
        assert!(ty.alpha_eq(&formula("P(c0) -> P(c0)")));
    }

    #[test]
    fn par_hypotheses_must_be_dual() {
        let src = "x par[a : P(c0) -> Q(c0) / P(c0) -> Q(c0)] x";
        let sig = Signature::standard();
        let t = parse_term(src, &sig).unwrap();
        let ctx =
            Context::from_bindings([("x".to_owned(), formula("P(c1)"))]).unwrap();
        assert!(matches!(
            typecheck(&ctx, &t, SystemFlavor::Lc),
            Err(TypeError::ParHypothesesNotDual { .. })
        ));
    }

    #[test]
    fn efq_target_must_be_atomic() {
        let ctx = Context::from_bindings([("x".to_owned(), Formula::Falsum)]).unwrap();
        let sig = Signature::standard();
        let t = parse_term("efq[P(c0) -> P(c0)](x)", &sig).unwrap();
        assert!(matches!(
            typecheck(&ctx, &t, SystemFlavor::Lc),
            Err(TypeError::EfqNonAtomicTarget(_))
        ));
        let ok = parse_term("efq[P(c0)](x)", &sig).unwrap();
        assert!(typecheck(&ctx, &ok, SystemFlavor::Lc).is_ok());
    }

    #[test]
    fn forall_eigenvariable_enforced() {
        // ifun b => x with x : P(b) in the context violates the condition.
        let ctx = Context::from_bindings([("x".to_owned(), formula("P(b)"))]).unwrap();
        let sig = Signature::standard();
        let t = parse_term("ifun b => x", &sig).unwrap();
        assert!(matches!(
            typecheck(&ctx, &t, SystemFlavor::Lc),
            Err(TypeError::EigenvariableViolation(_))
        ));
        // but generalizing an unrelated variable is fine
        let t2 = parse_term("ifun q => x", &sig).unwrap();
        let ty = typecheck(&ctx, &t2, SystemFlavor::Lc).unwrap();
        assert!(ty.alpha_eq(&formula("forall q. P(b)")));
    }

    #[test]
    fn excase_eigenvariable_enforced() {
        // u [excase (b, x) => wit[exists q. P(q)] b x] is fine, but leaking
        // b into the conclusion is not.
        let ctx = Context::from_bindings([("u".to_owned(), formula("exists b. P(b)"))]).unwrap();
        let sig = Signature::standard();
        let ok = parse_term("u [excase (b, x) => wit[exists q. P(q)] b x]", &sig).unwrap();
        let ty = typecheck(&ctx, &ok, SystemFlavor::Lc).unwrap();
        assert!(ty.alpha_eq(&formula("exists q. P(q)")));

        let bad = parse_term("u [excase (b, x) => x]", &sig).unwrap();
        assert!(matches!(
            typecheck(&ctx, &bad, SystemFlavor::Lc),
            Err(TypeError::EigenvariableViolation(_))
        ));
    }

    #[test]
    fn weakening_preserves_types() {
        let d = "(P(c0) -> Q(c0)) | (Q(c0) -> P(c0))";
        let src = format!("inj0[{d}](a) par[a : P(c0) -> Q(c0)] inj1[{d}](a)");
        let sig = Signature::standard();
        let t = parse_term(&src, &sig).unwrap();
        let ty1 = typecheck(&Context::empty(), &t, SystemFlavor::Lc).unwrap();
        let ctx = Context::from_bindings([("fresh".to_owned(), formula("Q(c1)"))]).unwrap();
        let ty2 = typecheck(&ctx, &t, SystemFlavor::Lc).unwrap();
        assert!(ty1.alpha_eq(&ty2));
    }

    #[test]
    fn flavor_monotonicity() {
        let e = "exists b. P(c0) -> P(b)";
        let src = format!(
            "wit[{e}] c1 a par[a : P(c0) -> P(c1)] wit[{e}] c0 (fun x : P(c0) => x)"
        );
        let sig = Signature::standard();
        let t = parse_term(&src, &sig).unwrap();
        let base = typecheck(&Context::empty(), &t, SystemFlavor::Lc).unwrap();
        for flavor in [SystemFlavor::LcStar, SystemFlavor::Lc2, SystemFlavor::Lc2Star] {
            let ty = typecheck(&Context::empty(), &t, flavor).unwrap();
            assert!(ty.alpha_eq(&base));
        }
    }

    #[test]
    fn audit_step_detects_retyped_branch() {
        let d = "(P(c0) -> Q(c0)) | (Q(c0) -> P(c0))";
        let src = format!("inj0[{d}](a) par[a : P(c0) -> Q(c0)] inj1[{d}](a)");
        let sig = Signature::standard();
        let t = parse_term(&src, &sig).unwrap();
        // Identical step passes trivially.
        assert!(audit_step(&Context::empty(), &t, &t, SystemFlavor::Lc).is_ok());
        // A corrupted right branch is flagged.
        let d2 = "(P(c0) -> Q(c0)) | (Q(c1) -> P(c0))";
        let bad = parse_term(
            &format!("inj0[{d}](a) par[a : P(c0) -> Q(c0)] inj1[{d2}](a)"),
            &sig,
        )
        .unwrap();
        assert!(audit_step(&Context::empty(), &t, &bad, SystemFlavor::Lc).is_err());
    }
}
