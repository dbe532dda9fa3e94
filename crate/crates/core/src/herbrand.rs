//! Herbrand normal forms and witness extraction. A head normal form whose
//! elementary processes are all witness pairs encodes a Herbrand
//! disjunction; from such a form and its existential type we rebuild a
//! proof of the disjunction by injecting each leaf at its own position and
//! rejoining the branches with the original communication binders.

use thiserror::Error;

use crate::formula::{Formula, IndTerm};
use crate::normalize::{normalize, NormalizeOptions, Trace, TraceStatus};
use crate::reduction::{decompose, ParTree, ReduceEnv};
use crate::term::ProofTerm;
use crate::typecheck::{typecheck, Context, SystemFlavor, TypeError};

/// A term of the form (m0, v0) par ... par (mk, vk), kept both as the
/// original tree and as the flat leaf list.
#[derive(Debug, Clone)]
pub struct HerbrandForm {
    pub tree: ParTree,
    /// (witness, proof) per elementary process, left to right.
    pub leaves: Vec<(IndTerm, ProofTerm)>,
}

impl HerbrandForm {
    pub fn term(&self) -> ProofTerm {
        crate::reduction::ParallelDecomposition {
            tree: self.tree.clone(),
        }
        .renest()
    }
}

/// The extracted disjunction: all witnesses, the right-nested disjunction
/// over their instances, and a proof term for it.
#[derive(Debug, Clone)]
pub struct HerbrandResult {
    pub witnesses: Vec<IndTerm>,
    pub disjunction: Formula,
    pub proof: ProofTerm,
    pub source_trace: Trace,
}

#[derive(Debug, Clone, Error)]
pub enum HerbrandError {
    #[error("the term has free proof variables: {0:?}")]
    PreconditionFreeVars(Vec<String>),
    #[error("the term contains the abort constant")]
    PreconditionAbort,
    #[error("the term does not typecheck: {0}")]
    IllTyped(TypeError),
    #[error("the type `{0}` is not an existential formula")]
    TypeNotExistential(String),
    #[error("the form has type `{found}`, not the stated goal `{expected}`")]
    TypeMismatch { expected: String, found: String },
    #[error("kernel bug: {0}")]
    KernelBug(String),
}

/// Recognizes a Herbrand normal form: every elementary process must be a
/// witness pair.
pub fn as_herbrand_form(t: &ProofTerm) -> Option<HerbrandForm> {
    let decomposition = decompose(t);
    let mut leaves = Vec::new();
    for leaf in decomposition.leaves() {
        match leaf {
            ProofTerm::Witness { witness, body, .. } => {
                leaves.push((witness.clone(), (**body).clone()));
            }
            _ => return None,
        }
    }
    Some(HerbrandForm {
        tree: decomposition.tree,
        leaves,
    })
}

/// Builds the disjunction proof of a Herbrand form with stated type
/// `goal = exists v. matrix` under `ctx`: each leaf proof is injected at
/// its position into the full right-nested disjunction, and the branches
/// are rejoined by the original binders.
pub fn build_disjunction_proof(
    form: &HerbrandForm,
    goal: &Formula,
    ctx: &Context,
    flavor: SystemFlavor,
) -> Result<HerbrandResult, HerbrandError> {
    let Formula::ExistsInd(var, matrix) = goal else {
        return Err(HerbrandError::TypeNotExistential(goal.to_string()));
    };
    let term = form.term();
    let found = typecheck(ctx, &term, flavor).map_err(HerbrandError::IllTyped)?;
    if !found.alpha_eq(goal) {
        return Err(HerbrandError::TypeMismatch {
            expected: goal.to_string(),
            found: found.to_string(),
        });
    }

    let witnesses: Vec<IndTerm> = form.leaves.iter().map(|(m, _)| m.clone()).collect();
    let disjuncts: Vec<Formula> = witnesses.iter().map(|m| matrix.subst_ind(var, m)).collect();
    let last = disjuncts.len() - 1;
    // suffix[i] = disjuncts[i] | suffix[i+1], right-nested.
    let mut suffixes = vec![Formula::Falsum; disjuncts.len()];
    suffixes[last] = disjuncts[last].clone();
    for i in (0..last).rev() {
        suffixes[i] = Formula::or(disjuncts[i].clone(), suffixes[i + 1].clone());
    }
    let disjunction = suffixes[0].clone();

    let inject = |index: usize, body: &ProofTerm| -> ProofTerm {
        let mut term = if index < last {
            ProofTerm::Inj {
                side: 0,
                ann: Some(suffixes[index].clone()),
                body: Box::new(body.clone()),
            }
        } else {
            body.clone()
        };
        for j in (0..index).rev() {
            term = ProofTerm::Inj {
                side: 1,
                ann: Some(suffixes[j].clone()),
                body: Box::new(term),
            };
        }
        term
    };

    fn rebuild(
        tree: &ParTree,
        next_leaf: &mut usize,
        form: &HerbrandForm,
        inject: &impl Fn(usize, &ProofTerm) -> ProofTerm,
    ) -> ProofTerm {
        match tree {
            ParTree::Leaf(_) => {
                let index = *next_leaf;
                *next_leaf += 1;
                inject(index, &form.leaves[index].1)
            }
            ParTree::Node {
                comm,
                hyps,
                left,
                right,
            } => ProofTerm::par(
                comm.clone(),
                hyps.clone(),
                rebuild(left, next_leaf, form, inject),
                rebuild(right, next_leaf, form, inject),
            ),
        }
    }
    let mut next_leaf = 0;
    let proof = rebuild(&form.tree, &mut next_leaf, form, &inject);

    let proof_ty = typecheck(ctx, &proof, flavor).map_err(|e| {
        HerbrandError::KernelBug(format!("reconstructed disjunction proof does not typecheck: {e}"))
    })?;
    if !proof_ty.alpha_eq(&disjunction) {
        return Err(HerbrandError::KernelBug(format!(
            "reconstructed proof has type `{proof_ty}`, expected `{disjunction}`"
        )));
    }

    Ok(HerbrandResult {
        witnesses,
        disjunction,
        proof,
        source_trace: Trace {
            steps: Vec::new(),
            status: TraceStatus::Normalized,
            fuel_used: 0,
            final_term: term,
        },
    })
}

/// End-to-end extraction: checks the preconditions (closed, abort-free,
/// existentially typed), normalizes, recognizes the Herbrand form — the
/// normal form of such a term is one; anything else is a kernel bug — and
/// rebuilds the disjunction proof.
pub fn herbrand_pipeline(
    t: &ProofTerm,
    flavor: SystemFlavor,
    opts: &NormalizeOptions,
) -> Result<HerbrandResult, HerbrandError> {
    let free = t.free_proof_vars();
    if !free.is_empty() {
        return Err(HerbrandError::PreconditionFreeVars(
            free.into_iter().collect(),
        ));
    }
    if t.contains_abort() {
        return Err(HerbrandError::PreconditionAbort);
    }
    let ctx = Context::empty();
    let goal = typecheck(&ctx, t, flavor).map_err(HerbrandError::IllTyped)?;
    if !matches!(goal, Formula::ExistsInd(_, _)) {
        return Err(HerbrandError::TypeNotExistential(goal.to_string()));
    }
    let env = ReduceEnv::typed(flavor, ctx.clone());
    let trace = normalize(t, &env, opts);
    if trace.status == TraceStatus::FuelExhausted {
        return Err(HerbrandError::KernelBug(format!(
            "normalization of a typed term ran out of fuel after {} steps",
            trace.fuel_used
        )));
    }
    let Some(form) = as_herbrand_form(&trace.final_term) else {
        return Err(HerbrandError::KernelBug(format!(
            "normal form of a closed abort-free existential proof is not a Herbrand form: `{}`",
            trace.final_term
        )));
    };
    let mut result = build_disjunction_proof(&form, &goal, &ctx, flavor)?;
    result.source_trace = trace;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;
    use crate::sig::Signature;

    fn t(src: &str) -> ProofTerm {
        parse_term(src, &Signature::standard()).unwrap()
    }

    const EXISTS_DUMMETT: &str = "wit[exists b. P(c0) -> P(b)] c1 a \
         par[a : P(c0) -> P(c1)] \
         wit[exists b. P(c0) -> P(b)] c0 (fun x : P(c0) => x)";

    #[test]
    fn recognizes_herbrand_forms() {
        let form = as_herbrand_form(&t("wit c1 u par a wit c0 w")).unwrap();
        assert_eq!(form.leaves.len(), 2);
        assert_eq!(form.leaves[0].0, IndTerm::Const("c1".into()));
        assert_eq!(form.leaves[1].0, IndTerm::Const("c0".into()));

        assert!(as_herbrand_form(&t("wit c0 u")).is_some());
        assert!(as_herbrand_form(&t("z0 par a z0")).is_none());
    }

    #[test]
    fn pipeline_on_the_existential_dummett_term() {
        let result =
            herbrand_pipeline(&t(EXISTS_DUMMETT), SystemFlavor::Lc, &Default::default()).unwrap();
        assert_eq!(
            result.witnesses,
            vec![IndTerm::Const("c1".into()), IndTerm::Const("c0".into())]
        );
        assert_eq!(result.source_trace.steps.len(), 0);
        assert_eq!(
            result.disjunction.to_string(),
            "(P(c0) -> P(c1)) | (P(c0) -> P(c0))"
        );
        // u+ is inj0(a) par inj1(fun x => x) up to the injection annotations.
        match &result.proof {
            ProofTerm::Par { left, right, .. } => {
                assert!(matches!(**left, ProofTerm::Inj { side: 0, .. }));
                assert!(matches!(**right, ProofTerm::Inj { side: 1, .. }));
            }
            other => panic!("unexpected proof shape {other}"),
        }
    }

    #[test]
    fn pipeline_after_a_beta_step() {
        let wrapped = format!(
            "(fun z : (exists b. P(c0) -> P(b)) => z) ({EXISTS_DUMMETT})"
        );
        let result =
            herbrand_pipeline(&t(&wrapped), SystemFlavor::Lc, &Default::default()).unwrap();
        assert_eq!(result.source_trace.steps.len(), 1);
        assert_eq!(
            result.witnesses,
            vec![IndTerm::Const("c1".into()), IndTerm::Const("c0".into())]
        );
    }

    #[test]
    fn pipeline_on_intuitionistic_witness() {
        let result = herbrand_pipeline(
            &t("wit[exists b. P(c0) -> P(b)] c0 (fun x : P(c0) => x)"),
            SystemFlavor::Lc,
            &Default::default(),
        )
        .unwrap();
        assert_eq!(result.witnesses, vec![IndTerm::Const("c0".into())]);
        assert_eq!(result.disjunction.to_string(), "P(c0) -> P(c0)");
    }

    #[test]
    fn pipeline_preconditions() {
        // Free variable.
        let open = t("wit[exists b. P(b)] c0 x");
        assert!(matches!(
            herbrand_pipeline(&open, SystemFlavor::Lc, &Default::default()),
            Err(HerbrandError::PreconditionFreeVars(_))
        ));
        // Abort.
        let aborting = t(
            "wit[exists b. P(c0) -> P(b)] c0 (abort[(P(c0) -> bot) -> P(c0) -> P(c0)] \
             (fun q : P(c0) => q))",
        );
        assert!(matches!(
            herbrand_pipeline(&aborting, SystemFlavor::LcStar, &Default::default()),
            Err(HerbrandError::PreconditionAbort)
        ));
        // Not existential.
        let id = t("fun x : P(c0) => x");
        assert!(matches!(
            herbrand_pipeline(&id, SystemFlavor::Lc, &Default::default()),
            Err(HerbrandError::TypeNotExistential(_))
        ));
    }

    #[test]
    fn three_leaf_right_nested_disjunction() {
        let e = "exists b. P(c0) -> P(b)";
        let src = format!(
            "wit[{e}] c0 (fun x : P(c0) => x) \
             par[a : P(c1) -> P(c0)] \
             (wit[{e}] c1 a par[b : P(c2) -> P(c0)] wit[{e}] c2 b)"
        );
        let result =
            herbrand_pipeline(&t(&src), SystemFlavor::Lc, &Default::default()).unwrap();
        assert_eq!(result.witnesses.len(), 3);
        assert_eq!(
            result.disjunction.to_string(),
            "(P(c0) -> P(c0)) | (P(c0) -> P(c1)) | (P(c0) -> P(c2))"
        );
    }
}
