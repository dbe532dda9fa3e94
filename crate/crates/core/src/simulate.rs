//! Executable check of local simulation: every head step a parallel
//! composition performs inside one branch is replayed by the branch alone
//! once the communication variable is replaced by a function that aborts
//! its continuation and restores the opposite branch.

use thiserror::Error;

use crate::formula::{fresh_name, Formula};
use crate::reduction::{contract, leftmost_head_redex, RedexKind, ReduceEnv};
use crate::subst::subst_proof;
use crate::term::{alpha_eq_term, ProofTerm};
use crate::typecheck::{typecheck, Context, SystemFlavor, TypeError};

/// A subject `u par_a v` together with the two simulating terms built from
/// its branches and annotations.
#[derive(Debug, Clone)]
pub struct SimulationInstance {
    pub subject: ProofTerm,
    pub comm: String,
    /// A -> B, the hypothesis of the left branch.
    pub hyp_left: Formula,
    /// B -> A, the hypothesis of the right branch.
    pub hyp_right: Formula,
    /// C, the type of the subject.
    pub subject_type: Formula,
    /// fun x : A => abort[C -> B] (v[fun y : B => x / a])
    pub left_sim: ProofTerm,
    /// fun z : B => abort[C -> A] (u[fun y : A => z / a])
    pub right_sim: ProofTerm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchSide {
    Left,
    Right,
}

/// Result of replaying one subject step.
#[derive(Debug, Clone)]
pub struct SimStepReport {
    pub subject_step: usize,
    pub branch: BranchSide,
    pub kind: RedexKind,
    /// Length of the simulating reduction (at least 1).
    pub sim_steps: usize,
    /// How many of those steps used the abort rule.
    pub abort_steps: usize,
}

#[derive(Debug, Clone)]
pub struct SimulationReport {
    pub subject_steps: usize,
    pub steps: Vec<SimStepReport>,
}

#[derive(Debug, Clone, Error)]
pub enum SimError {
    #[error("the subject is not a parallel composition")]
    NotAPar,
    #[error("the subject's par binder carries no hypotheses")]
    MissingHyps,
    #[error("the subject does not typecheck: {0}")]
    IllTyped(TypeError),
    #[error("simulation failure at subject step {subject_step}: {detail} (kernel bug or mis-built instance)")]
    SimulationFailure { subject_step: usize, detail: String },
    #[error("the subject did not normalize within the step budget")]
    SubjectFuelExhausted,
}

/// The term substituted for the communication variable when simulating
/// steps of one branch: it discards its continuation via abort and runs the
/// opposite branch with the received message.
fn make_simulator(
    opposite: &ProofTerm,
    comm: &str,
    own_hyp: &Formula,
    opposite_hyp: &Formula,
    subject_type: &Formula,
) -> ProofTerm {
    // own_hyp = A -> B: the simulator must have type A -> B; the message
    // sent into the opposite branch must have type B -> A.
    let (domain, codomain) = match own_hyp {
        Formula::Imp(a, b) => ((**a).clone(), (**b).clone()),
        other => (other.clone(), other.clone()),
    };
    let msg_domain = match opposite_hyp {
        Formula::Imp(b, _) => (**b).clone(),
        other => other.clone(),
    };
    let mut avoid = opposite.free_proof_vars();
    avoid.insert(comm.to_owned());
    let x = fresh_name("x", &avoid);
    avoid.insert(x.clone());
    let y = fresh_name("y", &avoid);
    let message = ProofTerm::lam(y, Some(msg_domain), ProofTerm::var(x.clone()));
    let body = ProofTerm::app(
        ProofTerm::Abort {
            ann: Formula::imp(subject_type.clone(), codomain),
        },
        subst_proof(opposite, comm, &message),
    );
    ProofTerm::lam(x, Some(domain), body)
}

/// Builds the simulation instance for a typed parallel composition.
pub fn build_instance(
    subject: &ProofTerm,
    ctx: &Context,
    flavor: SystemFlavor,
) -> Result<SimulationInstance, SimError> {
    let ProofTerm::Par {
        comm,
        hyps,
        left,
        right,
    } = subject
    else {
        return Err(SimError::NotAPar);
    };
    let hyps = hyps.as_ref().ok_or(SimError::MissingHyps)?;
    let subject_type =
        typecheck(ctx, subject, flavor.starred()).map_err(SimError::IllTyped)?;
    let left_sim = make_simulator(right, comm, &hyps.0, &hyps.1, &subject_type);
    let right_sim = make_simulator(left, comm, &hyps.1, &hyps.0, &subject_type);
    Ok(SimulationInstance {
        subject: subject.clone(),
        comm: comm.clone(),
        hyp_left: hyps.0.clone(),
        hyp_right: hyps.1.clone(),
        subject_type,
        left_sim,
        right_sim,
    })
}

/// Runs the subject to normal form and replays every step in the branch it
/// rewrites: a step from u to u' must give u[sim/a] ->+ u'[sim/a], with the
/// simulator rebuilt from the opposite branch current at that step.
pub fn check_simulation(
    instance: &SimulationInstance,
    max_steps: usize,
    ctx: &Context,
    flavor: SystemFlavor,
) -> Result<SimulationReport, SimError> {
    let env = ReduceEnv::typed(flavor.starred(), ctx.clone());
    let mut current = instance.subject.clone();
    let mut reports = Vec::new();
    for subject_step in 1..=max_steps {
        let Some(site) = leftmost_head_redex(&current, &env) else {
            return Ok(SimulationReport {
                subject_steps: reports.len(),
                steps: reports,
            });
        };
        let next = contract(&current, &site, &env).expect("fresh site");
        let branch = if site.path.first() == Some(&0) {
            BranchSide::Left
        } else if site.path.first() == Some(&1) {
            BranchSide::Right
        } else if site.kind == RedexKind::DLeft {
            BranchSide::Left
        } else {
            BranchSide::Right
        };
        let (before_branch, after_branch, simulator) = {
            let (ProofTerm::Par { left, right, .. }, ProofTerm::Par { left: nl, right: nr, .. }) =
                (&current, &next)
            else {
                return Err(SimError::SimulationFailure {
                    subject_step,
                    detail: "subject lost its top-level par".to_owned(),
                });
            };
            match branch {
                BranchSide::Left => {
                    let sim = make_simulator(
                        right,
                        &instance.comm,
                        &instance.hyp_left,
                        &instance.hyp_right,
                        &instance.subject_type,
                    );
                    ((**left).clone(), (**nl).clone(), sim)
                }
                BranchSide::Right => {
                    let sim = make_simulator(
                        left,
                        &instance.comm,
                        &instance.hyp_right,
                        &instance.hyp_left,
                        &instance.subject_type,
                    );
                    ((**right).clone(), (**nr).clone(), sim)
                }
            }
        };
        let sim_before = subst_proof(&before_branch, &instance.comm, &simulator);
        let sim_target = subst_proof(&after_branch, &instance.comm, &simulator);
        let mut sim_current = sim_before;
        let mut sim_steps = 0;
        let mut abort_steps = 0;
        loop {
            if sim_steps >= max_steps {
                return Err(SimError::SimulationFailure {
                    subject_step,
                    detail: format!(
                        "did not reach the substituted successor within {max_steps} steps"
                    ),
                });
            }
            let Some(sim_site) = leftmost_head_redex(&sim_current, &env) else {
                return Err(SimError::SimulationFailure {
                    subject_step,
                    detail: format!(
                        "simulating term got stuck at `{sim_current}` before reaching the target"
                    ),
                });
            };
            if sim_site.kind == RedexKind::AbortRule {
                abort_steps += 1;
            }
            sim_current = contract(&sim_current, &sim_site, &env).expect("fresh site");
            sim_steps += 1;
            if alpha_eq_term(&sim_current, &sim_target) {
                break;
            }
        }
        reports.push(SimStepReport {
            subject_step,
            branch,
            kind: site.kind,
            sim_steps,
            abort_steps,
        });
        current = next;
    }
    if leftmost_head_redex(&current, &env).is_none() {
        Ok(SimulationReport {
            subject_steps: reports.len(),
            steps: reports,
        })
    } else {
        Err(SimError::SubjectFuelExhausted)
    }
}
