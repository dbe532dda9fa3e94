//! Branch-parallel normalization. For `u par_a v`, head reduction first
//! exhausts the steps that rewrite the left branch, then those that rewrite
//! the right; the two phases touch disjoint data, so they can run
//! concurrently: the left phase reduces `u par_a v` while the selected
//! redex lies in (or communicates into) the left branch, the right phase
//! does the same on the mirrored `v par_a u`, and the results are merged.

use thiserror::Error;

use crate::normalize::{normalize, NormalizeOptions, TraceStatus};
use crate::reduction::{
    contract, leftmost_head_redex, RedexKind, RedexSite, ReduceEnv,
};
use crate::term::ProofTerm;
use crate::typecheck::{typecheck, TypeError};

#[derive(Debug, Clone)]
pub struct ParallelOutcome {
    pub normal_form: ProofTerm,
    /// Sites contracted by the left phase, in order.
    pub left_steps: Vec<RedexSite>,
    /// Sites contracted by the right phase (positions relative to the
    /// mirrored term).
    pub right_steps: Vec<RedexSite>,
}

#[derive(Debug, Clone, Error)]
pub enum ParallelError {
    #[error("phase ran out of fuel")]
    FuelExhausted,
    #[error("merged result is not a head normal form: `{0}` (kernel bug)")]
    NotNormal(String),
    #[error("merged result changed type: {0} (kernel bug)")]
    TypeChanged(String),
    #[error("typed mode requires a well-typed input: {0}")]
    IllTyped(TypeError),
}

/// One phase: head-reduce `branch par other` while the step rewrites the
/// left branch, i.e. until the left branch is in head normal form and not
/// of communicating shape. Returns the final left branch.
fn left_phase(
    start: ProofTerm,
    env: &ReduceEnv,
    fuel: usize,
) -> Result<(ProofTerm, Vec<RedexSite>), ParallelError> {
    let mut current = start;
    let mut steps = Vec::new();
    loop {
        let Some(site) = leftmost_head_redex(&current, env) else {
            break;
        };
        let rewrites_left = match site.path.first() {
            Some(0) => true,
            Some(_) => false,
            None => site.kind == RedexKind::DLeft,
        };
        if !rewrites_left {
            break;
        }
        if steps.len() >= fuel {
            return Err(ParallelError::FuelExhausted);
        }
        current = contract(&current, &site, env).expect("fresh site");
        steps.push(site);
    }
    match current {
        ProofTerm::Par { left, .. } => Ok(((*left).clone(), steps)),
        other => Ok((other, steps)),
    }
}

/// Normalizes a parallel composition by running the two phases on separate
/// threads and merging; a term that is not a parallel composition falls
/// back to sequential head reduction.
pub fn parallel_normalize(
    t: &ProofTerm,
    env: &ReduceEnv,
    opts: &NormalizeOptions,
) -> Result<ParallelOutcome, ParallelError> {
    let ProofTerm::Par {
        comm,
        hyps,
        left,
        right,
    } = t
    else {
        let trace = normalize(t, env, opts);
        if trace.status == TraceStatus::FuelExhausted {
            return Err(ParallelError::FuelExhausted);
        }
        return Ok(ParallelOutcome {
            normal_form: trace.final_term,
            left_steps: trace.steps.iter().map(|s| s.site.clone()).collect(),
            right_steps: Vec::new(),
        });
    };

    let mirrored = ProofTerm::Par {
        comm: comm.clone(),
        hyps: hyps.as_ref().map(|h| Box::new((h.1.clone(), h.0.clone()))),
        left: right.clone(),
        right: left.clone(),
    };

    let (left_result, right_result) = std::thread::scope(|scope| {
        let handle = scope.spawn(|| left_phase(mirrored.clone(), env, opts.fuel));
        let left_result = left_phase(t.clone(), env, opts.fuel);
        (left_result, handle.join().expect("phase thread panicked"))
    });
    let (left_nf, left_steps) = left_result?;
    let (right_nf, right_steps) = right_result?;

    let normal_form = ProofTerm::Par {
        comm: comm.clone(),
        hyps: hyps.clone(),
        left: Box::new(left_nf),
        right: Box::new(right_nf),
    };

    if leftmost_head_redex(&normal_form, env).is_some() {
        return Err(ParallelError::NotNormal(normal_form.to_string()));
    }
    if let Some((flavor, ctx)) = &env.typed {
        let before = typecheck(ctx, t, *flavor).map_err(ParallelError::IllTyped)?;
        let after = typecheck(ctx, &normal_form, *flavor).map_err(|e| {
            ParallelError::TypeChanged(format!("result no longer typechecks: {e}"))
        })?;
        if !before.alpha_eq(&after) {
            return Err(ParallelError::TypeChanged(format!(
                "`{before}` became `{after}`"
            )));
        }
    }

    Ok(ParallelOutcome {
        normal_form,
        left_steps,
        right_steps,
    })
}
