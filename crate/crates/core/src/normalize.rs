//! Driving head reduction to head normal form, recording traces, and the
//! structural classification of normal forms into neutral spines, stuck
//! aborts, bare communication variables and values.

use thiserror::Error;

use crate::reduction::{contract, leftmost_head_redex, Path, RedexSite, ReduceEnv};
use crate::term::{FrameView, ProofTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceStatus {
    Normalized,
    FuelExhausted,
}

/// One head step. Terms are omitted when they exceed the configured size
/// cap (communication duplicates the opposite branch and can grow terms
/// quickly).
#[derive(Debug, Clone)]
pub struct TraceStep {
    pub index: usize,
    pub site: RedexSite,
    pub before: Option<ProofTerm>,
    pub after: Option<ProofTerm>,
}

#[derive(Debug, Clone)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
    pub status: TraceStatus,
    pub fuel_used: usize,
    pub final_term: ProofTerm,
}

#[derive(Debug, Clone)]
pub struct NormalizeOptions {
    pub fuel: usize,
    pub term_size_cap: usize,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions {
            fuel: 1_000_000,
            term_size_cap: 10_000,
        }
    }
}

/// Iterates head steps until no head redex remains or the fuel runs out.
/// Typed input is guaranteed to normalize; the fuel guards untyped or
/// adversarial input.
pub fn normalize(t: &ProofTerm, env: &ReduceEnv, opts: &NormalizeOptions) -> Trace {
    let mut current = t.clone();
    let mut steps = Vec::new();
    let mut fuel_used = 0;
    loop {
        let Some(site) = leftmost_head_redex(&current, env) else {
            return Trace {
                steps,
                status: TraceStatus::Normalized,
                fuel_used,
                final_term: current,
            };
        };
        if fuel_used >= opts.fuel {
            return Trace {
                steps,
                status: TraceStatus::FuelExhausted,
                fuel_used,
                final_term: current,
            };
        }
        let next = contract(&current, &site, env)
            .expect("a site computed on this exact term cannot be stale");
        fuel_used += 1;
        let keep = |t: &ProofTerm| {
            if t.node_count() <= opts.term_size_cap {
                Some(t.clone())
            } else {
                None
            }
        };
        steps.push(TraceStep {
            index: fuel_used,
            site,
            before: keep(&current),
            after: keep(&next),
        });
        current = next;
    }
}

/// The values of the calculus: introduction forms, ex falso, and the bare
/// abort constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueKind {
    Lam,
    IndLam,
    Pair,
    Inj,
    Witness,
    Efq,
    Abort,
    PredLam,
}

pub fn value_kind(t: &ProofTerm) -> Option<ValueKind> {
    match t {
        ProofTerm::Lam { .. } => Some(ValueKind::Lam),
        ProofTerm::IndLam { .. } => Some(ValueKind::IndLam),
        ProofTerm::Pair(_, _) => Some(ValueKind::Pair),
        ProofTerm::Inj { .. } => Some(ValueKind::Inj),
        ProofTerm::Witness { .. } => Some(ValueKind::Witness),
        ProofTerm::Efq { .. } => Some(ValueKind::Efq),
        ProofTerm::Abort { .. } => Some(ValueKind::Abort),
        ProofTerm::PredLam { .. } => Some(ValueKind::PredLam),
        _ => None,
    }
}

pub fn is_value(t: &ProofTerm) -> bool {
    value_kind(t).is_some()
}

/// Neutral: neither a value nor a parallel composition.
pub fn is_neutral(t: &ProofTerm) -> bool {
    !is_value(t) && !t.is_par()
}

/// Shape of one elementary process of a head normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HnfShape {
    /// A variable that is not one of the spine binders, applied to a stack
    /// (possibly empty).
    NeutralVarHead { var: String, stack_len: usize },
    /// An abort constant applied to an argument whose type differs from the
    /// whole process's type.
    StuckAbort { stack_len: usize },
    /// A bare occurrence of a communication variable bound on the spine.
    BareCommVar { var: String },
    Value { kind: ValueKind },
}

#[derive(Debug, Clone)]
pub struct HnfReport {
    /// One shape per elementary process, in left-to-right order.
    pub shapes: Vec<HnfShape>,
}

#[derive(Debug, Clone, Error)]
pub enum HnfError {
    #[error("the term still has a head redex; classification needs a normal form")]
    NotNormal,
    #[error("process at {} fits no normal-form case: `{term}` (kernel bug)", crate::reduction::path_display(.path))]
    Violation { path: Path, term: String },
}

/// Classifies every elementary process of a head normal form. A process
/// that fits no case signals a kernel bug.
pub fn classify_hnf(t: &ProofTerm, env: &ReduceEnv) -> Result<HnfReport, HnfError> {
    if leftmost_head_redex(t, env).is_some() {
        return Err(HnfError::NotNormal);
    }
    let mut shapes = Vec::new();
    let mut path = Vec::new();
    let mut binders = Vec::new();
    classify_walk(t, &mut path, &mut binders, &mut shapes)?;
    Ok(HnfReport { shapes })
}

fn classify_walk(
    t: &ProofTerm,
    path: &mut Path,
    binders: &mut Vec<String>,
    shapes: &mut Vec<HnfShape>,
) -> Result<(), HnfError> {
    if let ProofTerm::Par {
        comm, left, right, ..
    } = t
    {
        binders.push(comm.clone());
        path.push(0);
        classify_walk(left, path, binders, shapes)?;
        path.pop();
        path.push(1);
        classify_walk(right, path, binders, shapes)?;
        path.pop();
        binders.pop();
        return Ok(());
    }
    let violation = || HnfError::Violation {
        path: path.clone(),
        term: t.to_string(),
    };
    let (head, frames) = t.spine();
    let shape = match head {
        ProofTerm::Var { name, .. } => {
            if binders.contains(name) {
                if frames.is_empty() {
                    HnfShape::BareCommVar { var: name.clone() }
                } else {
                    // An applied spine binder is either a communication
                    // redex (contradicting normality) or ill-typed.
                    return Err(violation());
                }
            } else {
                HnfShape::NeutralVarHead {
                    var: name.clone(),
                    stack_len: frames.len(),
                }
            }
        }
        ProofTerm::Abort { .. } => {
            if frames.is_empty() {
                HnfShape::Value {
                    kind: ValueKind::Abort,
                }
            } else if matches!(frames[0], FrameView::Arg(_)) {
                HnfShape::StuckAbort {
                    stack_len: frames.len(),
                }
            } else {
                return Err(violation());
            }
        }
        other => match value_kind(other) {
            Some(kind) if frames.is_empty() => HnfShape::Value { kind },
            // A value under a stack would be a redex or ill-typed; a
            // parallel node under a stack would be a permutation redex.
            _ => return Err(violation()),
        },
    };
    shapes.push(shape);
    Ok(())
}
