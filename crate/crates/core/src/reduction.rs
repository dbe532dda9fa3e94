//! Redex identification and contraction. Head reduction selects, among the
//! head redexes of all parallel processes of a term, the one whose starting
//! symbol is leftmost; the canonical left-to-right order is the pre-order
//! traversal of the syntax tree with children in printed order.

use std::fmt;

use thiserror::Error;

use crate::formula::{fresh_name, Formula};
use crate::subst::{subst_ind_term, subst_pred_term, subst_proof};
use crate::term::{Frame, FrameView, ProofTerm};
use crate::typecheck::{typecheck, Context, SystemFlavor};

/// Position in a term: child indices from the root.
pub type Path = Vec<usize>;

pub fn path_display(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_owned()
    } else {
        path.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// One reduction rule. The permutation of an individual-term or predicate
/// argument past `par` is subsumed under `PermArg`: it is the same
/// argument-shaped frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RedexKind {
    Beta,
    IndBeta,
    ProjPair,
    CaseInj,
    ExCaseWitness,
    PermArg,
    PermProj,
    PermCase,
    PermExCase,
    DLeft,
    DRight,
    AbortRule,
    PredBeta,
}

impl fmt::Display for RedexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            RedexKind::Beta => "beta",
            RedexKind::IndBeta => "ind-beta",
            RedexKind::ProjPair => "proj-pair",
            RedexKind::CaseInj => "case-inj",
            RedexKind::ExCaseWitness => "excase-wit",
            RedexKind::PermArg => "perm-arg",
            RedexKind::PermProj => "perm-proj",
            RedexKind::PermCase => "perm-case",
            RedexKind::PermExCase => "perm-excase",
            RedexKind::DLeft => "d-left",
            RedexKind::DRight => "d-right",
            RedexKind::AbortRule => "abort",
            RedexKind::PredBeta => "pred-beta",
        };
        write!(f, "{name}")
    }
}

/// A located redex. `path` is the node rewritten by `contract`; `start` is
/// the position of the redex's starting symbol, used for leftmost
/// comparison: the application node for stack-headed redexes, the leftmost
/// qualifying occurrence of the communication variable for the two
/// communication rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedexSite {
    pub path: Path,
    pub kind: RedexKind,
    pub start: Path,
}

#[derive(Debug, Clone, Error)]
pub enum ReduceError {
    #[error("stale redex site: the term no longer matches it")]
    SiteStale,
    #[error("the abort rule does not apply here: types differ")]
    AbortTypeMismatch,
}

/// Reduction environment. In typed mode the abort rule consults the type
/// checker; in untyped mode it fires only when the term happens to carry
/// enough annotations for the same check to go through.
#[derive(Debug, Clone)]
pub struct ReduceEnv {
    pub typed: Option<(SystemFlavor, Context)>,
}

impl ReduceEnv {
    pub fn untyped() -> Self {
        ReduceEnv { typed: None }
    }

    pub fn typed(flavor: SystemFlavor, ctx: Context) -> Self {
        ReduceEnv {
            typed: Some((flavor, ctx)),
        }
    }

    fn abort_flavor(&self) -> SystemFlavor {
        match &self.typed {
            Some((flavor, _)) => flavor.starred(),
            None => SystemFlavor::Lc2Star,
        }
    }

    fn base_ctx(&self) -> Context {
        match &self.typed {
            Some((_, ctx)) => ctx.clone(),
            None => Context::empty(),
        }
    }
}

/// The parallel decomposition of a term: the tree of `par` nodes over the
/// elementary processes, in left-to-right order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParTree {
    Leaf(ProofTerm),
    Node {
        comm: String,
        hyps: Option<(Formula, Formula)>,
        left: Box<ParTree>,
        right: Box<ParTree>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelDecomposition {
    pub tree: ParTree,
}

impl ParallelDecomposition {
    pub fn leaves(&self) -> Vec<&ProofTerm> {
        let mut out = Vec::new();
        fn walk<'a>(t: &'a ParTree, out: &mut Vec<&'a ProofTerm>) {
            match t {
                ParTree::Leaf(term) => out.push(term),
                ParTree::Node { left, right, .. } => {
                    walk(left, out);
                    walk(right, out);
                }
            }
        }
        walk(&self.tree, &mut out);
        out
    }

    /// Rebuilds the original term.
    pub fn renest(&self) -> ProofTerm {
        fn build(t: &ParTree) -> ProofTerm {
            match t {
                ParTree::Leaf(term) => term.clone(),
                ParTree::Node {
                    comm,
                    hyps,
                    left,
                    right,
                } => ProofTerm::par(comm.clone(), hyps.clone(), build(left), build(right)),
            }
        }
        build(&self.tree)
    }
}

/// Splits a term into its tree of parallel processes; a term that is not a
/// `par` yields a single elementary process.
pub fn decompose(t: &ProofTerm) -> ParallelDecomposition {
    fn walk(t: &ProofTerm) -> ParTree {
        match t {
            ProofTerm::Par {
                comm,
                hyps,
                left,
                right,
            } => ParTree::Node {
                comm: comm.clone(),
                hyps: hyps.as_ref().map(|h| (**h).clone()),
                left: Box::new(walk(left)),
                right: Box::new(walk(right)),
            },
            other => ParTree::Leaf(other.clone()),
        }
    }
    ParallelDecomposition { tree: walk(t) }
}

/// Finds, shadow-aware, the leftmost elementary process of shape
/// `comm u sigma` (the communication variable applied to at least one
/// proof-term argument) below `t`. Returns the leaf's path relative to `t`
/// and its frame count.
fn find_comm_leaf(t: &ProofTerm, comm: &str) -> Option<(Path, usize)> {
    match t {
        ProofTerm::Par {
            comm: inner,
            left,
            right,
            ..
        } => {
            if inner == comm {
                // The inner binder shadows ours; its leaves belong to it.
                return None;
            }
            if let Some((mut p, n)) = find_comm_leaf(left, comm) {
                p.insert(0, 0);
                return Some((p, n));
            }
            if let Some((mut p, n)) = find_comm_leaf(right, comm) {
                p.insert(0, 1);
                return Some((p, n));
            }
            None
        }
        leaf => {
            let (head, frames) = leaf.spine();
            match head {
                ProofTerm::Var { name, .. }
                    if name == comm
                        && matches!(frames.first(), Some(FrameView::Arg(_))) =>
                {
                    Some((Vec::new(), frames.len()))
                }
                _ => None,
            }
        }
    }
}

/// Case 7: a `par` node is its own head redex when one of its elementary
/// processes applies the communication variable to an argument.
fn d_candidate(node: &ProofTerm, path: &[usize]) -> Option<RedexSite> {
    let ProofTerm::Par { comm, .. } = node else {
        return None;
    };
    let (rel_leaf, n_frames) = find_comm_leaf_in_par(node, comm)?;
    let kind = if rel_leaf.first() == Some(&0) {
        RedexKind::DLeft
    } else {
        RedexKind::DRight
    };
    // The starting symbol is the occurrence of the communication variable:
    // the head of the leaf's application spine.
    let mut start = path.to_vec();
    start.extend_from_slice(&rel_leaf);
    start.extend(std::iter::repeat(0).take(n_frames));
    Some(RedexSite {
        path: path.to_vec(),
        kind,
        start,
    })
}

fn find_comm_leaf_in_par(node: &ProofTerm, comm: &str) -> Option<(Path, usize)> {
    let ProofTerm::Par { left, right, .. } = node else {
        return None;
    };
    if let Some((mut p, n)) = find_comm_leaf(left, comm) {
        p.insert(0, 0);
        return Some((p, n));
    }
    if let Some((mut p, n)) = find_comm_leaf(right, comm) {
        p.insert(0, 1);
        return Some((p, n));
    }
    None
}

/// Head redex of one elementary process (cases 1-6 plus the abort rule and
/// the second-order rule).
fn leaf_redex(leaf: &ProofTerm, path: &[usize], ctx: &Context, env: &ReduceEnv) -> Option<RedexSite> {
    let (head, frames) = leaf.spine();
    let first = frames.first()?;
    let kind = match (head, first) {
        (ProofTerm::Lam { .. }, FrameView::Arg(_)) => RedexKind::Beta,
        (ProofTerm::IndLam { .. }, FrameView::IndArg(_)) => RedexKind::IndBeta,
        (ProofTerm::Pair(_, _), FrameView::Proj(_)) => RedexKind::ProjPair,
        (ProofTerm::Inj { .. }, FrameView::Case(_, _)) => RedexKind::CaseInj,
        (ProofTerm::Witness { .. }, FrameView::ExCase(_)) => RedexKind::ExCaseWitness,
        (ProofTerm::PredLam { .. }, FrameView::Pred(_)) => RedexKind::PredBeta,
        (ProofTerm::Par { .. }, frame) => match frame {
            FrameView::Arg(_) | FrameView::IndArg(_) | FrameView::Pred(_) => RedexKind::PermArg,
            FrameView::Proj(_) => RedexKind::PermProj,
            FrameView::Case(_, _) => RedexKind::PermCase,
            FrameView::ExCase(_) => RedexKind::PermExCase,
        },
        (ProofTerm::Abort { .. }, FrameView::Arg(arg)) => {
            if !abort_rule_applies(leaf, arg, ctx, env) {
                return None;
            }
            // The whole process is the redex; the stack is discarded.
            return Some(RedexSite {
                path: path.to_vec(),
                kind: RedexKind::AbortRule,
                start: path.to_vec(),
            });
        }
        _ => return None,
    };
    // The redex is the innermost application node: head plus first frame.
    let mut redex_path = path.to_vec();
    redex_path.extend(std::iter::repeat(0).take(frames.len() - 1));
    Some(RedexSite {
        path: redex_path.clone(),
        kind,
        start: redex_path,
    })
}

/// Fig.-3 side condition: `abort u sigma` contracts to `u` only when both
/// have the same type.
fn abort_rule_applies(leaf: &ProofTerm, arg: &ProofTerm, ctx: &Context, env: &ReduceEnv) -> bool {
    let flavor = env.abort_flavor();
    let (Ok(full_ty), Ok(arg_ty)) = (typecheck(ctx, leaf, flavor), typecheck(ctx, arg, flavor))
    else {
        return false;
    };
    full_ty.alpha_eq(&arg_ty)
}

/// Head redex of the process `t` itself per the seven cases; `t` should be
/// an elementary process or a `par` term. Positions are relative to `t`.
pub fn head_redex(t: &ProofTerm, env: &ReduceEnv) -> Option<RedexSite> {
    if t.is_par() {
        d_candidate(t, &[])
    } else {
        leaf_redex(t, &[], &env.base_ctx(), env)
    }
}

fn collect_candidates(
    t: &ProofTerm,
    path: &mut Path,
    ctx: &Context,
    env: &ReduceEnv,
    out: &mut Vec<RedexSite>,
) {
    match t {
        ProofTerm::Par {
            comm,
            hyps,
            left,
            right,
        } => {
            if let Some(site) = d_candidate(t, path) {
                out.push(site);
            }
            let (lctx, rctx) = match hyps {
                Some(h) => (
                    ctx.extended(comm.clone(), h.0.clone()),
                    ctx.extended(comm.clone(), h.1.clone()),
                ),
                None => (ctx.clone(), ctx.clone()),
            };
            path.push(0);
            collect_candidates(left, path, &lctx, env, out);
            path.pop();
            path.push(1);
            collect_candidates(right, path, &rctx, env, out);
            path.pop();
        }
        leaf => {
            if let Some(site) = leaf_redex(leaf, path, ctx, env) {
                out.push(site);
            }
        }
    }
}

/// The leftmost among the head redexes of all parallel processes of `t`.
pub fn leftmost_head_redex(t: &ProofTerm, env: &ReduceEnv) -> Option<RedexSite> {
    let mut candidates = Vec::new();
    let mut path = Vec::new();
    collect_candidates(t, &mut path, &env.base_ctx(), env, &mut candidates);
    candidates.into_iter().min_by(|a, b| a.start.cmp(&b.start))
}

/// Collects the proof variables a frame could capture, with the frame's own
/// binders removed (the permutation side condition ranges over these).
fn frame_free_proof_vars(node: &ProofTerm) -> std::collections::BTreeSet<String> {
    use std::collections::BTreeSet;
    let mut out = BTreeSet::new();
    match node {
        ProofTerm::App(_, w) => out.extend(w.free_proof_vars()),
        ProofTerm::Case { arms, .. } => {
            for arm in [&arms.0, &arms.1] {
                let mut fv = arm.body.free_proof_vars();
                fv.remove(&arm.var);
                out.extend(fv);
            }
        }
        ProofTerm::ExCase { clause, .. } => {
            let mut fv = clause.body.free_proof_vars();
            fv.remove(&clause.var);
            out.extend(fv);
        }
        ProofTerm::Proj(_, _) | ProofTerm::IndApp(_, _) | ProofTerm::PredApp(_, _) => {}
        _ => {}
    }
    out
}

/// Detaches the single elimination frame of a node whose subject is the
/// given child, returning the frame in owned form.
fn detach_frame(node: &ProofTerm) -> Option<(&ProofTerm, Frame)> {
    match node {
        ProofTerm::App(f, w) => Some((f, Frame::Arg((**w).clone()))),
        ProofTerm::IndApp(f, m) => Some((f, Frame::IndArg(m.clone()))),
        ProofTerm::Proj(f, i) => Some((f, Frame::Proj(*i))),
        ProofTerm::Case { scrut, arms } => {
            Some((scrut, Frame::Case(arms.0.clone(), arms.1.clone())))
        }
        ProofTerm::ExCase { scrut, clause } => Some((scrut, Frame::ExCase((**clause).clone()))),
        ProofTerm::PredApp(f, abs) => Some((f, Frame::Pred((**abs).clone()))),
        _ => None,
    }
}

/// Applies the rule named by `site` to the subterm it locates. The site
/// must come from `head_redex`/`leftmost_head_redex` on this exact term.
pub fn contract(t: &ProofTerm, site: &RedexSite, env: &ReduceEnv) -> Result<ProofTerm, ReduceError> {
    let node = t.at_path(&site.path).ok_or(ReduceError::SiteStale)?;
    let replacement = contract_node(t, node, site, env)?;
    Ok(t.replace_at(&site.path, replacement))
}

fn contract_node(
    whole: &ProofTerm,
    node: &ProofTerm,
    site: &RedexSite,
    env: &ReduceEnv,
) -> Result<ProofTerm, ReduceError> {
    use ProofTerm::*;
    match site.kind {
        RedexKind::Beta => match node {
            App(f, arg) => match &**f {
                Lam { var, body, .. } => Ok(subst_proof(body, var, arg)),
                _ => Err(ReduceError::SiteStale),
            },
            _ => Err(ReduceError::SiteStale),
        },
        RedexKind::IndBeta => match node {
            IndApp(f, m) => match &**f {
                IndLam { var, body } => Ok(subst_ind_term(body, var, m)),
                _ => Err(ReduceError::SiteStale),
            },
            _ => Err(ReduceError::SiteStale),
        },
        RedexKind::ProjPair => match node {
            Proj(f, i) => match &**f {
                Pair(a, b) => Ok(if *i == 0 { (**a).clone() } else { (**b).clone() }),
                _ => Err(ReduceError::SiteStale),
            },
            _ => Err(ReduceError::SiteStale),
        },
        RedexKind::CaseInj => match node {
            Case { scrut, arms } => match &**scrut {
                Inj { side, body, .. } => {
                    let arm = if *side == 0 { &arms.0 } else { &arms.1 };
                    Ok(subst_proof(&arm.body, &arm.var, body))
                }
                _ => Err(ReduceError::SiteStale),
            },
            _ => Err(ReduceError::SiteStale),
        },
        RedexKind::ExCaseWitness => match node {
            ExCase { scrut, clause } => match &**scrut {
                Witness { witness, body, .. } => {
                    let opened = subst_ind_term(&clause.body, &clause.ind_var, witness);
                    Ok(subst_proof(&opened, &clause.var, body))
                }
                _ => Err(ReduceError::SiteStale),
            },
            _ => Err(ReduceError::SiteStale),
        },
        RedexKind::PredBeta => match node {
            PredApp(f, abs) => match &**f {
                PredLam { var, body } => Ok(subst_pred_term(body, var, abs)),
                _ => Err(ReduceError::SiteStale),
            },
            _ => Err(ReduceError::SiteStale),
        },
        RedexKind::PermArg | RedexKind::PermProj | RedexKind::PermCase | RedexKind::PermExCase => {
            let (subject, frame) = detach_frame(node).ok_or(ReduceError::SiteStale)?;
            let Par {
                comm,
                hyps,
                left,
                right,
            } = subject
            else {
                return Err(ReduceError::SiteStale);
            };
            // Discharge the side condition by renaming the binder when it
            // occurs free in the permuted frame.
            let frame_fv = frame_free_proof_vars(node);
            let (comm, left, right) = if frame_fv.contains(comm) {
                let mut avoid = frame_fv;
                avoid.extend(left.free_proof_vars());
                avoid.extend(right.free_proof_vars());
                avoid.insert(comm.clone());
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
            Ok(ProofTerm::Par {
                comm,
                hyps: hyps.clone(),
                left: Box::new(left.apply_frame(frame.clone())),
                right: Box::new(right.apply_frame(frame)),
            })
        }
        RedexKind::DLeft | RedexKind::DRight => {
            let Par { comm, hyps, .. } = node else {
                return Err(ReduceError::SiteStale);
            };
            let (rel_leaf, n_frames) =
                find_comm_leaf_in_par(node, comm).ok_or(ReduceError::SiteStale)?;
            // Consistency with the site the caller computed.
            let mut start = site.path.clone();
            start.extend_from_slice(&rel_leaf);
            start.extend(std::iter::repeat(0).take(n_frames));
            if start != site.start {
                return Err(ReduceError::SiteStale);
            }
            let leaf = node.at_path(&rel_leaf).ok_or(ReduceError::SiteStale)?;
            let (_, frames) = leaf.spine();
            let FrameView::Arg(sent) = frames[0] else {
                return Err(ReduceError::SiteStale);
            };
            // The communicated value: a constant function returning the
            // argument, with a dummy binder not occurring in it.
            let dummy_ann = hyps.as_ref().map(|h| {
                let hyp = if site.kind == RedexKind::DLeft { &h.1 } else { &h.0 };
                match hyp {
                    Formula::Imp(dom, _) => (**dom).clone(),
                    other => other.clone(),
                }
            });
            let mut avoid = sent.free_proof_vars();
            avoid.insert(comm.clone());
            let dummy = fresh_name("y", &avoid);
            let message = ProofTerm::lam(dummy, dummy_ann, sent.clone());
            let Par { left, right, .. } = node else {
                return Err(ReduceError::SiteStale);
            };
            let other_branch = if site.kind == RedexKind::DLeft {
                right
            } else {
                left
            };
            let copy = subst_proof(other_branch, comm, &message);
            Ok(node.replace_at(&rel_leaf, copy))
        }
        RedexKind::AbortRule => {
            let (head, frames) = node.spine();
            if !matches!(head, Abort { .. }) {
                return Err(ReduceError::SiteStale);
            }
            let Some(FrameView::Arg(arg)) = frames.first() else {
                return Err(ReduceError::SiteStale);
            };
            let ctx = ctx_along_path(whole, &site.path, env);
            if !abort_rule_applies(node, arg, &ctx, env) {
                return Err(ReduceError::AbortTypeMismatch);
            }
            Ok((*arg).clone())
        }
    }
}

/// Context for a position on the parallel spine: the base context extended
/// with the hypotheses of the `par` binders passed on the way down.
fn ctx_along_path(t: &ProofTerm, path: &[usize], env: &ReduceEnv) -> Context {
    let mut ctx = env.base_ctx();
    let mut cur = t;
    for &i in path {
        if let ProofTerm::Par { comm, hyps, .. } = cur {
            if let Some(h) = hyps {
                let hyp = if i == 0 { h.0.clone() } else { h.1.clone() };
                ctx = ctx.extended(comm.clone(), hyp);
            }
        }
        cur = match cur.children().get(i) {
            Some(c) => c,
            None => return ctx,
        };
    }
    ctx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;
    use crate::sig::Signature;
    use crate::term::alpha_eq_term;

    fn t(src: &str) -> ProofTerm {
        parse_term(src, &Signature::standard()).unwrap()
    }

    fn step(term: &ProofTerm) -> (ProofTerm, RedexSite) {
        let env = ReduceEnv::untyped();
        let site = leftmost_head_redex(term, &env).expect("redex expected");
        let next = contract(term, &site, &env).expect("contract");
        (next, site)
    }

    #[test]
    fn decompose_flattens_in_order() {
        let nested_left = t("(u par a w) par b z");
        assert_eq!(
            decompose(&nested_left)
                .leaves()
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>(),
            ["u", "w", "z"]
        );
        let nested_right = t("u par a (w par b z)");
        assert_eq!(
            decompose(&nested_right)
                .leaves()
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>(),
            ["u", "w", "z"]
        );
        assert_eq!(decompose(&nested_left).renest(), nested_left);
        let single = t("fun x => x");
        assert_eq!(decompose(&single).leaves().len(), 1);
    }

    #[test]
    fn head_redex_of_beta_under_stack() {
        // (fun x => u) w pi0 has the beta redex (fun x => u) w as head.
        let term = t("(fun x => u) w pi0");
        let env = ReduceEnv::untyped();
        let site = head_redex(&term, &env).unwrap();
        assert_eq!(site.kind, RedexKind::Beta);
        assert_eq!(site.path, vec![0]);
    }

    #[test]
    fn head_redex_of_par_under_frame_is_permutation() {
        let term = t("(u par a w) z pi1");
        let env = ReduceEnv::untyped();
        let site = head_redex(&term, &env).unwrap();
        assert_eq!(site.kind, RedexKind::PermArg);
        assert_eq!(site.path, vec![0]);
    }

    #[test]
    fn neutral_head_has_no_redex() {
        let term = t("x u w");
        assert!(head_redex(&term, &ReduceEnv::untyped()).is_none());
    }

    #[test]
    fn paper_trace_one() {
        // (fun x => a (fun z => z) x) u par a z0
        //   beta, then communication, reaching z0 par a z0.
        let mut term = t("(fun x => a (fun z => z) x) u par a z0");
        let (next, site) = step(&term);
        assert_eq!(site.kind, RedexKind::Beta);
        assert_eq!(next.to_string(), "a (fun z => z) u par a z0");
        term = next;
        let (next, site) = step(&term);
        assert_eq!(site.kind, RedexKind::DLeft);
        assert_eq!(next.to_string(), "z0 par a z0");
        assert!(leftmost_head_redex(&next, &ReduceEnv::untyped()).is_none());
    }

    #[test]
    fn paper_trace_two() {
        let mut term = t("(fun x => inj0(x)) u [case x0 => x0, x1 => w]");
        let (next, site) = step(&term);
        assert_eq!(site.kind, RedexKind::Beta);
        assert_eq!(next.to_string(), "inj0(u) [case x0 => x0, x1 => w]");
        term = next;
        let (next, site) = step(&term);
        assert_eq!(site.kind, RedexKind::CaseInj);
        assert_eq!(next.to_string(), "u");
    }

    #[test]
    fn paper_trace_three() {
        let expected = [
            ("d-left", "(fun y => (fun x => x) z0) z1 par a a z1"),
            ("beta", "(fun x => x) z0 par a a z1"),
            ("beta", "z0 par a a z1"),
            ("d-right", "z0 par a z0"),
        ];
        let mut term = t("a ((fun x => x) z0) par a (a z1)");
        for (kind, after) in expected {
            let (next, site) = step(&term);
            assert_eq!(site.kind.to_string(), kind);
            assert_eq!(next.to_string(), after);
            term = next;
        }
        assert!(leftmost_head_redex(&term, &ReduceEnv::untyped()).is_none());
    }

    #[test]
    fn d_redex_start_is_leftmost_occurrence() {
        // Both leaves apply `a`; the left occurrence starts the redex.
        let term = t("a u par a (a w)");
        let env = ReduceEnv::untyped();
        let site = leftmost_head_redex(&term, &env).unwrap();
        assert_eq!(site.kind, RedexKind::DLeft);
        let next = contract(&term, &site, &env).unwrap();
        // a u is replaced by (a w)[fun y => u / a] = (fun y => u) w.
        assert_eq!(next.to_string(), "(fun y => u) w par a a w");
    }

    #[test]
    fn bare_comm_variable_is_not_a_redex() {
        let term = t("a par a z0");
        assert!(leftmost_head_redex(&term, &ReduceEnv::untyped()).is_none());
        // And a projection head does not communicate either.
        let term = t("a pi0 par a z0");
        assert!(leftmost_head_redex(&term, &ReduceEnv::untyped()).is_none());
    }

    #[test]
    fn inner_binder_shadows_outer_communication() {
        // The occurrence of `a` sits under a par that rebinds `a`, so the
        // outer node has no communication redex.
        let term = t("(a u par a w) par a z");
        let site = leftmost_head_redex(&term, &ReduceEnv::untyped()).unwrap();
        // The redex belongs to the inner node.
        assert_eq!(site.path, vec![0]);
        assert_eq!(site.kind, RedexKind::DLeft);
        let env = ReduceEnv::untyped();
        let next = contract(&term, &site, &env).unwrap();
        assert_eq!(next.to_string(), "(w par a w) par a z");
    }

    #[test]
    fn permutation_renames_captured_binder() {
        // (u par a w) a: the frame mentions `a` free, so the binder is
        // renamed before permuting.
        let term = t("(a x par a w) a");
        let env = ReduceEnv::untyped();
        let site = leftmost_head_redex(&term, &env).unwrap();
        assert_eq!(site.kind, RedexKind::PermArg);
        let next = contract(&term, &site, &env).unwrap();
        match &next {
            ProofTerm::Par { comm, .. } => assert_ne!(comm, "a"),
            other => panic!("expected par, got {other}"),
        }
        let expected = t("(a' x a par a' w a)");
        assert!(alpha_eq_term(&next, &expected), "got {next}");
    }

    #[test]
    fn permutation_steps_one_frame_at_a_time() {
        let term = t("(u par a w) z0 z1");
        let env = ReduceEnv::untyped();
        let site = leftmost_head_redex(&term, &env).unwrap();
        assert_eq!(site.kind, RedexKind::PermArg);
        assert_eq!(site.path, vec![0]);
        let next = contract(&term, &site, &env).unwrap();
        assert_eq!(next.to_string(), "(u z0 par a w z0) z1");
    }

    #[test]
    fn ind_and_pred_arguments_permute() {
        let term = t("(u par a w) @ c0");
        let env = ReduceEnv::untyped();
        let site = leftmost_head_redex(&term, &env).unwrap();
        assert_eq!(site.kind, RedexKind::PermArg);
        let next = contract(&term, &site, &env).unwrap();
        assert_eq!(next.to_string(), "u @ c0 par a w @ c0");

        let term = t("(u par a w) @ {b. P(b)}");
        let site = leftmost_head_redex(&term, &env).unwrap();
        assert_eq!(site.kind, RedexKind::PermArg);
        let next = contract(&term, &site, &env).unwrap();
        assert_eq!(next.to_string(), "u @ {b. P(b)} par a w @ {b. P(b)}");
    }

    #[test]
    fn pred_beta_contracts() {
        let term = t("(Fun X => fun x : X(c0) => x) @ {b. P(b)}");
        let env = ReduceEnv::untyped();
        let site = leftmost_head_redex(&term, &env).unwrap();
        assert_eq!(site.kind, RedexKind::PredBeta);
        let next = contract(&term, &site, &env).unwrap();
        assert_eq!(next.to_string(), "fun x : P(c0) => x");
    }

    #[test]
    fn abort_fires_only_on_matching_types() {
        let env = ReduceEnv::typed(SystemFlavor::LcStar, Context::empty());
        let fire = t("abort[(P(c0) -> P(c0)) -> P(c0) -> P(c0)] (fun x : P(c0) => x)");
        let site = leftmost_head_redex(&fire, &env).unwrap();
        assert_eq!(site.kind, RedexKind::AbortRule);
        let next = contract(&fire, &site, &env).unwrap();
        assert_eq!(next.to_string(), "fun x : P(c0) => x");

        let stuck = t("abort[(P(c0) -> P(c0)) -> Q(c0) -> Q(c0)] (fun x : P(c0) => x)");
        assert!(leftmost_head_redex(&stuck, &env).is_none());

        // Untyped mode still fires when the annotations decide the check.
        let site = leftmost_head_redex(&fire, &ReduceEnv::untyped()).unwrap();
        assert_eq!(site.kind, RedexKind::AbortRule);
    }

    #[test]
    fn abort_discards_the_whole_stack() {
        let env = ReduceEnv::typed(SystemFlavor::LcStar, Context::empty());
        let term = t(
            "abort[(P(c0) -> P(c0)) -> (P(c0) -> P(c0)) -> P(c0) -> P(c0)] \
             (fun x : P(c0) => x) (fun y : P(c0) => y)",
        );
        let site = leftmost_head_redex(&term, &env).unwrap();
        assert_eq!(site.kind, RedexKind::AbortRule);
        let next = contract(&term, &site, &env).unwrap();
        assert_eq!(next.to_string(), "fun x : P(c0) => x");
    }
}
