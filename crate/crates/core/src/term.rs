//! Proof terms, stacks of elimination frames, capture-avoiding substitution
//! for the three binding sorts (proof variables, individual variables,
//! predicate variables) and alpha equivalence.

use std::collections::BTreeSet;

use crate::formula::{
    alpha_eq_formula, alpha_eq_ind_in, AlphaEnv, Formula, IndTerm, PredAbs,
};

/// One branch of a disjunction elimination: `x (: A)? => body`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseArm {
    pub var: String,
    pub ann: Option<Formula>,
    pub body: ProofTerm,
}

/// The clause of an existential elimination: `(alpha, x (: A)?) => body`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExClause {
    pub ind_var: String,
    pub var: String,
    pub ann: Option<Formula>,
    pub body: ProofTerm,
}

/// Proof terms. Annotations are optional so the same syntax supports the
/// untyped reduction calculus; the type checker requires them where the
/// typing rules cannot reconstruct the formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProofTerm {
    Var {
        name: String,
        ann: Option<Formula>,
    },
    Lam {
        var: String,
        ann: Option<Formula>,
        body: Box<ProofTerm>,
    },
    App(Box<ProofTerm>, Box<ProofTerm>),
    Pair(Box<ProofTerm>, Box<ProofTerm>),
    Proj(Box<ProofTerm>, u8),
    Inj {
        side: u8,
        /// The full disjunction this injection produces.
        ann: Option<Formula>,
        body: Box<ProofTerm>,
    },
    Case {
        scrut: Box<ProofTerm>,
        arms: Box<(CaseArm, CaseArm)>,
    },
    IndLam {
        var: String,
        body: Box<ProofTerm>,
    },
    IndApp(Box<ProofTerm>, IndTerm),
    Witness {
        witness: IndTerm,
        /// The full existential formula this witness pair produces.
        ann: Option<Formula>,
        body: Box<ProofTerm>,
    },
    ExCase {
        scrut: Box<ProofTerm>,
        clause: Box<ExClause>,
    },
    Efq {
        target: Formula,
        body: Box<ProofTerm>,
    },
    /// The parallel operator; `comm` is bound in both branches. `hyps`
    /// carries the two dual hypotheses (left: A -> B, right: B -> A).
    Par {
        comm: String,
        hyps: Option<Box<(Formula, Formula)>>,
        left: Box<ProofTerm>,
        right: Box<ProofTerm>,
    },
    /// The typed abort constant of the starred systems.
    Abort {
        ann: Formula,
    },
    PredLam {
        var: String,
        body: Box<ProofTerm>,
    },
    PredApp(Box<ProofTerm>, Box<PredAbs>),
}

/// One elimination frame of a stack.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Frame {
    Arg(ProofTerm),
    IndArg(IndTerm),
    Proj(u8),
    Case(CaseArm, CaseArm),
    ExCase(ExClause),
    Pred(PredAbs),
}

/// A stack is a sequence of elimination frames; the empty stack is valid.
pub type Stack = Vec<Frame>;

/// Borrowed view of a frame, produced when peeling an application spine.
#[derive(Debug, Clone, Copy)]
pub enum FrameView<'a> {
    Arg(&'a ProofTerm),
    IndArg(&'a IndTerm),
    Proj(u8),
    Case(&'a CaseArm, &'a CaseArm),
    ExCase(&'a ExClause),
    Pred(&'a PredAbs),
}

impl ProofTerm {
    pub fn var(name: impl Into<String>) -> ProofTerm {
        ProofTerm::Var {
            name: name.into(),
            ann: None,
        }
    }

    pub fn lam(var: impl Into<String>, ann: Option<Formula>, body: ProofTerm) -> ProofTerm {
        ProofTerm::Lam {
            var: var.into(),
            ann,
            body: Box::new(body),
        }
    }

    pub fn app(f: ProofTerm, x: ProofTerm) -> ProofTerm {
        ProofTerm::App(Box::new(f), Box::new(x))
    }

    pub fn par(
        comm: impl Into<String>,
        hyps: Option<(Formula, Formula)>,
        left: ProofTerm,
        right: ProofTerm,
    ) -> ProofTerm {
        ProofTerm::Par {
            comm: comm.into(),
            hyps: hyps.map(Box::new),
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// Applies one elimination frame to the term.
    pub fn apply_frame(self, frame: Frame) -> ProofTerm {
        match frame {
            Frame::Arg(u) => ProofTerm::app(self, u),
            Frame::IndArg(m) => ProofTerm::IndApp(Box::new(self), m),
            Frame::Proj(i) => ProofTerm::Proj(Box::new(self), i),
            Frame::Case(l, r) => ProofTerm::Case {
                scrut: Box::new(self),
                arms: Box::new((l, r)),
            },
            Frame::ExCase(clause) => ProofTerm::ExCase {
                scrut: Box::new(self),
                clause: Box::new(clause),
            },
            Frame::Pred(abs) => ProofTerm::PredApp(Box::new(self), Box::new(abs)),
        }
    }

    /// t sigma: left-nested application of the whole stack.
    pub fn apply_stack(self, stack: Stack) -> ProofTerm {
        stack.into_iter().fold(self, ProofTerm::apply_frame)
    }

    /// Peels the application spine: returns the head (the first node that
    /// is not an elimination) and the frames applied to it, outermost last.
    pub fn spine(&self) -> (&ProofTerm, Vec<FrameView<'_>>) {
        let mut frames = Vec::new();
        let mut t = self;
        loop {
            match t {
                ProofTerm::App(f, x) => {
                    frames.push(FrameView::Arg(x));
                    t = f;
                }
                ProofTerm::IndApp(f, m) => {
                    frames.push(FrameView::IndArg(m));
                    t = f;
                }
                ProofTerm::Proj(f, i) => {
                    frames.push(FrameView::Proj(*i));
                    t = f;
                }
                ProofTerm::Case { scrut, arms } => {
                    frames.push(FrameView::Case(&arms.0, &arms.1));
                    t = scrut;
                }
                ProofTerm::ExCase { scrut, clause } => {
                    frames.push(FrameView::ExCase(clause));
                    t = scrut;
                }
                ProofTerm::PredApp(f, abs) => {
                    frames.push(FrameView::Pred(abs));
                    t = f;
                }
                _ => break,
            }
        }
        frames.reverse();
        (t, frames)
    }

    pub fn is_par(&self) -> bool {
        matches!(self, ProofTerm::Par { .. })
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(|c| c.node_count()).sum::<usize>()
    }

    /// Proof-term children in printed order. Individual terms, formulas and
    /// predicate abstractions are not children: redexes never sit inside
    /// them.
    pub fn children(&self) -> Vec<&ProofTerm> {
        match self {
            ProofTerm::Var { .. } | ProofTerm::Abort { .. } => vec![],
            ProofTerm::Lam { body, .. }
            | ProofTerm::Inj { body, .. }
            | ProofTerm::IndLam { body, .. }
            | ProofTerm::Witness { body, .. }
            | ProofTerm::Efq { body, .. }
            | ProofTerm::PredLam { body, .. } => vec![body],
            ProofTerm::Proj(b, _) | ProofTerm::IndApp(b, _) | ProofTerm::PredApp(b, _) => {
                vec![b]
            }
            ProofTerm::App(f, x) => vec![f, x],
            ProofTerm::Pair(l, r) => vec![l, r],
            ProofTerm::Case { scrut, arms } => vec![scrut, &arms.0.body, &arms.1.body],
            ProofTerm::ExCase { scrut, clause } => vec![scrut, &clause.body],
            ProofTerm::Par { left, right, .. } => vec![left, right],
        }
    }

    pub fn at_path(&self, path: &[usize]) -> Option<&ProofTerm> {
        let mut t = self;
        for &i in path {
            t = *t.children().get(i)?;
        }
        Some(t)
    }

    /// Rebuilds the term with the subterm at `path` replaced.
    pub fn replace_at(&self, path: &[usize], new: ProofTerm) -> ProofTerm {
        match path.split_first() {
            None => new,
            Some((&i, rest)) => {
                let mut t = self.clone();
                {
                    let child = t
                        .children_mut()
                        .into_iter()
                        .nth(i)
                        .expect("replace_at: path out of range");
                    *child = child.replace_at(rest, new);
                }
                t
            }
        }
    }

    fn children_mut(&mut self) -> Vec<&mut ProofTerm> {
        match self {
            ProofTerm::Var { .. } | ProofTerm::Abort { .. } => vec![],
            ProofTerm::Lam { body, .. }
            | ProofTerm::Inj { body, .. }
            | ProofTerm::IndLam { body, .. }
            | ProofTerm::Witness { body, .. }
            | ProofTerm::Efq { body, .. }
            | ProofTerm::PredLam { body, .. } => vec![body],
            ProofTerm::Proj(b, _) | ProofTerm::IndApp(b, _) | ProofTerm::PredApp(b, _) => {
                vec![b]
            }
            ProofTerm::App(f, x) => vec![f, x],
            ProofTerm::Pair(l, r) => vec![l, r],
            ProofTerm::Case { scrut, arms } => {
                let (a, b) = &mut **arms;
                vec![scrut, &mut a.body, &mut b.body]
            }
            ProofTerm::ExCase { scrut, clause } => vec![scrut, &mut clause.body],
            ProofTerm::Par { left, right, .. } => vec![left, right],
        }
    }

    pub fn free_proof_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free_proof_vars(&mut out);
        out
    }

    fn collect_free_proof_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            ProofTerm::Var { name, .. } => {
                out.insert(name.clone());
            }
            ProofTerm::Abort { .. } => {}
            ProofTerm::Lam { var, body, .. } => {
                let mut inner = BTreeSet::new();
                body.collect_free_proof_vars(&mut inner);
                inner.remove(var);
                out.extend(inner);
            }
            ProofTerm::App(a, b) | ProofTerm::Pair(a, b) => {
                a.collect_free_proof_vars(out);
                b.collect_free_proof_vars(out);
            }
            ProofTerm::Proj(b, _)
            | ProofTerm::Inj { body: b, .. }
            | ProofTerm::IndLam { body: b, .. }
            | ProofTerm::IndApp(b, _)
            | ProofTerm::Witness { body: b, .. }
            | ProofTerm::Efq { body: b, .. }
            | ProofTerm::PredLam { body: b, .. }
            | ProofTerm::PredApp(b, _) => b.collect_free_proof_vars(out),
            ProofTerm::Case { scrut, arms } => {
                scrut.collect_free_proof_vars(out);
                for arm in [&arms.0, &arms.1] {
                    let mut inner = BTreeSet::new();
                    arm.body.collect_free_proof_vars(&mut inner);
                    inner.remove(&arm.var);
                    out.extend(inner);
                }
            }
            ProofTerm::ExCase { scrut, clause } => {
                scrut.collect_free_proof_vars(out);
                let mut inner = BTreeSet::new();
                clause.body.collect_free_proof_vars(&mut inner);
                inner.remove(&clause.var);
                out.extend(inner);
            }
            ProofTerm::Par {
                comm, left, right, ..
            } => {
                let mut inner = BTreeSet::new();
                left.collect_free_proof_vars(&mut inner);
                right.collect_free_proof_vars(&mut inner);
                inner.remove(comm);
                out.extend(inner);
            }
        }
    }

    pub fn free_ind_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free_ind_vars(&mut out);
        out
    }

    fn collect_free_ind_vars(&self, out: &mut BTreeSet<String>) {
        let ann_vars = |ann: &Option<Formula>, out: &mut BTreeSet<String>| {
            if let Some(f) = ann {
                out.extend(f.free_ind_vars());
            }
        };
        match self {
            ProofTerm::Var { ann, .. } => ann_vars(ann, out),
            ProofTerm::Abort { ann } => out.extend(ann.free_ind_vars()),
            ProofTerm::Lam { ann, body, .. } => {
                ann_vars(ann, out);
                body.collect_free_ind_vars(out);
            }
            ProofTerm::App(a, b) | ProofTerm::Pair(a, b) => {
                a.collect_free_ind_vars(out);
                b.collect_free_ind_vars(out);
            }
            ProofTerm::Proj(b, _) => b.collect_free_ind_vars(out),
            ProofTerm::Inj { ann, body, .. } => {
                ann_vars(ann, out);
                body.collect_free_ind_vars(out);
            }
            ProofTerm::Case { scrut, arms } => {
                scrut.collect_free_ind_vars(out);
                for arm in [&arms.0, &arms.1] {
                    ann_vars(&arm.ann, out);
                    arm.body.collect_free_ind_vars(out);
                }
            }
            ProofTerm::IndLam { var, body } => {
                let mut inner = BTreeSet::new();
                body.collect_free_ind_vars(&mut inner);
                inner.remove(var);
                out.extend(inner);
            }
            ProofTerm::IndApp(b, m) => {
                b.collect_free_ind_vars(out);
                m.collect_free_vars(out);
            }
            ProofTerm::Witness { witness, ann, body } => {
                witness.collect_free_vars(out);
                ann_vars(ann, out);
                body.collect_free_ind_vars(out);
            }
            ProofTerm::ExCase { scrut, clause } => {
                scrut.collect_free_ind_vars(out);
                let mut inner = BTreeSet::new();
                if let Some(f) = &clause.ann {
                    inner.extend(f.free_ind_vars());
                }
                clause.body.collect_free_ind_vars(&mut inner);
                inner.remove(&clause.ind_var);
                out.extend(inner);
            }
            ProofTerm::Efq { target, body } => {
                out.extend(target.free_ind_vars());
                body.collect_free_ind_vars(out);
            }
            ProofTerm::Par {
                hyps, left, right, ..
            } => {
                if let Some(h) = hyps {
                    out.extend(h.0.free_ind_vars());
                    out.extend(h.1.free_ind_vars());
                }
                left.collect_free_ind_vars(out);
                right.collect_free_ind_vars(out);
            }
            ProofTerm::PredLam { body, .. } => body.collect_free_ind_vars(out),
            ProofTerm::PredApp(b, abs) => {
                b.collect_free_ind_vars(out);
                out.extend(abs.free_ind_vars());
            }
        }
    }

    pub fn free_pred_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free_pred_vars(&mut out);
        out
    }

    fn collect_free_pred_vars(&self, out: &mut BTreeSet<String>) {
        let ann_vars = |ann: &Option<Formula>, out: &mut BTreeSet<String>| {
            if let Some(f) = ann {
                out.extend(f.free_pred_vars());
            }
        };
        match self {
            ProofTerm::Var { ann, .. } => ann_vars(ann, out),
            ProofTerm::Abort { ann } => out.extend(ann.free_pred_vars()),
            ProofTerm::Lam { ann, body, .. } => {
                ann_vars(ann, out);
                body.collect_free_pred_vars(out);
            }
            ProofTerm::App(a, b) | ProofTerm::Pair(a, b) => {
                a.collect_free_pred_vars(out);
                b.collect_free_pred_vars(out);
            }
            ProofTerm::Proj(b, _) | ProofTerm::IndApp(b, _) => b.collect_free_pred_vars(out),
            ProofTerm::Inj { ann, body, .. } | ProofTerm::Witness { ann, body, .. } => {
                ann_vars(ann, out);
                body.collect_free_pred_vars(out);
            }
            ProofTerm::Case { scrut, arms } => {
                scrut.collect_free_pred_vars(out);
                for arm in [&arms.0, &arms.1] {
                    ann_vars(&arm.ann, out);
                    arm.body.collect_free_pred_vars(out);
                }
            }
            ProofTerm::IndLam { body, .. } => body.collect_free_pred_vars(out),
            ProofTerm::ExCase { scrut, clause } => {
                scrut.collect_free_pred_vars(out);
                ann_vars(&clause.ann, out);
                clause.body.collect_free_pred_vars(out);
            }
            ProofTerm::Efq { target, body } => {
                out.extend(target.free_pred_vars());
                body.collect_free_pred_vars(out);
            }
            ProofTerm::Par {
                hyps, left, right, ..
            } => {
                if let Some(h) = hyps {
                    out.extend(h.0.free_pred_vars());
                    out.extend(h.1.free_pred_vars());
                }
                left.collect_free_pred_vars(out);
                right.collect_free_pred_vars(out);
            }
            ProofTerm::PredLam { var, body } => {
                let mut inner = BTreeSet::new();
                body.collect_free_pred_vars(&mut inner);
                inner.remove(var);
                out.extend(inner);
            }
            ProofTerm::PredApp(b, abs) => {
                b.collect_free_pred_vars(out);
                out.extend(abs.free_pred_vars());
            }
        }
    }

    pub fn contains_abort(&self) -> bool {
        match self {
            ProofTerm::Abort { .. } => true,
            _ => self.children().iter().any(|c| c.contains_abort()),
        }
    }
}


/// Alpha equivalence of proof terms, threading all three binder sorts and
/// comparing annotations.
pub fn alpha_eq_term(a: &ProofTerm, b: &ProofTerm) -> bool {
    alpha_terms(a, b, &mut TermAlphaEnv::default())
}

#[derive(Default)]
struct TermAlphaEnv {
    proof: Vec<(String, String)>,
    base: AlphaEnv,
}

impl TermAlphaEnv {
    fn proof_eq(&self, a: &str, b: &str) -> bool {
        for (l, r) in self.proof.iter().rev() {
            let la = l == a;
            let rb = r == b;
            if la || rb {
                return la && rb;
            }
        }
        a == b
    }

    fn with_proof<R>(&mut self, a: &str, b: &str, f: impl FnOnce(&mut Self) -> R) -> R {
        self.proof.push((a.to_owned(), b.to_owned()));
        let r = f(self);
        self.proof.pop();
        r
    }
}

fn alpha_ann(a: &Option<Formula>, b: &Option<Formula>, env: &mut TermAlphaEnv) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(f), Some(g)) => alpha_eq_formula(f, g, &mut env.base),
        _ => false,
    }
}

fn alpha_terms(a: &ProofTerm, b: &ProofTerm, env: &mut TermAlphaEnv) -> bool {
    use ProofTerm::*;
    match (a, b) {
        (Var { name: x, ann: fa }, Var { name: y, ann: fb }) => {
            env.proof_eq(x, y) && alpha_ann(fa, fb, env)
        }
        (
            Lam {
                var: x,
                ann: fa,
                body: ba,
            },
            Lam {
                var: y,
                ann: fb,
                body: bb,
            },
        ) => alpha_ann(fa, fb, env) && env.with_proof(x, y, |env| alpha_terms(ba, bb, env)),
        (App(f1, x1), App(f2, x2)) | (Pair(f1, x1), Pair(f2, x2)) => {
            alpha_terms(f1, f2, env) && alpha_terms(x1, x2, env)
        }
        (Proj(t1, i1), Proj(t2, i2)) => i1 == i2 && alpha_terms(t1, t2, env),
        (
            Inj {
                side: s1,
                ann: f1,
                body: b1,
            },
            Inj {
                side: s2,
                ann: f2,
                body: b2,
            },
        ) => s1 == s2 && alpha_ann(f1, f2, env) && alpha_terms(b1, b2, env),
        (
            Case {
                scrut: s1,
                arms: a1,
            },
            Case {
                scrut: s2,
                arms: a2,
            },
        ) => {
            alpha_terms(s1, s2, env)
                && alpha_arm(&a1.0, &a2.0, env)
                && alpha_arm(&a1.1, &a2.1, env)
        }
        (IndLam { var: v1, body: b1 }, IndLam { var: v2, body: b2 }) => {
            env.base.ind_push(v1, v2);
            let ok = alpha_terms(b1, b2, env);
            env.base.ind_pop();
            ok
        }
        (IndApp(t1, m1), IndApp(t2, m2)) => {
            alpha_terms(t1, t2, env) && alpha_eq_ind_in(m1, m2, &env.base)
        }
        (
            Witness {
                witness: m1,
                ann: f1,
                body: b1,
            },
            Witness {
                witness: m2,
                ann: f2,
                body: b2,
            },
        ) => {
            alpha_eq_ind_in(m1, m2, &env.base) && alpha_ann(f1, f2, env) && alpha_terms(b1, b2, env)
        }
        (
            ExCase {
                scrut: s1,
                clause: c1,
            },
            ExCase {
                scrut: s2,
                clause: c2,
            },
        ) => alpha_terms(s1, s2, env) && alpha_clause(c1, c2, env),
        (
            Efq {
                target: t1,
                body: b1,
            },
            Efq {
                target: t2,
                body: b2,
            },
        ) => alpha_eq_formula(t1, t2, &mut env.base) && alpha_terms(b1, b2, env),
        (
            Par {
                comm: a1,
                hyps: h1,
                left: l1,
                right: r1,
            },
            Par {
                comm: a2,
                hyps: h2,
                left: l2,
                right: r2,
            },
        ) => {
            let hyps_match = match (h1, h2) {
                (None, None) => true,
                (Some(p), Some(q)) => {
                    alpha_eq_formula(&p.0, &q.0, &mut env.base)
                        && alpha_eq_formula(&p.1, &q.1, &mut env.base)
                }
                _ => false,
            };
            hyps_match
                && env.with_proof(a1, a2, |env| {
                    alpha_terms(l1, l2, env) && alpha_terms(r1, r2, env)
                })
        }
        (Abort { ann: f1 }, Abort { ann: f2 }) => alpha_eq_formula(f1, f2, &mut env.base),
        (PredLam { var: v1, body: b1 }, PredLam { var: v2, body: b2 }) => {
            env.base.pred_push(v1, v2);
            let ok = alpha_terms(b1, b2, env);
            env.base.pred_pop();
            ok
        }
        (PredApp(t1, p1), PredApp(t2, p2)) => {
            alpha_terms(t1, t2, env) && {
                let (x1, x2) = (&p1.binder, &p2.binder);
                env.base.with_ind(x1, x2, |base| {
                    // Reborrow trick: the formula comparison only needs the
                    // base environment.
                    alpha_eq_formula(&p1.body, &p2.body, base)
                })
            }
        }
        _ => false,
    }
}

fn alpha_arm(a: &CaseArm, b: &CaseArm, env: &mut TermAlphaEnv) -> bool {
    alpha_ann(&a.ann, &b.ann, env)
        && env.with_proof(&a.var, &b.var, |env| alpha_terms(&a.body, &b.body, env))
}

fn alpha_clause(a: &ExClause, b: &ExClause, env: &mut TermAlphaEnv) -> bool {
    // The individual binder scopes over the annotation and the body; the
    // proof binder only over the body.
    env.base.ind_push(&a.ind_var, &b.ind_var);
    let ok = alpha_ann(&a.ann, &b.ann, env)
        && env.with_proof(&a.var, &b.var, |env| alpha_terms(&a.body, &b.body, env));
    env.base.ind_pop();
    ok
}
