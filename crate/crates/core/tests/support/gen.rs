//! Random generation of well-typed proof terms over the default signature.
//! Terms are goal-directed: every construction step produces a term of a
//! requested formula under a hypothesis pool, so generation cannot fail,
//! and a final typecheck guards against generator bugs.

use rand::rngs::StdRng;
use rand::Rng;

use lc_kernel::formula::{Formula, IndTerm};
use lc_kernel::typecheck::{typecheck, Context, SystemFlavor};
use lc_kernel::{CaseArm, ExClause, ProofTerm};

fn atom(p: &str, m: &str) -> Formula {
    Formula::Atom(p.to_owned(), vec![IndTerm::Const(m.to_owned())])
}

/// The hypothesis pool every generated term may draw from.
pub fn hypotheses() -> Vec<(String, Formula)> {
    vec![
        ("h_p".to_owned(), atom("P", "c0")),
        ("h_q".to_owned(), atom("Q", "c0")),
        ("h_p1".to_owned(), atom("P", "c1")),
        (
            "h_r".to_owned(),
            Formula::Atom(
                "R".to_owned(),
                vec![IndTerm::Const("c0".into()), IndTerm::Const("c1".into())],
            ),
        ),
        (
            "h_imp".to_owned(),
            Formula::imp(atom("P", "c0"), atom("Q", "c0")),
        ),
        (
            "h_all".to_owned(),
            Formula::forall("v", Formula::Atom("P".to_owned(), vec![IndTerm::Var("v".into())])),
        ),
        ("h_bot".to_owned(), Formula::Falsum),
    ]
}

pub struct Generator {
    rng: StdRng,
    fresh: usize,
}

impl Generator {
    pub fn new(rng: StdRng) -> Self {
        Generator { rng, fresh: 0 }
    }

    fn fresh_proof_var(&mut self) -> String {
        self.fresh += 1;
        format!("g{}", self.fresh)
    }

    fn fresh_ind_var(&mut self) -> String {
        self.fresh += 1;
        format!("i{}", self.fresh)
    }

    fn constant(&mut self) -> IndTerm {
        let c = ["c0", "c1", "c2"][self.rng.gen_range(0..3)];
        IndTerm::Const(c.to_owned())
    }

    /// A random goal formula of bounded depth.
    pub fn formula(&mut self, depth: usize) -> Formula {
        let atoms = [atom("P", "c0"), atom("Q", "c0"), atom("P", "c1")];
        if depth == 0 {
            return atoms[self.rng.gen_range(0..atoms.len())].clone();
        }
        match self.rng.gen_range(0..8) {
            0 | 1 => Formula::imp(self.formula(depth - 1), self.formula(depth - 1)),
            2 => Formula::and(self.formula(depth - 1), self.formula(depth - 1)),
            3 => Formula::or(self.formula(depth - 1), self.formula(depth - 1)),
            4 => {
                let v = self.fresh_ind_var();
                // A goal with a live quantifier: forall v. P(v) -> goal'.
                let hyp = Formula::Atom("P".to_owned(), vec![IndTerm::Var(v.clone())]);
                Formula::forall(v, Formula::imp(hyp, self.formula(depth - 1)))
            }
            5 => {
                let v = self.fresh_ind_var();
                let body = Formula::imp(
                    atom("P", "c0"),
                    Formula::Atom("P".to_owned(), vec![IndTerm::Var(v.clone())]),
                );
                Formula::exists(v, body)
            }
            _ => atoms[self.rng.gen_range(0..atoms.len())].clone(),
        }
    }

    /// A term of type `goal` under `ctx`, with redex-producing detours.
    pub fn term(&mut self, ctx: &[(String, Formula)], goal: &Formula, depth: usize) -> ProofTerm {
        if depth == 0 {
            return self.base(ctx, goal);
        }
        match self.rng.gen_range(0..12) {
            // Plain introduction or axiom.
            0 | 1 => self.base_or_intro(ctx, goal, depth),
            // Beta detour: (fun x : F => <goal>) <F>.
            2 | 3 => {
                let hyp = self.formula(1);
                let var = self.fresh_proof_var();
                let mut inner = ctx.to_vec();
                inner.push((var.clone(), hyp.clone()));
                let body = self.term(&inner, goal, depth - 1);
                let arg = self.term(ctx, &hyp, depth - 1);
                ProofTerm::app(ProofTerm::lam(var, Some(hyp), body), arg)
            }
            // Projection detour: <pair> pi_i.
            4 => {
                let other = self.formula(1);
                let side = self.rng.gen_range(0..2u8);
                let (l, r) = if side == 0 {
                    (goal.clone(), other)
                } else {
                    (other, goal.clone())
                };
                let pair = ProofTerm::Pair(
                    Box::new(self.term(ctx, &l, depth - 1)),
                    Box::new(self.term(ctx, &r, depth - 1)),
                );
                ProofTerm::Proj(Box::new(pair), side)
            }
            // Case detour on a known injection.
            5 => {
                let left = self.formula(1);
                let right = self.formula(1);
                let disj = Formula::or(left.clone(), right.clone());
                let side = self.rng.gen_range(0..2u8);
                let body = self.term(ctx, if side == 0 { &left } else { &right }, depth - 1);
                let scrut = ProofTerm::Inj {
                    side,
                    ann: Some(disj),
                    body: Box::new(body),
                };
                let xv = self.fresh_proof_var();
                let yv = self.fresh_proof_var();
                let mut lctx = ctx.to_vec();
                lctx.push((xv.clone(), left.clone()));
                let mut rctx = ctx.to_vec();
                rctx.push((yv.clone(), right.clone()));
                ProofTerm::Case {
                    scrut: Box::new(scrut),
                    arms: Box::new((
                        CaseArm {
                            var: xv,
                            ann: Some(left),
                            body: self.term(&lctx, goal, depth - 1),
                        },
                        CaseArm {
                            var: yv,
                            ann: Some(right),
                            body: self.term(&rctx, goal, depth - 1),
                        },
                    )),
                }
            }
            // Existential elimination detour on a known witness.
            6 => {
                let v = self.fresh_ind_var();
                let ex = Formula::exists(
                    v.clone(),
                    Formula::Atom("P".to_owned(), vec![IndTerm::Var(v.clone())]),
                );
                let scrut = ProofTerm::Witness {
                    witness: IndTerm::Const("c0".into()),
                    ann: Some(ex),
                    body: Box::new(self.base(ctx, &atom("P", "c0"))),
                };
                let opened = self.fresh_ind_var();
                let xv = self.fresh_proof_var();
                let opened_ty = Formula::Atom("P".to_owned(), vec![IndTerm::Var(opened.clone())]);
                let mut inner = ctx.to_vec();
                inner.push((xv.clone(), opened_ty.clone()));
                ProofTerm::ExCase {
                    scrut: Box::new(scrut),
                    clause: Box::new(ExClause {
                        ind_var: opened,
                        var: xv,
                        ann: Some(opened_ty),
                        body: self.term(&inner, goal, depth - 1),
                    }),
                }
            }
            // Vacuous generalization detour: (ifun v => <goal>) @ c.
            7 => {
                let v = self.fresh_ind_var();
                let body = self.term(ctx, goal, depth - 1);
                ProofTerm::IndApp(
                    Box::new(ProofTerm::IndLam {
                        var: v,
                        body: Box::new(body),
                    }),
                    self.constant(),
                )
            }
            // Parallel composition; the branches may use the hypothesis,
            // which is what produces communication redexes.
            8 | 9 => {
                let a = self.formula(1);
                let b = self.formula(1);
                let comm = self.fresh_proof_var();
                let left_hyp = Formula::imp(a.clone(), b.clone());
                let right_hyp = Formula::imp(b, a);
                let mut lctx = ctx.to_vec();
                lctx.push((comm.clone(), left_hyp.clone()));
                let mut rctx = ctx.to_vec();
                rctx.push((comm.clone(), right_hyp.clone()));
                ProofTerm::par(
                    comm,
                    Some((left_hyp, right_hyp)),
                    self.term(&lctx, goal, depth - 1),
                    self.term(&rctx, goal, depth - 1),
                )
            }
            // Use an implication hypothesis whose codomain is the goal.
            10 => {
                let matching: Vec<(String, Formula)> = ctx
                    .iter()
                    .filter(|(_, f)| {
                        matches!(f, Formula::Imp(_, cod) if cod.alpha_eq(goal))
                    })
                    .cloned()
                    .collect();
                if let Some((name, hyp)) = pick(&mut self.rng, &matching) {
                    let Formula::Imp(dom, _) = hyp else { unreachable!() };
                    let arg = self.term(ctx, &dom, depth - 1);
                    ProofTerm::app(ProofTerm::var(name), arg)
                } else {
                    self.base_or_intro(ctx, goal, depth)
                }
            }
            // Permutation detour: (par of functions) applied to an argument.
            _ => {
                let hyp = self.formula(1);
                let fun_ty = Formula::imp(hyp.clone(), goal.clone());
                let a = atom("P", "c0");
                let b = atom("Q", "c0");
                let comm = self.fresh_proof_var();
                let left_hyp = Formula::imp(a.clone(), b.clone());
                let right_hyp = Formula::imp(b, a);
                let mut lctx = ctx.to_vec();
                lctx.push((comm.clone(), left_hyp.clone()));
                let mut rctx = ctx.to_vec();
                rctx.push((comm.clone(), right_hyp.clone()));
                let par = ProofTerm::par(
                    comm,
                    Some((left_hyp, right_hyp)),
                    self.term(&lctx, &fun_ty, depth - 1),
                    self.term(&rctx, &fun_ty, depth - 1),
                );
                let arg = self.term(ctx, &hyp, depth - 1);
                ProofTerm::app(par, arg)
            }
        }
    }

    fn base_or_intro(
        &mut self,
        ctx: &[(String, Formula)],
        goal: &Formula,
        depth: usize,
    ) -> ProofTerm {
        match goal {
            Formula::Imp(a, b) => {
                let var = self.fresh_proof_var();
                let mut inner = ctx.to_vec();
                inner.push((var.clone(), (**a).clone()));
                ProofTerm::lam(var, Some((**a).clone()), self.term(&inner, b, depth - 1))
            }
            Formula::And(a, b) => ProofTerm::Pair(
                Box::new(self.term(ctx, a, depth - 1)),
                Box::new(self.term(ctx, b, depth - 1)),
            ),
            Formula::Or(a, b) => {
                let side = self.rng.gen_range(0..2u8);
                let body = self.term(ctx, if side == 0 { a } else { b }, depth - 1);
                ProofTerm::Inj {
                    side,
                    ann: Some(goal.clone()),
                    body: Box::new(body),
                }
            }
            _ => self.base(ctx, goal),
        }
    }

    /// The always-terminating fallback: axioms, introductions, the
    /// universal hypothesis, or ex falso from h_bot.
    fn base(&mut self, ctx: &[(String, Formula)], goal: &Formula) -> ProofTerm {
        if let Some((name, _)) = ctx.iter().rev().find(|(_, f)| f.alpha_eq(goal)) {
            return ProofTerm::var(name.clone());
        }
        match goal {
            Formula::Imp(a, b) => {
                let var = self.fresh_proof_var();
                let mut inner = ctx.to_vec();
                inner.push((var.clone(), (**a).clone()));
                ProofTerm::lam(var, Some((**a).clone()), self.base(&inner, b))
            }
            Formula::And(a, b) => {
                ProofTerm::Pair(Box::new(self.base(ctx, a)), Box::new(self.base(ctx, b)))
            }
            Formula::Or(a, _) => ProofTerm::Inj {
                side: 0,
                ann: Some(goal.clone()),
                body: Box::new(self.base(ctx, a)),
            },
            Formula::ForallInd(v, body) => {
                // Rename the binder away from anything free in the context.
                let fresh = self.fresh_ind_var();
                let opened = body.subst_ind(v, &IndTerm::Var(fresh.clone()));
                ProofTerm::IndLam {
                    var: fresh,
                    body: Box::new(self.base(ctx, &opened)),
                }
            }
            Formula::ExistsInd(v, body) => {
                let m = self.constant();
                let instantiated = body.subst_ind(v, &m);
                ProofTerm::Witness {
                    witness: m,
                    ann: Some(goal.clone()),
                    body: Box::new(self.base(ctx, &instantiated)),
                }
            }
            Formula::Falsum => ProofTerm::var("h_bot"),
            atomic => {
                // P(m) is reachable through the universal hypothesis.
                if let Formula::Atom(p, args) = atomic {
                    if p == "P" && args.len() == 1 {
                        return ProofTerm::IndApp(
                            Box::new(ProofTerm::var("h_all")),
                            args[0].clone(),
                        );
                    }
                }
                ProofTerm::Efq {
                    target: atomic.clone(),
                    body: Box::new(ProofTerm::var("h_bot")),
                }
            }
        }
    }
}

fn pick<T: Clone>(rng: &mut StdRng, items: &[T]) -> Option<T> {
    if items.is_empty() {
        None
    } else {
        Some(items[rng.gen_range(0..items.len())].clone())
    }
}

/// Generates one well-typed term and returns it with its context and goal.
/// The term is verified against the type checker before being returned.
pub fn well_typed_term(
    gen: &mut Generator,
    depth: usize,
) -> (Context, ProofTerm, Formula) {
    let hyps = hypotheses();
    let goal = gen.formula(2);
    let term = gen.term(&hyps, &goal, depth);
    let ctx = Context::from_bindings(hyps).expect("hypothesis pool is duplicate-free");
    let derived = typecheck(&ctx, &term, SystemFlavor::Lc)
        .unwrap_or_else(|e| panic!("generator produced an ill-typed term: {e}\n  term: {term}"));
    assert!(
        derived.alpha_eq(&goal),
        "generator missed its goal: wanted {goal}, got {derived}"
    );
    (ctx, term, goal)
}
