//! First- and second-order formulas, individual terms and predicate
//! abstractions, together with capture-avoiding substitution and alpha
//! equivalence.

use std::collections::BTreeSet;

/// Picks a name based on `base` that does not occur in `avoid`.
/// Deterministic: the same inputs always yield the same name.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    if !avoid.contains(base) {
        return base.to_owned();
    }
    let mut candidate = base.to_owned();
    loop {
        candidate.push('\'');
        if !avoid.contains(&candidate) {
            return candidate;
        }
    }
}

/// A term of the individual (first-order) language: a variable, a constant,
/// or a function symbol applied to terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum IndTerm {
    Var(String),
    Const(String),
    App(String, Vec<IndTerm>),
}

impl IndTerm {
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut out);
        out
    }

    pub(crate) fn collect_free_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            IndTerm::Var(v) => {
                out.insert(v.clone());
            }
            IndTerm::Const(_) => {}
            IndTerm::App(_, args) => {
                for a in args {
                    a.collect_free_vars(out);
                }
            }
        }
    }

    /// Capture-free by construction: individual terms have no binders.
    pub fn subst(&self, var: &str, replacement: &IndTerm) -> IndTerm {
        match self {
            IndTerm::Var(v) if v == var => replacement.clone(),
            IndTerm::Var(_) | IndTerm::Const(_) => self.clone(),
            IndTerm::App(f, args) => IndTerm::App(
                f.clone(),
                args.iter().map(|a| a.subst(var, replacement)).collect(),
            ),
        }
    }
}

/// A predicate abstraction: an individual variable together with a formula
/// body. Applying it to a term m yields body[m/binder].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredAbs {
    pub binder: String,
    pub body: Formula,
}

impl PredAbs {
    pub fn new(binder: impl Into<String>, body: Formula) -> Self {
        PredAbs {
            binder: binder.into(),
            body,
        }
    }

    /// body[m/binder], capture-avoiding.
    pub fn apply(&self, arg: &IndTerm) -> Formula {
        self.body.subst_ind(&self.binder, arg)
    }

    pub fn free_ind_vars(&self) -> BTreeSet<String> {
        let mut vars = self.body.free_ind_vars();
        vars.remove(&self.binder);
        vars
    }

    pub fn free_pred_vars(&self) -> BTreeSet<String> {
        self.body.free_pred_vars()
    }

    /// Capture-avoiding substitution of an individual term under the
    /// abstraction binder.
    pub fn subst_ind(&self, var: &str, replacement: &IndTerm) -> PredAbs {
        if self.binder == var {
            return self.clone();
        }
        let (binder, body) = rebind_ind(&self.binder, &self.body, var, replacement);
        PredAbs {
            binder,
            body: body.subst_ind(var, replacement),
        }
    }

    /// Substitutes a predicate abstraction for a predicate variable inside
    /// the body, renaming the individual binder when it would capture.
    pub fn subst_pred(&self, var: &str, abs: &PredAbs) -> PredAbs {
        let (binder, body) = rebind_ind_for_pred(&self.binder, &self.body, var, abs);
        PredAbs {
            binder,
            body: body.subst_pred(var, abs),
        }
    }

    pub fn alpha_eq(&self, other: &PredAbs) -> bool {
        let mut env = AlphaEnv::default();
        env.with_ind(&self.binder, &other.binder, |env| {
            alpha_eq_formula(&self.body, &other.body, env)
        })
    }
}

/// Formulas of the logic. Negation is a derived form (A -> bot) and is
/// expanded by the parser; `PredVarAtom` and `ForallPred` appear only in
/// the second-order systems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    /// Predicate constant applied to individual terms.
    Atom(String, Vec<IndTerm>),
    /// Predicate variable applied to exactly one individual term.
    PredVarAtom(String, IndTerm),
    Falsum,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    ForallInd(String, Box<Formula>),
    ExistsInd(String, Box<Formula>),
    ForallPred(String, Box<Formula>),
}

impl Formula {
    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Formula) -> Formula {
        Formula::imp(a, Formula::Falsum)
    }

    pub fn forall(v: impl Into<String>, body: Formula) -> Formula {
        Formula::ForallInd(v.into(), Box::new(body))
    }

    pub fn exists(v: impl Into<String>, body: Formula) -> Formula {
        Formula::ExistsInd(v.into(), Box::new(body))
    }

    pub fn forall_pred(v: impl Into<String>, body: Formula) -> Formula {
        Formula::ForallPred(v.into(), Box::new(body))
    }

    /// Atomic formulas are the legal targets of ex falso.
    pub fn is_atomic(&self) -> bool {
        matches!(
            self,
            Formula::Atom(_, _) | Formula::PredVarAtom(_, _) | Formula::Falsum
        )
    }

    /// True when the formula uses second-order syntax anywhere.
    pub fn is_second_order(&self) -> bool {
        match self {
            Formula::Atom(_, _) | Formula::Falsum => false,
            Formula::PredVarAtom(_, _) | Formula::ForallPred(_, _) => true,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.is_second_order() || b.is_second_order()
            }
            Formula::ForallInd(_, a) | Formula::ExistsInd(_, a) => a.is_second_order(),
        }
    }

    pub fn free_ind_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free_ind_vars(&mut out);
        out
    }

    fn collect_free_ind_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(_, args) => {
                for a in args {
                    a.collect_free_vars(out);
                }
            }
            Formula::PredVarAtom(_, arg) => arg.collect_free_vars(out),
            Formula::Falsum => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_free_ind_vars(out);
                b.collect_free_ind_vars(out);
            }
            Formula::ForallInd(v, a) | Formula::ExistsInd(v, a) => {
                let mut inner = BTreeSet::new();
                a.collect_free_ind_vars(&mut inner);
                inner.remove(v);
                out.extend(inner);
            }
            Formula::ForallPred(_, a) => a.collect_free_ind_vars(out),
        }
    }

    pub fn free_pred_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free_pred_vars(&mut out);
        out
    }

    fn collect_free_pred_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(_, _) | Formula::Falsum => {}
            Formula::PredVarAtom(x, _) => {
                out.insert(x.clone());
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_free_pred_vars(out);
                b.collect_free_pred_vars(out);
            }
            Formula::ForallInd(_, a) | Formula::ExistsInd(_, a) => a.collect_free_pred_vars(out),
            Formula::ForallPred(x, a) => {
                let mut inner = BTreeSet::new();
                a.collect_free_pred_vars(&mut inner);
                inner.remove(x);
                out.extend(inner);
            }
        }
    }

    /// Capture-avoiding substitution of an individual term for a free
    /// individual variable.
    pub fn subst_ind(&self, var: &str, replacement: &IndTerm) -> Formula {
        match self {
            Formula::Atom(p, args) => Formula::Atom(
                p.clone(),
                args.iter().map(|a| a.subst(var, replacement)).collect(),
            ),
            Formula::PredVarAtom(x, arg) => {
                Formula::PredVarAtom(x.clone(), arg.subst(var, replacement))
            }
            Formula::Falsum => Formula::Falsum,
            Formula::And(a, b) => Formula::and(
                a.subst_ind(var, replacement),
                b.subst_ind(var, replacement),
            ),
            Formula::Or(a, b) => Formula::or(
                a.subst_ind(var, replacement),
                b.subst_ind(var, replacement),
            ),
            Formula::Imp(a, b) => Formula::imp(
                a.subst_ind(var, replacement),
                b.subst_ind(var, replacement),
            ),
            Formula::ForallInd(v, _) | Formula::ExistsInd(v, _) if v == var => self.clone(),
            Formula::ForallInd(v, a) => {
                let (v, a) = rebind_ind(v, a, var, replacement);
                Formula::ForallInd(v, Box::new(a.subst_ind(var, replacement)))
            }
            Formula::ExistsInd(v, a) => {
                let (v, a) = rebind_ind(v, a, var, replacement);
                Formula::ExistsInd(v, Box::new(a.subst_ind(var, replacement)))
            }
            Formula::ForallPred(x, a) => {
                Formula::ForallPred(x.clone(), Box::new(a.subst_ind(var, replacement)))
            }
        }
    }

    /// Replaces every atomic subformula X(m) by abs.body[m/abs.binder],
    /// without capturing free variables of abs.
    pub fn subst_pred(&self, var: &str, abs: &PredAbs) -> Formula {
        match self {
            Formula::Atom(_, _) | Formula::Falsum => self.clone(),
            Formula::PredVarAtom(x, arg) if x == var => abs.apply(arg),
            Formula::PredVarAtom(_, _) => self.clone(),
            Formula::And(a, b) => Formula::and(a.subst_pred(var, abs), b.subst_pred(var, abs)),
            Formula::Or(a, b) => Formula::or(a.subst_pred(var, abs), b.subst_pred(var, abs)),
            Formula::Imp(a, b) => Formula::imp(a.subst_pred(var, abs), b.subst_pred(var, abs)),
            Formula::ForallInd(v, a) => {
                let (v, a) = rebind_ind_for_pred(v, a, var, abs);
                Formula::ForallInd(v, Box::new(a.subst_pred(var, abs)))
            }
            Formula::ExistsInd(v, a) => {
                let (v, a) = rebind_ind_for_pred(v, a, var, abs);
                Formula::ExistsInd(v, Box::new(a.subst_pred(var, abs)))
            }
            Formula::ForallPred(x, _) if x == var => self.clone(),
            Formula::ForallPred(x, a) => {
                // Rename the bound predicate variable if it would capture a
                // free predicate variable of the abstraction body.
                if abs.free_pred_vars().contains(x) {
                    let mut avoid = abs.free_pred_vars();
                    avoid.extend(a.free_pred_vars());
                    avoid.insert(var.to_owned());
                    let x2 = fresh_name(x, &avoid);
                    let renamed = rename_pred_var(a, x, &x2);
                    Formula::ForallPred(x2, Box::new(renamed.subst_pred(var, abs)))
                } else {
                    Formula::ForallPred(x.clone(), Box::new(a.subst_pred(var, abs)))
                }
            }
        }
    }

    /// Alpha equivalence of formulas.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        alpha_eq_formula(self, other, &mut AlphaEnv::default())
    }
}

/// Renames the bound individual variable of a quantifier when substituting
/// `replacement` for `var` below it would capture. The caller has already
/// ruled out the shadowing case v == var.
fn rebind_ind(v: &str, body: &Formula, var: &str, replacement: &IndTerm) -> (String, Formula) {
    if replacement.free_vars().contains(v) && body.free_ind_vars().contains(var) {
        let mut avoid = replacement.free_vars();
        avoid.extend(body.free_ind_vars());
        avoid.insert(var.to_owned());
        let v2 = fresh_name(v, &avoid);
        let body2 = body.subst_ind(v, &IndTerm::Var(v2.clone()));
        (v2, body2)
    } else {
        (v.to_owned(), body.clone())
    }
}

/// Renames every free occurrence of predicate variable `from` to `to`.
fn rename_pred_var(f: &Formula, from: &str, to: &str) -> Formula {
    let abs = PredAbs::new("__renamed", Formula::PredVarAtom(to.to_owned(), IndTerm::Var("__renamed".to_owned())));
    f.subst_pred(from, &abs)
}

fn rebind_ind_for_pred(v: &str, body: &Formula, var: &str, abs: &PredAbs) -> (String, Formula) {
    let body_mentions_pred = body.free_pred_vars().contains(var);
    if body_mentions_pred && abs.free_ind_vars().contains(v) {
        let mut avoid = abs.free_ind_vars();
        avoid.extend(body.free_ind_vars());
        let v2 = fresh_name(v, &avoid);
        let body2 = body.subst_ind(v, &IndTerm::Var(v2.clone()));
        (v2, body2)
    } else {
        (v.to_owned(), body.clone())
    }
}

/// Environment for alpha comparison: pairs of bound names, innermost last.
#[derive(Default)]
pub(crate) struct AlphaEnv {
    ind: Vec<(String, String)>,
    pred: Vec<(String, String)>,
}

impl AlphaEnv {
    pub(crate) fn ind_eq(&self, a: &str, b: &str) -> bool {
        for (l, r) in self.ind.iter().rev() {
            let la = l == a;
            let rb = r == b;
            if la || rb {
                return la && rb;
            }
        }
        a == b
    }

    pub(crate) fn pred_eq(&self, a: &str, b: &str) -> bool {
        for (l, r) in self.pred.iter().rev() {
            let la = l == a;
            let rb = r == b;
            if la || rb {
                return la && rb;
            }
        }
        a == b
    }

    pub(crate) fn ind_push(&mut self, a: &str, b: &str) {
        self.ind.push((a.to_owned(), b.to_owned()));
    }

    pub(crate) fn ind_pop(&mut self) {
        self.ind.pop();
    }

    pub(crate) fn pred_push(&mut self, a: &str, b: &str) {
        self.pred.push((a.to_owned(), b.to_owned()));
    }

    pub(crate) fn pred_pop(&mut self) {
        self.pred.pop();
    }

    pub(crate) fn with_ind<R>(
        &mut self,
        a: &str,
        b: &str,
        f: impl FnOnce(&mut Self) -> R,
    ) -> R {
        self.ind.push((a.to_owned(), b.to_owned()));
        let r = f(self);
        self.ind.pop();
        r
    }

    pub(crate) fn with_pred<R>(
        &mut self,
        a: &str,
        b: &str,
        f: impl FnOnce(&mut Self) -> R,
    ) -> R {
        self.pred.push((a.to_owned(), b.to_owned()));
        let r = f(self);
        self.pred.pop();
        r
    }
}

fn alpha_eq_ind(a: &IndTerm, b: &IndTerm, env: &AlphaEnv) -> bool {
    match (a, b) {
        (IndTerm::Var(x), IndTerm::Var(y)) => env.ind_eq(x, y),
        (IndTerm::Const(x), IndTerm::Const(y)) => x == y,
        (IndTerm::App(f, xs), IndTerm::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_eq_ind(x, y, env))
        }
        _ => false,
    }
}

pub(crate) fn alpha_eq_formula(a: &Formula, b: &Formula, env: &mut AlphaEnv) -> bool {
    match (a, b) {
        (Formula::Atom(p, xs), Formula::Atom(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_eq_ind(x, y, env))
        }
        (Formula::PredVarAtom(x, m), Formula::PredVarAtom(y, n)) => {
            env.pred_eq(x, y) && alpha_eq_ind(m, n, env)
        }
        (Formula::Falsum, Formula::Falsum) => true,
        (Formula::And(a1, b1), Formula::And(a2, b2))
        | (Formula::Or(a1, b1), Formula::Or(a2, b2))
        | (Formula::Imp(a1, b1), Formula::Imp(a2, b2)) => {
            alpha_eq_formula(a1, a2, env) && alpha_eq_formula(b1, b2, env)
        }
        (Formula::ForallInd(v1, a1), Formula::ForallInd(v2, a2))
        | (Formula::ExistsInd(v1, a1), Formula::ExistsInd(v2, a2)) => {
            env.with_ind(v1, v2, |env| alpha_eq_formula(a1, a2, env))
        }
        (Formula::ForallPred(x1, a1), Formula::ForallPred(x2, a2)) => {
            env.with_pred(x1, x2, |env| alpha_eq_formula(a1, a2, env))
        }
        _ => false,
    }
}

pub(crate) fn alpha_eq_ind_in(a: &IndTerm, b: &IndTerm, env: &AlphaEnv) -> bool {
    alpha_eq_ind(a, b, env)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom1(p: &str, m: IndTerm) -> Formula {
        Formula::Atom(p.to_owned(), vec![m])
    }

    fn var(v: &str) -> IndTerm {
        IndTerm::Var(v.to_owned())
    }

    fn cst(c: &str) -> IndTerm {
        IndTerm::Const(c.to_owned())
    }

    #[test]
    fn subst_ind_basic() {
        // P(a)[c/a] = P(c)
        let f = atom1("P", var("a"));
        assert_eq!(f.subst_ind("a", &cst("c")), atom1("P", cst("c")));
    }

    #[test]
    fn subst_ind_shadowed() {
        // (forall a. P(a))[c/a] leaves the bound occurrence untouched
        let f = Formula::forall("a", atom1("P", var("a")));
        assert_eq!(f.subst_ind("a", &cst("c")), f);
    }

    #[test]
    fn subst_ind_capture_renames() {
        // (exists b. P2(a, b))[f(b)/a] renames the binder
        let f = Formula::exists(
            "b",
            Formula::Atom("R".to_owned(), vec![var("a"), var("b")]),
        );
        let replaced = f.subst_ind("a", &IndTerm::App("f".to_owned(), vec![var("b")]));
        match &replaced {
            Formula::ExistsInd(v, body) => {
                assert_ne!(v, "b");
                let expected = Formula::Atom(
                    "R".to_owned(),
                    vec![IndTerm::App("f".to_owned(), vec![var("b")]), var(v)],
                );
                assert_eq!(**body, expected);
            }
            other => panic!("unexpected result {other:?}"),
        }
        // and the result is alpha-invariant under the choice of new name
        let expected = Formula::exists(
            "z",
            Formula::Atom(
                "R".to_owned(),
                vec![IndTerm::App("f".to_owned(), vec![var("b")]), var("z")],
            ),
        );
        assert!(replaced.alpha_eq(&expected));
    }

    #[test]
    fn subst_pred_basic() {
        // X(c)[lam a. P(a) / X] = P(c)
        let f = Formula::PredVarAtom("X".to_owned(), cst("c"));
        let abs = PredAbs::new("a", atom1("P", var("a")));
        assert_eq!(f.subst_pred("X", &abs), atom1("P", cst("c")));
        // distinct predicate variable untouched
        let g = Formula::PredVarAtom("Y".to_owned(), cst("c"));
        assert_eq!(g.subst_pred("X", &abs), g);
    }

    #[test]
    fn subst_pred_capture_renames() {
        // (forall a. X(a))[lam b. R(b, a) / X] must rename the quantified a
        let f = Formula::forall("a", Formula::PredVarAtom("X".to_owned(), var("a")));
        let abs = PredAbs::new(
            "b",
            Formula::Atom("R".to_owned(), vec![var("b"), var("a")]),
        );
        let result = f.subst_pred("X", &abs);
        let expected = Formula::forall(
            "w",
            Formula::Atom("R".to_owned(), vec![var("w"), var("a")]),
        );
        assert!(result.alpha_eq(&expected), "got {result:?}");
    }

    #[test]
    fn alpha_eq_quantifiers() {
        let f = Formula::forall("a", atom1("P", var("a")));
        let g = Formula::forall("b", atom1("P", var("b")));
        assert!(f.alpha_eq(&g));
        let h = Formula::forall("b", atom1("P", cst("c0")));
        assert!(!f.alpha_eq(&h));
    }

    #[test]
    fn alpha_eq_distinguishes_free_vars() {
        let f = atom1("P", var("a"));
        let g = atom1("P", var("b"));
        assert!(!f.alpha_eq(&g));
    }
}
