//! A proof-term kernel for first- and second-order Dummett logic.
//!
//! The calculus is intuitionistic natural deduction extended with the
//! parallel operator `u par_a v`, whose binder `a` carries the two dual
//! hypotheses `A -> B` and `B -> A`. The crate provides:
//!
//! - syntax, substitution and alpha equivalence ([`term`], [`formula`]);
//! - a type checker for the four system flavors ([`typecheck`]);
//! - head-redex selection and contraction ([`reduction`]);
//! - a normalizer with traces and normal-form classification
//!   ([`normalize`]);
//! - Herbrand witness extraction from existential proofs ([`herbrand`]);
//! - an executable check of the local simulation of communication by the
//!   abort operator ([`simulate`]);
//! - a branch-parallel normalization strategy ([`parallel`]);
//! - a text syntax with parser and canonical printer ([`parse`], [`print`]).

pub mod canon;
pub mod formula;
pub mod herbrand;
pub mod normalize;
pub mod parallel;
pub mod parse;
pub mod print;
pub mod reduction;
pub mod sig;
pub mod simulate;
pub mod subst;
pub mod term;
pub mod typecheck;

pub use canon::{canonicalize, canonicalize_formula};
pub use formula::{Formula, IndTerm, PredAbs};
pub use parse::{parse_formula, parse_signature, parse_term, ParseError};
pub use sig::Signature;
pub use subst::{subst_ind_term, subst_pred_term, subst_proof};
pub use term::{alpha_eq_term, CaseArm, ExClause, Frame, FrameView, ProofTerm, Stack};
pub use typecheck::{Context, SystemFlavor, TypeError};
