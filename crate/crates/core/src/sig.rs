//! Signatures: the stock of individual constants, function symbols and
//! predicate symbols a formula may mention.

use std::collections::BTreeMap;
use thiserror::Error;

/// Reserved name of the falsity predicate. It is not stored in the symbol
/// tables; `Formula::Falsum` is its only representation.
pub const FALSUM_NAME: &str = "bot";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("duplicate constant `{0}`")]
    DuplicateConstant(String),
    #[error("duplicate function symbol `{0}`")]
    DuplicateFunction(String),
    #[error("duplicate predicate symbol `{0}`")]
    DuplicatePredicate(String),
    #[error("the falsity predicate `{}` cannot be redeclared", FALSUM_NAME)]
    FalsumRedeclared,
    #[error("function symbol `{0}` must have arity >= 1")]
    NullaryFunction(String),
}

/// Symbol table for the first-order language. Constants have arity 0,
/// functions arity >= 1, predicates any arity. Names are unique within
/// each category.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    constants: BTreeMap<String, ()>,
    functions: BTreeMap<String, usize>,
    predicates: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// The signature used by the command-line tools when no signature file
    /// is given: constants c0, c1, c2, a unary function f, unary predicates
    /// P and Q and a binary predicate R.
    pub fn standard() -> Self {
        let mut sig = Self::new();
        for c in ["c0", "c1", "c2"] {
            sig.add_constant(c).unwrap();
        }
        sig.add_function("f", 1).unwrap();
        sig.add_predicate("P", 1).unwrap();
        sig.add_predicate("Q", 1).unwrap();
        sig.add_predicate("R", 2).unwrap();
        sig
    }

    pub fn add_constant(&mut self, name: &str) -> Result<(), SignatureError> {
        if self.constants.contains_key(name) {
            return Err(SignatureError::DuplicateConstant(name.to_owned()));
        }
        self.constants.insert(name.to_owned(), ());
        Ok(())
    }

    pub fn add_function(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        if arity == 0 {
            return Err(SignatureError::NullaryFunction(name.to_owned()));
        }
        if self.functions.contains_key(name) {
            return Err(SignatureError::DuplicateFunction(name.to_owned()));
        }
        self.functions.insert(name.to_owned(), arity);
        Ok(())
    }

    pub fn add_predicate(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        if name == FALSUM_NAME {
            return Err(SignatureError::FalsumRedeclared);
        }
        if self.predicates.contains_key(name) {
            return Err(SignatureError::DuplicatePredicate(name.to_owned()));
        }
        self.predicates.insert(name.to_owned(), arity);
        Ok(())
    }

    pub fn is_constant(&self, name: &str) -> bool {
        self.constants.contains_key(name)
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.get(name).copied()
    }

    pub fn predicate_arity(&self, name: &str) -> Option<usize> {
        self.predicates.get(name).copied()
    }

    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.constants.keys().map(|s| s.as_str())
    }

    /// First constant in declaration-independent (alphabetical) order.
    /// Used as the fixed witness constant when expanding the derived
    /// second-order existential quantifier.
    pub fn first_constant(&self) -> Option<&str> {
        self.constants.keys().next().map(|s| s.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_signature_contents() {
        let sig = Signature::standard();
        assert!(sig.is_constant("c0"));
        assert!(sig.is_constant("c2"));
        assert_eq!(sig.function_arity("f"), Some(1));
        assert_eq!(sig.predicate_arity("P"), Some(1));
        assert_eq!(sig.predicate_arity("R"), Some(2));
        assert_eq!(sig.first_constant(), Some("c0"));
    }

    #[test]
    fn duplicates_rejected() {
        let mut sig = Signature::standard();
        assert!(matches!(
            sig.add_constant("c0"),
            Err(SignatureError::DuplicateConstant(_))
        ));
        assert!(matches!(
            sig.add_predicate("P", 3),
            Err(SignatureError::DuplicatePredicate(_))
        ));
    }

    #[test]
    fn falsum_cannot_be_redeclared() {
        let mut sig = Signature::new();
        assert_eq!(
            sig.add_predicate(FALSUM_NAME, 0),
            Err(SignatureError::FalsumRedeclared)
        );
    }
}
