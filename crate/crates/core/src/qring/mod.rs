//! Exact arithmetic for Laurent polynomials in `q` with rational exponents,
//! character variables `x1..xn`, and formal normalized Gauss-sum symbols.
//!
//! Everything here is immutable after construction and carries a unique
//! canonical form, so values can be compared for equality, hashed, shared
//! across threads, and serialized reproducibly.

mod cyclotomic;
mod eval;
mod gauss;
mod monomial;
mod poly;

pub use cyclotomic::{cyclotomic_polynomial, Cyclotomic};
pub use eval::{
    substitute, substitute_family, CharacterAssignment, CharacterValue, EvalKey, EvaluatedValue,
    FamilyValue, Torsion,
};
pub use gauss::{GaussReduction, GaussSymbol};
pub use monomial::{Monomial, Rat};
pub use poly::{parse_rat, Polynomial};

use thiserror::Error;

#[cfg(test)]
mod thread_safety {
    // All values are immutable after construction and freely shareable.
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn values_are_send_and_sync() {
        assert_send_sync::<super::Polynomial>();
        assert_send_sync::<super::Monomial>();
        assert_send_sync::<super::GaussSymbol>();
        assert_send_sync::<super::Cyclotomic>();
        assert_send_sync::<super::EvaluatedValue>();
        assert_send_sync::<super::CharacterAssignment>();
        assert_send_sync::<super::Torsion>();
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QringError {
    #[error("variable count mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("invalid Gauss symbol g({modulus},{residue}): residue must be nonzero mod the modulus and the modulus at least 2")]
    InvalidGaussSymbol { modulus: u32, residue: i64 },
    #[error("invalid torsion zeta_{order}^{power}: order must be positive")]
    InvalidTorsion { order: i64, power: i64 },
    #[error("no value assigned to variable x{}", index + 1)]
    MissingVariable { index: usize },
    #[error("malformed polynomial JSON")]
    MalformedJson,
}
