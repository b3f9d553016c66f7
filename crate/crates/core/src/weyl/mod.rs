//! The quantized Weyl algebra `v1·v2 − v2·v1 = h`, localized at one of its
//! two generators.
//!
//! Elements are stored normal-ordered. Under [`Convention::FirstLeft`] a
//! monomial is `v1^m v2^n`; under [`Convention::SecondLeft`] it is
//! `v2^n v1^m`. Either way the term key is `(m, n)`. At most one generator
//! may carry negative exponents, the one named by [`Layout::laurent`].

mod classical;
mod element;
mod flow;
mod print;
mod subst;

pub use classical::{classical_limit, poisson_bracket, CommPoly};
pub use element::{Convention, Layout, Slot, Vars, WeylExpr};
pub use flow::{apply_derivation, hamilton_flow, hamilton_partials, FlowDerivation};
pub use subst::{substitute, SubstOptions};

use crate::coeff::CoeffError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeylError {
    #[error("variable mismatch: ({0}) vs ({1})")]
    VariableMismatch(String, String),
    #[error("ordering convention mismatch")]
    ConventionMismatch,
    #[error("Laurent side mismatch")]
    LaurentMismatch,
    #[error("negative exponent outside the Laurent variable: {0}")]
    LaurentViolation(String),
    #[error("reordering {0} needs an infinite series")]
    InfiniteSeries(String),
    #[error("expected a polynomial element, found {0}")]
    NotPolynomial(String),
    #[error("coefficient not divisible by h: {0}")]
    NotDivisibleByH(String),
    #[error("images are not canonical: [phi, psi] = {0}")]
    NonCanonical(String),
    #[error("no inverse in this algebra: {0}")]
    NotInvertible(String),
    #[error("coefficient has a pole at h = 0: {0}")]
    PoleAtZero(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}
