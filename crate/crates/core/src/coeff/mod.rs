//! Exact scalar coefficients: rational functions in the parameters, the
//! deformation parameter `h`, the time `t` and the unknowns.

mod gcd;
pub mod linalg;
mod poly;
mod rat;
mod symbol;

pub use gcd::{content, gcd, lcm, primitive_part};
pub use linalg::{
    residual, solve_linear, verify_solution, LinearSolution, PolyMatrix, SolveStatus,
};
pub use poly::{int, rat, ParamPoly, Rational};
pub use rat::{inv_int, specialize_poly, ParamRat};
pub use symbol::{Monomial, Symbol};

pub(crate) use poly::{fmt_monomial, fmt_rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoeffError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("denominator vanishes under specialization: {0}")]
    DenominatorVanishes(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
}
