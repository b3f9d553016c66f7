//! Text front-end: a small expression grammar for algebra elements and
//! scalar coefficients.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/' | <juxtaposition>) unary)*
//! unary := '-' unary | power
//! power := atom ('^' exponent)?
//! atom  := integer | identifier | '(' expr ')'
//! exponent := '-'? integer | '(' '-'? integer ')'
//! ```
//!
//! Products keep their written order. `/` divides on the right and is only
//! defined when the divisor is a nonzero scalar or an invertible monomial of
//! the Laurent generator.

mod ast;
mod eval;
mod lexer;
mod parser;

pub use ast::Expr;
pub use eval::{eval, eval_scalar, parse_scalar, parse_weyl, Env};
pub use parser::parse;

use crate::weyl::WeylError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("illegal inverse of `{0}`")]
    IllegalInverse(String),
    #[error("expected a scalar, found `{0}`")]
    NotScalar(String),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}
