use std::collections::HashMap;

use super::ast::Expr;
use super::parser::parse;
use super::ExprError;
use crate::coeff::{ParamRat, Rational, Symbol};
use crate::weyl::{Layout, Vars, WeylError, WeylExpr};

/// Evaluation context: the target algebra, plus optional identifier
/// bindings that take precedence over generators and scalar symbols.
#[derive(Clone, Debug)]
pub struct Env {
    pub vars: Vars,
    pub layout: Layout,
    pub bindings: HashMap<String, WeylExpr>,
}

impl Env {
    pub fn new(vars: &Vars, layout: Layout) -> Env {
        Env {
            vars: vars.clone(),
            layout,
            bindings: HashMap::new(),
        }
    }

    pub fn bind(mut self, name: &str, value: WeylExpr) -> Env {
        self.bindings.insert(name.to_string(), value);
        self
    }
}

fn lift(e: WeylError, what: &Expr) -> ExprError {
    match e {
        WeylError::NotInvertible(_) => ExprError::IllegalInverse(what.to_string()),
        other => ExprError::Weyl(other),
    }
}

/// Evaluates in written order, normal-ordering as it goes.
pub fn eval(e: &Expr, env: &Env) -> Result<WeylExpr, ExprError> {
    Ok(match e {
        Expr::Int(n) => WeylExpr::scalar(
            &env.vars,
            env.layout,
            ParamRat::constant(Rational::from(n.clone())),
        ),
        Expr::Ident(s) => {
            if let Some(v) = env.bindings.get(s) {
                v.to_layout(Layout {
                    laurent: v.layout().laurent.or(env.layout.laurent),
                    ..env.layout
                })?
            } else if let Some(slot) = env.vars.slot_of(s) {
                WeylExpr::generator(&env.vars, env.layout, slot)
            } else if let Some(sym) = Symbol::from_name(s) {
                WeylExpr::scalar(&env.vars, env.layout, ParamRat::var(sym))
            } else {
                return Err(ExprError::UnknownSymbol(s.clone()));
            }
        }
        Expr::Neg(a) => eval(a, env)?.neg(),
        Expr::Add(a, b) => eval(a, env)?.try_add(&eval(b, env)?)?,
        Expr::Sub(a, b) => eval(a, env)?.try_sub(&eval(b, env)?)?,
        Expr::Mul(a, b) => eval(a, env)?.try_mul(&eval(b, env)?)?,
        Expr::Div(a, b) => {
            let d = eval(b, env)?;
            let inv = match d.as_scalar() {
                Some(c) if c.is_zero() => return Err(ExprError::IllegalInverse(b.to_string())),
                Some(c) => WeylExpr::scalar(&env.vars, d.layout(), c.recip().expect("nonzero")),
                None => d.inverse().map_err(|err| lift(err, b))?,
            };
            eval(a, env)?.try_mul(&inv)?
        }
        Expr::Pow(a, n) => eval(a, env)?.pow(*n).map_err(|err| lift(err, a))?,
    })
}

/// Evaluates an expression that must not mention any algebra generator.
pub fn eval_scalar(e: &Expr) -> Result<ParamRat, ExprError> {
    let vars = Vars::new("", "");
    let v = eval(e, &Env::new(&vars, Layout::POLY))?;
    v.as_scalar()
        .ok_or_else(|| ExprError::NotScalar(e.to_string()))
}

pub fn parse_weyl(src: &str, vars: &Vars, layout: Layout) -> Result<WeylExpr, ExprError> {
    eval(&parse(src)?, &Env::new(vars, layout))
}

pub fn parse_scalar(src: &str) -> Result<ParamRat, ExprError> {
    eval_scalar(&parse(src)?)
}
