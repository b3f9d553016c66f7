use std::collections::BTreeMap;

use super::report::ReportBuilder;
use super::{EngineError, VerificationReport};
use crate::catalog::{NagoyaSystem, PainleveSystem, SymmetryGenerator};
use crate::coeff::{ParamRat, Symbol};
use crate::expr::{eval, Env, Expr, ExprError};
use crate::weyl::{
    apply_derivation, hamilton_flow, substitute, FlowDerivation, Layout, SubstOptions, Vars,
    WeylExpr,
};

const RAW: SubstOptions = SubstOptions {
    check_canonical: false,
};

/// Images of a generator, ready for the equivariance check.
#[derive(Clone, Debug)]
pub struct SymmetryImages {
    /// `(q, p)` or the straightened pair.
    pub vars: Vars,
    pub layout: Layout,
    /// `q, p` in the working variables.
    pub q: WeylExpr,
    pub p: WeylExpr,
    /// Images of `q, p` in the working variables.
    pub big_q: WeylExpr,
    pub big_p: WeylExpr,
}

fn qp() -> Vars {
    Vars::new("q", "p")
}

fn eval_with(
    e: &Expr,
    vars: &Vars,
    layout: Layout,
    q: &WeylExpr,
    p: &WeylExpr,
) -> Result<WeylExpr, EngineError> {
    let env = Env::new(vars, layout)
        .bind("q", q.clone())
        .bind("p", p.clone());
    eval(e, &env).map_err(|err| match err {
        ExprError::IllegalInverse(what) => EngineError::Unsupported(format!(
            "`{what}` has no inverse in the working algebra; a straightening chart is needed"
        )),
        other => other.into(),
    })
}

/// The α-map with dependent root variables eliminated, plus the t-map.
pub fn alpha_substitution(
    nagoya: &NagoyaSystem,
    g: &SymmetryGenerator,
) -> BTreeMap<Symbol, ParamRat> {
    let (dep, _) = nagoya.dependent;
    let mut b: BTreeMap<Symbol, ParamRat> = g
        .alpha_map
        .iter()
        .filter(|(s, _)| **s != dep)
        .map(|(s, v)| (*s, nagoya.reduce_coeff(v)))
        .collect();
    b.insert(Symbol::T, g.t_map.clone());
    b
}

/// Evaluates the table entries in the working algebra.
pub fn symmetry_images(
    nagoya: &NagoyaSystem,
    g: &SymmetryGenerator,
) -> Result<SymmetryImages, EngineError> {
    let layout = g.laurent.map(Layout::laurent_in).unwrap_or(Layout::POLY);
    let (vars, q, p) = match &g.straighten {
        None => {
            let v = qp();
            (
                v.clone(),
                WeylExpr::generator(&v, layout, crate::weyl::Slot::First),
                WeylExpr::generator(&v, layout, crate::weyl::Slot::Second),
            )
        }
        Some(s) => {
            let env = Env::new(&s.vars, layout);
            (
                s.vars.clone(),
                eval(&s.forward[0], &env)?,
                eval(&s.forward[1], &env)?,
            )
        }
    };
    let (tq, tp) = match &g.frame {
        None => (q.clone(), p.clone()),
        Some(f) => (
            eval_with(&f.table[0], &vars, layout, &q, &p)?,
            eval_with(&f.table[1], &vars, layout, &q, &p)?,
        ),
    };
    let hat_q = eval_with(&g.q, &vars, layout, &tq, &tp)?;
    let hat_p = eval_with(&g.p, &vars, layout, &tq, &tp)?;
    let (big_q, big_p) = match &g.frame {
        None => (hat_q, hat_p),
        Some(f) => (
            eval_with(&f.inverse[0], &vars, layout, &hat_q, &hat_p)?,
            eval_with(&f.inverse[1], &vars, layout, &hat_q, &hat_p)?,
        ),
    };
    let reduce = |e: &WeylExpr| e.map_coeffs(|c| nagoya.reduce_coeff(c));
    Ok(SymmetryImages {
        vars,
        layout,
        big_q: reduce(&big_q),
        big_p: reduce(&big_p),
        q,
        p,
    })
}

/// Residuals of a straightening chart: brackets on both sides and both
/// composites.
fn straightening_residuals(
    g: &SymmetryGenerator,
) -> Result<Vec<(&'static str, WeylExpr)>, EngineError> {
    let Some(s) = &g.straighten else {
        return Ok(Vec::new());
    };
    let (orig, st) = (qp(), &s.vars);
    let oenv = Env::new(&orig, Layout::POLY);
    let senv = Env::new(st, Layout::POLY);
    let u = eval(&s.backward[0], &oenv)?;
    let v = eval(&s.backward[1], &oenv)?;
    let q = eval(&s.forward[0], &senv)?;
    let p = eval(&s.forward[1], &senv)?;
    let h =
        |like: &WeylExpr| WeylExpr::scalar(like.vars(), like.layout(), ParamRat::var(Symbol::H));
    let gen = |like: &WeylExpr, slot| WeylExpr::generator(like.vars(), like.layout(), slot);
    use crate::weyl::Slot::{First, Second};
    Ok(vec![
        (
            "straightening [u, v] - h",
            u.commutator(&v)?.try_sub(&h(&u))?,
        ),
        (
            "straightening [q, p] - h",
            q.commutator(&p)?.try_sub(&h(&q))?,
        ),
        (
            "straightening u(q(u,v), p(u,v)) - u",
            substitute(&u, &q, &p, RAW)?.try_sub(&gen(&q, First))?,
        ),
        (
            "straightening v(q(u,v), p(u,v)) - v",
            substitute(&v, &q, &p, RAW)?.try_sub(&gen(&q, Second))?,
        ),
        (
            "straightening q(u(q,p), v(q,p)) - q",
            substitute(&q, &u, &v, RAW)?.try_sub(&gen(&u, First))?,
        ),
        (
            "straightening p(u(q,p), v(q,p)) - p",
            substitute(&p, &u, &v, RAW)?.try_sub(&gen(&u, Second))?,
        ),
    ])
}

fn run(
    r: &mut ReportBuilder,
    system: &PainleveSystem,
    nagoya: &NagoyaSystem,
    g: &SymmetryGenerator,
) -> Result<(), EngineError> {
    for (name, e) in straightening_residuals(g)? {
        r.residual(name, &e);
    }
    let im = symmetry_images(nagoya, g)?;
    r.derive("Q", &im.big_q);
    r.derive("P", &im.big_p);
    let hbar = WeylExpr::scalar(&im.vars, im.layout, ParamRat::var(Symbol::H));
    r.residual(
        "[Q, P] - h",
        &im.big_q.commutator(&im.big_p)?.try_sub(&hbar)?,
    );

    let gw = &system.time_weight;
    let k = nagoya.hamiltonian.map_coeffs(|c| nagoya.reduce_coeff(c));
    let flow_qp = hamilton_flow(&k, gw)?;
    let flow = match &g.straighten {
        None => hamilton_flow(&k.renamed(&im.vars), gw)?,
        Some(s) => {
            let env = Env::new(&qp(), Layout::POLY);
            let mut images = Vec::new();
            for b in &s.backward {
                let d = apply_derivation(&flow_qp, &eval(b, &env)?)?;
                images.push(substitute(&d, &im.q, &im.p, RAW)?);
            }
            let dv = images.pop().expect("two images");
            let du = images.pop().expect("two images");
            FlowDerivation::from_images(du, dv, gw.clone())
        }
    };

    // δ' = g(t')·d/dt' relates to δ by g(t)·(dt'/dt)/g(t').
    let t_image = g.t_map.clone();
    let gr = ParamRat::from_poly(gw.clone());
    let g_image = gr.specialize(&BTreeMap::from([(Symbol::T, t_image.clone())]))?;
    let factor = (&gr * &t_image.derivative(Symbol::T)).checked_div(&g_image)?;
    r.derive("time_factor", &factor);
    if g.t_map != ParamRat::var(Symbol::T) {
        r.note(format!(
            "t -> {}: flow images scaled by g(t)·dt'/dt / g(t') = {factor}",
            g.t_map
        ));
    }

    let sub = alpha_substitution(nagoya, g);
    let mapped = |e: &WeylExpr| -> Result<WeylExpr, EngineError> {
        let e = e.specialize(&sub)?.map_coeffs(|c| nagoya.reduce_coeff(c));
        Ok(substitute(&e, &im.big_q, &im.big_p, RAW)?.scale(&factor))
    };
    for (name, big, img) in [
        ("Q", &im.big_q, &flow_qp.dv1),
        ("P", &im.big_p, &flow_qp.dv2),
    ] {
        let lhs = apply_derivation(&flow, big)?;
        let rhs = mapped(img)?;
        r.residual(
            &format!(
                "delta({name}) - s(delta {})",
                if name == "Q" { "q" } else { "p" }
            ),
            &lhs.try_sub(&rhs)?,
        );
    }
    Ok(())
}

/// Equivariance of the flow of the Nagoya form under one generator.
pub fn verify_symmetry(
    system: &PainleveSystem,
    nagoya: &NagoyaSystem,
    g: &SymmetryGenerator,
) -> VerificationReport {
    let mut r = ReportBuilder::new(
        format!("symmetry/{}/{}", g.system, g.name),
        g.system,
        g.name.clone(),
    );
    if let Err(e) = run(&mut r, system, nagoya, g) {
        r.error(e);
    }
    r.finish()
}
