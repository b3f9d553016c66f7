//! The same chart pipeline for the commutative system, with Poisson
//! brackets in place of commutators. Used to check that `h ↦ 0` commutes
//! with chart transformation.

use std::collections::BTreeMap;

use super::{
    reconstruct_hamiltonian, transform_flow, EngineError, FlowOptions, ReportBuilder,
    VerificationReport,
};
use crate::catalog::{CanonicalChart, PainleveSystem};
use crate::coeff::{rat, ParamRat, Symbol};
use crate::weyl::{classical_limit, CommPoly, Slot, WeylExpr};

fn derive(x: &CommPoly, d1: &CommPoly, d2: &CommPoly, g: &ParamRat) -> CommPoly {
    x.partial(Slot::First)
        .mul(d1)
        .add(&x.partial(Slot::Second).mul(d2))
        .add(&x.partial_t().scale(g))
}

fn at_zero(c: &ParamRat) -> ParamRat {
    c.specialize(&BTreeMap::from([(Symbol::H, ParamRat::zero())]))
        .expect("no pole at h = 0")
}

fn classical_base_flow(
    system: &PainleveSystem,
    chart: &CanonicalChart,
    siblings: &[CanonicalChart],
    h: &CommPoly,
    opts: FlowOptions,
) -> Result<(CommPoly, CommPoly), EngineError> {
    match chart.base {
        None => {
            let h = if opts.normalize {
                h.map_coeffs(|c| at_zero(&system.normalize_coeff(c)))
            } else {
                h.clone()
            };
            Ok((h.partial(Slot::Second), h.partial(Slot::First).neg()))
        }
        Some(b) => {
            let base = siblings
                .iter()
                .find(|c| c.index == b)
                .ok_or_else(|| EngineError::Unsupported(format!("base chart {b} not supplied")))?;
            let (vx, vy) = classical_transform_flow_with(system, base, siblings, h, opts)?;
            if opts.regular_base {
                Ok((vx.regular_part(), vy.regular_part()))
            } else {
                Ok((vx, vy))
            }
        }
    }
}

/// The commutative counterpart of [`super::transform_flow_with`]: images
/// of the chart functions under the Poisson flow of `h`.
pub fn classical_transform_flow_with(
    system: &PainleveSystem,
    chart: &CanonicalChart,
    siblings: &[CanonicalChart],
    h: &CommPoly,
    opts: FlowOptions,
) -> Result<(CommPoly, CommPoly), EngineError> {
    let (d1, d2) = classical_base_flow(system, chart, siblings, h, opts)?;
    let g = ParamRat::from_poly(system.time_weight.clone());
    let lim = |e: &WeylExpr| {
        classical_limit(&if opts.normalize {
            system.normalize(e)
        } else {
            e.clone()
        })
    };
    let (x, y) = (lim(&chart.backward[0])?, lim(&chart.backward[1])?);
    let (q, p) = (lim(&chart.forward[0])?, lim(&chart.forward[1])?);
    let vx = derive(&x, &d1, &d2, &g).substitute(&q, &p)?;
    let vy = derive(&y, &d1, &d2, &g).substitute(&q, &p)?;
    Ok((vx, vy))
}

/// The classical field of the system's own Hamiltonian at `h = 0`.
pub fn classical_transform_flow(
    system: &PainleveSystem,
    chart: &CanonicalChart,
    siblings: &[CanonicalChart],
) -> Result<(CommPoly, CommPoly), EngineError> {
    let h = classical_limit(&system.hamiltonian)?;
    classical_transform_flow_with(system, chart, siblings, &h, FlowOptions::VERIFY)
}

/// `H` with `∂H/∂y = V_x`, `∂H/∂x = −V_y` and no constant term.
pub fn classical_reconstruct(vx: &CommPoly, vy: &CommPoly) -> Result<CommPoly, EngineError> {
    if !vx.is_polynomial() || !vy.is_polynomial() {
        return Err(EngineError::NonExact("field has poles".into()));
    }
    let vars = vx.vars();
    let along_y = CommPoly::from_terms(
        vars,
        vx.terms()
            .map(|(&(m, n), c)| ((m, n + 1), c.scale(&rat(1, n as i64 + 1)))),
    );
    let rest = vy.neg().sub(&along_y.partial(Slot::First));
    if rest.terms().any(|(k, _)| k.1 != 0) {
        return Err(EngineError::NonExact(format!(
            "{rest} depends on {}",
            vars.second()
        )));
    }
    let along_x = CommPoly::from_terms(
        vars,
        rest.terms()
            .map(|(&(m, _), c)| ((m + 1, 0), c.scale(&rat(1, m as i64 + 1)))),
    );
    Ok(along_y.add(&along_x))
}

pub fn classical_chart_hamiltonian(
    system: &PainleveSystem,
    chart: &CanonicalChart,
    siblings: &[CanonicalChart],
) -> Result<CommPoly, EngineError> {
    let (vx, vy) = classical_transform_flow(system, chart, siblings)?;
    classical_reconstruct(&vx, &vy)
}

/// Compares `h ↦ 0` of the quantum chart field and chart Hamiltonian with
/// the commutative pipeline run on the classical system.
pub fn verify_classical_limit(
    system: &PainleveSystem,
    chart: &CanonicalChart,
    siblings: &[CanonicalChart],
) -> VerificationReport {
    let mut r = ReportBuilder::new(
        format!("classical/{}/{}", chart.system, chart.index),
        chart.system,
        format!("chart {} at h = 0", chart.index),
    );
    if let Err(e) = classical_pipeline(&mut r, system, chart, siblings) {
        r.error(e);
    }
    r.finish()
}

fn classical_pipeline(
    r: &mut ReportBuilder,
    system: &PainleveSystem,
    chart: &CanonicalChart,
    siblings: &[CanonicalChart],
) -> Result<(), EngineError> {
    let as_weyl = |p: &CommPoly| {
        WeylExpr::from_terms(
            p.vars(),
            chart.layout,
            p.terms().map(|(k, c)| (*k, c.clone())),
        )
    };
    let (vx, vy) = transform_flow(system, chart, siblings)?;
    let (cx, cy) = classical_transform_flow(system, chart, siblings)?;
    r.derive("V_x at h = 0", &cx);
    r.derive("V_y at h = 0", &cy);
    r.residual("V_x", &as_weyl(&classical_limit(&vx)?.sub(&cx))?);
    r.residual("V_y", &as_weyl(&classical_limit(&vy)?.sub(&cy))?);
    match (
        reconstruct_hamiltonian(&vx, &vy),
        classical_reconstruct(&cx, &cy),
    ) {
        (Ok(h), Ok(ch)) => {
            r.derive("H' at h = 0", &ch);
            r.residual("H'", &as_weyl(&classical_limit(&h)?.sub(&ch))?);
        }
        (Err(_), Err(_)) => r.note("neither field integrates to a chart Hamiltonian"),
        (Ok(_), Err(e)) | (Err(e), Ok(_)) => r.fail("H'", format!("only one side integrates: {e}")),
    }
    Ok(())
}
