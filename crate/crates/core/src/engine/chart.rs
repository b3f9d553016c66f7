use super::report::ReportBuilder;
use super::{EngineError, VerificationReport};
use crate::catalog::{CanonicalChart, GoldenChartHamiltonian, PainleveSystem};
use crate::coeff::{rat, ParamRat, Symbol};
use crate::weyl::{
    apply_derivation, hamilton_flow, hamilton_partials, substitute, Convention, FlowDerivation,
    Layout, Slot, SubstOptions, WeylError, WeylExpr,
};

const RAW: SubstOptions = SubstOptions {
    check_canonical: false,
};

fn h_scalar(like: &WeylExpr) -> WeylExpr {
    WeylExpr::scalar(like.vars(), like.layout(), ParamRat::var(Symbol::H))
}

fn generator(like: &WeylExpr, slot: Slot) -> WeylExpr {
    WeylExpr::generator(like.vars(), like.layout(), slot)
}

fn canonical_residuals(
    chart: &CanonicalChart,
) -> Result<Vec<(&'static str, WeylExpr)>, EngineError> {
    let [x, y] = &chart.backward;
    let [q, p] = &chart.forward;
    let mut out = Vec::new();
    out.push(("[x, y] - h", x.commutator(y)?.try_sub(&h_scalar(x))?));
    out.push(("[q, p] - h", q.commutator(p)?.try_sub(&h_scalar(q))?));
    for (name, f, slot) in [
        ("q(x(q,p), y(q,p)) - q", q, Slot::First),
        ("p(x(q,p), y(q,p)) - p", p, Slot::Second),
    ] {
        let back = substitute(f, x, y, RAW)?;
        out.push((name, back.try_sub(&generator(&back, slot))?));
    }
    for (name, f, slot) in [
        ("x(q(x,y), p(x,y)) - x", x, Slot::First),
        ("y(q(x,y), p(x,y)) - y", y, Slot::Second),
    ] {
        let back = substitute(f, q, p, RAW)?;
        out.push((name, back.try_sub(&generator(&back, slot))?));
    }
    Ok(out)
}

/// Bracket preservation in both directions, and both composites equal to
/// the identity on generators.
pub fn check_canonical(chart: &CanonicalChart) -> VerificationReport {
    let mut r = ReportBuilder::new(
        format!("canonical/{}/{}", chart.system, chart.index),
        chart.system,
        format!("chart {}", chart.index),
    );
    match canonical_residuals(chart) {
        Ok(res) => {
            for (name, e) in res {
                r.residual(name, &e);
            }
        }
        Err(e) => r.error(e),
    }
    r.finish()
}

/// The bracket of a chart map exactly as printed, when the catalog keeps
/// one that differs from the map in use.
pub fn check_printed_chart(chart: &CanonicalChart) -> Option<VerificationReport> {
    let [q, p] = chart.as_printed.as_ref()?;
    let mut r = ReportBuilder::new(
        format!("printed/{}/{}", chart.system, chart.index),
        chart.system,
        format!("chart {} as printed", chart.index),
    );
    match q.commutator(p).and_then(|b| b.try_sub(&h_scalar(q))) {
        Ok(res) => {
            r.residual("[first, second] - h", &res);
        }
        Err(e) => r.error(e.into()),
    }
    Some(r.finish())
}

/// How [`transform_flow_with`] prepares its inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlowOptions {
    /// Substitute the system's parameter normalization into the Hamiltonian
    /// and the chart maps.
    pub normalize: bool,
    /// For charts attached to another chart, keep only the polynomial part
    /// of the base chart's field instead of rejecting a principal part.
    pub regular_base: bool,
}

impl FlowOptions {
    pub const VERIFY: FlowOptions = FlowOptions {
        normalize: true,
        regular_base: false,
    };
}

/// The flow on the algebra a chart is attached to: the Hamiltonian flow of
/// `h` for `(q, p)`, or the transformed flow of the base chart.
fn base_flow(
    system: &PainleveSystem,
    chart: &CanonicalChart,
    siblings: &[CanonicalChart],
    h: &WeylExpr,
    opts: FlowOptions,
) -> Result<FlowDerivation, EngineError> {
    match chart.base {
        None => {
            let h = if opts.normalize {
                system.normalize(h)
            } else {
                h.clone()
            };
            Ok(hamilton_flow(&h, &system.time_weight)?)
        }
        Some(b) => {
            let base = siblings
                .iter()
                .find(|c| c.index == b)
                .ok_or_else(|| EngineError::Unsupported(format!("base chart {b} not supplied")))?;
            let (vx, vy) = transform_flow_with(system, base, siblings, h, opts)?;
            let poly = |v: WeylExpr| {
                let v = if opts.regular_base {
                    v.laurent_split().0
                } else {
                    v
                };
                v.to_layout(Layout::poly(v.convention()))
            };
            Ok(FlowDerivation::from_images(
                poly(vx)?,
                poly(vy)?,
                system.time_weight.clone(),
            ))
        }
    }
}

/// `V_X = (1/h)[X, H] + g·∂X/∂t` for the two chart generators `X`, written
/// in chart variables, for an arbitrary Hamiltonian `h` in `(q, p)`.
pub fn transform_flow_with(
    system: &PainleveSystem,
    chart: &CanonicalChart,
    siblings: &[CanonicalChart],
    h: &WeylExpr,
    opts: FlowOptions,
) -> Result<(WeylExpr, WeylExpr), EngineError> {
    let flow = base_flow(system, chart, siblings, h, opts)?;
    let prep = |e: &WeylExpr| {
        if opts.normalize {
            system.normalize(e)
        } else {
            e.clone()
        }
    };
    let [x, y] = chart.backward.each_ref().map(prep);
    let [q, p] = chart.forward.each_ref().map(prep);
    let vx = substitute(&apply_derivation(&flow, &x)?, &q, &p, RAW)?;
    let vy = substitute(&apply_derivation(&flow, &y)?, &q, &p, RAW)?;
    Ok((vx, vy))
}

/// [`transform_flow_with`] for the system's own Hamiltonian, parameters
/// normalized first. A chart attached to another chart is reached through
/// that chart's flow.
pub fn transform_flow(
    system: &PainleveSystem,
    chart: &CanonicalChart,
    siblings: &[CanonicalChart],
) -> Result<(WeylExpr, WeylExpr), EngineError> {
    transform_flow_with(
        system,
        chart,
        siblings,
        &system.hamiltonian,
        FlowOptions::VERIFY,
    )
}

/// Passes iff neither component has a principal part in the Laurent
/// variable.
pub fn check_polynomial(
    label: crate::catalog::Label,
    target: &str,
    v: &(WeylExpr, WeylExpr),
) -> VerificationReport {
    let mut r = ReportBuilder::new(
        format!("polynomial/{label}/{target}"),
        label,
        target.to_string(),
    );
    for (name, e) in [("V_x poles", &v.0), ("V_y poles", &v.1)] {
        let (_, principal, _) = e.laurent_split();
        r.residual(name, &principal);
    }
    r.finish()
}

/// A polynomial `H'` with `∂H'/∂y = V_x` and `∂H'/∂x = −V_y`, the partials
/// taken on normal-ordered coefficients. Unique up to a central summand;
/// the one returned has no constant term when written as `x^m y^n`.
pub fn reconstruct_hamiltonian(vx: &WeylExpr, vy: &WeylExpr) -> Result<WeylExpr, EngineError> {
    let layout = Layout::poly(vx.convention());
    let poly = |v: &WeylExpr| {
        v.to_layout(layout).map_err(|e| match e {
            WeylError::LaurentViolation(_) => WeylError::NotPolynomial(v.to_string()),
            other => other,
        })
    };
    let (vx, vy) = (poly(vx)?, poly(vy)?);
    let vars = vx.vars().clone();
    let along_y = WeylExpr::from_terms(
        &vars,
        layout,
        vx.terms()
            .map(|(&(m, n), c)| ((m, n + 1), c.scale(&rat(1, n as i64 + 1)))),
    )?;
    let (_, dx) = hamilton_partials(&along_y)?;
    let rest = vy.neg().try_sub(&dx)?;
    if let Some((&(m, n), c)) = rest.terms().find(|(k, _)| k.1 != 0) {
        return Err(EngineError::NonExact(format!(
            "{} is left after integrating along {}",
            rest.witness_terms(1)
                .pop()
                .unwrap_or_else(|| format!("({m},{n}) {c}")),
            vars.second()
        )));
    }
    let along_x = WeylExpr::from_terms(
        &vars,
        layout,
        rest.terms()
            .map(|(&(m, _), c)| ((m + 1, 0), c.scale(&rat(1, m as i64 + 1)))),
    )?;
    let h = along_y.try_add(&along_x)?;
    let (py, px) = hamilton_partials(&h)?;
    if py != vx || px != vy.neg() {
        return Err(EngineError::NonExact(
            "partials of the reconstruction do not match".into(),
        ));
    }
    // Fix the central summand so that H' written with x on the left has no
    // constant term.
    let c = h.convert_convention(Convention::FirstLeft)?.coeff((0, 0));
    Ok(h.try_sub(&WeylExpr::scalar(&vars, layout, c))?)
}

/// Runs the chart pipeline and compares with `golden`, allowing a central
/// difference, which is reported.
pub fn verify_chart_against(
    system: &PainleveSystem,
    chart: &CanonicalChart,
    siblings: &[CanonicalChart],
    golden: &GoldenChartHamiltonian,
) -> VerificationReport {
    let mut r = ReportBuilder::new(
        format!("chart/{}/{}", chart.system, chart.index),
        chart.system,
        format!("chart {} vs H{}", chart.index, golden.index),
    );
    if let Err(e) = chart_pipeline(&mut r, system, chart, siblings, golden) {
        r.error(e);
    }
    r.finish()
}

fn chart_pipeline(
    r: &mut ReportBuilder,
    system: &PainleveSystem,
    chart: &CanonicalChart,
    siblings: &[CanonicalChart],
    golden: &GoldenChartHamiltonian,
) -> Result<(), EngineError> {
    let (vx, vy) = transform_flow(system, chart, siblings)?;
    r.derive("V_x", &vx);
    r.derive("V_y", &vy);
    let mut clean = true;
    for (name, e) in [("V_x poles", &vx), ("V_y poles", &vy)] {
        clean &= r.residual(name, &e.laurent_split().1);
    }
    if !clean {
        return Ok(());
    }
    let h = match reconstruct_hamiltonian(&vx, &vy) {
        Ok(h) => h,
        Err(e @ EngineError::NonExact(_)) => {
            r.note("no Hamiltonian: the transformed field is not exact");
            return Err(e);
        }
        Err(e) => return Err(e),
    };
    r.derive("H'", &h);
    let g = system
        .normalize(&golden.hamiltonian.renamed(h.vars()))
        .to_layout(h.layout())?;
    let d = h.try_sub(&g)?;
    let (moving, central): (Vec<_>, Vec<_>) = d
        .terms()
        .map(|(k, c)| (*k, c.clone()))
        .partition(|(k, _)| *k != (0, 0));
    let central = central
        .into_iter()
        .next()
        .map(|(_, c)| c)
        .unwrap_or_else(ParamRat::zero);
    r.derive("central_difference", &central);
    let moving = WeylExpr::from_terms(d.vars(), d.layout(), moving)?;
    r.residual("H' - golden", &moving);
    Ok(())
}

/// [`verify_chart_against`] with the chart's own golden Hamiltonian.
pub fn verify_chart(
    system: &PainleveSystem,
    chart: &CanonicalChart,
    siblings: &[CanonicalChart],
    golden: &GoldenChartHamiltonian,
) -> VerificationReport {
    debug_assert_eq!(golden.index, chart.index);
    verify_chart_against(system, chart, siblings, golden)
}
