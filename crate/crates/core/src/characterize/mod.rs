//! Recovering a system's Hamiltonian from holomorphy alone: a generic
//! polynomial ansatz is pushed through every chart, the principal parts of
//! the transformed field are required to vanish, and the resulting linear
//! system `A(h)·k = c` is solved over the parameter field.

mod report;

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

pub use report::{CharacterizationReport, CrossCheck, Outcome, PrintedEntry, SolutionEntry};

use crate::catalog::{CanonicalChart, Catalog, Label, PainleveSystem};
use crate::coeff::{
    residual, solve_linear, LinearSolution, Monomial, ParamPoly, ParamRat, PolyMatrix, Rational,
    Symbol,
};
use crate::engine::{
    classical_transform_flow_with, transform_flow_with, EngineError, FlowOptions, Status,
};
use crate::weyl::{classical_limit, CommPoly, Layout, Vars, WeylExpr};

fn assemble_options(system: &PainleveSystem) -> FlowOptions {
    FlowOptions {
        normalize: system.normalize_before_solve,
        regular_base: true,
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct AnsatzShape {
    /// Bound on the degree in each variable, or on the total degree.
    pub degree: u32,
    pub t_degree: u32,
    pub total_degree: bool,
}

impl Default for AnsatzShape {
    fn default() -> Self {
        AnsatzShape {
            degree: 4,
            t_degree: 1,
            total_degree: false,
        }
    }
}

/// One ansatz coefficient: `k_j` multiplies `t^l q^i p^j`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct AnsatzTerm {
    pub symbol: Symbol,
    pub q: i32,
    pub p: i32,
    pub t: u32,
}

impl AnsatzTerm {
    pub fn monomial_text(&self) -> String {
        let mut parts = Vec::new();
        for (name, e) in [("t", self.t as i32), ("q", self.q), ("p", self.p)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

#[derive(Clone, Debug)]
pub struct Ansatz {
    pub shape: AnsatzShape,
    pub terms: Vec<AnsatzTerm>,
    /// `Σ k_j t^l q^i p^j`, normal ordered with `q` on the left.
    pub hamiltonian: WeylExpr,
}

impl Ansatz {
    pub fn unknowns(&self) -> Vec<Symbol> {
        self.terms.iter().map(|t| t.symbol).collect()
    }

    /// Coefficients of `h` in the ansatz basis, if `h` lies in its span.
    pub fn coordinates(&self, h: &WeylExpr) -> Option<Vec<ParamRat>> {
        let h = h.to_layout(Layout::POLY).ok()?;
        let mut out = vec![ParamRat::zero(); self.terms.len()];
        let mut used = 0;
        for (&(q, p), c) in h.terms() {
            if (q, p) == (0, 0) {
                continue;
            }
            for (tp, part) in c.numer().split_by(Symbol::T) {
                if c.denom().contains(Symbol::T) {
                    return None;
                }
                let j = self
                    .terms
                    .iter()
                    .position(|a| (a.q, a.p, a.t) == (q, p, tp))?;
                out[j] = ParamRat::normalize(part, c.denom().clone()).ok()?;
                used += 1;
            }
        }
        (used > 0).then_some(out)
    }

    /// The ansatz with `k ↦ values`; unknowns not in `values` become zero.
    pub fn instantiate(
        &self,
        values: &BTreeMap<Symbol, ParamRat>,
    ) -> Result<WeylExpr, EngineError> {
        let mut bind: BTreeMap<Symbol, ParamRat> = self
            .terms
            .iter()
            .map(|t| (t.symbol, ParamRat::zero()))
            .collect();
        bind.extend(values.iter().map(|(k, v)| (*k, v.clone())));
        Ok(self.hamiltonian.specialize(&bind)?)
    }
}

/// Monomials `q^i p^j` in descending `q`, then descending `p`, then the same
/// list again for each further power of `t`.
pub fn build_ansatz(shape: AnsatzShape) -> Result<Ansatz, EngineError> {
    if shape.degree == 0 {
        return Err(EngineError::Unsupported(
            "ansatz degree must be at least 1".into(),
        ));
    }
    let d = shape.degree as i32;
    let mut terms = Vec::new();
    for t in 0..=shape.t_degree {
        for q in (0..=d).rev() {
            for p in (0..=d).rev() {
                if (q, p) == (0, 0) || (shape.total_degree && q + p > d) {
                    continue;
                }
                terms.push(AnsatzTerm {
                    symbol: Symbol::unknown(terms.len() + 1),
                    q,
                    p,
                    t,
                });
            }
        }
    }
    let vars = Vars::new("q", "p");
    let hamiltonian = WeylExpr::from_terms(
        &vars,
        Layout::POLY,
        terms.iter().map(|a| {
            let m = Monomial::from_pairs([(a.symbol, 1), (Symbol::T, a.t)]);
            (
                (a.q, a.p),
                ParamRat::from_poly(ParamPoly::term(Rational::from_integer(1.into()), m)),
            )
        }),
    )?;
    Ok(Ansatz {
        shape,
        terms,
        hamiltonian,
    })
}

/// Where an equation came from.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct EquationTag {
    pub chart: usize,
    /// `"V_x"` or `"V_y"`.
    pub component: &'static str,
    pub exponents: [i32; 2],
    pub t_power: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct PoleOrder {
    pub chart: usize,
    pub order: i32,
}

/// `matrix · k = rhs`, one row per tagged equation.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub unknowns: Vec<Symbol>,
    pub matrix: PolyMatrix,
    pub rhs: Vec<ParamPoly>,
    pub tags: Vec<EquationTag>,
    pub pole_orders: Vec<PoleOrder>,
}

impl LinearSystem {
    /// The system with the equations of one chart removed.
    pub fn without_chart(&self, chart: usize) -> Result<LinearSystem, EngineError> {
        let keep: Vec<usize> = (0..self.tags.len())
            .filter(|&i| self.tags[i].chart != chart)
            .collect();
        let rows: Vec<Vec<ParamPoly>> = keep.iter().map(|&i| self.matrix.row(i).to_vec()).collect();
        let matrix = if rows.is_empty() {
            PolyMatrix::zeros(0, self.unknowns.len())?
        } else {
            PolyMatrix::from_rows(rows)?
        };
        Ok(LinearSystem {
            unknowns: self.unknowns.clone(),
            matrix,
            rhs: keep.iter().map(|&i| self.rhs[i].clone()).collect(),
            tags: keep.iter().map(|&i| self.tags[i].clone()).collect(),
            pole_orders: self
                .pole_orders
                .iter()
                .filter(|p| p.chart != chart)
                .copied()
                .collect(),
        })
    }
}

type Rows = Vec<(EquationTag, Vec<ParamPoly>, ParamPoly)>;

/// Splits a coefficient that must vanish into equations linear in the
/// unknowns, one per power of `t`. Returns `(row, rhs)` pairs with
/// `row · k = rhs`.
fn linear_equations(
    c: &ParamRat,
    index: &BTreeMap<Symbol, usize>,
) -> Result<Vec<(u32, Vec<ParamPoly>, ParamPoly)>, EngineError> {
    if c.denom().symbols().iter().any(|s| s.is_unknown()) {
        return Err(EngineError::Unsupported(format!(
            "unknown in a denominator: {c}"
        )));
    }
    let mut out = Vec::new();
    for (tp, part) in c.numer().split_by(Symbol::T) {
        let mut row = vec![ParamPoly::zero(); index.len()];
        let mut constant = ParamPoly::zero();
        for (m, v) in part.terms() {
            let ks: Vec<(Symbol, u32)> = m.factors().filter(|(s, _)| s.is_unknown()).collect();
            match ks.as_slice() {
                [] => constant.add_term(m.clone(), v.clone()),
                [(k, 1)] => {
                    let j = *index
                        .get(k)
                        .ok_or_else(|| EngineError::Unsupported(format!("stray unknown {k}")))?;
                    row[j].add_term(m.without(*k).0, v.clone());
                }
                _ => {
                    return Err(EngineError::Unsupported(format!(
                        "equation is not linear in the unknowns: {part}"
                    )))
                }
            }
        }
        out.push((tp, row, -&constant));
    }
    Ok(out)
}

type Principal = Vec<((i32, i32), ParamRat)>;

fn chart_rows(
    index: &BTreeMap<Symbol, usize>,
    chart: usize,
    fields: [(&'static str, Principal); 2],
) -> Result<(Rows, i32), EngineError> {
    let mut rows = Vec::new();
    let mut order = 0;
    for (component, terms) in fields {
        for ((m, n), c) in terms {
            order = order.max(-m.min(n));
            for (t_power, row, rhs) in linear_equations(&c, index)? {
                rows.push((
                    EquationTag {
                        chart,
                        component,
                        exponents: [m, n],
                        t_power,
                    },
                    row,
                    rhs,
                ));
            }
        }
    }
    Ok((rows, order))
}

fn principal_terms(v: &WeylExpr) -> Vec<((i32, i32), ParamRat)> {
    v.laurent_split()
        .1
        .terms()
        .map(|(k, c)| (*k, c.clone()))
        .collect()
}

fn classical_principal_terms(v: &CommPoly) -> Vec<((i32, i32), ParamRat)> {
    v.terms()
        .filter(|(k, _)| k.0 < 0 || k.1 < 0)
        .map(|(k, c)| (*k, c.clone()))
        .collect()
}

fn finish(
    unknowns: Vec<Symbol>,
    per_chart: Vec<(usize, Rows, i32)>,
) -> Result<LinearSystem, EngineError> {
    let mut tags = Vec::new();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut pole_orders = Vec::new();
    for (chart, chart_rows, order) in per_chart {
        pole_orders.push(PoleOrder { chart, order });
        for (tag, row, c) in chart_rows {
            tags.push(tag);
            rows.push(row);
            rhs.push(c);
        }
    }
    let matrix = if rows.is_empty() {
        PolyMatrix::zeros(0, unknowns.len())?
    } else {
        PolyMatrix::from_rows(rows)?
    };
    Ok(LinearSystem {
        unknowns,
        matrix,
        rhs,
        tags,
        pole_orders,
    })
}

fn unknown_index(ansatz: &Ansatz) -> BTreeMap<Symbol, usize> {
    ansatz
        .terms
        .iter()
        .enumerate()
        .map(|(i, t)| (t.symbol, i))
        .collect()
}

/// Principal parts of the ansatz's transformed field on every chart, as a
/// linear system in the unknowns. Charts are processed in parallel; the
/// row order is chart order, then component, then term order.
pub fn assemble_system(
    system: &PainleveSystem,
    charts: &[CanonicalChart],
    ansatz: &Ansatz,
) -> Result<LinearSystem, EngineError> {
    let index = unknown_index(ansatz);
    let per_chart = charts
        .par_iter()
        .map(|chart| {
            let (vx, vy) = transform_flow_with(
                system,
                chart,
                charts,
                &ansatz.hamiltonian,
                assemble_options(system),
            )?;
            let (rows, order) = chart_rows(
                &index,
                chart.index,
                [("V_x", principal_terms(&vx)), ("V_y", principal_terms(&vy))],
            )?;
            Ok((chart.index, rows, order))
        })
        .collect::<Result<Vec<_>, EngineError>>()?;
    finish(ansatz.unknowns(), per_chart)
}

/// The same system built with Poisson brackets from the `h = 0` limit of
/// the ansatz.
pub fn assemble_classical_system(
    system: &PainleveSystem,
    charts: &[CanonicalChart],
    ansatz: &Ansatz,
) -> Result<LinearSystem, EngineError> {
    let index = unknown_index(ansatz);
    let h = classical_limit(&ansatz.hamiltonian)?;
    let per_chart = charts
        .par_iter()
        .map(|chart| {
            let (vx, vy) =
                classical_transform_flow_with(system, chart, charts, &h, assemble_options(system))?;
            let fields = [
                ("V_x", classical_principal_terms(&vx)),
                ("V_y", classical_principal_terms(&vy)),
            ];
            let (rows, order) = chart_rows(&index, chart.index, fields)?;
            Ok((chart.index, rows, order))
        })
        .collect::<Result<Vec<_>, EngineError>>()?;
    finish(ansatz.unknowns(), per_chart)
}

/// Principal parts of the transformed field of a concrete Hamiltonian, per
/// chart. Empty vectors mean the Hamiltonian is holomorphic on that chart.
pub fn principal_parts(
    system: &PainleveSystem,
    charts: &[CanonicalChart],
    h: &WeylExpr,
) -> Result<Vec<(usize, WeylExpr, WeylExpr)>, EngineError> {
    charts
        .iter()
        .map(|chart| {
            let (vx, vy) = transform_flow_with(system, chart, charts, h, assemble_options(system))?;
            Ok((chart.index, vx.laurent_split().1, vy.laurent_split().1))
        })
        .collect()
}

fn zero_h(p: &ParamPoly) -> ParamPoly {
    p.substitute(&|s| (s == Symbol::H).then(ParamPoly::zero))
}

/// Solution of `sys` with `h ↦ 0` applied to the matrix and right-hand side.
pub fn solve_at_h_zero(sys: &LinearSystem) -> Result<LinearSolution, EngineError> {
    let rhs: Vec<ParamPoly> = sys.rhs.iter().map(zero_h).collect();
    Ok(solve_linear(&sys.matrix.map(zero_h), &rhs)?)
}

fn compare_at_zero(
    label: &str,
    sol: &[ParamRat],
    other: &LinearSolution,
    unknowns: &[Symbol],
) -> CrossCheck {
    if !other.is_unique() {
        return CrossCheck {
            status: Status::Fail,
            detail: format!("{label} system is {:?}", other.status),
        };
    }
    let zero = BTreeMap::from([(Symbol::H, ParamRat::zero())]);
    for ((k, s), o) in unknowns.iter().zip(sol).zip(&other.solution) {
        match s.specialize(&zero) {
            Ok(v) if v == *o => {}
            Ok(v) => {
                return CrossCheck {
                    status: Status::Fail,
                    detail: format!("{k}: h -> 0 gives {v}, {label} solve gives {o}"),
                };
            }
            Err(_) => {
                return CrossCheck {
                    status: Status::Fail,
                    detail: format!("{k} = {s} has a pole at h = 0"),
                }
            }
        }
    }
    CrossCheck {
        status: Status::Pass,
        detail: format!("{label} solution equals the h -> 0 limit"),
    }
}

/// Solves for the unique holomorphic Hamiltonian in the ansatz family and
/// compares it with the system's Hamiltonian.
pub fn characterize(
    cat: &Catalog,
    label: Label,
    shape: AnsatzShape,
) -> Result<CharacterizationReport, EngineError> {
    let start = Instant::now();
    let system = cat.get_system(label)?;
    let charts = cat.get_charts(label)?;
    let ansatz = build_ansatz(shape)?;
    let sys = assemble_system(system, charts, &ansatz)?;
    let sol = solve_linear(&sys.matrix, &sys.rhs)?;
    let mut rep = CharacterizationReport::new(label, shape, &ansatz, &sys, &sol);

    match sol.status {
        crate::coeff::SolveStatus::Inconsistent => {
            rep.outcome = Outcome::Inconsistent;
            if let Some(k) = ansatz.coordinates(&system.normalize(&system.hamiltonian)) {
                let a = sys.matrix.map(|p| {
                    system
                        .normalize_coeff(&ParamRat::from_poly(p.clone()))
                        .numer()
                        .clone()
                });
                let c: Vec<ParamPoly> = sys
                    .rhs
                    .iter()
                    .map(|p| {
                        system
                            .normalize_coeff(&ParamRat::from_poly(p.clone()))
                            .numer()
                            .clone()
                    })
                    .collect();
                let res = residual(&a, &c, &k);
                for chart in charts {
                    let bad = (0..res.len())
                        .filter(|&i| sys.tags[i].chart == chart.index && !res[i].is_zero())
                        .count();
                    if bad > 0 {
                        rep.notes.push(format!(
                            "the system Hamiltonian violates {bad} residue conditions of chart {}",
                            chart.index
                        ));
                    }
                }
            }
            for &i in sol
                .inconsistent_rows
                .iter()
                .take(crate::engine::MAX_WITNESSES)
            {
                let t = &sys.tags[i];
                rep.witnesses.push(format!(
                    "chart {} {} x^{} y^{} t^{}: 0 = nonzero",
                    t.chart, t.component, t.exponents[0], t.exponents[1], t.t_power
                ));
            }
        }
        crate::coeff::SolveStatus::Underdetermined => {
            rep.outcome = Outcome::NonUnique;
            for &j in sol.free_columns.iter().take(crate::engine::MAX_WITNESSES) {
                let a = &ansatz.terms[j];
                rep.witnesses
                    .push(format!("{} ({}) is free", a.symbol, a.monomial_text()));
            }
        }
        crate::coeff::SolveStatus::Unique => {
            rep.outcome = Outcome::Unique;
            let values: BTreeMap<Symbol, ParamRat> = sys
                .unknowns
                .iter()
                .copied()
                .zip(sol.solution.iter().cloned())
                .collect();
            let h = ansatz.instantiate(&values)?;
            rep.hamiltonian = Some(h.to_string());
            match system.try_normalize(&h) {
                Ok(normalized) => {
                    let d = normalized.try_sub(&system.normalize(&system.hamiltonian))?;
                    rep.normalized = Some(normalized.to_string());
                    rep.central_difference = Some(d.coeff((0, 0)).to_string());
                    rep.matches_system = d.terms().all(|(k, _)| *k == (0, 0));
                    let moving = d
                        .terms()
                        .filter(|(k, _)| **k != (0, 0))
                        .map(|(k, c)| (*k, c.clone()));
                    let moving = WeylExpr::from_terms(d.vars(), d.layout(), moving)?;
                    rep.witnesses
                        .extend(moving.witness_terms(crate::engine::MAX_WITNESSES));
                }
                Err(e) => rep
                    .witnesses
                    .push(format!("normalization fails on the solution: {e}")),
            }
            rep.h_zero = Some(compare_at_zero(
                "h = 0",
                &sol.solution,
                &solve_at_h_zero(&sys)?,
                &sys.unknowns,
            ));
            let classical = assemble_classical_system(system, charts, &ansatz)?;
            let csol = solve_linear(&classical.matrix, &classical.rhs)?;
            rep.classical = Some(compare_at_zero(
                "classical",
                &sol.solution,
                &csol,
                &sys.unknowns,
            ));
            for (k, printed) in cat.printed_solution(label)? {
                let derived = values.get(k).cloned().unwrap_or_else(ParamRat::zero);
                rep.printed.push(PrintedEntry {
                    symbol: k.to_string(),
                    printed: printed.to_string(),
                    derived: derived.to_string(),
                    agrees: derived == *printed,
                });
            }
        }
    }
    rep.status = rep.decide();
    rep.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(rep)
}

/// Largest negative exponent of the Laurent variable in either component,
/// as a positive pole order.
pub fn pole_order(v: &WeylExpr) -> i32 {
    -v.laurent_split().2
}
