use std::collections::BTreeMap;

use super::report::ReportBuilder;
use super::{EngineError, VerificationReport};
use crate::catalog::{NagoyaSystem, PainleveSystem, ParamMap};
use crate::coeff::{
    solve_linear, Monomial, ParamPoly, ParamRat, PolyMatrix, Rational, SolveStatus, Symbol,
};
use crate::weyl::WeylExpr;

fn bindings(
    nagoya: &NagoyaSystem,
    assign: &BTreeMap<Symbol, ParamRat>,
) -> Result<BTreeMap<Symbol, ParamRat>, EngineError> {
    let mut b = assign.clone();
    let (dep, value) = &nagoya.dependent;
    if !b.contains_key(dep) {
        b.insert(*dep, value.specialize(assign)?);
    }
    Ok(b)
}

fn has_alpha(c: &ParamRat) -> bool {
    (0..5).any(|i| c.contains(Symbol::alpha(i)))
}

/// `H_J − Ĥ_J` with the root variables replaced by `assign`; the dependent
/// root variable, if unassigned, is eliminated through the constraint.
pub fn nagoya_difference(
    system: &PainleveSystem,
    nagoya: &NagoyaSystem,
    assign: &BTreeMap<Symbol, ParamRat>,
) -> Result<WeylExpr, EngineError> {
    let b = bindings(nagoya, assign)?;
    let k = nagoya.hamiltonian.specialize(&b)?;
    if k.terms().any(|(_, c)| has_alpha(c)) {
        return Err(EngineError::Unsupported(format!(
            "root variables left unassigned in {k}"
        )));
    }
    Ok(system.hamiltonian.try_sub(&k)?)
}

fn split_central(d: &WeylExpr) -> Result<(WeylExpr, ParamRat), EngineError> {
    let moving = WeylExpr::from_terms(
        d.vars(),
        d.layout(),
        d.terms()
            .filter(|(k, _)| **k != (0, 0))
            .map(|(k, c)| (*k, c.clone())),
    )?;
    Ok((moving, d.coeff((0, 0))))
}

/// The α-constraint evaluated on the map, modulo the system's constraint.
/// `None` when the map leaves some root variable of the constraint open.
fn constraint_residual(
    system: &PainleveSystem,
    nagoya: &NagoyaSystem,
    assign: &BTreeMap<Symbol, ParamRat>,
) -> Option<ParamRat> {
    let all = nagoya
        .alpha_constraint
        .symbols()
        .iter()
        .filter(|s| s.alpha_index().is_some())
        .all(|s| assign.contains_key(s));
    if !all {
        return None;
    }
    let v = ParamRat::from_poly(nagoya.alpha_constraint.clone())
        .specialize(assign)
        .ok()?;
    Some(system.normalize_coeff(&v))
}

/// Splits `m` into its unknown part and the rest.
fn split_unknowns(m: &Monomial) -> (Monomial, Monomial) {
    let (k, rest): (Vec<_>, Vec<_>) = m.factors().partition(|(s, _)| s.is_unknown());
    (Monomial::from_pairs(k), Monomial::from_pairs(rest))
}

/// Equations over ℚ in the unknowns, one per monomial of the other symbols.
fn equations(p: &ParamPoly, out: &mut Vec<BTreeMap<Monomial, Rational>>) {
    let mut groups: BTreeMap<Monomial, BTreeMap<Monomial, Rational>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let (k, rest) = split_unknowns(m);
        *groups
            .entry(rest)
            .or_default()
            .entry(k)
            .or_insert_with(|| Rational::from_integer(0.into())) += c;
    }
    out.extend(groups.into_values());
}

/// Looks for `α_i = stated_i + s_i·h` with rational `s_i` making the
/// difference central (and keeping the α-constraint when the map fixes
/// every root variable in it).
fn solve_shifts(
    system: &PainleveSystem,
    nagoya: &NagoyaSystem,
    map: &ParamMap,
) -> Result<Option<BTreeMap<Symbol, ParamRat>>, EngineError> {
    let alphas: Vec<Symbol> = map.assign.keys().copied().collect();
    let unknowns: Vec<Symbol> = (1..=alphas.len()).map(Symbol::unknown).collect();
    let shifted: BTreeMap<Symbol, ParamRat> = alphas
        .iter()
        .zip(&unknowns)
        .map(|(a, k)| {
            (
                *a,
                &map.assign[a] + &(&ParamRat::var(*k) * &ParamRat::var(Symbol::H)),
            )
        })
        .collect();
    let (moving, _) = split_central(&nagoya_difference(system, nagoya, &shifted)?)?;
    let mut eqs = Vec::new();
    for (_, c) in moving.terms() {
        equations(c.numer(), &mut eqs);
    }
    if let Some(r) = constraint_residual(system, nagoya, &shifted) {
        equations(r.numer(), &mut eqs);
    }
    let index: BTreeMap<Symbol, usize> =
        unknowns.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for e in &eqs {
        if e.keys().any(|m| m.degree() > 1) {
            continue;
        }
        let mut row = vec![ParamPoly::zero(); unknowns.len()];
        let mut c = ParamPoly::zero();
        for (m, v) in e {
            match m.factors().next() {
                None => c = ParamPoly::constant(-v.clone()),
                Some((s, _)) => row[index[&s]] = ParamPoly::constant(v.clone()),
            }
        }
        rows.push(row);
        rhs.push(c);
    }
    if rows.is_empty() {
        return Ok(None);
    }
    let sol = solve_linear(&PolyMatrix::from_rows(rows)?, &rhs)?;
    if sol.status == SolveStatus::Inconsistent {
        return Ok(None);
    }
    let values: BTreeMap<Symbol, ParamRat> = unknowns
        .iter()
        .copied()
        .zip(sol.solution.iter().cloned())
        .collect();
    let corrected: BTreeMap<Symbol, ParamRat> = shifted
        .iter()
        .map(|(a, v)| Ok((*a, v.specialize(&values)?)))
        .collect::<Result<_, EngineError>>()?;
    let (moving, _) = split_central(&nagoya_difference(system, nagoya, &corrected)?)?;
    let constraint_ok = constraint_residual(system, nagoya, &corrected).is_none_or(|r| r.is_zero());
    Ok((moving.is_zero() && constraint_ok).then_some(corrected))
}

fn show_map(m: &BTreeMap<Symbol, ParamRat>) -> String {
    m.iter()
        .map(|(s, v)| format!("{s} = {v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Checks that `H_J` and the Nagoya form under `map` differ by a central
/// term. On failure, also searches for an `h`-shifted map that works and
/// reports it.
pub fn verify_nagoya_map(
    system: &PainleveSystem,
    nagoya: &NagoyaSystem,
    map: &ParamMap,
) -> VerificationReport {
    let mut r = ReportBuilder::new(
        format!("nagoya/{}/{}", system.label, map.name),
        system.label,
        format!("map {}", map.name),
    );
    r.derive("map", show_map(&map.assign));
    r.derive("hamiltonian_normal_ordered", &nagoya.hamiltonian);
    let run = |r: &mut ReportBuilder| -> Result<(), EngineError> {
        if let Some(res) = constraint_residual(system, nagoya, &map.assign) {
            if !res.is_zero() {
                r.fail("alpha constraint", res.to_string());
            }
        }
        let (moving, central) = split_central(&nagoya_difference(system, nagoya, &map.assign)?)?;
        r.derive(
            "difference",
            &moving.try_add(&WeylExpr::scalar(
                moving.vars(),
                moving.layout(),
                central.clone(),
            ))?,
        );
        r.derive("central_difference", &central);
        if !r.residual("H - Nagoya (non-central part)", &moving) {
            match solve_shifts(system, nagoya, map)? {
                Some(c) => {
                    r.derive("corrected_map", show_map(&c));
                    let (_, cc) = split_central(&nagoya_difference(system, nagoya, &c)?)?;
                    r.derive("corrected_central_difference", &cc);
                }
                None => r.note("no h-shift of the stated map makes the difference central"),
            }
        }
        Ok(())
    };
    if let Err(e) = run(&mut r) {
        r.error(e);
    }
    r.finish()
}

/// One report per stored parameter map.
pub fn verify_nagoya(system: &PainleveSystem, nagoya: &NagoyaSystem) -> Vec<VerificationReport> {
    nagoya
        .maps
        .iter()
        .map(|m| verify_nagoya_map(system, nagoya, m))
        .collect()
}
