use std::fmt;

use serde::Serialize;

use super::{Ansatz, AnsatzShape, LinearSystem, PoleOrder};
use crate::catalog::Label;
use crate::coeff::LinearSolution;
use crate::engine::Status;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Unique,
    NonUnique,
    Inconsistent,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CrossCheck {
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SolutionEntry {
    pub symbol: String,
    pub monomial: String,
    pub value: String,
}

/// A coefficient as printed next to the one derived here.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PrintedEntry {
    pub symbol: String,
    pub printed: String,
    pub derived: String,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterizationReport {
    pub system: Label,
    pub status: Status,
    pub outcome: Outcome,
    pub shape: AnsatzShape,
    pub unknowns: usize,
    pub pole_orders: Vec<PoleOrder>,
    pub equations: usize,
    pub rank: usize,
    pub nullity: usize,
    /// Every unknown, in ansatz order. Empty unless the solution is unique.
    pub solution: Vec<SolutionEntry>,
    /// Solved Hamiltonian before and after parameter normalization.
    pub hamiltonian: Option<String>,
    pub normalized: Option<String>,
    pub central_difference: Option<String>,
    pub matches_system: bool,
    pub h_zero: Option<CrossCheck>,
    pub classical: Option<CrossCheck>,
    pub printed: Vec<PrintedEntry>,
    pub witnesses: Vec<String>,
    pub notes: Vec<String>,
    pub elapsed_ms: u64,
}

impl CharacterizationReport {
    pub(super) fn new(
        label: Label,
        shape: AnsatzShape,
        ansatz: &Ansatz,
        sys: &LinearSystem,
        sol: &LinearSolution,
    ) -> Self {
        let solution = if sol.is_unique() {
            ansatz
                .terms
                .iter()
                .zip(&sol.solution)
                .map(|(a, v)| SolutionEntry {
                    symbol: a.symbol.to_string(),
                    monomial: a.monomial_text(),
                    value: v.to_string(),
                })
                .collect()
        } else {
            Vec::new()
        };
        CharacterizationReport {
            system: label,
            status: Status::Fail,
            outcome: Outcome::Inconsistent,
            shape,
            unknowns: ansatz.terms.len(),
            pole_orders: sys.pole_orders.clone(),
            equations: sys.tags.len(),
            rank: sol.rank,
            nullity: sol.nullity,
            solution,
            hamiltonian: None,
            normalized: None,
            central_difference: None,
            matches_system: false,
            h_zero: None,
            classical: None,
            printed: Vec::new(),
            witnesses: Vec::new(),
            notes: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub(super) fn decide(&self) -> Status {
        let ok = |c: &Option<CrossCheck>| c.as_ref().is_some_and(|c| c.status == Status::Pass);
        if self.outcome == Outcome::Unique
            && self.matches_system
            && ok(&self.h_zero)
            && ok(&self.classical)
        {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn pole_order(&self, chart: usize) -> Option<i32> {
        self.pole_orders
            .iter()
            .find(|p| p.chart == chart)
            .map(|p| p.order)
    }

    pub fn value(&self, symbol: &str) -> Option<&str> {
        self.solution
            .iter()
            .find(|e| e.symbol == symbol)
            .map(|e| e.value.as_str())
    }
}

impl fmt::Display for CharacterizationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.shape;
        let mode = if s.total_degree {
            "total"
        } else {
            "per variable"
        };
        writeln!(f, "characterize/{}: {}", self.system, self.status)?;
        writeln!(
            f,
            "  ansatz: degree {} ({mode}), t-degree {}, {} unknowns",
            s.degree, s.t_degree, self.unknowns
        )?;
        for p in &self.pole_orders {
            writeln!(f, "  chart {}: poles up to order {}", p.chart, p.order)?;
        }
        writeln!(
            f,
            "  equations {}, rank {}, nullity {}, {:?}",
            self.equations, self.rank, self.nullity, self.outcome
        )?;
        for e in self.solution.iter().filter(|e| e.value != "0") {
            writeln!(f, "  {} [{}] = {}", e.symbol, e.monomial, e.value)?;
        }
        if let Some(h) = &self.hamiltonian {
            writeln!(f, "  H = {h}")?;
        }
        if let Some(h) = &self.normalized {
            writeln!(f, "  normalized H = {h}")?;
        }
        if let Some(c) = &self.central_difference {
            writeln!(f, "  central difference = {c}")?;
        }
        writeln!(f, "  matches system Hamiltonian: {}", self.matches_system)?;
        for (name, c) in [("h = 0", &self.h_zero), ("classical", &self.classical)] {
            if let Some(c) = c {
                writeln!(f, "  {name} check: {} ({})", c.status, c.detail)?;
            }
        }
        for p in &self.printed {
            let mark = if p.agrees { "agrees" } else { "differs" };
            writeln!(
                f,
                "  printed {} = {}, derived {} ({mark})",
                p.symbol, p.printed, p.derived
            )?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        for w in &self.witnesses {
            writeln!(f, "  witness: {w}")?;
        }
        Ok(())
    }
}
