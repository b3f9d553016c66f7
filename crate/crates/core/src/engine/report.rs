use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::Serialize;

use super::EngineError;
use crate::catalog::Label;
use crate::weyl::WeylExpr;

pub const MAX_WITNESSES: usize = 20;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Unsupported,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unsupported => "unsupported",
        })
    }
}

/// One offending term of a residual that should have vanished.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Witness {
    pub residual: String,
    pub exponents: [i32; 2],
    pub coefficient: String,
    pub term: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub task: String,
    pub system: Label,
    pub target: String,
    pub status: Status,
    pub witnesses: Vec<Witness>,
    /// Computed objects in canonical text, keyed by name.
    pub derived: BTreeMap<String, String>,
    pub notes: Vec<String>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} [{}]: {}", self.task, self.target, self.status)?;
        for (k, v) in &self.derived {
            writeln!(f, "  {k} = {v}")?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        for w in &self.witnesses {
            writeln!(f, "  witness {}: {}", w.residual, w.term)?;
        }
        Ok(())
    }
}

/// Accumulates residuals; the status is decided when the report is built.
pub struct ReportBuilder {
    task: String,
    system: Label,
    target: String,
    witnesses: Vec<Witness>,
    failed: bool,
    unsupported: bool,
    derived: BTreeMap<String, String>,
    notes: Vec<String>,
    start: Instant,
}

impl ReportBuilder {
    pub fn new(task: impl Into<String>, system: Label, target: impl Into<String>) -> Self {
        ReportBuilder {
            task: task.into(),
            system,
            target: target.into(),
            witnesses: Vec::new(),
            failed: false,
            unsupported: false,
            derived: BTreeMap::new(),
            notes: Vec::new(),
            start: Instant::now(),
        }
    }

    /// Records `e`, which must be zero; returns whether it was.
    pub fn residual(&mut self, name: &str, e: &WeylExpr) -> bool {
        if e.is_zero() {
            return true;
        }
        self.failed = true;
        let rendered = e.witness_terms(MAX_WITNESSES);
        for ((k, c), term) in e.ordered_terms().into_iter().zip(rendered) {
            if self.witnesses.len() >= MAX_WITNESSES {
                break;
            }
            self.witnesses.push(Witness {
                residual: name.to_string(),
                exponents: [k.0, k.1],
                coefficient: c.to_string(),
                term,
            });
        }
        false
    }

    /// A failure that has no term structure, e.g. a scalar mismatch.
    pub fn fail(&mut self, name: &str, what: impl Into<String>) {
        self.failed = true;
        if self.witnesses.len() < MAX_WITNESSES {
            let what = what.into();
            self.witnesses.push(Witness {
                residual: name.to_string(),
                exponents: [0, 0],
                coefficient: what.clone(),
                term: what,
            });
        }
    }

    pub fn error(&mut self, e: EngineError) {
        match e {
            EngineError::Unsupported(msg) => {
                self.unsupported = true;
                self.notes.push(format!("unsupported: {msg}"));
            }
            other => self.fail("error", other.to_string()),
        }
    }

    pub fn derive(&mut self, key: &str, value: impl fmt::Display) {
        self.derived.insert(key.to_string(), value.to_string());
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn is_failing(&self) -> bool {
        self.failed
    }

    pub fn finish(self) -> VerificationReport {
        let status = if self.unsupported {
            Status::Unsupported
        } else if self.failed {
            Status::Fail
        } else {
            Status::Pass
        };
        VerificationReport {
            task: self.task,
            system: self.system,
            target: self.target,
            status,
            witnesses: self.witnesses,
            derived: self.derived,
            notes: self.notes,
            elapsed_ms: self.start.elapsed().as_millis() as u64,
        }
    }
}
