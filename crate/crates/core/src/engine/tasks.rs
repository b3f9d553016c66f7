use std::fmt;

use super::report::ReportBuilder;
use super::{
    check_canonical, verify_chart, verify_classical_limit, verify_nagoya_map, verify_symmetry,
    EngineError, VerificationReport,
};
use crate::catalog::{Catalog, Label};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum TaskKind {
    Canonical,
    Chart,
    Nagoya,
    Symmetry,
    Classical,
}

/// One independent unit of verification. Tasks share nothing but the
/// read-only catalog, so they may run in any order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Task {
    pub kind: TaskKind,
    pub system: Label,
    /// Chart index, map name or generator name.
    pub target: String,
}

impl Task {
    pub fn id(&self) -> String {
        let kind = match self.kind {
            TaskKind::Canonical => "canonical",
            TaskKind::Chart => "chart",
            TaskKind::Nagoya => "nagoya",
            TaskKind::Symmetry => "symmetry",
            TaskKind::Classical => "classical",
        };
        format!("{kind}/{}/{}", self.system, self.target)
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// Every task of `kind` for the given systems, in catalog order.
pub fn task_list(
    cat: &Catalog,
    kind: TaskKind,
    systems: &[Label],
) -> Result<Vec<Task>, EngineError> {
    let mut out = Vec::new();
    for &system in systems {
        let targets: Vec<String> = match kind {
            TaskKind::Canonical | TaskKind::Chart | TaskKind::Classical => cat
                .get_charts(system)?
                .iter()
                .map(|c| c.index.to_string())
                .collect(),
            TaskKind::Nagoya => cat
                .get_nagoya(system)?
                .maps
                .iter()
                .map(|m| m.name.clone())
                .collect(),
            TaskKind::Symmetry => cat
                .get_symmetries(system)?
                .iter()
                .map(|s| s.name.clone())
                .collect(),
        };
        out.extend(targets.into_iter().map(|target| Task {
            kind,
            system,
            target,
        }));
    }
    Ok(out)
}

fn try_run(cat: &Catalog, task: &Task) -> Result<VerificationReport, EngineError> {
    let l = task.system;
    let system = cat.get_system(l)?;
    Ok(match task.kind {
        TaskKind::Canonical | TaskKind::Chart | TaskKind::Classical => {
            let index: usize = task.target.parse().map_err(|_| {
                EngineError::Unsupported(format!("bad chart index `{}`", task.target))
            })?;
            let chart = cat.get_chart(l, index)?;
            match task.kind {
                TaskKind::Canonical => check_canonical(chart),
                TaskKind::Classical => verify_classical_limit(system, chart, cat.get_charts(l)?),
                _ => verify_chart(system, chart, cat.get_charts(l)?, cat.get_golden(l, index)?),
            }
        }
        TaskKind::Nagoya => {
            let n = cat.get_nagoya(l)?;
            let map = n
                .maps
                .iter()
                .find(|m| m.name == task.target)
                .ok_or_else(|| crate::catalog::CatalogError::Missing(task.id()))?;
            verify_nagoya_map(system, n, map)
        }
        TaskKind::Symmetry => verify_symmetry(
            system,
            cat.get_nagoya(l)?,
            cat.get_symmetry(l, &task.target)?,
        ),
    })
}

/// Runs one task; lookup failures become failing reports.
pub fn run_task(cat: &Catalog, task: &Task) -> VerificationReport {
    try_run(cat, task).unwrap_or_else(|e| {
        let mut r = ReportBuilder::new(task.id(), task.system, task.target.clone());
        r.error(e);
        r.finish()
    })
}
