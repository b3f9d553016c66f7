//! Verification: chart canonicity, polynomiality of transformed flows and
//! the chart Hamiltonians they integrate to, agreement with the Nagoya
//! forms, and equivariance of the generator tables.
//!
//! Every check produces a [`VerificationReport`]. A report passes only when
//! every residual it computed is identically zero.

mod chart;
mod classical;
mod nagoya;
mod report;
mod symmetry;
mod tasks;

pub use chart::{
    check_canonical, check_polynomial, check_printed_chart, reconstruct_hamiltonian,
    transform_flow, transform_flow_with, verify_chart, verify_chart_against, FlowOptions,
};
pub use classical::{
    classical_chart_hamiltonian, classical_reconstruct, classical_transform_flow,
    classical_transform_flow_with, verify_classical_limit,
};
pub use nagoya::{nagoya_difference, verify_nagoya, verify_nagoya_map};
pub use report::{ReportBuilder, Status, VerificationReport, Witness, MAX_WITNESSES};
pub use symmetry::{alpha_substitution, symmetry_images, verify_symmetry, SymmetryImages};
pub use tasks::{run_task, task_list, Task, TaskKind};

use crate::catalog::CatalogError;
use crate::coeff::CoeffError;
use crate::expr::ExprError;
use crate::weyl::WeylError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("vector field is not Hamiltonian: {0}")]
    NonExact(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}
