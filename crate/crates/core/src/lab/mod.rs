//! Named varieties and scenario runners that re-check each finite step
//! of the modularity arguments, with line-oriented and JSON reports.

mod registry;
mod report;
mod scenarios;

use thiserror::Error;

use crate::finmon::MonoidError;
use crate::lattice::LatticeError;
use crate::varieties::VarietyError;

pub use registry::{Registry, MAX_CHAIN};
pub use report::{Claim, Outcome, Provenance, ScenarioReport, Status};
pub use scenarios::{
    derive_claim, render_reports, run_grid, scenario_lemma2, scenario_lemma2_with, scenario_special_elements,
    scenario_theorem_steps, scenario_theorem_steps_with, Budgets, BUDGET_ENV, LEMMA2_GRID, THEOREM_GRID,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("{0}")]
    Parameters(String),
    #[error(transparent)]
    Variety(#[from] VarietyError),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}
