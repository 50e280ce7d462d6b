//! Lattice-based deduction of non-generic unramified characters: case-split
//! over which factor of each vanishing constraint is zero, track the derived
//! monomial equations exactly, and report the consistent character families
//! with verified torsion classes and replayable traces.

mod cases;
mod snf;
mod solve;
mod state;

pub use cases::{vanishing_cases, FactorCases};
pub use snf::{smith_normal_form, Snf};
pub use solve::{
    solve_genericity, DeduceError, DeductionTrace, SolutionFamily, SolveOptions, TraceStep,
};
pub use state::{FamilyChart, KnowledgeState, MonomialEquation};
