//! Puiseux branches of polynomial equations over q-series coefficients.

mod bivariate;
mod partition;
mod qm;
mod solve;

pub use bivariate::BivariatePoly;
pub use partition::{c_p_constant, Partition, PartitionCache};
pub use qm::{qm_terms, qm_value, QmTerm};
pub use solve::{
    normalize, solve_branches, verify_solution, BranchSolution, CaseEvent, PendingBranch, SolveOptions,
    SolveReport, Verification,
};
