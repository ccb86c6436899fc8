//! Minimum-norm spectral solver for `(∂^k ∂̄^k + c) u = f`.

mod chain;
mod scaled;
mod solve;

pub use chain::{
    chain_origins, decompose, decompose_exact, orthonormal_coupling, positions_within, solve_chain,
    solve_chain_exact, ChainSystem, ExactChain,
};
pub use scaled::{
    solve_disk, solve_scaled, DiskProblem, DiskQuadrature, DiskReport, DiskSolution, ScaledProblem,
    ScaledReport, ScaledSolution, DISK_RESOLUTION_TOLERANCE,
};
pub use solve::{
    factorial_f64, in_normalization, operator_norm_probe, seeded_box_data, solve, solve_exact, ProblemSpec,
    SolveReport, BOUND_TOLERANCE, CERTIFICATION_GRID,
};
