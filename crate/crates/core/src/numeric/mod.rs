//! Pointwise evaluation, quadrature projection and finite-difference checks.

mod eval;
mod fd;
mod quadrature;

pub use eval::{eval_table, project, synthesize, synthesize_many, EvalTable, Projection, PARSEVAL_TOLERANCE};
pub(crate) use eval::project_orthonormal;
pub use fd::{fd_residual_k1, fd_residual_map, GridSpec, ResidualPoint};
pub use quadrature::{gauss_laguerre, gauss_legendre, Domain, QuadratureRule};
