//! Spectral solver and exact verifier for `∂^k ∂̄^k + c` on
//! `L²(ℂ, e^{-|z|²})`.
//!
//! - [`fock_basis`]: complex Hermite basis, exact inner products, index-shift
//!   operators.
//! - [`symbolic`]: exact polynomial algebra, weighted adjoints, commutator
//!   identities and their verification reports.
//! - [`spectral`]: minimum-norm chain solver and its certified report.
//! - [`numeric`]: pointwise evaluation, quadrature projection, finite
//!   differences.

pub mod error;
pub mod exact;
pub mod fock_basis;
pub mod numeric;
pub mod spectral;
pub mod symbolic;

pub use error::{CoreError, Result};
pub use exact::{ExactScalar, WeightedNorm};
pub use fock_basis::{BasisIndex, HermiteCoeffs, Normalization};
pub use symbolic::PolyZZbar;
