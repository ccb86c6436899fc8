use thiserror::Error;

use crate::fock_basis::BasisIndex;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error("coefficient at index {index} lies outside the certified box [0, {limit}]^2")]
    IndexOutsideBox { index: BasisIndex, limit: u32 },

    #[error("weight exponent is not real-valued: {0}")]
    ComplexWeight(String),

    #[error("quadrature under-resolved: relative defect {defect:.3e} exceeds {tolerance:.1e}")]
    UnderResolved { defect: f64, tolerance: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
