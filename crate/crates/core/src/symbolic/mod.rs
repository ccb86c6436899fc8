//! Exact computer algebra over `P(z, z̄) · e^{-g}`.

mod poly;
mod verify;
mod weighted;

pub use poly::{Monomial, PolyZZbar};
pub use verify::{
    adjoint_with_constant, lemma_cases, lemma_suite, quadratic_form_coefficient, random_poly, random_real_poly,
    random_scalar, verify_coercivity, verify_lemma22, verify_quadratic_form,
    verify_quadratic_form_complete, verify_weight_identity_k1, weight_factor_k1,
    weight_identity_suite, VerificationReport,
};
pub use weighted::{
    commutator, commutator_expansion, commutator_expansion_positive_indices, formal_adjoint_weighted,
    gaussian_derivative_closed_form, gaussian_pairing, weighted_derivative, Direction,
    WeightedGaussianFunction,
};
