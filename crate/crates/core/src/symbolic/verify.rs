//! Exact identity checks under the Gaussian weight and seeded suites.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::weighted::{commutator, formal_adjoint_weighted, gaussian_pairing};
use super::PolyZZbar;
use crate::error::Result;
use crate::exact::{factorial, format_scalar, rational_from_uint, ExactScalar};

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub identity_name: String,
    pub parameters: String,
    pub holds: bool,
    /// Nonzero difference when `holds` is false.
    pub witness: Option<PolyZZbar>,
    /// Named quantities, each an exact value (`·π` where noted).
    pub details: Vec<(String, String)>,
}

impl VerificationReport {
    fn new(identity_name: &str, parameters: String, difference: PolyZZbar) -> Self {
        let holds = difference.is_zero();
        VerificationReport {
            identity_name: identity_name.to_string(),
            parameters,
            holds,
            witness: (!holds).then_some(difference),
            details: Vec::new(),
        }
    }

    fn detail(mut self, name: &str, value: impl Into<String>) -> Self {
        self.details.push((name.to_string(), value.into()));
        self
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.holds { "holds" } else { "FAILS" };
        write!(f, "{} [{}]: {}", self.identity_name, self.parameters, status)?;
        if let Some(w) = &self.witness {
            write!(f, " (difference {w})")?;
        }
        Ok(())
    }
}

fn gauss() -> PolyZZbar {
    PolyZZbar::zzbar()
}

fn pi_text(x: &ExactScalar) -> String {
    format!("{}*pi", format_scalar(x))
}

/// `A*_c φ = e^{|z|²} ∂^k ∂̄^k (φ e^{-|z|²}) + c̄ φ`, the Gaussian-weighted
/// adjoint of `∂^k ∂̄^k + c`.
pub fn adjoint_with_constant(k: u32, c: &ExactScalar, phi: &PolyZZbar) -> PolyZZbar {
    let adj = formal_adjoint_weighted(k, phi, &gauss()).expect("|z|^2 is real");
    &adj + &phi.scale(&c.conj())
}

/// `‖A*φ‖² = ‖(∂^k ∂̄^k + c) φ‖² + ⟨φ, [∂^k ∂̄^k, A*] φ⟩`, all norms in units of π.
pub fn verify_lemma22(k: u32, c: &ExactScalar, phi: &PolyZZbar) -> VerificationReport {
    let adj = adjoint_with_constant(k, c, phi);
    let direct = &phi.derive(k, k) + &phi.scale(c);
    let comm = commutator(k, phi, &gauss()).expect("|z|^2 is real");
    let lhs = gaussian_pairing(&adj, &adj);
    let norm_direct = gaussian_pairing(&direct, &direct);
    let form = gaussian_pairing(phi, &comm);
    let rhs = &norm_direct + &form;
    let diff = PolyZZbar::constant(&lhs - &rhs);
    VerificationReport::new(
        "adjoint norm split",
        format!("k={k}, c={}, phi={phi}", format_scalar(c)),
        diff,
    )
    .detail("adjoint_norm_sq", pi_text(&lhs))
    .detail("operator_norm_sq", pi_text(&norm_direct))
    .detail("commutator_form", pi_text(&form))
    .detail("rhs", pi_text(&rhs))
}

/// `(k!)⁴ / ((α!)² (β!)² (k-α)! (k-β)!)`.
pub fn quadratic_form_coefficient(k: u32, alpha: u32, beta: u32) -> BigRational {
    let kf = rational_from_uint(&factorial(k));
    let num = &kf * &kf * &kf * &kf;
    let fa = rational_from_uint(&factorial(alpha));
    let fb = rational_from_uint(&factorial(beta));
    let den = &fa * &fa * &fb * &fb * rational_from_uint(&factorial(k - alpha)) * rational_from_uint(&factorial(k - beta));
    num / den
}

fn quadratic_form_check<F>(name: &str, k: u32, phi: &PolyZZbar, in_range: F) -> VerificationReport
where
    F: Fn(u32, u32) -> bool,
{
    let comm = commutator(k, phi, &gauss()).expect("|z|^2 is real");
    let lhs = gaussian_pairing(phi, &comm);
    let mut rhs = ExactScalar::zero();
    let mut terms = Vec::new();
    for alpha in 0..=k {
        for beta in 0..=k {
            if !in_range(alpha, beta) {
                continue;
            }
            let d = phi.derive(alpha, beta);
            let norm = gaussian_pairing(&d, &d);
            let coef = Complex::new(quadratic_form_coefficient(k, alpha, beta), BigRational::zero());
            let term = &coef * &norm;
            terms.push((format!("term[{alpha},{beta}]"), pi_text(&term)));
            rhs += term;
        }
    }
    let mut report = VerificationReport::new(
        name,
        format!("k={k}, phi={phi}"),
        PolyZZbar::constant(&lhs - &rhs),
    )
    .detail("lhs", pi_text(&lhs))
    .detail("rhs", pi_text(&rhs));
    report.details.extend(terms);
    report
}

/// `⟨φ, [∂^k ∂̄^k, A*] φ⟩ = Σ_{α,β=0}^{k-1} coefficient(k,α,β) ‖∂^α ∂̄^β φ‖²`.
pub fn verify_quadratic_form(k: u32, phi: &PolyZZbar) -> VerificationReport {
    quadratic_form_check("quadratic form", k, phi, |a, b| a < k && b < k)
}

/// The same quadratic form summed over `(α, β) ∈ [0,k]² \ {(k,k)}`.
pub fn verify_quadratic_form_complete(k: u32, phi: &PolyZZbar) -> VerificationReport {
    quadratic_form_check("quadratic form (complete range)", k, phi, |a, b| (a, b) != (k, k))
}

/// `‖A*φ‖² ≥ (k!)² ‖φ‖²`, compared as rationals.
pub fn verify_coercivity(k: u32, c: &ExactScalar, phi: &PolyZZbar) -> VerificationReport {
    let adj = adjoint_with_constant(k, c, phi);
    let lhs = gaussian_pairing(&adj, &adj).re;
    let kf = rational_from_uint(&factorial(k));
    let rhs = &kf * &kf * gaussian_pairing(phi, phi).re;
    let holds = lhs >= rhs;
    let mut report = VerificationReport {
        identity_name: "coercivity".to_string(),
        parameters: format!("k={k}, c={}, phi={phi}", format_scalar(c)),
        holds,
        witness: (!holds).then(|| PolyZZbar::constant(Complex::new(&lhs - &rhs, BigRational::zero()))),
        details: Vec::new(),
    }
    .detail("lhs", format!("{lhs}*pi"))
    .detail("rhs", format!("{rhs}*pi"));
    if !rhs.is_zero() {
        let ratio = &lhs / &rhs;
        report = report
            .detail("ratio", ratio.to_string())
            .detail("equality", (ratio == BigRational::one()).to_string());
    }
    report
}

/// `e^{g} ∂∂̄ e^{-g}` differentiated once more by `∂∂̄`.
pub fn weight_factor_k1(g: &PolyZZbar) -> Result<PolyZZbar> {
    Ok(formal_adjoint_weighted(1, &PolyZZbar::one(), g)?.derive(1, 1))
}

/// `[∂∂̄, A*] φ = φ · ∂∂̄(e^{g} ∂∂̄ e^{-g})` for a real polynomial weight `g`.
pub fn verify_weight_identity_k1(g: &PolyZZbar, phi: &PolyZZbar) -> Result<VerificationReport> {
    let lhs = commutator(1, phi, g)?;
    let factor = weight_factor_k1(g)?;
    let rhs = phi * &factor;
    Ok(VerificationReport::new(
        "k=1 weight identity",
        format!("g={g}, phi={phi}"),
        &lhs - &rhs,
    )
    .detail("commutator", lhs.to_string())
    .detail("weight_factor", factor.to_string()))
}

fn random_rational<R: Rng>(rng: &mut R) -> BigRational {
    let num: i64 = rng.random_range(-9..=9);
    let den: i64 = rng.random_range(1..=3);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Sparse nonzero polynomial of total degree ≤ `max_degree` with up to five
/// distinct monomials and complex coefficients whose parts have numerator in `[-9, 9]` and denominator in
/// `{1, 2, 3}`.
pub fn random_poly<R: Rng>(rng: &mut R, max_degree: u32) -> PolyZZbar {
    loop {
        let n_terms = rng.random_range(1..=5);
        let mut p = PolyZZbar::zero();
        for _ in 0..n_terms {
            let a = rng.random_range(0..=max_degree);
            let b = rng.random_range(0..=max_degree - a);
            if !p.coeff(a, b).is_zero() {
                continue;
            }
            p.add_term(a, b, Complex::new(random_rational(rng), random_rational(rng)));
        }
        if !p.is_zero() {
            return p;
        }
    }
}

/// `p + p̄` for a random `p`, hence real-valued.
pub fn random_real_poly<R: Rng>(rng: &mut R, max_degree: u32) -> PolyZZbar {
    loop {
        let p = random_poly(rng, max_degree);
        let g = &p + &p.conj();
        if !g.is_zero() {
            return g;
        }
    }
}

pub fn random_scalar<R: Rng>(rng: &mut R) -> ExactScalar {
    Complex::new(random_rational(rng), random_rational(rng))
}

/// The seeded `(φ, c)` pairs behind [`lemma_suite`].
pub fn lemma_cases(k: u32, trials: usize, seed: u64) -> Vec<(PolyZZbar, ExactScalar)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ u64::from(k).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    (0..trials)
        .map(|_| (random_poly(&mut rng, 4), random_scalar(&mut rng)))
        .collect()
}

/// Adjoint split, quadratic form and coercivity on `trials` seeded random
/// `φ` of degree ≤ 4 (and random rational `c`), in deterministic order.
pub fn lemma_suite(k: u32, trials: usize, seed: u64) -> Vec<VerificationReport> {
    lemma_cases(k, trials, seed)
        .par_iter()
        .flat_map_iter(|(phi, c)| {
            [
                verify_lemma22(k, c, phi),
                verify_quadratic_form(k, phi),
                verify_coercivity(k, c, phi),
            ]
        })
        .collect()
}

/// k=1 weight identity on seeded random real weights and test polynomials of
/// degree ≤ 3.
pub fn weight_identity_suite(trials: usize, seed: u64) -> Vec<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<(PolyZZbar, PolyZZbar)> = (0..trials)
        .map(|_| (random_real_poly(&mut rng, 3), random_poly(&mut rng, 3)))
        .collect();
    cases
        .par_iter()
        .map(|(g, phi)| verify_weight_identity_k1(g, phi).expect("generated weight is real"))
        .collect()
}
