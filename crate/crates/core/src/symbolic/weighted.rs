//! Functions of the form `P · e^{-g}` with polynomial `P` and real
//! polynomial `g`, and the operators built from them.

use num_traits::Zero;

use super::PolyZZbar;
use crate::error::{CoreError, Result};
use crate::exact::{binomial, factorial, rational_from_uint, scalar_from_uint, ExactScalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Dz,
    Dzbar,
}

/// `poly · e^{-weight_exponent}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGaussianFunction {
    pub poly: PolyZZbar,
    weight_exponent: PolyZZbar,
}

impl WeightedGaussianFunction {
    /// Fails unless `weight_exponent` equals its own conjugate.
    pub fn new(poly: PolyZZbar, weight_exponent: PolyZZbar) -> Result<Self> {
        if !weight_exponent.is_real_valued() {
            return Err(CoreError::ComplexWeight(weight_exponent.to_string()));
        }
        Ok(WeightedGaussianFunction {
            poly,
            weight_exponent,
        })
    }

    /// `P · e^{-|z|²}`.
    pub fn gaussian(poly: PolyZZbar) -> Self {
        WeightedGaussianFunction {
            poly,
            weight_exponent: PolyZZbar::zzbar(),
        }
    }

    pub fn weight_exponent(&self) -> &PolyZZbar {
        &self.weight_exponent
    }
}

/// Iterated product rule: `∂(P e^{-g}) = (∂P - P ∂g) e^{-g}`, mirrored for `∂̄`.
pub fn weighted_derivative(
    w: &WeightedGaussianFunction,
    direction: Direction,
    order: u32,
) -> WeightedGaussianFunction {
    let g = &w.weight_exponent;
    let dg = match direction {
        Direction::Dz => g.dz(),
        Direction::Dzbar => g.dzbar(),
    };
    let mut p = w.poly.clone();
    for _ in 0..order {
        let dp = match direction {
            Direction::Dz => p.dz(),
            Direction::Dzbar => p.dzbar(),
        };
        p = &dp - &(&p * &dg);
    }
    WeightedGaussianFunction {
        poly: p,
        weight_exponent: g.clone(),
    }
}

/// `e^{g} ∂^{dz_order} ∂̄^{dzbar_order} (P e^{-g})` as a polynomial.
fn conjugated_derivative(w: &WeightedGaussianFunction, dz_order: u32, dzbar_order: u32) -> PolyZZbar {
    let inner = weighted_derivative(w, Direction::Dzbar, dzbar_order);
    weighted_derivative(&inner, Direction::Dz, dz_order).poly
}

/// `e^{|z|²} ∂^j ∂̄^i e^{-|z|²}
///   = Σ_{n=max(0,j-i)}^{j} (-1)^{n+i} C(j,n) i!/(i-j+n)! z^{i-j+n} z̄^n`.
pub fn gaussian_derivative_closed_form(j: u32, i: u32) -> PolyZZbar {
    let mut p = PolyZZbar::zero();
    for n in j.saturating_sub(i)..=j {
        let zpow = i + n - j;
        let mag = binomial(j, n) * factorial(i) / factorial(zpow);
        let mut c = scalar_from_uint(&mag);
        if (n + i) % 2 == 1 {
            c = -c;
        }
        p.add_term(zpow, n, c);
    }
    p
}

/// `e^{g} ∂^k ∂̄^k (φ e^{-g})`, the weighted formal adjoint of `∂^k ∂̄^k`.
pub fn formal_adjoint_weighted(k: u32, phi: &PolyZZbar, g: &PolyZZbar) -> Result<PolyZZbar> {
    let w = WeightedGaussianFunction::new(phi.clone(), g.clone())?;
    Ok(conjugated_derivative(&w, k, k))
}

/// `∂^k ∂̄^k (A* φ) - A* (∂^k ∂̄^k φ)` with `A*` the weighted adjoint.
pub fn commutator(k: u32, phi: &PolyZZbar, g: &PolyZZbar) -> Result<PolyZZbar> {
    let left = formal_adjoint_weighted(k, phi, g)?.derive(k, k);
    let right = formal_adjoint_weighted(k, &phi.derive(k, k), g)?;
    Ok(&left - &right)
}

/// `G_{a,b} = e^{g} ∂^a ∂̄^b e^{-g}` for `0 ≤ a, b ≤ k`.
fn weight_factors(k: u32, g: &PolyZZbar) -> Result<Vec<Vec<PolyZZbar>>> {
    let one = WeightedGaussianFunction::new(PolyZZbar::one(), g.clone())?;
    Ok((0..=k)
        .map(|a| (0..=k).map(|b| conjugated_derivative(&one, a, b)).collect())
        .collect())
}

/// Leibniz quadruple sum for `∂^k ∂̄^k (A* φ)`, keeping the terms selected by
/// `keep(i, j, l, m)`.
///
/// With `A* φ = Σ_{i,j} C(k,i) C(k,j) ∂^i ∂̄^j φ · G_{k-i,k-j}`, the term
/// `(i,j,l,m)` is `C(k,i) C(k,j) C(k,l) C(k,m) ∂^{i+k-l} ∂̄^{j+k-m} φ ·
/// ∂^l ∂̄^m G_{k-i,k-j}`.
fn leibniz_sum<F>(k: u32, phi: &PolyZZbar, g: &PolyZZbar, keep: F) -> Result<PolyZZbar>
where
    F: Fn(u32, u32, u32, u32) -> bool,
{
    let gf = weight_factors(k, g)?;
    let mut acc = PolyZZbar::zero();
    for i in 0..=k {
        for j in 0..=k {
            let base = &gf[(k - i) as usize][(k - j) as usize];
            for l in 0..=k {
                for m in 0..=k {
                    if !keep(i, j, l, m) {
                        continue;
                    }
                    let coef = binomial(k, i) * binomial(k, j) * binomial(k, l) * binomial(k, m);
                    let dphi = phi.derive(i + k - l, j + k - m);
                    if dphi.is_zero() {
                        continue;
                    }
                    let dg = base.derive(l, m);
                    acc = &acc + &(&dphi * &dg).scale(&scalar_from_uint(&coef));
                }
            }
        }
    }
    Ok(acc)
}

/// Commutator as the Leibniz expansion over `i, j, l, m ∈ [0, k]` with the
/// `l = m = 0` slice removed (that slice is exactly `A*(∂^k ∂̄^k φ)`).
pub fn commutator_expansion(k: u32, phi: &PolyZZbar, g: &PolyZZbar) -> Result<PolyZZbar> {
    leibniz_sum(k, phi, g, |_, _, l, m| (l, m) != (0, 0))
}

/// Same expansion restricted to `i, j, l, m ≥ 1`.
pub fn commutator_expansion_positive_indices(k: u32, phi: &PolyZZbar, g: &PolyZZbar) -> Result<PolyZZbar> {
    leibniz_sum(k, phi, g, |i, j, l, m| i >= 1 && j >= 1 && l >= 1 && m >= 1)
}

/// `(1/π) ∫ p̄ q e^{-|z|²} dσ = Σ_a a! [p̄ q]_{(a,a)}`.
pub fn gaussian_pairing(p: &PolyZZbar, q: &PolyZZbar) -> ExactScalar {
    let prod = &p.conj() * q;
    let mut acc = ExactScalar::zero();
    for (&(a, b), c) in prod.terms() {
        if a == b {
            acc += c * rational_from_uint(&factorial(a));
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar;
    use crate::fock_basis::{hermite_polynomial, BasisIndex};

    fn zz() -> PolyZZbar {
        PolyZZbar::zzbar()
    }

    fn poly(s: &[((u32, u32), i64)]) -> PolyZZbar {
        PolyZZbar::from_terms(s.iter().map(|&(mon, c)| (mon, scalar(c, 0))))
    }

    #[test]
    fn weighted_derivative_examples() {
        let one = WeightedGaussianFunction::gaussian(PolyZZbar::one());
        let d = weighted_derivative(&one, Direction::Dzbar, 1);
        assert_eq!(d.poly, poly(&[((1, 0), -1)]));
        let d = weighted_derivative(&one, Direction::Dz, 2);
        assert_eq!(d.poly, poly(&[((0, 2), 1)]));
        let w = WeightedGaussianFunction::new(poly(&[((2, 1), 3)]), poly(&[((1, 1), 2), ((0, 0), 1)])).unwrap();
        assert_eq!(weighted_derivative(&w, Direction::Dz, 0), w);
    }

    #[test]
    fn complex_weight_is_rejected() {
        assert!(matches!(
            WeightedGaussianFunction::new(PolyZZbar::one(), PolyZZbar::z()),
            Err(CoreError::ComplexWeight(_))
        ));
        assert!(formal_adjoint_weighted(1, &PolyZZbar::one(), &PolyZZbar::z()).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(gaussian_derivative_closed_form(1, 1), poly(&[((1, 1), 1), ((0, 0), -1)]));
        assert_eq!(gaussian_derivative_closed_form(0, 1), poly(&[((1, 0), -1)]));
        assert_eq!(gaussian_derivative_closed_form(2, 0), poly(&[((0, 2), 1)]));
    }

    #[test]
    fn closed_form_matches_iterated_differentiation() {
        let one = WeightedGaussianFunction::gaussian(PolyZZbar::one());
        for i in 0..=6 {
            for j in 0..=6 {
                let oracle = conjugated_derivative(&one, j, i);
                assert_eq!(gaussian_derivative_closed_form(j, i), oracle, "j={j} i={i}");
            }
        }
    }

    #[test]
    fn closed_form_is_signed_hermite() {
        for i in 0..=6 {
            for j in 0..=6 {
                let h = hermite_polynomial(BasisIndex::new(i, j));
                let signed = if (i + j) % 2 == 0 { h } else { -h };
                assert_eq!(gaussian_derivative_closed_form(j, i), signed);
            }
        }
    }

    #[test]
    fn formal_adjoint_examples() {
        assert_eq!(formal_adjoint_weighted(1, &PolyZZbar::one(), &zz()).unwrap(), poly(&[((1, 1), 1), ((0, 0), -1)]));
        assert_eq!(
            formal_adjoint_weighted(1, &PolyZZbar::z(), &zz()).unwrap(),
            poly(&[((2, 1), 1), ((1, 0), -2)])
        );
        assert_eq!(
            formal_adjoint_weighted(2, &PolyZZbar::one(), &zz()).unwrap(),
            hermite_polynomial(BasisIndex::new(2, 2))
        );
    }

    #[test]
    fn commutator_examples() {
        assert_eq!(commutator(1, &PolyZZbar::one(), &zz()).unwrap(), PolyZZbar::one());
        // On H_{m,n} the k = 1 commutator acts as multiplication by m + n + 1.
        assert_eq!(commutator(1, &PolyZZbar::z(), &zz()).unwrap(), poly(&[((1, 0), 2)]));
        assert_eq!(commutator(1, &poly(&[((0, 2), 1)]), &zz()).unwrap(), poly(&[((0, 2), 3)]));
        assert_eq!(commutator(1, &zz(), &zz()).unwrap(), poly(&[((1, 1), 3), ((0, 0), -2)]));
    }

    #[test]
    fn commutator_is_diagonal_on_hermite_basis() {
        use crate::exact::falling_factorial;
        for k in 1..=3 {
            for m in 0..=4 {
                for n in 0..=4 {
                    let h = hermite_polynomial(BasisIndex::new(m, n));
                    let eig = falling_factorial(m + k, k) * falling_factorial(n + k, k)
                        - falling_factorial(m, k) * falling_factorial(n, k);
                    assert_eq!(commutator(k, &h, &zz()).unwrap(), h.scale(&scalar_from_uint(&eig)));
                }
            }
        }
    }

    #[test]
    fn expansion_matches_direct_commutator() {
        let samples = [
            PolyZZbar::one(),
            PolyZZbar::z(),
            poly(&[((2, 1), 3), ((0, 3), -1), ((1, 1), 2)]),
            poly(&[((4, 0), 1), ((2, 2), -5), ((0, 1), 7)]),
            poly(&[((1, 3), 2), ((3, 1), 2), ((0, 0), -4)]),
        ];
        for k in 1..=3 {
            for phi in &samples {
                assert_eq!(
                    commutator_expansion(k, phi, &zz()).unwrap(),
                    commutator(k, phi, &zz()).unwrap(),
                    "k={k} phi={phi}"
                );
            }
        }
    }

    #[test]
    fn expansion_also_holds_for_other_real_weights() {
        let g = poly(&[((2, 2), 1), ((1, 0), 1), ((0, 1), 1)]);
        let phi = poly(&[((2, 1), 1), ((0, 0), 3)]);
        for k in 1..=2 {
            assert_eq!(commutator_expansion(k, &phi, &g).unwrap(), commutator(k, &phi, &g).unwrap());
        }
    }

    #[test]
    fn positive_index_expansion_drops_principal_terms() {
        let restricted = commutator_expansion_positive_indices(1, &PolyZZbar::one(), &zz()).unwrap();
        assert_eq!(restricted, PolyZZbar::zero());
        assert_ne!(restricted, commutator(1, &PolyZZbar::one(), &zz()).unwrap());
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(gaussian_pairing(&PolyZZbar::one(), &PolyZZbar::one()), scalar(1, 0));
        let h11 = hermite_polynomial(BasisIndex::new(1, 1));
        assert_eq!(gaussian_pairing(&h11, &h11), scalar(1, 0));
        assert_eq!(gaussian_pairing(&PolyZZbar::z(), &PolyZZbar::zbar()), scalar(0, 0));
    }

    /// The moment table `∫ z^a z̄^b e^{-|z|²} dσ = π a! δ_{ab}` checked by
    /// numerical polar integration: the angular integral kills `a ≠ b`
    /// and the radial one is `π ∫_0^∞ t^a e^{-t} dt`.
    #[test]
    fn pairing_moments_match_polar_integration() {
        use std::f64::consts::PI;
        let n_theta = 64;
        let n_t = 20000;
        let t_max = 60.0;
        for a in 0..=4u32 {
            for b in 0..=4u32 {
                // ∫∫ r^{a+b} e^{i(a-b)θ} e^{-r²} r dr dθ with t = r².
                let mut ang = num_complex::Complex64::new(0.0, 0.0);
                for s in 0..n_theta {
                    let th = 2.0 * PI * s as f64 / n_theta as f64;
                    ang += num_complex::Complex64::from_polar(1.0, (a as f64 - b as f64) * th);
                }
                ang *= 2.0 * PI / n_theta as f64;
                let dt = t_max / n_t as f64;
                let rad: f64 = (0..n_t)
                    .map(|s| {
                        let t = (s as f64 + 0.5) * dt;
                        t.powf((a + b) as f64 / 2.0) * (-t).exp() * 0.5 * dt
                    })
                    .sum();
                let numeric = ang * rad / PI;
                let exact = crate::exact::scalar_to_f64(&gaussian_pairing(
                    &PolyZZbar::monomial(b, a, scalar(1, 0)),
                    &PolyZZbar::one(),
                ));
                assert!((numeric - exact).norm() < 1e-6, "a={a} b={b}: {numeric} vs {exact}");
            }
        }
    }

    #[test]
    fn pairing_is_conjugate_symmetric() {
        let p = PolyZZbar::from_terms([((2, 1), scalar(1, 2)), ((0, 0), scalar(-3, 1))]);
        let q = PolyZZbar::from_terms([((1, 0), scalar(2, -1)), ((2, 1), scalar(0, 5))]);
        assert_eq!(gaussian_pairing(&p, &q), gaussian_pairing(&q, &p).conj());
    }
}
