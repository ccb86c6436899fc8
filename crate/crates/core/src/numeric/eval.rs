//! Pointwise values of `H_{m,n}` by recurrence, synthesis and projection.

use num_complex::Complex64;
use rayon::prelude::*;

use super::quadrature::QuadratureRule;
use crate::error::{CoreError, Result};
use crate::fock_basis::{BasisIndex, HermiteCoeffs, Normalization};

/// Values `H_{m,n}(z)` (or their orthonormal versions) for
/// `0 ≤ m ≤ max_m`, `0 ≤ n ≤ max_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalTable {
    pub point: Complex64,
    pub max_m: u32,
    pub max_n: u32,
    pub normalization: Normalization,
    values: Vec<Complex64>,
}

impl EvalTable {
    /// Raw table on the square `[0, M]²`.
    pub fn new(max_index: u32, z: Complex64) -> Self {
        Self::build(max_index, max_index, z, Normalization::Raw)
    }

    /// Walks each diagonal `m - n = const` with
    /// `H_{m+1,n+1} = (|z|² - m - n - 1) H_{m,n} - m n H_{m-1,n-1}`, which
    /// follows from the ladder recurrences `H_{m+1,n} = z H_{m,n} - n H_{m,n-1}`
    /// and `H_{m,n+1} = z̄ H_{m,n} - m H_{m-1,n}`, starting from
    /// `H_{d,0} = z^d` and `H_{0,d} = z̄^d`.
    pub fn build(max_m: u32, max_n: u32, z: Complex64, normalization: Normalization) -> Self {
        let stride = max_n as usize + 1;
        let mut values = vec![Complex64::new(0.0, 0.0); (max_m as usize + 1) * stride];
        let ortho = normalization == Normalization::Orthonormal;
        let t = z.norm_sqr();
        let head = |w: Complex64, d: u32| {
            let mut h = if ortho {
                Complex64::new(1.0 / std::f64::consts::PI.sqrt(), 0.0)
            } else {
                Complex64::new(1.0, 0.0)
            };
            for j in 1..=d {
                h *= if ortho { w / (j as f64).sqrt() } else { w };
            }
            h
        };
        let mut walk = |m0: u32, n0: u32, start: Complex64| {
            let (mut prev, mut cur) = (Complex64::new(0.0, 0.0), start);
            let (mut m, mut n) = (m0, n0);
            loop {
                values[m as usize * stride + n as usize] = cur;
                if m == max_m || n == max_n {
                    break;
                }
                let (mf, nf) = (m as f64, n as f64);
                let next = if ortho {
                    (cur * (t - mf - nf - 1.0) - prev * (mf * nf).sqrt()) / ((mf + 1.0) * (nf + 1.0)).sqrt()
                } else {
                    cur * (t - mf - nf - 1.0) - prev * (mf * nf)
                };
                prev = cur;
                cur = next;
                m += 1;
                n += 1;
            }
        };
        for d in 0..=max_m {
            walk(d, 0, head(z, d));
        }
        for d in 1..=max_n {
            walk(0, d, head(z.conj(), d));
        }
        EvalTable {
            point: z,
            max_m,
            max_n,
            normalization,
            values,
        }
    }

    pub fn max_index(&self) -> u32 {
        self.max_m.min(self.max_n)
    }

    pub fn get(&self, idx: BasisIndex) -> Complex64 {
        assert!(idx.m <= self.max_m && idx.n <= self.max_n, "index {idx} outside table");
        self.values[idx.m as usize * (self.max_n as usize + 1) + idx.n as usize]
    }
}

/// Raw table on `[0, M]²`.
pub fn eval_table(max_index: u32, z: Complex64) -> EvalTable {
    EvalTable::new(max_index, z)
}

/// `Σ a_{m,n} H_{m,n}(z)` in the normalization of `u`.
pub fn synthesize(u: &HermiteCoeffs<Complex64>, z: Complex64) -> Complex64 {
    if u.is_empty() {
        return Complex64::new(0.0, 0.0);
    }
    let (mm, mn) = u.max_indices();
    let table = EvalTable::build(mm, mn, z, u.normalization());
    u.iter().map(|(idx, a)| a * table.get(*idx)).sum()
}

/// Values of `u` at many points, evaluated in parallel.
pub fn synthesize_many(u: &HermiteCoeffs<Complex64>, points: &[Complex64]) -> Vec<Complex64> {
    points.par_iter().map(|&z| synthesize(u, z)).collect()
}

/// Outcome of [`project`]: coefficients plus the Parseval defect
/// `|‖f‖²_quad - Σ |ã|²| / ‖f‖²_quad`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub coeffs: HermiteCoeffs<Complex64>,
    pub parseval_defect: f64,
}

pub const PARSEVAL_TOLERANCE: f64 = 1e-6;

/// `ã_{m,n} = ⟨H̃_{m,n}, f⟩` over `[0, M]²` by a full-plane rule, returned as
/// raw amplitudes `a_{m,n} = ⟨H_{m,n}, f⟩ / (π m! n!)`.
///
/// Fails with [`CoreError::UnderResolved`] when the Parseval defect exceeds
/// [`PARSEVAL_TOLERANCE`], i.e. `f` is not captured by the retained box.
pub fn project<F>(f: F, max_index: u32, rule: &QuadratureRule) -> Result<Projection>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    if !matches!(rule.domain, super::quadrature::Domain::FullPlane) {
        return Err(CoreError::InvalidInput("projection needs a full-plane rule".into()));
    }
    let (ortho, f_norm_sq) = project_orthonormal(&f, max_index, max_index, rule);
    let coeff_norm_sq: f64 = ortho.iter().map(|(_, a)| a.norm_sqr()).sum();
    let parseval_defect = if f_norm_sq > 0.0 {
        (f_norm_sq - coeff_norm_sq).abs() / f_norm_sq
    } else {
        0.0
    };
    if parseval_defect > PARSEVAL_TOLERANCE {
        return Err(CoreError::UnderResolved {
            defect: parseval_defect,
            tolerance: PARSEVAL_TOLERANCE,
        });
    }
    Ok(Projection {
        coeffs: ortho.to_raw(),
        parseval_defect,
    })
}

/// `Σ_i w_i conj(H̃_{m,n}(z_i)) g(z_i)` for `m ≤ max_m`, `n ≤ max_n`,
/// together with `Σ_i w_i |g(z_i)|²`.
///
/// The caller's rule decides the measure: with a full-plane rule these are
/// Gaussian-weighted inner products; with a disk rule the Gaussian must be
/// part of `g`.
pub(crate) fn project_orthonormal<F>(
    g: &F,
    max_m: u32,
    max_n: u32,
    rule: &QuadratureRule,
) -> (HermiteCoeffs<Complex64>, f64)
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let size = (max_m as usize + 1) * (max_n as usize + 1);
    let nodes = rule.nodes();
    let (acc, norm_sq) = nodes
        .par_chunks(256)
        .map(|chunk| {
            let mut acc = vec![Complex64::new(0.0, 0.0); size];
            let mut norm_sq = 0.0;
            for &(z, w) in chunk {
                let gz = g(z);
                if gz == Complex64::new(0.0, 0.0) {
                    continue;
                }
                norm_sq += w * gz.norm_sqr();
                let table = EvalTable::build(max_m, max_n, z, Normalization::Orthonormal);
                for (slot, h) in acc.iter_mut().zip(&table.values) {
                    *slot += h.conj() * gz * w;
                }
            }
            (acc, norm_sq)
        })
        .reduce(
            || (vec![Complex64::new(0.0, 0.0); size], 0.0),
            |(mut a, na), (b, nb)| {
                for (x, y) in a.iter_mut().zip(&b) {
                    *x += y;
                }
                (a, na + nb)
            },
        );
    let stride = max_n as usize + 1;
    let coeffs = HermiteCoeffs::from_entries(
        Normalization::Orthonormal,
        acc.into_iter()
            .enumerate()
            .map(|(i, a)| (BasisIndex::new((i / stride) as u32, (i % stride) as u32), a)),
    );
    (coeffs, norm_sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{scalar, scalar_from_f64, scalar_to_f64};
    use crate::fock_basis::{hermite_polynomial, to_hermite};
    use crate::symbolic::PolyZZbar;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn table_examples() {
        assert_eq!(eval_table(3, c(0.0, 0.0)).get(BasisIndex::new(1, 1)), c(-1.0, 0.0));
        assert_eq!(eval_table(1, c(1.0, 0.0)).get(BasisIndex::new(1, 1)), c(0.0, 0.0));
        let v = eval_table(2, c(0.0, 1.0)).get(BasisIndex::new(2, 1));
        assert!((v - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn recurrences_match_polynomials_exactly() {
        // Both recurrences, checked in exact arithmetic at a rational point.
        let z = scalar_from_f64(0.75, -1.25).unwrap();
        let zb = z.conj();
        for m in 0..=8u32 {
            for n in 0..=8u32 {
                let h = |a: u32, b: u32| hermite_polynomial(BasisIndex::new(a, b)).eval_exact(&z);
                let lhs = h(m + 1, n);
                let mut rhs = &z * h(m, n);
                if n > 0 {
                    rhs -= scalar(n as i64, 0) * h(m, n - 1);
                }
                assert_eq!(lhs, rhs);
                let lhs = h(m, n + 1);
                let mut rhs = &zb * h(m, n);
                if m > 0 {
                    rhs -= scalar(m as i64, 0) * h(m - 1, n);
                }
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn table_matches_direct_evaluation() {
        // Points with small decimal denominators keep the exact oracle cheap.
        let points = [(3, -2, 10), (-20, 15, 10), (3, 3, 1), (0, -4, 1), (25, -42, 10)];
        for &(re, im, den) in &points {
            let exact_z = num_complex::Complex::new(
                num_rational::BigRational::new(re.into(), den.into()),
                num_rational::BigRational::new(im.into(), den.into()),
            );
            let z = scalar_to_f64(&exact_z);
            let table = eval_table(20, z);
            for m in 0..=20u32 {
                for n in 0..=20u32 {
                    let p = hermite_polynomial(BasisIndex::new(m, n));
                    let exact = scalar_to_f64(&p.eval_exact(&exact_z));
                    let got = table.get(BasisIndex::new(m, n));
                    assert!((got - exact).norm() <= 1e-10 * exact.norm(), "z={z} ({m},{n}): {got} vs {exact}");
                }
            }
        }
    }

    #[test]
    fn orthonormal_table_is_scaled_raw_table() {
        let z = c(1.3, -0.4);
        let raw = EvalTable::build(12, 9, z, Normalization::Raw);
        let ortho = EvalTable::build(12, 9, z, Normalization::Orthonormal);
        for m in 0..=12 {
            for n in 0..=9 {
                let idx = BasisIndex::new(m, n);
                let scaled = raw.get(idx) * (-crate::fock_basis::ln_basis_norm(idx)).exp();
                assert!((ortho.get(idx) - scaled).norm() <= 1e-10 * scaled.norm(), "({m},{n}) {} vs {scaled}", ortho.get(idx));
            }
        }
    }

    #[test]
    fn synthesize_examples() {
        let one = HermiteCoeffs::basis(BasisIndex::new(0, 0), c(1.0, 0.0), Normalization::Raw);
        assert_eq!(synthesize(&one, c(5.0, -2.0)), c(1.0, 0.0));
        let h11 = HermiteCoeffs::basis(BasisIndex::new(1, 1), c(1.0, 0.0), Normalization::Raw);
        assert_eq!(synthesize(&h11, c(2.0, 0.0)), c(3.0, 0.0));
        assert_eq!(synthesize(&HermiteCoeffs::raw(), c(1.0, 1.0)), c(0.0, 0.0));
    }

    fn assert_coeffs_close(got: &HermiteCoeffs<Complex64>, want: &HermiteCoeffs<Complex64>, tol: f64) {
        let scale = want.iter().map(|(_, a)| a.norm()).fold(0.0, f64::max);
        for (i, a) in want.iter() {
            assert!((got.get(*i) - a).norm() <= tol * scale, "{i}: {} vs {a}", got.get(*i));
        }
        for (i, a) in got.iter() {
            assert!((want.get(*i) - a).norm() <= tol * scale, "{i}: {a} vs {}", want.get(*i));
        }
    }

    #[test]
    fn projection_examples() {
        let rule = QuadratureRule::full_plane_for_degree(6);
        let p = project(|_| c(1.0, 0.0), 3, &rule).unwrap();
        let want = to_hermite(&PolyZZbar::one()).to_float();
        assert_coeffs_close(&p.coeffs, &want, 1e-12);

        let p = project(|z| c(z.norm_sqr(), 0.0), 3, &rule).unwrap();
        assert_coeffs_close(&p.coeffs, &to_hermite(&PolyZZbar::zzbar()).to_float(), 1e-12);

        let poly = PolyZZbar::monomial(2, 1, scalar(1, 0));
        let p = project(|z| poly.eval(z), 3, &rule).unwrap();
        assert_coeffs_close(&p.coeffs, &to_hermite(&poly).to_float(), 1e-12);
    }

    #[test]
    fn projection_flags_under_resolution() {
        let rule = QuadratureRule::full_plane_for_degree(10);
        let err = project(|z| z.powu(6), 3, &rule).unwrap_err();
        assert!(matches!(err, CoreError::UnderResolved { .. }));
    }
}
