//! Polar product rules for integrals over the plane and over disks.

use std::f64::consts::PI;

use num_complex::Complex64;

const NEWTON_MAX_ITER: usize = 200;

/// Gauss–Laguerre nodes and weights for `∫_0^∞ g(t) e^{-t} dt`.
///
/// Exact for polynomials of degree ≤ `2n - 1`. Weights underflow for
/// `n` beyond roughly 180.
pub fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let nf = n as f64;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut z = 0.0;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - x[i - 2])
            }
        };
        let mut pp = 0.0;
        let mut p2 = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            let mut p1 = 1.0;
            p2 = 0.0;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf - 1.0 - z) * p2 - (jf - 1.0) * p3) / jf;
            }
            pp = (nf * p1 - nf * p2) / z;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        w[i] = -1.0 / (pp * nf * p2);
    }
    (x, w)
}

/// Gauss–Legendre nodes and weights on `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let nf = n as f64;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let xm = 0.5 * (b + a);
    let xl = 0.5 * (b - a);
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-16 {
                break;
            }
        }
        x[i] = xm - xl * z;
        x[n - 1 - i] = xm + xl * z;
        w[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    FullPlane,
    Disk { center: Complex64, radius: f64 },
}

/// Product rule in polar coordinates.
///
/// On [`Domain::FullPlane`] the weights absorb the Gaussian, so
/// `Σ w_i g(z_i) ≈ ∫_ℂ g e^{-|z|²} dσ`; radial nodes are Gauss–Laguerre in
/// `t = r²` and `dσ = ½ dt dθ`. On [`Domain::Disk`] the weights carry only
/// the area element, so `Σ w_i g(z_i) ≈ ∫_U g dσ`; radial nodes are
/// Gauss–Legendre in `r` with the factor `r` folded into the weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureRule {
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    pub domain: Domain,
}

impl QuadratureRule {
    pub fn full_plane(radial_nodes: usize, angular_nodes: usize) -> Self {
        QuadratureRule {
            radial_nodes,
            angular_nodes,
            domain: Domain::FullPlane,
        }
    }

    /// Smallest full-plane rule exact for `z^a z̄^b e^{-|z|²}` with
    /// `a + b ≤ 2·degree` and `|a - b| ≤ degree`.
    pub fn full_plane_for_degree(degree: u32) -> Self {
        let d = degree as usize;
        Self::full_plane(d + 1, 2 * d + 1)
    }

    pub fn disk(center: Complex64, radius: f64, radial_nodes: usize, angular_nodes: usize) -> Self {
        QuadratureRule {
            radial_nodes,
            angular_nodes,
            domain: Domain::Disk { center, radius },
        }
    }

    /// Same domain with twice the nodes in each direction.
    pub fn doubled(&self) -> Self {
        QuadratureRule {
            radial_nodes: 2 * self.radial_nodes,
            angular_nodes: 2 * self.angular_nodes,
            domain: self.domain,
        }
    }

    /// `(point, weight)` pairs.
    pub fn nodes(&self) -> Vec<(Complex64, f64)> {
        let a = self.angular_nodes;
        let dtheta = 2.0 * PI / a as f64;
        let (center, radial): (Complex64, Vec<(f64, f64)>) = match self.domain {
            Domain::FullPlane => {
                let (t, w) = gauss_laguerre(self.radial_nodes);
                let pairs = t.iter().zip(&w).map(|(&t, &w)| (t.sqrt(), 0.5 * w)).collect();
                (Complex64::new(0.0, 0.0), pairs)
            }
            Domain::Disk { center, radius } => {
                let (r, w) = gauss_legendre(self.radial_nodes, 0.0, radius);
                let pairs = r.iter().zip(&w).map(|(&r, &w)| (r, w * r)).collect();
                (center, pairs)
            }
        };
        let mut out = Vec::with_capacity(radial.len() * a);
        for &(r, wr) in &radial {
            for j in 0..a {
                let theta = dtheta * j as f64;
                out.push((center + Complex64::from_polar(r, theta), wr * dtheta));
            }
        }
        out
    }

    /// `Σ w_i g(z_i)`.
    pub fn integrate<F>(&self, g: F) -> Complex64
    where
        F: Fn(Complex64) -> Complex64,
    {
        self.nodes().into_iter().map(|(z, w)| g(z) * w).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::factorial::factorial;

    #[test]
    fn laguerre_integrates_moments() {
        for n in [1usize, 5, 20, 60] {
            let (t, w) = gauss_laguerre(n);
            for p in 0..(2 * n).min(60) {
                let q: f64 = t.iter().zip(&w).map(|(t, w)| w * t.powi(p as i32)).sum();
                let exact = factorial(p as u64);
                assert!((q - exact).abs() <= 1e-11 * exact, "n={n} p={p}: {q} vs {exact}");
            }
        }
    }

    #[test]
    fn legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(12, 0.0, 2.0);
        for p in 0..24 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p)).sum();
            let exact = 2f64.powi(p + 1) / (p + 1) as f64;
            assert!((q - exact).abs() <= 1e-13 * exact, "p={p}");
        }
    }

    #[test]
    fn full_plane_gaussian_moments() {
        // ∫ z^a z̄^b e^{-|z|²} dσ = π a! δ_{ab}
        let rule = QuadratureRule::full_plane_for_degree(6);
        for a in 0..=6u32 {
            for b in 0..=6u32 {
                let v = rule.integrate(|z| z.powu(a) * z.conj().powu(b));
                let exact = if a == b { PI * factorial(a as u64) } else { 0.0 };
                assert!((v - exact).norm() <= 1e-12 * exact.max(1.0), "a={a} b={b}: {v}");
            }
        }
    }

    #[test]
    fn disk_area_and_moments() {
        let c = Complex64::new(1.0, -0.5);
        let rule = QuadratureRule::disk(c, 2.0, 10, 16);
        assert!((rule.integrate(|_| Complex64::new(1.0, 0.0)).re - 4.0 * PI).abs() < 1e-12);
        // ∫_{|w|<ρ} |w|^4 = 2π ρ^6 / 6
        let v = rule.integrate(|z| Complex64::new((z - c).norm_sqr().powi(2), 0.0));
        assert!((v.re - 2.0 * PI * 64.0 / 6.0).abs() < 1e-10);
        let v = rule.integrate(|z| (z - c).powu(3));
        assert!(v.norm() < 1e-12);
    }
}
