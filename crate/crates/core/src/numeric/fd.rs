//! Finite-difference check of `∂∂̄ u + c u = f` through `4∂∂̄ = Δ`.

use num_complex::Complex64;
use rayon::prelude::*;

use super::eval::synthesize;
use crate::error::{CoreError, Result};
use crate::fock_basis::HermiteCoeffs;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub h: f64,
}

impl GridSpec {
    pub fn square(half_width: f64, h: f64) -> Self {
        GridSpec {
            x_min: -half_width,
            x_max: half_width,
            y_min: -half_width,
            y_max: half_width,
            h,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.x_max > self.x_min && self.y_max > self.y_min && self.h > 0.0;
        if !ok || !self.h.is_finite() {
            return Err(CoreError::InvalidInput(format!("malformed grid {self:?}")));
        }
        if self.steps().0 < 2 || self.steps().1 < 2 {
            return Err(CoreError::InvalidInput("grid has no interior points".into()));
        }
        Ok(())
    }

    /// Number of steps in x and y; nodes are `x_min + i h`, `i = 0..=nx`.
    pub fn steps(&self) -> (usize, usize) {
        let nx = ((self.x_max - self.x_min) / self.h).round() as usize;
        let ny = ((self.y_max - self.y_min) / self.h).round() as usize;
        (nx, ny)
    }
}

/// Residual `Δ_h u / 4 + c u - f` at one interior node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualPoint {
    pub x: f64,
    pub y: f64,
    pub residual: Complex64,
}

/// Five-point residual at every interior node, row-major in `y` then `x`.
pub fn fd_residual_map(
    u: &HermiteCoeffs<Complex64>,
    f: &HermiteCoeffs<Complex64>,
    c: Complex64,
    grid: &GridSpec,
) -> Result<Vec<ResidualPoint>> {
    grid.validate()?;
    let (nx, ny) = grid.steps();
    let h = grid.h;
    let node = |i: usize, j: usize| Complex64::new(grid.x_min + i as f64 * h, grid.y_min + j as f64 * h);
    let values: Vec<Complex64> = (0..=ny)
        .into_par_iter()
        .flat_map_iter(|j| (0..=nx).map(move |i| (i, j)))
        .map(|(i, j)| synthesize(u, node(i, j)))
        .collect();
    let at = |i: usize, j: usize| values[j * (nx + 1) + i];
    let out = (1..ny)
        .into_par_iter()
        .flat_map_iter(|j| (1..nx).map(move |i| (i, j)))
        .map(|(i, j)| {
            let lap = (at(i + 1, j) + at(i - 1, j) + at(i, j + 1) + at(i, j - 1) - at(i, j) * 4.0) / (h * h);
            let z = node(i, j);
            ResidualPoint {
                x: z.re,
                y: z.im,
                residual: lap / 4.0 + c * at(i, j) - synthesize(f, z),
            }
        })
        .collect();
    Ok(out)
}

/// `max |Δ_h u / 4 + c u - f|` over interior nodes.
pub fn fd_residual_k1(
    u: &HermiteCoeffs<Complex64>,
    f: &HermiteCoeffs<Complex64>,
    c: Complex64,
    grid: &GridSpec,
) -> Result<f64> {
    Ok(fd_residual_map(u, f, c, grid)?
        .iter()
        .map(|p| p.residual.norm())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock_basis::{BasisIndex, Normalization};

    fn basis(m: u32, n: u32, a: f64) -> HermiteCoeffs<Complex64> {
        HermiteCoeffs::basis(BasisIndex::new(m, n), Complex64::new(a, 0.0), Normalization::Raw)
    }

    #[test]
    fn stencil_is_exact_on_quadratics() {
        let r = fd_residual_k1(&basis(1, 1, 1.0), &basis(0, 0, 1.0), Complex64::new(0.0, 0.0), &GridSpec::square(1.0, 0.1))
            .unwrap();
        assert!(r <= 1e-10, "{r}");
    }

    #[test]
    fn zero_solution_has_zero_residual() {
        let z = HermiteCoeffs::raw();
        let r = fd_residual_k1(&z, &z, Complex64::new(3.0, -1.0), &GridSpec::square(1.0, 0.1)).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn quartic_solution_converges_at_second_order() {
        // For u = H_{2,2}/4 the stencil error is exactly h²/4 everywhere.
        let u = basis(2, 2, 0.25);
        let f = basis(1, 1, 1.0);
        let zero = Complex64::new(0.0, 0.0);
        let r1 = fd_residual_k1(&u, &f, zero, &GridSpec::square(1.0, 0.1)).unwrap();
        let r2 = fd_residual_k1(&u, &f, zero, &GridSpec::square(1.0, 0.05)).unwrap();
        assert!((r1 - 0.01 / 4.0).abs() < 1e-9, "{r1}");
        assert!((r1 / r2 - 4.0).abs() < 0.05, "{}", r1 / r2);
    }

    #[test]
    fn bad_grids_are_rejected() {
        let z = HermiteCoeffs::raw();
        let c = Complex64::new(0.0, 0.0);
        let g = GridSpec { x_min: 1.0, x_max: 0.0, y_min: 0.0, y_max: 1.0, h: 0.1 };
        assert!(fd_residual_k1(&z, &z, c, &g).is_err());
        assert!(fd_residual_k1(&z, &z, c, &GridSpec::square(1.0, 1.5)).is_err());
    }
}
