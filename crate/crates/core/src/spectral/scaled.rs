//! Shifted and dilated Gaussian weights, and data on a disk.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::solve::{factorial_f64, solve, ProblemSpec, SolveReport, BOUND_TOLERANCE};
use crate::error::{CoreError, Result};
use crate::fock_basis::HermiteCoeffs;
use crate::numeric::{project_orthonormal, synthesize, QuadratureRule};
use crate::symbolic::PolyZZbar;

/// Problem posed for the weight `e^{-λ² |z - z₀|²}`; `base` is stated in
/// `w = λ (z - z₀)` with right-hand side `g(w) = f(z)` and the original
/// constant `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledProblem {
    pub lambda: f64,
    pub z0: Complex64,
    pub base: ProblemSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledReport {
    pub lambda: f64,
    pub z0: Complex64,
    /// Report of the `w`-space solve with constant `c / λ^{2k}`.
    pub base: SolveReport,
    /// `∫|u|² e^{-λ²|z-z₀|²} / ∫|f|² e^{-λ²|z-z₀|²}`.
    pub ratio_sq: f64,
    /// `1 / (λ^{2k} k!)²`.
    pub bound_constant: f64,
    /// `ratio_sq / bound_constant`.
    pub bound_ratio: f64,
    pub bound_holds: bool,
    /// `1 / (λ^k k!)²`.
    pub stated_constant: f64,
    pub within_stated_constant: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaledSolution {
    /// Orthonormal amplitudes of `v` in `w`.
    pub v: HermiteCoeffs<Complex64>,
    pub lambda: f64,
    pub z0: Complex64,
    pub k: u32,
    pub report: ScaledReport,
}

impl ScaledSolution {
    /// `u(z) = λ^{-2k} v(λ (z - z₀))`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        synthesize(&self.v, (z - self.z0) * self.lambda) * self.lambda.powi(-2 * self.k as i32)
    }
}

/// Solves `∂^k ∂̄^k v + (c / λ^{2k}) v = g` in `w` and sets
/// `u(z) = λ^{-2k} v(λ(z - z₀))`, so that `(∂^k ∂̄^k + c) u = f`.
///
/// Both weighted norms pick up the Jacobian `λ^{-2}`, which cancels in the
/// ratio, leaving `‖u‖²/‖f‖² = λ^{-4k} ‖v‖²/‖g‖²`.
pub fn solve_scaled(p: &ScaledProblem) -> Result<ScaledSolution> {
    if !(p.lambda > 0.0 && p.lambda.is_finite()) {
        return Err(CoreError::InvalidInput(format!("lambda must be positive, got {}", p.lambda)));
    }
    let k = p.base.k;
    let l2k = p.lambda.powi(2 * k as i32);
    let base = ProblemSpec {
        c: p.base.c / l2k,
        ..p.base.clone()
    };
    let (v, report) = solve(&base)?;
    let kf = factorial_f64(k);
    let ratio_sq = if report.f_norm > 0.0 {
        (report.u_norm / report.f_norm).powi(2) / (l2k * l2k)
    } else {
        0.0
    };
    let bound_constant = 1.0 / (l2k * kf).powi(2);
    let stated_constant = 1.0 / (p.lambda.powi(k as i32) * kf).powi(2);
    let bound_ratio = ratio_sq / bound_constant;
    let report = ScaledReport {
        lambda: p.lambda,
        z0: p.z0,
        base: report,
        ratio_sq,
        bound_constant,
        bound_ratio,
        bound_holds: bound_ratio <= 1.0 + BOUND_TOLERANCE,
        stated_constant,
        within_stated_constant: ratio_sq <= stated_constant * (1.0 + BOUND_TOLERANCE),
    };
    Ok(ScaledSolution {
        v,
        lambda: p.lambda,
        z0: p.z0,
        k,
        report,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskQuadrature {
    pub radial_nodes: usize,
    pub angular_nodes: usize,
}

impl DiskQuadrature {
    /// Default resolution for data of degree `d` at truncation `M`.
    pub fn default_for(truncation: u32, degree: u32) -> Self {
        let n = (truncation + degree) as usize;
        DiskQuadrature {
            radial_nodes: 2 * n + 8,
            angular_nodes: 4 * n + 16,
        }
    }

    pub fn doubled(&self) -> Self {
        DiskQuadrature {
            radial_nodes: 2 * self.radial_nodes,
            angular_nodes: 2 * self.angular_nodes,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiskProblem {
    pub center: Complex64,
    pub radius: f64,
    pub f_poly: PolyZZbar,
    pub k: u32,
    pub c: Complex64,
    pub truncation: u32,
    /// `None` selects [`DiskQuadrature::default_for`].
    pub quadrature: Option<DiskQuadrature>,
}

/// Relative change of the projection under doubled resolution above which
/// the disk solve refuses to proceed.
pub const DISK_RESOLUTION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskReport {
    /// `∫_U |u|² dσ`.
    pub u_disk_norm_sq: f64,
    /// `∫_U |f|² dσ`.
    pub f_disk_norm_sq: f64,
    /// `|U| = 2ρ`.
    pub diameter: f64,
    /// `e^{|U|²} / (k!)²`.
    pub constant: f64,
    /// `∫_U |u|² / ∫_U |f|²`.
    pub ratio: f64,
    pub bound_holds: bool,
    /// `1 - ‖P f̃‖² / ∫_U |f|² e^{-|z-z₀|²}`: share of the zero-extended data
    /// outside the retained basis.
    pub projection_defect: f64,
    /// Relative change of the projection when the quadrature is doubled.
    pub resolution_defect: f64,
    pub quadrature: DiskQuadrature,
    pub solve: SolveReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiskSolution {
    /// Orthonormal amplitudes of `u` in `w = z - center`.
    pub u: HermiteCoeffs<Complex64>,
    pub center: Complex64,
    pub report: DiskReport,
}

impl DiskSolution {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        synthesize(&self.u, z - self.center)
    }
}

/// Zero-extends `f` off the disk, projects it onto `H̃_{m,n}(z - center)`
/// over the certified box by disk quadrature, solves in the weight
/// `e^{-|z - center|²}` and measures both sides on the disk.
pub fn solve_disk(p: &DiskProblem) -> Result<DiskSolution> {
    if !(p.radius > 0.0 && p.radius.is_finite()) {
        return Err(CoreError::InvalidInput(format!("radius must be positive, got {}", p.radius)));
    }
    let spec_template = ProblemSpec {
        k: p.k,
        c: p.c,
        truncation: p.truncation,
        f: HermiteCoeffs::orthonormal(),
    };
    let limit = spec_template.certified_limit()?;
    let degree = p.f_poly.degree().unwrap_or(0);
    let quad = p
        .quadrature
        .unwrap_or_else(|| DiskQuadrature::default_for(p.truncation, degree));
    if quad.radial_nodes == 0 || quad.angular_nodes == 0 {
        return Err(CoreError::InvalidInput("quadrature needs at least one node per direction".into()));
    }
    let rule = |q: DiskQuadrature| QuadratureRule::disk(Complex64::new(0.0, 0.0), p.radius, q.radial_nodes, q.angular_nodes);
    let center = p.center;
    let weighted_f = |w: Complex64| p.f_poly.eval(w + center) * (-w.norm_sqr()).exp();
    let plain_f = |w: Complex64| p.f_poly.eval(w + center);

    let (coeffs, f_weighted_sq) = project_with_weight(&weighted_f, &plain_f, limit, &rule(quad));
    let (fine, _) = project_with_weight(&weighted_f, &plain_f, limit, &rule(quad.doubled()));
    let diff: f64 = fine.iter().map(|(i, a)| (a - coeffs.get(*i)).norm_sqr()).sum::<f64>().sqrt();
    let fine_norm = fine.weighted_norm();
    let resolution_defect = if fine_norm > 0.0 { diff / fine_norm } else { 0.0 };
    if resolution_defect > DISK_RESOLUTION_TOLERANCE {
        return Err(CoreError::UnderResolved {
            defect: resolution_defect,
            tolerance: DISK_RESOLUTION_TOLERANCE,
        });
    }
    let coeff_sq: f64 = coeffs.iter().map(|(_, a)| a.norm_sqr()).sum();
    let projection_defect = if f_weighted_sq > 0.0 { 1.0 - coeff_sq / f_weighted_sq } else { 0.0 };

    let (u, solve_report) = solve(&ProblemSpec { f: coeffs, ..spec_template })?;

    let (umax_m, umax_n) = u.max_indices();
    let udeg = (umax_m + umax_n) as usize;
    let norm_rule = rule(DiskQuadrature {
        radial_nodes: quad.radial_nodes.max(udeg + 2),
        angular_nodes: quad.angular_nodes.max(2 * udeg + 2),
    });
    let u_disk_norm_sq = norm_rule.integrate(|w| synthesize(&u, w).norm_sqr().into()).re;
    let f_disk_norm_sq = rule(quad).integrate(|w| plain_f(w).norm_sqr().into()).re;
    let diameter = 2.0 * p.radius;
    let kf = factorial_f64(p.k);
    let constant = (diameter * diameter).exp() / (kf * kf);
    let ratio = if f_disk_norm_sq > 0.0 { u_disk_norm_sq / f_disk_norm_sq } else { 0.0 };
    let report = DiskReport {
        u_disk_norm_sq,
        f_disk_norm_sq,
        diameter,
        constant,
        ratio,
        bound_holds: ratio <= constant * (1.0 + BOUND_TOLERANCE),
        projection_defect,
        resolution_defect,
        quadrature: quad,
        solve: solve_report,
    };
    Ok(DiskSolution { u, center, report })
}

/// Orthonormal projection of `weighted` (which already carries the
/// Gaussian) on `[0, limit]²`, plus `∫_U |f|² e^{-|w|²}`.
fn project_with_weight<F, G>(weighted: &F, plain: &G, limit: u32, rule: &QuadratureRule) -> (HermiteCoeffs<Complex64>, f64)
where
    F: Fn(Complex64) -> Complex64 + Sync,
    G: Fn(Complex64) -> Complex64 + Sync,
{
    let (coeffs, _) = project_orthonormal(weighted, limit, limit, rule);
    let norm_sq = rule
        .integrate(|w| (plain(w).norm_sqr() * (-w.norm_sqr()).exp()).into())
        .re;
    (coeffs, norm_sq)
}
