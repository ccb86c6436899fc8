//! Minimum-norm solve of `(∂^k ∂̄^k + c) u = f` and its certificate.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chain::{
    chain_origins, check_order, check_support, decompose_exact, extended_length, positions_within,
    solve_chain_exact, PreparedChain,
};
use crate::error::{CoreError, Result};
use crate::exact::ExactScalar;
use crate::fock_basis::{BasisIndex, HermiteCoeffs, Normalization};

/// Tolerance on `bound_ratio` above 1.
pub const BOUND_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub k: u32,
    pub c: Complex64,
    /// `M`: indices up to `M` are retained, data must sit in `[0, M-k]²`.
    pub truncation: u32,
    pub f: HermiteCoeffs<Complex64>,
}

impl ProblemSpec {
    /// Upper corner `M - k` of the certified box.
    pub fn certified_limit(&self) -> Result<u32> {
        check_order(self.k)?;
        self.truncation.checked_sub(self.k).ok_or_else(|| {
            CoreError::InvalidInput(format!("truncation {} is below the order {}", self.truncation, self.k))
        })
    }

    pub fn validate(&self) -> Result<()> {
        let limit = self.certified_limit()?;
        if !(self.c.re.is_finite() && self.c.im.is_finite()) {
            return Err(CoreError::InvalidInput("constant c must be finite".into()));
        }
        if self.f.iter().any(|(_, a)| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(CoreError::InvalidInput("coefficients of f must be finite".into()));
        }
        check_support(self.f.iter().map(|(i, _)| *i), limit)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    /// `‖(∂^k ∂̄^k + c) u - f‖` over `[0, M]²`.
    pub residual_norm: f64,
    pub f_norm: f64,
    pub u_norm: f64,
    /// `‖u‖ k! / ‖f‖`.
    pub bound_ratio: f64,
    pub bound_holds: bool,
    /// `‖u‖ / ‖f‖`, the empirical action of the right inverse on `f`.
    pub norm_ratio: f64,
    /// `1/k!`, the bound on `‖T_k‖` that follows from the estimate.
    pub operator_bound: f64,
    /// `1/(k!)²`, the bound on `‖T_k‖` as sometimes stated.
    pub squared_operator_bound: f64,
    pub within_squared_operator_bound: bool,
    pub truncation: u32,
    pub chain_count: usize,
    pub max_chain_length: usize,
    /// `‖c ũ_{last}‖ / ‖f‖` over chains: the equations cut off at the end of
    /// each extended chain.
    pub tail_estimate: f64,
}

pub fn factorial_f64(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

struct ChainOutcome {
    origin: BasisIndex,
    u: Vec<Complex64>,
    residual_sq: f64,
    cut_sq: f64,
}

/// Per-chain minimum-norm solve (`T_k f`).
///
/// Chains carrying data are extended past the box until the cut equation
/// is negligible; see [`ProblemSpec`] for the support requirement. Returns
/// `u` in orthonormal amplitudes.
pub fn solve(spec: &ProblemSpec) -> Result<(HermiteCoeffs<Complex64>, SolveReport)> {
    spec.validate()?;
    let k = spec.k;
    let m = spec.truncation;
    let limit = spec.certified_limit()?;
    let f = spec.f.to_orthonormal();
    let origins = chain_origins(k, m);
    let outcomes: Vec<ChainOutcome> = origins
        .par_iter()
        .map(|&origin| solve_one_chain(origin, k, spec.c, m, limit, &f))
        .collect();

    let mut u = HermiteCoeffs::orthonormal();
    let mut residual_sq = 0.0;
    let mut cut_sq = 0.0;
    let mut max_len = 0;
    for out in &outcomes {
        max_len = max_len.max(out.u.len());
        for (j, a) in out.u.iter().enumerate() {
            let step = k * j as u32;
            u.accumulate(BasisIndex::new(out.origin.m + step, out.origin.n + step), *a);
        }
        residual_sq += out.residual_sq;
        cut_sq += out.cut_sq;
    }
    let f_norm = f.weighted_norm();
    let u_norm = u.weighted_norm();
    let kf = factorial_f64(k);
    let (norm_ratio, tail) = if f_norm > 0.0 {
        (u_norm / f_norm, cut_sq.sqrt() / f_norm)
    } else {
        (0.0, 0.0)
    };
    let bound_ratio = norm_ratio * kf;
    let report = SolveReport {
        residual_norm: residual_sq.sqrt(),
        f_norm,
        u_norm,
        bound_ratio,
        bound_holds: bound_ratio <= 1.0 + BOUND_TOLERANCE,
        norm_ratio,
        operator_bound: 1.0 / kf,
        squared_operator_bound: 1.0 / (kf * kf),
        within_squared_operator_bound: norm_ratio <= (1.0 + BOUND_TOLERANCE) / (kf * kf),
        truncation: m,
        chain_count: origins.len(),
        max_chain_length: max_len,
        tail_estimate: tail,
    };
    Ok((u, report))
}

fn solve_one_chain(
    origin: BasisIndex,
    k: u32,
    c: Complex64,
    m: u32,
    limit: u32,
    f: &HermiteCoeffs<Complex64>,
) -> ChainOutcome {
    let box_len = positions_within(origin, k, m);
    let certified = positions_within(origin, k, limit);
    let at = |j: usize| {
        let step = k * j as u32;
        BasisIndex::new(origin.m + step, origin.n + step)
    };
    let rhs: Vec<Complex64> = (0..certified).map(|j| f.get(at(j))).collect();
    if rhs.iter().all(|a| *a == Complex64::new(0.0, 0.0)) {
        return ChainOutcome {
            origin,
            u: Vec::new(),
            residual_sq: 0.0,
            cut_sq: 0.0,
        };
    }
    let (len, _) = extended_length(origin, k, c, certified, box_len);
    let chain = PreparedChain::new(origin, k, c, len);
    let u = chain.solve(&rhs);
    let mut residual_sq = 0.0;
    for j in 0..box_len {
        let next = if j + 1 < len { u[j + 1] * chain.coupling(j) } else { Complex64::new(0.0, 0.0) };
        let fj = rhs.get(j).copied().unwrap_or_default();
        residual_sq += (c * u[j] + next - fj).norm_sqr();
    }
    let cut_sq = (c * u[len - 1]).norm_sqr();
    ChainOutcome {
        origin,
        u,
        residual_sq,
        cut_sq,
    }
}

/// Exact per-chain minimum-norm solve on `[0, M]²` for rational `c`, raw
/// amplitudes; each chain carries only its in-box equations.
pub fn solve_exact(
    k: u32,
    c: &ExactScalar,
    truncation: u32,
    f: &HermiteCoeffs<ExactScalar>,
) -> Result<HermiteCoeffs<ExactScalar>> {
    let chains = decompose_exact(k, truncation, f)?;
    let solved: Vec<_> = chains
        .par_iter()
        .map(|chain| (chain, solve_chain_exact(chain, c)))
        .collect();
    let mut u = HermiteCoeffs::raw();
    for (chain, values) in solved {
        for (j, a) in values.into_iter().enumerate() {
            u.accumulate(chain.position(j), a);
        }
    }
    Ok(u)
}

/// Lower estimate of `‖T_k‖` on data supported in `[0, M-k]²`.
///
/// Power iteration on `T*T` from `trials` random starts: `T*T x` is the
/// certified part of `y` with `B* y = T x` per chain. Every iterate gives a
/// valid lower bound `‖T x‖ / ‖x‖`; the largest one is returned.
pub fn operator_norm_probe(k: u32, c: Complex64, trials: usize, truncation: u32, seed: u64) -> Result<f64> {
    check_order(k)?;
    if trials == 0 {
        return Err(CoreError::InvalidInput("trials must be at least 1".into()));
    }
    let limit = truncation
        .checked_sub(k)
        .ok_or_else(|| CoreError::InvalidInput(format!("truncation {truncation} is below the order {k}")))?;
    let chains: Vec<(PreparedChain, usize)> = chain_origins(k, truncation)
        .into_par_iter()
        .filter_map(|origin| {
            let certified = positions_within(origin, k, limit);
            if certified == 0 {
                return None;
            }
            let box_len = positions_within(origin, k, truncation);
            let (len, _) = extended_length(origin, k, c, certified, box_len);
            Some((PreparedChain::new(origin, k, c, len), certified))
        })
        .collect();

    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..trials).map(|_| master.random()).collect();
    let best = seeds
        .par_iter()
        .map(|&s| power_iteration(&chains, s))
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

fn power_iteration(chains: &[(PreparedChain, usize)], seed: u64) -> f64 {
    const MAX_ITER: usize = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<Vec<Complex64>> = chains
        .iter()
        .map(|(_, n)| {
            (0..*n)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect()
        })
        .collect();
    let mut best: f64 = 0.0;
    let mut prev = 0.0;
    for _ in 0..MAX_ITER {
        let x_norm = norm(&x);
        if x_norm == 0.0 {
            break;
        }
        let mut next = Vec::with_capacity(chains.len());
        let mut u_sq = 0.0;
        for ((chain, n), xc) in chains.iter().zip(&x) {
            let u = chain.solve(xc);
            u_sq += u.iter().map(|a| a.norm_sqr()).sum::<f64>();
            let mut y = chain.recover_dual(&u);
            y.truncate(*n);
            next.push(y);
        }
        let est = u_sq.sqrt() / x_norm;
        best = best.max(est);
        if (est - prev).abs() <= 1e-15 * est {
            break;
        }
        prev = est;
        let scale = 1.0 / norm(&next);
        if !scale.is_finite() {
            break;
        }
        x = next
            .into_iter()
            .map(|v| v.into_iter().map(|a| a * scale).collect())
            .collect();
    }
    best
}

fn norm(x: &[Vec<Complex64>]) -> f64 {
    x.iter().flatten().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Normalization-preserving view of `u` for output.
pub fn in_normalization(u: &HermiteCoeffs<Complex64>, normalization: Normalization) -> HermiteCoeffs<Complex64> {
    match normalization {
        Normalization::Raw => u.to_raw(),
        Normalization::Orthonormal => u.to_orthonormal(),
    }
}

/// Values of `c` swept by certification runs.
pub const CERTIFICATION_GRID: [Complex64; 9] = [
    Complex64::new(0.0, 0.0),
    Complex64::new(1.0, 0.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(0.0, -1.0),
    Complex64::new(1.0, 1.0),
    Complex64::new(10.0, 0.0),
    Complex64::new(0.0, -10.0),
    Complex64::new(1e6, 0.0),
];

/// Sparse random data in `[0, limit]²`: 1 to 12 entries with standard
/// normal real and imaginary parts, orthonormal amplitudes.
pub fn seeded_box_data(seed: u64, limit: u32) -> HermiteCoeffs<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.random_range(1..=12);
    let mut f = HermiteCoeffs::orthonormal();
    for _ in 0..count {
        let idx = BasisIndex::new(rng.random_range(0..=limit), rng.random_range(0..=limit));
        f.accumulate(idx, Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    }
    f
}
