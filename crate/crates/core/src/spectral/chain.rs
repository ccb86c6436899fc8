//! Decoupled bidiagonal chains of `(∂^k ∂̄^k + c) u = f`.
//!
//! `∂^k ∂̄^k` maps `H_{m,n}` to a multiple of `H_{m-k,n-k}`, so index space
//! splits into chains `(m₀ + jk, n₀ + jk)` starting at an origin with
//! `m₀ < k` or `n₀ < k`. Along a chain the equations read
//! `c u_j + A_j u_{j+1} = f_j` with
//! `A_j = (m₀+(j+1)k)_k (n₀+(j+1)k)_k`. A chain of `L` positions carries
//! the `L - 1` equations whose both unknowns lie on it, leaving one free
//! direction, the homogeneous solution `h`, which the minimum-norm solve
//! projects out.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{CoreError, Result};
use crate::exact::{factorial, falling_factorial, scalar_from_uint, ExactScalar};
use crate::fock_basis::{ln_basis_norm, Amplitude, BasisIndex, HermiteCoeffs, Normalization};

/// Origins of all chains meeting `[0, M]²`, in lexicographic order.
pub fn chain_origins(k: u32, max_index: u32) -> Vec<BasisIndex> {
    let mut out = Vec::new();
    for m0 in 0..=max_index {
        for n0 in 0..=max_index {
            if m0 < k || n0 < k {
                out.push(BasisIndex::new(m0, n0));
            }
        }
    }
    out
}

/// Number of chain positions inside `[0, limit]²`, zero if the origin
/// itself is outside.
pub fn positions_within(origin: BasisIndex, k: u32, limit: u32) -> usize {
    if origin.m > limit || origin.n > limit {
        return 0;
    }
    1 + ((limit - origin.m) / k).min((limit - origin.n) / k) as usize
}

fn position(origin: BasisIndex, k: u32, j: usize) -> BasisIndex {
    let step = k * j as u32;
    BasisIndex::new(origin.m + step, origin.n + step)
}

/// `sqrt(A_j)`, the coupling between orthonormal amplitudes.
pub fn orthonormal_coupling(origin: BasisIndex, k: u32, j: usize) -> f64 {
    let p = position(origin, k, j);
    (1..=k)
        .map(|i| ((p.m + i) as f64 * (p.n + i) as f64).sqrt())
        .product()
}

/// `ln sqrt(A_j)`.
pub fn ln_orthonormal_coupling(origin: BasisIndex, k: u32, j: usize) -> f64 {
    let p = position(origin, k, j);
    0.5 * (1..=k)
        .map(|i| ((p.m + i) as f64).ln() + ((p.n + i) as f64).ln())
        .sum::<f64>()
}

/// One chain with floating-point data in either normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSystem {
    pub origin: BasisIndex,
    pub k: u32,
    pub normalization: Normalization,
    /// `f_j`, one per position.
    pub rhs: Vec<Complex64>,
}

impl ChainSystem {
    pub fn len(&self) -> usize {
        self.rhs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rhs.is_empty()
    }

    pub fn position(&self, j: usize) -> BasisIndex {
        position(self.origin, self.k, j)
    }

    /// `A_j` (raw) or `sqrt(A_j)` (orthonormal).
    pub fn coupling(&self, j: usize) -> f64 {
        let s = orthonormal_coupling(self.origin, self.k, j);
        match self.normalization {
            Normalization::Raw => s * s,
            Normalization::Orthonormal => s,
        }
    }

    /// `π m! n!` at position `j` (raw) or 1 (orthonormal).
    pub fn weight(&self, j: usize) -> f64 {
        match self.normalization {
            Normalization::Raw => (2.0 * ln_basis_norm(self.position(j))).exp(),
            Normalization::Orthonormal => 1.0,
        }
    }
}

/// Splits the box `[0, M]²` into chains carrying the amplitudes of `f`.
pub fn decompose(k: u32, max_index: u32, f: &HermiteCoeffs<Complex64>) -> Result<Vec<ChainSystem>> {
    check_order(k)?;
    check_support(f.iter().map(|(i, _)| *i), max_index)?;
    Ok(chain_origins(k, max_index)
        .into_iter()
        .map(|origin| {
            let len = positions_within(origin, k, max_index);
            ChainSystem {
                origin,
                k,
                normalization: f.normalization(),
                rhs: (0..len).map(|j| f.get(position(origin, k, j))).collect(),
            }
        })
        .collect())
}

pub(crate) fn check_order(k: u32) -> Result<()> {
    if k == 0 {
        return Err(CoreError::InvalidInput("order k must be at least 1".into()));
    }
    Ok(())
}

pub(crate) fn check_support<I: IntoIterator<Item = BasisIndex>>(indices: I, limit: u32) -> Result<()> {
    for index in indices {
        if index.m > limit || index.n > limit {
            return Err(CoreError::IndexOutsideBox { index, limit });
        }
    }
    Ok(())
}

/// Minimum-norm solver for one chain of fixed length, reusable across
/// right-hand sides.
///
/// Works in orthonormal amplitudes, where the equations are
/// `c ũ_j + s_j ũ_{j+1} = f̃_j` with `s_j = sqrt(A_j)` and the norm is
/// Euclidean. The homogeneous solution `h_{j+1} = -c h_j / s_j` is
/// unimodal in `|h_j|`; it is stored normalized to 1 at its peak `p`, and
/// particular solutions are built outward from `p` so that every
/// recurrence step divides by the larger of `|c|` and `s_j`.
#[derive(Debug, Clone)]
pub(crate) struct PreparedChain {
    c: Complex64,
    couplings: Vec<f64>,
    peak: usize,
    hhat: Vec<Complex64>,
    hhat_norm_sq: f64,
}

impl PreparedChain {
    pub(crate) fn new(origin: BasisIndex, k: u32, c: Complex64, len: usize) -> Self {
        assert!(len >= 1);
        let couplings: Vec<f64> = (0..len - 1).map(|j| orthonormal_coupling(origin, k, j)).collect();
        let peak = if c == Complex64::new(0.0, 0.0) {
            0
        } else {
            let ln_c = c.norm().ln();
            let mut best = (0usize, 0.0f64);
            let mut ln_h = 0.0;
            for (j, s) in couplings.iter().enumerate() {
                ln_h += ln_c - s.ln();
                if ln_h > best.1 {
                    best = (j + 1, ln_h);
                }
            }
            best.0
        };
        let mut hhat = vec![Complex64::new(0.0, 0.0); len];
        hhat[peak] = Complex64::new(1.0, 0.0);
        for j in (0..peak).rev() {
            hhat[j] = hhat[j + 1] * (-couplings[j] / c);
        }
        for j in peak..len - 1 {
            hhat[j + 1] = hhat[j] * (-c / couplings[j]);
        }
        let hhat_norm_sq = hhat.iter().map(|h| h.norm_sqr()).sum();
        PreparedChain {
            c,
            couplings,
            peak,
            hhat,
            hhat_norm_sq,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.hhat.len()
    }

    pub(crate) fn coupling(&self, j: usize) -> f64 {
        self.couplings[j]
    }

    /// Minimum-norm `ũ` with `c ũ_j + s_j ũ_{j+1} = f̃_j` for `j < L - 1`.
    /// Missing trailing entries of `f` count as zero.
    pub(crate) fn solve(&self, f: &[Complex64]) -> Vec<Complex64> {
        let len = self.len();
        let fj = |j: usize| f.get(j).copied().unwrap_or_default();
        let mut q = vec![Complex64::new(0.0, 0.0); len];
        for j in (0..self.peak).rev() {
            q[j] = (fj(j) - q[j + 1] * self.couplings[j]) / self.c;
        }
        for j in self.peak..len - 1 {
            q[j + 1] = (fj(j) - self.c * q[j]) / self.couplings[j];
        }
        let proj: Complex64 = self.hhat.iter().zip(&q).map(|(h, q)| h.conj() * q).sum::<Complex64>() / self.hhat_norm_sq;
        q.iter().zip(&self.hhat).map(|(q, h)| q - proj * h).collect()
    }

    /// `y` with `B* y = u`, where `B` is the `(L-1) × L` chain matrix.
    ///
    /// Only meaningful for `u` in the range of `B*`, e.g. a minimum-norm
    /// solution; then `y = (B B*)^{-1} f`.
    pub(crate) fn recover_dual(&self, u: &[Complex64]) -> Vec<Complex64> {
        let len = self.len();
        let rows = len - 1;
        let mut y = vec![Complex64::new(0.0, 0.0); rows];
        if rows == 0 {
            return y;
        }
        let cb = self.c.conj();
        // (B* y)_i = c̄ y_i + s_{i-1} y_{i-1}
        let forward_end = self.peak.min(rows);
        for i in 0..forward_end {
            let prev = if i == 0 { Complex64::new(0.0, 0.0) } else { y[i - 1] * self.couplings[i - 1] };
            y[i] = (u[i] - prev) / cb;
        }
        if self.peak < rows {
            y[rows - 1] = u[len - 1] / self.couplings[rows - 1];
            for i in (self.peak + 1..rows).rev() {
                y[i - 1] = (u[i] - cb * y[i]) / self.couplings[i - 1];
            }
        }
        y
    }
}

/// Minimum-norm solution of the chain's `L - 1` equations, in the chain's
/// normalization.
pub fn solve_chain(chain: &ChainSystem, c: Complex64) -> Vec<Complex64> {
    if chain.is_empty() {
        return Vec::new();
    }
    let prepared = PreparedChain::new(chain.origin, chain.k, c, chain.len());
    match chain.normalization {
        Normalization::Orthonormal => prepared.solve(&chain.rhs),
        Normalization::Raw => {
            let norms: Vec<f64> = (0..chain.len())
                .map(|j| ln_basis_norm(chain.position(j)).exp())
                .collect();
            let rhs: Vec<Complex64> = chain.rhs.iter().zip(&norms).map(|(f, n)| f * n).collect();
            prepared.solve(&rhs).iter().zip(&norms).map(|(u, n)| u / n).collect()
        }
    }
}

/// Chain length on which the cut equation `c ũ_{L-1}` is below `1e-16·‖f‖`
/// for every `f` supported on the first `certified` positions.
///
/// Past the data the solution follows `h`, so `ũ_j = β h_j` for `j > s`
/// (`s = certified - 1`). Orthogonality to `h` together with
/// `‖ũ‖ ≤ ‖f‖` gives `|β| ≤ ‖h_{≤s}‖ ‖f‖ / ‖h_{>s}‖²`, and the equation at
/// `s` gives `|ũ_{s+1}| ≤ (1 + |c|) ‖f‖ / s_s`. The cut term is at most
/// `|c| |h_{L-1}|` times the smaller of `‖h_{≤s}‖/‖h_{>s}‖²` and
/// `(1 + |c|) / (s_s |h_{s+1}|)`. Returns the length and that bound.
pub(crate) fn extended_length(origin: BasisIndex, k: u32, c: Complex64, certified: usize, box_len: usize) -> (usize, f64) {
    const TAIL_TOLERANCE: f64 = 1e-16;
    const MAX_EXTENSION: usize = 1 << 16;
    let abs_c = c.norm();
    if abs_c == 0.0 || certified == 0 {
        return (box_len, 0.0);
    }
    let ln_c = abs_c.ln();
    let s = certified - 1;
    let mut ln_h = 0.0;
    let mut lse_head = f64::NEG_INFINITY;
    for j in 0..=s {
        if j > 0 {
            ln_h += ln_c - ln_orthonormal_coupling(origin, k, j - 1);
        }
        lse_head = log_add(lse_head, 2.0 * ln_h);
    }
    let ln_couple_s = ln_orthonormal_coupling(origin, k, s);
    let mut ln_h_first_tail = f64::NAN;
    let mut lse_tail = f64::NEG_INFINITY;
    let mut tau = f64::INFINITY;
    let mut len = s + 1;
    while len < box_len + MAX_EXTENSION {
        ln_h += ln_c - ln_orthonormal_coupling(origin, k, len - 1);
        if len == s + 1 {
            ln_h_first_tail = ln_h;
        }
        lse_tail = log_add(lse_tail, 2.0 * ln_h);
        len += 1;
        let a = ln_c + ln_h + 0.5 * lse_head - lse_tail;
        let b = ln_c + ln_h - ln_h_first_tail + (1.0 + abs_c).ln() - ln_couple_s;
        tau = a.min(b).exp();
        if len >= box_len && tau < TAIL_TOLERANCE {
            break;
        }
    }
    (len, tau)
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let hi = a.max(b);
    hi + ((a - hi).exp() + (b - hi).exp()).ln()
}

/// One chain with exact raw amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactChain {
    pub origin: BasisIndex,
    pub k: u32,
    pub rhs: Vec<ExactScalar>,
}

impl ExactChain {
    pub fn len(&self) -> usize {
        self.rhs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rhs.is_empty()
    }

    pub fn position(&self, j: usize) -> BasisIndex {
        position(self.origin, self.k, j)
    }

    /// `A_j = (m+k)_k (n+k)_k` at position `j + 1`.
    pub fn coupling(&self, j: usize) -> BigUint {
        let next = position(self.origin, self.k, j + 1);
        falling_factorial(next.m, self.k) * falling_factorial(next.n, self.k)
    }

    /// `w_j / π = m! n!` at position `j`.
    pub fn weight(&self, j: usize) -> BigUint {
        let p = self.position(j);
        factorial(p.m) * factorial(p.n)
    }
}

pub fn decompose_exact(k: u32, max_index: u32, f: &HermiteCoeffs<ExactScalar>) -> Result<Vec<ExactChain>> {
    check_order(k)?;
    check_support(f.iter().map(|(i, _)| *i), max_index)?;
    Ok(chain_origins(k, max_index)
        .into_iter()
        .map(|origin| {
            let len = positions_within(origin, k, max_index);
            ExactChain {
                origin,
                k,
                rhs: (0..len).map(|j| f.get(position(origin, k, j))).collect(),
            }
        })
        .collect())
}

/// `u = p - (⟨h, p⟩_w / ⟨h, h⟩_w) h` with the forward particular solution
/// `p_0 = 0`; for `c = 0` this is `p` itself.
pub fn solve_chain_exact(chain: &ExactChain, c: &ExactScalar) -> Vec<ExactScalar> {
    let len = chain.len();
    if len == 0 {
        return Vec::new();
    }
    let couplings: Vec<ExactScalar> = (0..len - 1).map(|j| scalar_from_uint(&chain.coupling(j))).collect();
    let mut p = vec![<ExactScalar as num_traits::Zero>::zero(); len];
    for j in 0..len - 1 {
        p[j + 1] = (&chain.rhs[j] - c * &p[j]) / &couplings[j];
    }
    if c.is_zero() {
        return p;
    }
    let mut h = vec![<ExactScalar as num_traits::Zero>::zero(); len];
    h[0] = scalar_from_uint(&BigUint::from(1u32));
    for j in 0..len - 1 {
        h[j + 1] = -(c * &h[j]) / &couplings[j];
    }
    let mut hp = <ExactScalar as num_traits::Zero>::zero();
    let mut hh = <ExactScalar as num_traits::Zero>::zero();
    for j in 0..len {
        let w = scalar_from_uint(&chain.weight(j));
        hp += &w * Amplitude::conj(&h[j]) * &p[j];
        hh += &w * Amplitude::conj(&h[j]) * &h[j];
    }
    let t = hp / hh;
    p.iter().zip(&h).map(|(p, h)| p - &t * h).collect()
}
