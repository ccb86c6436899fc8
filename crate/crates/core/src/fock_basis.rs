//! Complex Hermite basis of `L²(ℂ, e^{-|z|²})`.
//!
//! `H_{m,n} = Σ_{r=0}^{min(m,n)} (-1)^r r! C(m,r) C(n,r) z^{m-r} z̄^{n-r}`
//! has leading monomial `z^m z̄^n`, and the family is orthogonal with
//! `‖H_{m,n}‖² = π m! n!`. In this basis `∂^k ∂̄^k` lowers both indices
//! by `k` with falling-factorial weights and its weighted formal adjoint
//! raises both by `k` with unit weight, so every operator here is an index
//! shift.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{binomial, factorial, falling_factorial, scalar_from_uint, ExactScalar, WeightedNorm};
use crate::symbolic::PolyZZbar;

/// Index `(m, n)` of `H_{m,n}`: `m` is the holomorphic degree, `n` the
/// antiholomorphic one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasisIndex {
    pub m: u32,
    pub n: u32,
}

impl BasisIndex {
    pub const fn new(m: u32, n: u32) -> Self {
        BasisIndex { m, n }
    }

    /// `(m - k, n - k)`, or `None` when either index would go negative.
    pub fn lowered(self, k: u32) -> Option<Self> {
        Some(BasisIndex::new(self.m.checked_sub(k)?, self.n.checked_sub(k)?))
    }

    pub fn raised(self, k: u32) -> Self {
        BasisIndex::new(self.m + k, self.n + k)
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m, self.n)
    }
}

impl From<(u32, u32)> for BasisIndex {
    fn from((m, n): (u32, u32)) -> Self {
        BasisIndex::new(m, n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Amplitudes multiply `H_{m,n}`.
    #[default]
    Raw,
    /// Amplitudes multiply `H_{m,n} / sqrt(π m! n!)`.
    Orthonormal,
}

/// Scalar field for Hermite amplitudes: exact `Q[i]` or `Complex64`.
pub trait Amplitude: Clone + PartialEq + fmt::Debug + Send + Sync {
    /// Whether `sqrt` of integers is representable, i.e. orthonormal
    /// amplitudes are available.
    const SUPPORTS_ORTHONORMAL: bool;

    fn zero() -> Self;
    /// Exact zero test for exact scalars, `|a| < 1e-300` for floats.
    fn is_negligible(&self) -> bool;
    fn conj(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn from_integer(n: &BigUint) -> Self;
    fn sqrt_of_integer(n: &BigUint) -> Self;
}

impl Amplitude for ExactScalar {
    const SUPPORTS_ORTHONORMAL: bool = false;

    fn zero() -> Self {
        Zero::zero()
    }
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
    fn conj(&self) -> Self {
        num_complex::Complex::conj(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn from_integer(n: &BigUint) -> Self {
        scalar_from_uint(n)
    }
    fn sqrt_of_integer(_n: &BigUint) -> Self {
        unreachable!("exact amplitudes are always raw")
    }
}

/// Magnitude below which float amplitudes are pruned.
pub const FLOAT_PRUNE: f64 = 1e-300;

impl Amplitude for Complex64 {
    const SUPPORTS_ORTHONORMAL: bool = true;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn is_negligible(&self) -> bool {
        self.norm() < FLOAT_PRUNE
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn from_integer(n: &BigUint) -> Self {
        Complex64::new(n.to_f64().unwrap_or(f64::INFINITY), 0.0)
    }
    fn sqrt_of_integer(n: &BigUint) -> Self {
        Complex64::new(n.to_f64().unwrap_or(f64::INFINITY).sqrt(), 0.0)
    }
}

/// Finitely supported Hermite expansion `Σ a_{m,n} H_{m,n}`.
///
/// No zero amplitude is ever stored.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteCoeffs<T> {
    entries: BTreeMap<BasisIndex, T>,
    normalization: Normalization,
}

impl<T: Amplitude> HermiteCoeffs<T> {
    pub fn new(normalization: Normalization) -> Self {
        assert!(
            normalization == Normalization::Raw || T::SUPPORTS_ORTHONORMAL,
            "orthonormal amplitudes need a floating-point scalar"
        );
        HermiteCoeffs {
            entries: BTreeMap::new(),
            normalization,
        }
    }

    pub fn raw() -> Self {
        Self::new(Normalization::Raw)
    }

    pub fn from_entries<I>(normalization: Normalization, entries: I) -> Self
    where
        I: IntoIterator<Item = (BasisIndex, T)>,
    {
        let mut out = Self::new(normalization);
        for (idx, a) in entries {
            out.accumulate(idx, a);
        }
        out
    }

    /// Single basis vector with amplitude `a`.
    pub fn basis(idx: BasisIndex, a: T, normalization: Normalization) -> Self {
        Self::from_entries(normalization, [(idx, a)])
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn accumulate(&mut self, idx: BasisIndex, a: T) {
        match self.entries.get_mut(&idx) {
            Some(existing) => {
                *existing = existing.add(&a);
                if existing.is_negligible() {
                    self.entries.remove(&idx);
                }
            }
            None => {
                if !a.is_negligible() {
                    self.entries.insert(idx, a);
                }
            }
        }
    }

    pub fn get(&self, idx: BasisIndex) -> T {
        self.entries.get(&idx).cloned().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisIndex, &T)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest `m` and largest `n` in the support (not necessarily a
    /// single entry).
    pub fn max_indices(&self) -> (u32, u32) {
        self.entries
            .keys()
            .fold((0, 0), |(m, n), idx| (m.max(idx.m), n.max(idx.n)))
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_entries(
            self.normalization,
            self.entries.iter().map(|(i, a)| (*i, a.mul(c))),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.normalization, other.normalization);
        let mut out = self.clone();
        for (i, a) in &other.entries {
            out.accumulate(*i, a.clone());
        }
        out
    }

    /// Drops entries outside `[0, max_m] × [0, max_n]`.
    pub fn restrict(&self, max_m: u32, max_n: u32) -> Self {
        Self::from_entries(
            self.normalization,
            self.entries
                .iter()
                .filter(|(i, _)| i.m <= max_m && i.n <= max_n)
                .map(|(i, a)| (*i, a.clone())),
        )
    }
}

/// `H_{m,n}` as an exact polynomial.
pub fn hermite_polynomial(idx: BasisIndex) -> PolyZZbar {
    let BasisIndex { m, n } = idx;
    let mut p = PolyZZbar::zero();
    for r in 0..=m.min(n) {
        let mag = factorial(r) * binomial(m, r) * binomial(n, r);
        let mut c = scalar_from_uint(&mag);
        if r % 2 == 1 {
            c = -c;
        }
        p.add_term(m - r, n - r, c);
    }
    p
}

/// Exact basis change from monomials to Hermite amplitudes (raw).
///
/// Uses the inverse expansion `z^a z̄^b = Σ_r r! C(a,r) C(b,r) H_{a-r,b-r}`.
pub fn to_hermite(p: &PolyZZbar) -> HermiteCoeffs<ExactScalar> {
    let mut out = HermiteCoeffs::raw();
    for (&(a, b), c) in p.terms() {
        for r in 0..=a.min(b) {
            let mag = factorial(r) * binomial(a, r) * binomial(b, r);
            out.accumulate(BasisIndex::new(a - r, b - r), c * scalar_from_uint(&mag));
        }
    }
    out
}

/// Evaluates `Σ a_{m,n} H_{m,n}` as a polynomial.
pub fn to_monomial(u: &HermiteCoeffs<ExactScalar>) -> PolyZZbar {
    let mut p = PolyZZbar::zero();
    for (idx, a) in u.iter() {
        for (&(x, y), c) in hermite_polynomial(*idx).terms() {
            p.add_term(x, y, c * a);
        }
    }
    p
}

/// `π m! n!`'s rational part, i.e. `‖H_{m,n}‖² / π`.
pub fn basis_norm_sq(idx: BasisIndex) -> BigUint {
    factorial(idx.m) * factorial(idx.n)
}

/// `⟨u, v⟩ = ∫ ū v e^{-|z|²} dσ`, conjugate-linear in `u`.
///
/// Raw amplitudes give `π · Σ m! n! ū v` with the π kept symbolic;
/// orthonormal amplitudes give the plain sum with `pi_exponent = 0`.
pub fn inner_product<T: Amplitude>(u: &HermiteCoeffs<T>, v: &HermiteCoeffs<T>) -> WeightedNorm<T> {
    assert_eq!(u.normalization(), v.normalization(), "mixed normalizations");
    let mut acc = T::zero();
    for (idx, a) in u.iter() {
        let b = v.get(*idx);
        if b.is_negligible() {
            continue;
        }
        let term = a.conj().mul(&b);
        acc = match u.normalization() {
            Normalization::Raw => acc.add(&term.mul(&T::from_integer(&basis_norm_sq(*idx)))),
            Normalization::Orthonormal => acc.add(&term),
        };
    }
    WeightedNorm {
        pi_exponent: match u.normalization() {
            Normalization::Raw => 1,
            Normalization::Orthonormal => 0,
        },
        rational_part: acc,
    }
}

fn shift_factor<T: Amplitude>(product: BigUint, normalization: Normalization) -> T {
    match normalization {
        Normalization::Raw => T::from_integer(&product),
        Normalization::Orthonormal => T::sqrt_of_integer(&product),
    }
}

/// `∂^k ∂̄^k`: `H_{m,n} ↦ (m)_k (n)_k H_{m-k,n-k}`, annihilating
/// indices with `m < k` or `n < k`.
pub fn lower<T: Amplitude>(k: u32, u: &HermiteCoeffs<T>) -> HermiteCoeffs<T> {
    assert!(k >= 1, "order must be positive");
    let norm = u.normalization();
    let mut out = HermiteCoeffs::new(norm);
    for (idx, a) in u.iter() {
        if let Some(target) = idx.lowered(k) {
            let raw = falling_factorial(idx.m, k) * falling_factorial(idx.n, k);
            let factor: T = match norm {
                // ‖H_{m-k,n-k}‖/‖H_{m,n}‖ turns (m)_k (n)_k into its square root.
                Normalization::Raw => shift_factor(raw, norm),
                Normalization::Orthonormal => shift_factor(raw, norm),
            };
            out.accumulate(target, a.mul(&factor));
        }
    }
    out
}

/// Weighted formal adjoint of `∂^k ∂̄^k`: `H_{m,n} ↦ H_{m+k,n+k}`.
pub fn raise<T: Amplitude>(k: u32, u: &HermiteCoeffs<T>) -> HermiteCoeffs<T> {
    assert!(k >= 1, "order must be positive");
    let norm = u.normalization();
    let mut out = HermiteCoeffs::new(norm);
    for (idx, a) in u.iter() {
        let target = idx.raised(k);
        let amp = match norm {
            Normalization::Raw => a.clone(),
            Normalization::Orthonormal => {
                let raw = falling_factorial(target.m, k) * falling_factorial(target.n, k);
                a.mul(&shift_factor(raw, norm))
            }
        };
        out.accumulate(target, amp);
    }
    out
}

/// `(∂^k ∂̄^k + c) u`.
pub fn apply_operator<T: Amplitude>(k: u32, c: &T, u: &HermiteCoeffs<T>) -> HermiteCoeffs<T> {
    lower(k, u).add(&u.scale(c))
}

/// `ln sqrt(π m! n!)`, the log of `‖H_{m,n}‖`.
pub fn ln_basis_norm(idx: BasisIndex) -> f64 {
    use statrs::function::factorial::ln_factorial;
    0.5 * (std::f64::consts::PI.ln() + ln_factorial(idx.m as u64) + ln_factorial(idx.n as u64))
}

impl HermiteCoeffs<Complex64> {
    pub fn orthonormal() -> Self {
        Self::new(Normalization::Orthonormal)
    }

    pub fn to_orthonormal(&self) -> Self {
        match self.normalization {
            Normalization::Orthonormal => self.clone(),
            Normalization::Raw => Self::from_entries(
                Normalization::Orthonormal,
                self.iter().map(|(i, a)| (*i, a * ln_basis_norm(*i).exp())),
            ),
        }
    }

    /// Raw amplitudes; entries whose raw value underflows are pruned.
    pub fn to_raw(&self) -> Self {
        match self.normalization {
            Normalization::Raw => self.clone(),
            Normalization::Orthonormal => Self::from_entries(
                Normalization::Raw,
                self.iter().map(|(i, a)| (*i, a * (-ln_basis_norm(*i)).exp())),
            ),
        }
    }

    /// `sqrt(⟨u, u⟩)` in the weighted norm.
    pub fn weighted_norm(&self) -> f64 {
        match self.normalization {
            Normalization::Orthonormal => self.iter().map(|(_, a)| a.norm_sqr()).sum::<f64>().sqrt(),
            Normalization::Raw => self.to_orthonormal().weighted_norm(),
        }
    }
}

impl HermiteCoeffs<ExactScalar> {
    pub fn to_float(&self) -> HermiteCoeffs<Complex64> {
        HermiteCoeffs::from_entries(
            Normalization::Raw,
            self.iter().map(|(i, a)| (*i, crate::exact::scalar_to_f64(a))),
        )
    }
}
