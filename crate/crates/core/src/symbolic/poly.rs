//! Exact bivariate polynomials in `z` and `z̄`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exact::{format_scalar, rational_from_int, scalar_to_f64, ExactScalar};

/// Exponent pair `(a, b)` of the monomial `z^a z̄^b`.
pub type Monomial = (u32, u32);

/// `Σ c_{a,b} z^a z̄^b` with exact coefficients in sparse normal form.
///
/// Zero coefficients are never stored, so structural equality is
/// polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolyZZbar {
    terms: BTreeMap<Monomial, ExactScalar>,
}

impl PolyZZbar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(ExactScalar::one())
    }

    pub fn constant(c: ExactScalar) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(a: u32, b: u32, c: ExactScalar) -> Self {
        let mut p = Self::zero();
        p.add_term(a, b, c);
        p
    }

    /// `z`
    pub fn z() -> Self {
        Self::monomial(1, 0, ExactScalar::one())
    }

    /// `z̄`
    pub fn zbar() -> Self {
        Self::monomial(0, 1, ExactScalar::one())
    }

    /// `|z|² = z z̄`
    pub fn zzbar() -> Self {
        Self::monomial(1, 1, ExactScalar::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, ExactScalar)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for ((a, b), c) in terms {
            p.add_term(a, b, c);
        }
        p
    }

    /// Accumulates `c z^a z̄^b`, pruning the entry if it cancels to zero.
    pub fn add_term(&mut self, a: u32, b: u32, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        match self.terms.get_mut(&key) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: u32, b: u32) -> ExactScalar {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree `max(a + b)`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).max()
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        PolyZZbar {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (*k, v * c))
                .collect(),
        }
    }

    /// Coefficient-wise conjugation: `c z^a z̄^b ↦ c̄ z^b z̄^a`.
    pub fn conj(&self) -> Self {
        PolyZZbar {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| ((b, a), c.conj()))
                .collect(),
        }
    }

    /// True when the polynomial takes real values on all of `ℂ`.
    pub fn is_real_valued(&self) -> bool {
        *self == self.conj()
    }

    /// Wirtinger derivative `∂ = ∂/∂z`.
    pub fn dz(&self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            if a > 0 {
                out.add_term(a - 1, b, c * rational_from_int(a as i64));
            }
        }
        out
    }

    /// Wirtinger derivative `∂̄ = ∂/∂z̄`.
    pub fn dzbar(&self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            if b > 0 {
                out.add_term(a, b - 1, c * rational_from_int(b as i64));
            }
        }
        out
    }

    /// `∂^i ∂̄^j`; the two derivatives commute on polynomials.
    pub fn derive(&self, dz_order: u32, dzbar_order: u32) -> Self {
        let mut out = self.clone();
        for _ in 0..dz_order {
            out = out.dz();
        }
        for _ in 0..dzbar_order {
            out = out.dzbar();
        }
        out
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let zb = z.conj();
        self.terms
            .iter()
            .map(|(&(a, b), c)| scalar_to_f64(c) * z.powu(a) * zb.powu(b))
            .sum()
    }

    /// Exact evaluation at a Gaussian-rational point.
    pub fn eval_exact(&self, z: &ExactScalar) -> ExactScalar {
        let zb = z.conj();
        let mut acc = ExactScalar::zero();
        for (&(a, b), c) in &self.terms {
            acc += c * pow(z, a) * pow(&zb, b);
        }
        acc
    }
}

fn pow(x: &ExactScalar, e: u32) -> ExactScalar {
    let mut acc: ExactScalar = Complex::new(BigRational::one(), BigRational::zero());
    for _ in 0..e {
        acc *= x;
    }
    acc
}

impl Add<&PolyZZbar> for &PolyZZbar {
    type Output = PolyZZbar;
    fn add(self, rhs: &PolyZZbar) -> PolyZZbar {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.terms {
            out.add_term(a, b, c.clone());
        }
        out
    }
}

impl Add for PolyZZbar {
    type Output = PolyZZbar;
    fn add(self, rhs: PolyZZbar) -> PolyZZbar {
        &self + &rhs
    }
}

impl Sub<&PolyZZbar> for &PolyZZbar {
    type Output = PolyZZbar;
    fn sub(self, rhs: &PolyZZbar) -> PolyZZbar {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.terms {
            out.add_term(a, b, -c.clone());
        }
        out
    }
}

impl Sub for PolyZZbar {
    type Output = PolyZZbar;
    fn sub(self, rhs: PolyZZbar) -> PolyZZbar {
        &self - &rhs
    }
}

impl Mul<&PolyZZbar> for &PolyZZbar {
    type Output = PolyZZbar;
    fn mul(self, rhs: &PolyZZbar) -> PolyZZbar {
        let mut out = PolyZZbar::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                out.add_term(a1 + a2, b1 + b2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for PolyZZbar {
    type Output = PolyZZbar;
    fn mul(self, rhs: PolyZZbar) -> PolyZZbar {
        &self * &rhs
    }
}

impl Neg for PolyZZbar {
    type Output = PolyZZbar;
    fn neg(self) -> PolyZZbar {
        PolyZZbar {
            terms: self.terms.into_iter().map(|(k, v)| (k, -v)).collect(),
        }
    }
}

impl fmt::Display for PolyZZbar {
    /// Highest total degree first, e.g. `z^2*zb^2 - 4*z*zb + 2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&(a, b)| std::cmp::Reverse((a + b, a)));
        for (i, (a, b)) in keys.into_iter().enumerate() {
            let c = &self.terms[&(a, b)];
            let mut factors = Vec::new();
            match a {
                0 => {}
                1 => factors.push("z".to_string()),
                _ => factors.push(format!("z^{a}")),
            }
            match b {
                0 => {}
                1 => factors.push("zb".to_string()),
                _ => factors.push(format!("zb^{b}")),
            }
            let negative_real = c.im.is_zero() && c.re < BigRational::zero();
            let magnitude = if negative_real { -c.clone() } else { c.clone() };
            let coef = if c.im.is_zero() {
                format_scalar(&magnitude)
            } else {
                format!("({})", format_scalar(&magnitude))
            };
            let body = if factors.is_empty() {
                coef
            } else if magnitude.is_one() {
                factors.join("*")
            } else {
                format!("{}*{}", coef, factors.join("*"))
            };
            match (i, negative_real) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}
