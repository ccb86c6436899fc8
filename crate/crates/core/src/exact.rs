//! Exact scalars and integer combinatorics.
//!
//! All exact quantities live in `Q[i]`: complex numbers whose real and
//! imaginary parts are arbitrary-precision rationals. Factorials are
//! memoized in a table that grows on demand.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::sync::{PoisonError, RwLock};

/// Complex rational number, exact under `+`, `-`, `*`, `/` and conjugation.
pub type ExactScalar = Complex<BigRational>;

static FACTORIALS: RwLock<Vec<BigUint>> = RwLock::new(Vec::new());

/// `n!` as an arbitrary-precision integer.
pub fn factorial(n: u32) -> BigUint {
    let n = n as usize;
    {
        let table = FACTORIALS.read().unwrap_or_else(PoisonError::into_inner);
        if let Some(v) = table.get(n) {
            return v.clone();
        }
    }
    let mut table = FACTORIALS.write().unwrap_or_else(PoisonError::into_inner);
    while table.len() <= n {
        let next = match table.last() {
            Some(last) => last * BigUint::from(table.len()),
            None => BigUint::one(),
        };
        table.push(next);
    }
    table[n].clone()
}

/// Falling factorial `(m)_k = m!/(m-k)!`, zero when `k > m`.
pub fn falling_factorial(m: u32, k: u32) -> BigUint {
    if k > m {
        return BigUint::zero();
    }
    ((m - k + 1)..=m).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Binomial coefficient `C(n, r)`, zero when `r > n`.
pub fn binomial(n: u32, r: u32) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

pub fn rational_from_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rational_from_uint(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

pub fn scalar(re: i64, im: i64) -> ExactScalar {
    Complex::new(rational_from_int(re), rational_from_int(im))
}

pub fn scalar_ratio(num: i64, den: i64) -> ExactScalar {
    Complex::new(
        BigRational::new(BigInt::from(num), BigInt::from(den)),
        BigRational::zero(),
    )
}

pub fn scalar_from_uint(n: &BigUint) -> ExactScalar {
    Complex::new(rational_from_uint(n), BigRational::zero())
}

/// Converts finite floats to the exact rational they represent.
///
/// Returns `None` for NaN or infinities.
pub fn scalar_from_f64(re: f64, im: f64) -> Option<ExactScalar> {
    Some(Complex::new(
        BigRational::from_float(re)?,
        BigRational::from_float(im)?,
    ))
}

pub fn scalar_to_f64(s: &ExactScalar) -> num_complex::Complex64 {
    num_complex::Complex64::new(
        s.re.to_f64().unwrap_or(f64::NAN),
        s.im.to_f64().unwrap_or(f64::NAN),
    )
}

pub fn is_real(s: &ExactScalar) -> bool {
    s.im.is_zero()
}

/// Renders `a`, `a/b`, `a+bi` style text without floating-point rounding.
pub fn format_scalar(s: &ExactScalar) -> String {
    match (s.re.is_zero(), s.im.is_zero()) {
        (_, true) => s.re.to_string(),
        (true, false) => format!("{}i", s.im),
        (false, false) => {
            if s.im < BigRational::zero() {
                format!("{}-{}i", s.re, -s.im.clone())
            } else {
                format!("{}+{}i", s.re, s.im)
            }
        }
    }
}

/// Real scalar value `x·π`, kept with the π factor symbolic.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedNorm<T> {
    pub pi_exponent: i32,
    pub rational_part: T,
}

impl<T> WeightedNorm<T> {
    pub fn pi_times(rational_part: T) -> Self {
        WeightedNorm {
            pi_exponent: 1,
            rational_part,
        }
    }
}

impl WeightedNorm<ExactScalar> {
    pub fn to_f64(&self) -> num_complex::Complex64 {
        scalar_to_f64(&self.rational_part) * std::f64::consts::PI.powi(self.pi_exponent)
    }
}

impl WeightedNorm<num_complex::Complex64> {
    pub fn to_f64(&self) -> num_complex::Complex64 {
        self.rational_part * std::f64::consts::PI.powi(self.pi_exponent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_table_grows() {
        assert_eq!(factorial(0), BigUint::from(1u32));
        assert_eq!(factorial(5), BigUint::from(120u32));
        assert_eq!(factorial(25).to_string(), "15511210043330985984000000");
        assert_eq!(factorial(3), BigUint::from(6u32));
    }

    #[test]
    fn falling_and_binomial() {
        assert_eq!(falling_factorial(5, 2), BigUint::from(20u32));
        assert_eq!(falling_factorial(2, 3), BigUint::zero());
        assert_eq!(falling_factorial(7, 0), BigUint::one());
        assert_eq!(binomial(6, 3), BigUint::from(20u32));
        assert_eq!(binomial(3, 4), BigUint::zero());
    }

    #[test]
    fn float_round_trip_is_exact() {
        let s = scalar_from_f64(0.1, -2.5).unwrap();
        assert_eq!(scalar_to_f64(&s), num_complex::Complex64::new(0.1, -2.5));
        assert!(scalar_from_f64(f64::NAN, 0.0).is_none());
    }

    #[test]
    fn formatting() {
        assert_eq!(format_scalar(&scalar_ratio(3, 6)), "1/2");
        assert_eq!(format_scalar(&scalar(1, -2)), "1-2i");
        assert_eq!(format_scalar(&scalar(0, 3)), "3i");
    }
}
