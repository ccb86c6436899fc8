//! Problem and solution files.

use ddbar_core::exact::scalar_from_f64;
use ddbar_core::fock_basis::to_hermite;
use ddbar_core::spectral::{ProblemSpec, SolveReport};
use ddbar_core::{BasisIndex, CoreError, HermiteCoeffs, Normalization, PolyZZbar};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const DEFAULT_TRUNCATION: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<ComplexJson> for Complex64 {
    fn from(c: ComplexJson) -> Self {
        Complex64::new(c.re, c.im)
    }
}

impl From<Complex64> for ComplexJson {
    fn from(c: Complex64) -> Self {
        ComplexJson { re: c.re, im: c.im }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    Hermite,
    Monomial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffJson {
    pub m: u32,
    pub n: u32,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpansionJson {
    pub basis: BasisKind,
    pub coeffs: Vec<CoeffJson>,
}

impl ExpansionJson {
    pub fn hermite(u: &HermiteCoeffs<Complex64>) -> Self {
        ExpansionJson {
            basis: BasisKind::Hermite,
            coeffs: u
                .iter()
                .map(|(i, a)| CoeffJson { m: i.m, n: i.n, re: a.re, im: a.im })
                .collect(),
        }
    }

    fn check_finite(&self) -> Result<(), CoreError> {
        match self.coeffs.iter().find(|c| !(c.re.is_finite() && c.im.is_finite())) {
            Some(c) => Err(CoreError::InvalidInput(format!("coefficient at ({}, {}) is not finite", c.m, c.n))),
            None => Ok(()),
        }
    }

    /// Exact polynomial from monomial coefficients; floats are taken at
    /// their exact binary value.
    pub fn to_poly(&self) -> Result<PolyZZbar, CoreError> {
        if self.basis != BasisKind::Monomial {
            return Err(CoreError::InvalidInput("expected f in the monomial basis".into()));
        }
        self.check_finite()?;
        let mut p = PolyZZbar::zero();
        for c in &self.coeffs {
            let s = scalar_from_f64(c.re, c.im).expect("finite floats are rational");
            p.add_term(c.m, c.n, s);
        }
        Ok(p)
    }

    /// Hermite amplitudes; monomial input is converted exactly first and
    /// returned as raw amplitudes.
    pub fn to_hermite(&self, normalization: Normalization) -> Result<HermiteCoeffs<Complex64>, CoreError> {
        self.check_finite()?;
        match self.basis {
            BasisKind::Hermite => Ok(HermiteCoeffs::from_entries(
                normalization,
                self.coeffs
                    .iter()
                    .map(|c| (BasisIndex::new(c.m, c.n), Complex64::new(c.re, c.im))),
            )),
            BasisKind::Monomial => Ok(to_hermite(&self.to_poly()?).to_float()),
        }
    }
}

fn default_truncation() -> u32 {
    DEFAULT_TRUNCATION
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub k: u32,
    pub c: ComplexJson,
    #[serde(default = "default_truncation")]
    pub truncation: u32,
    /// Scaling of Hermite amplitudes in `f` and in the written `u`.
    #[serde(default)]
    pub normalization: Normalization,
    pub f: ExpansionJson,
}

impl ProblemFile {
    pub fn to_spec(&self) -> Result<ProblemSpec, CoreError> {
        Ok(ProblemSpec {
            k: self.k,
            c: self.c.into(),
            truncation: self.truncation,
            f: self.f.to_hermite(self.normalization)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub k: u32,
    pub c: ComplexJson,
    pub truncation: u32,
    pub normalization: Normalization,
    pub f: ExpansionJson,
    pub u: ExpansionJson,
    pub report: SolveReport,
}
