//! Eigenvalue vectors of synthetic states.
//!
//! The estimators only ever need the sorted spectrum of `ρ`: weak Schur
//! sampling outcomes depend on nothing else. [`Spectrum`] is the binary64
//! form used by the Monte-Carlo paths, [`ExactSpectrum`] the exact form
//! used by the oracles.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::rational_to_f64;

/// Tolerance on `Σα = 1` for floating-point spectra.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Sorted, non-negative eigenvalues summing to one.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSpectrum("no eigenvalues".into()));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidSpectrum(format!(
                "eigenvalues must be finite and non-negative: {values:?}"
            )));
        }
        if values.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSpectrum(format!(
                "eigenvalues must be sorted in non-increasing order: {values:?}"
            )));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidSpectrum(format!(
                "eigenvalues sum to {sum}, expected 1"
            )));
        }
        Ok(Spectrum { values })
    }

    /// Sorts the input (descending) before validating.
    pub fn from_unsorted(mut values: Vec<f64>) -> Result<Self> {
        values.sort_by(|a, b| b.total_cmp(a));
        Spectrum::new(values)
    }

    /// Maximally mixed state of rank `r`.
    pub fn uniform(r: usize) -> Result<Self> {
        Spectrum::padded_uniform(r, r)
    }

    /// `diag(1/r, …, 1/r, 0, …, 0)` in dimension `d`.
    pub fn padded_uniform(r: usize, d: usize) -> Result<Self> {
        if r == 0 || r > d {
            return Err(Error::InvalidSpectrum(format!(
                "need 1 ≤ r ≤ d, got r = {r}, d = {d}"
            )));
        }
        let mut values = vec![1.0 / r as f64; r];
        values.resize(d, 0.0);
        Ok(Spectrum { values })
    }

    /// Zipf-like spectrum `α_j ∝ j^{-s}` on `d` levels.
    pub fn zipf(d: usize, s: f64) -> Result<Self> {
        if d == 0 || !s.is_finite() || s < 0.0 {
            return Err(Error::InvalidSpectrum(format!(
                "zipf needs d ≥ 1 and s ≥ 0, got d = {d}, s = {s}"
            )));
        }
        let weights: Vec<f64> = (1..=d).map(|j| (j as f64).powf(-s)).collect();
        let total: f64 = weights.iter().sum();
        Ok(Spectrum {
            values: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// The nonzero prefix. Weak Schur sampling statistics are unchanged by
    /// trailing zeros.
    pub fn support(&self) -> &[f64] {
        let k = self.values.iter().take_while(|&&v| v > 0.0).count();
        &self.values[..k]
    }
}

/// Exact-rational spectrum; same invariants as [`Spectrum`], with the sum
/// equal to one exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactSpectrum {
    values: Vec<BigRational>,
}

impl ExactSpectrum {
    pub fn new(values: Vec<BigRational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSpectrum("no eigenvalues".into()));
        }
        if values.iter().any(|v| v.is_negative()) {
            return Err(Error::InvalidSpectrum("eigenvalues must be non-negative".into()));
        }
        if values.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSpectrum(
                "eigenvalues must be sorted in non-increasing order".into(),
            ));
        }
        let sum: BigRational = values.iter().sum();
        if !sum.is_one() {
            return Err(Error::InvalidSpectrum(format!(
                "eigenvalues sum to {sum}, expected exactly 1"
            )));
        }
        Ok(ExactSpectrum { values })
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_ratios(pairs: &[(i64, i64)]) -> Result<Self> {
        let mut values = Vec::with_capacity(pairs.len());
        for &(p, q) in pairs {
            if q == 0 {
                return Err(Error::InvalidSpectrum("zero denominator".into()));
            }
            values.push(BigRational::new(BigInt::from(p), BigInt::from(q)));
        }
        ExactSpectrum::new(values)
    }

    pub fn uniform(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidSpectrum("dimension must be at least 1".into()));
        }
        let v = BigRational::new(BigInt::one(), BigInt::from(d));
        Ok(ExactSpectrum {
            values: vec![v; d],
        })
    }

    /// Appends `extra` zero eigenvalues.
    pub fn padded(&self, extra: usize) -> Self {
        let mut values = self.values.clone();
        values.extend(std::iter::repeat_n(BigRational::zero(), extra));
        ExactSpectrum { values }
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Nearest binary64 spectrum. The float sum is renormalized, which moves
    /// entries by at most a few ulps.
    pub fn to_spectrum(&self) -> Spectrum {
        let raw: Vec<f64> = self.values.iter().map(rational_to_f64).collect();
        let total: f64 = raw.iter().sum();
        Spectrum {
            values: raw.into_iter().map(|v| v / total).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Spectrum::new(vec![0.5, 0.5]).is_ok());
        assert!(Spectrum::new(vec![0.4, 0.6]).is_err());
        assert!(Spectrum::new(vec![0.5, 0.4]).is_err());
        assert!(Spectrum::new(vec![1.5, -0.5]).is_err());
        assert!(Spectrum::new(vec![]).is_err());
        assert_eq!(
            Spectrum::from_unsorted(vec![0.2, 0.5, 0.3]).unwrap().values(),
            &[0.5, 0.3, 0.2]
        );
        assert!(ExactSpectrum::from_ratios(&[(1, 2), (1, 3)]).is_err());
        assert!(ExactSpectrum::from_ratios(&[(1, 2), (3, 10), (1, 5)]).is_ok());
    }

    #[test]
    fn constructors() {
        let s = Spectrum::padded_uniform(2, 4).unwrap();
        assert_eq!(s.values(), &[0.5, 0.5, 0.0, 0.0]);
        assert_eq!(s.support(), &[0.5, 0.5]);
        let z = Spectrum::zipf(200, 1.0).unwrap();
        assert_eq!(z.dim(), 200);
        assert!((z.values().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let u = ExactSpectrum::uniform(3).unwrap();
        assert_eq!(u.padded(2).dim(), 5);
        assert!((u.to_spectrum().values()[0] - 1.0 / 3.0).abs() < 1e-16);
    }
}
