//! Exact probability tables over Young diagrams.
//!
//! `SW^n(α)` assigns `λ ⊢ n` the probability `f^λ · s_λ(α)`; `Planch(n)`
//! assigns `(f^λ)²/n!`. Everything here is exact rational arithmetic, so
//! normalization, distances and moments are checked with equality rather
//! than tolerances.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{rational_string, rational_to_f64};
use crate::partitions::{dim_sym, enumerate_partitions, factorial, Partition};
use crate::schur::{schur_uniform, JacobiTrudi};
use crate::spectrum::ExactSpectrum;

pub const DEFAULT_EXACT_CAP: u32 = 16;
pub const HARD_EXACT_CAP: u32 = 30;

/// Largest `n` the exact tables are built for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactCap(u32);

impl ExactCap {
    pub fn new(cap: u32) -> Result<Self> {
        if cap == 0 || cap > HARD_EXACT_CAP {
            return Err(Error::SizeLimit {
                what: "exact cap",
                value: cap as u64,
                limit: HARD_EXACT_CAP as u64,
            });
        }
        Ok(ExactCap(cap))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    fn check(self, n: u32) -> Result<()> {
        if n == 0 {
            return Err(Error::OutOfRange {
                name: "n",
                reason: "need n ≥ 1".into(),
            });
        }
        if n > self.0 {
            return Err(Error::SizeLimit {
                what: "n (exact tables)",
                value: n as u64,
                limit: self.0 as u64,
            });
        }
        Ok(())
    }
}

impl Default for ExactCap {
    fn default() -> Self {
        ExactCap(DEFAULT_EXACT_CAP)
    }
}

/// Exact distribution over partitions of `n`, in enumeration order.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactDistribution {
    n: u32,
    entries: Vec<(Partition, BigRational)>,
}

impl ExactDistribution {
    pub fn new(n: u32, entries: Vec<(Partition, BigRational)>) -> Result<Self> {
        if let Some((lam, _)) = entries.iter().find(|(lam, _)| lam.n() != n) {
            return Err(Error::MismatchedN {
                left: n,
                right: lam.n(),
            });
        }
        if entries.iter().any(|(_, p)| p.is_negative()) {
            return Err(Error::OutOfRange {
                name: "entries",
                reason: "negative probability".into(),
            });
        }
        Ok(ExactDistribution { n, entries })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn entries(&self) -> &[(Partition, BigRational)] {
        &self.entries
    }

    pub fn prob(&self, lambda: &Partition) -> BigRational {
        self.entries
            .iter()
            .find(|(l, _)| l == lambda)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> BigRational {
        self.entries.iter().map(|(_, p)| p).sum()
    }

    pub fn is_normalized(&self) -> bool {
        self.total().is_one()
    }

    /// Probabilities as binary64, keyed by shape.
    pub fn to_f64_map(&self) -> HashMap<Partition, f64> {
        self.entries
            .iter()
            .map(|(l, p)| (l.clone(), rational_to_f64(p)))
            .collect()
    }
}

impl Serialize for ExactDistribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            shape: &'a Partition,
            p: String,
        }
        let entries: Vec<Entry<'_>> = self
            .entries
            .iter()
            .map(|(shape, p)| Entry {
                shape,
                p: rational_string(p),
            })
            .collect();
        let mut s = serializer.serialize_struct("ExactDistribution", 2)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("entries", &entries)?;
        s.end()
    }
}

/// `SW^n(α)` with the default cap.
pub fn sw_exact(alpha: &ExactSpectrum, n: u32) -> Result<ExactDistribution> {
    sw_exact_with_cap(alpha, n, ExactCap::default())
}

pub fn sw_exact_with_cap(alpha: &ExactSpectrum, n: u32, cap: ExactCap) -> Result<ExactDistribution> {
    cap.check(n)?;
    let jt = JacobiTrudi::new(alpha, n);
    let entries = enumerate_partitions(n, Some(alpha.dim()))?
        .into_iter()
        .map(|lam| {
            let p = BigRational::from_integer(BigInt::from(dim_sym(&lam))) * jt.eval(&lam);
            (lam, p)
        })
        .collect();
    ExactDistribution::new(n, entries)
}

/// `SW_d^n`, the Schur-Weyl distribution of the maximally mixed state, via
/// the hook-content formula. `d` may be far larger than `n`.
pub fn sw_uniform_exact(d: u64, n: u32, cap: ExactCap) -> Result<ExactDistribution> {
    cap.check(n)?;
    if d == 0 {
        return Err(Error::OutOfRange {
            name: "d",
            reason: "need d ≥ 1".into(),
        });
    }
    let max_rows = d.min(n as u64) as usize;
    let entries = enumerate_partitions(n, Some(max_rows))?
        .into_iter()
        .map(|lam| {
            let p = BigRational::from_integer(BigInt::from(dim_sym(&lam))) * schur_uniform(&lam, d);
            (lam, p)
        })
        .collect();
    ExactDistribution::new(n, entries)
}

/// `Planch(n)`: `(f^λ)²/n!`.
pub fn planch_exact(n: u32) -> Result<ExactDistribution> {
    planch_exact_with_cap(n, ExactCap::default())
}

pub fn planch_exact_with_cap(n: u32, cap: ExactCap) -> Result<ExactDistribution> {
    cap.check(n)?;
    let n_fact = BigInt::from(factorial(n));
    let entries = enumerate_partitions(n, None)?
        .into_iter()
        .map(|lam| {
            let f = BigInt::from(dim_sym(&lam));
            let p = BigRational::new(&f * &f, n_fact.clone());
            (lam, p)
        })
        .collect();
    ExactDistribution::new(n, entries)
}

/// `Σ_λ |P[λ] − Q[λ]|` over the union of supports (not halved).
pub fn l1_distance(p: &ExactDistribution, q: &ExactDistribution) -> Result<BigRational> {
    if p.n != q.n {
        return Err(Error::MismatchedN {
            left: p.n,
            right: q.n,
        });
    }
    let q_map: HashMap<&Partition, &BigRational> = q.entries.iter().map(|(l, v)| (l, v)).collect();
    let mut total = BigRational::zero();
    for (lam, pv) in &p.entries {
        match q_map.get(lam) {
            Some(qv) => total += (pv - *qv).abs(),
            None => total += pv.abs(),
        }
    }
    let p_keys: std::collections::HashSet<&Partition> = p.entries.iter().map(|(l, _)| l).collect();
    for (lam, qv) in &q.entries {
        if !p_keys.contains(lam) {
            total += qv.abs();
        }
    }
    Ok(total)
}

/// One cell of the `SW_d^n` versus `Planch(n)` sandwich check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChwCheck {
    pub n: u32,
    pub d: u32,
    #[serde(serialize_with = "ser_rational")]
    pub lower: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub value: BigRational,
    /// `√2·n/d`, reported in binary64; the pass decision is exact.
    pub upper: f64,
    pub pass: bool,
}

fn ser_rational<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(r))
}

/// Checks `n/(36d) ≤ ‖SW_d^n − Planch(n)‖₁ ≤ √2·n/d` exactly. The upper
/// side is compared as `value² ≤ 2n²/d²`.
pub fn check_chw_bounds(n: u32, d: u32, cap: ExactCap) -> Result<ChwCheck> {
    if n < 2 || n > d {
        return Err(Error::OutOfRange {
            name: "(n, d)",
            reason: format!("need 2 ≤ n ≤ d, got n = {n}, d = {d}"),
        });
    }
    cap.check(d)?;
    let sw = sw_uniform_exact(d as u64, n, cap)?;
    let planch = planch_exact_with_cap(n, cap)?;
    let value = l1_distance(&sw, &planch)?;
    let lower = BigRational::new(BigInt::from(n), BigInt::from(36u64 * d as u64));
    let upper_sq = BigRational::new(BigInt::from(2u64 * (n as u64).pow(2)), BigInt::from((d as u64).pow(2)));
    let pass = lower <= value && &value * &value <= upper_sq;
    Ok(ChwCheck {
        n,
        d,
        lower,
        value,
        upper: std::f64::consts::SQRT_2 * n as f64 / d as f64,
        pass,
    })
}

/// The full grid `2 ≤ n ≤ d ≤ max_d`.
pub fn chw_grid(max_d: u32, cap: ExactCap) -> Result<Vec<ChwCheck>> {
    let mut out = Vec::new();
    for d in 2..=max_d {
        for n in 2..=d {
            out.push(check_chw_bounds(n, d, cap)?);
        }
    }
    Ok(out)
}

/// `E_{λ∼SW^n(α)}[(λ_j − α_j n)²]`, with `λ_j = 0` past the last row.
pub fn exact_row_second_moment(alpha: &ExactSpectrum, n: u32, j: usize) -> Result<BigRational> {
    if j == 0 || j > alpha.dim() {
        return Err(Error::OutOfRange {
            name: "j",
            reason: format!("need 1 ≤ j ≤ d = {}, got {j}", alpha.dim()),
        });
    }
    let table = sw_exact(alpha, n)?;
    let center = &alpha.values()[j - 1] * BigRational::from_integer(BigInt::from(n));
    Ok(table
        .entries
        .iter()
        .map(|(lam, p)| {
            let dev = BigRational::from_integer(BigInt::from(lam.row(j))) - &center;
            &dev * &dev * p
        })
        .sum())
}

/// Exact law of `f(λ)` for `λ ∼ P`, sorted by value.
pub fn estimator_pushforward<V, F>(p: &ExactDistribution, f: F) -> Vec<(V, BigRational)>
where
    V: Ord,
    F: Fn(&Partition) -> V,
{
    let mut acc: BTreeMap<V, BigRational> = BTreeMap::new();
    for (lam, prob) in &p.entries {
        *acc.entry(f(lam)).or_insert_with(BigRational::zero) += prob;
    }
    acc.into_iter().collect()
}

/// `Σ_i (λ_i/n)^q` for integer `q`, exactly.
pub fn plugin_exact(lambda: &Partition, q: u32) -> BigRational {
    let n = BigInt::from(lambda.n());
    lambda
        .rows()
        .iter()
        .map(|&r| num_traits::pow(BigRational::new(BigInt::from(r), n.clone()), q as usize))
        .sum()
}

/// One row of the moment calibration table.
#[derive(Clone, Debug, Serialize)]
pub struct MomentRow {
    pub spectrum: String,
    pub n: u32,
    pub j: usize,
    #[serde(serialize_with = "ser_rational")]
    pub moment: BigRational,
    /// `moment / n` in binary64.
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Calibration {
    pub max_ratio: f64,
    pub rows: Vec<MomentRow>,
}

/// Spectra used for moment calibration and the exact identity checks.
pub fn reference_spectra() -> Vec<(String, ExactSpectrum)> {
    vec![
        ("1".into(), ExactSpectrum::from_ratios(&[(1, 1)]).unwrap()),
        ("1/2,1/2".into(), ExactSpectrum::from_ratios(&[(1, 2), (1, 2)]).unwrap()),
        (
            "1/2,3/10,1/5".into(),
            ExactSpectrum::from_ratios(&[(1, 2), (3, 10), (1, 5)]).unwrap(),
        ),
        ("uniform(4)".into(), ExactSpectrum::uniform(4).unwrap()),
    ]
}

/// `max_{n ≤ max_n, j ≤ d} E[(λ_j − α_j n)²]/n` over the given spectra: an
/// empirical value for the constant `c` of the second-moment bound.
pub fn calibrate_c(spectra: &[(String, ExactSpectrum)], max_n: u32) -> Result<Calibration> {
    let mut rows = Vec::new();
    let mut max_ratio = 0.0f64;
    for (label, alpha) in spectra {
        for n in 1..=max_n {
            let table = sw_exact(alpha, n)?;
            for j in 1..=alpha.dim() {
                let center = &alpha.values()[j - 1] * BigRational::from_integer(BigInt::from(n));
                let moment: BigRational = table
                    .entries
                    .iter()
                    .map(|(lam, p)| {
                        let dev = BigRational::from_integer(BigInt::from(lam.row(j))) - &center;
                        &dev * &dev * p
                    })
                    .sum();
                let ratio = rational_to_f64(&moment) / n as f64;
                max_ratio = max_ratio.max(ratio);
                rows.push(MomentRow {
                    spectrum: label.clone(),
                    n,
                    j,
                    moment,
                    ratio,
                });
            }
        }
    }
    Ok(Calibration { max_ratio, rows })
}
