//! Schur polynomial evaluation.
//!
//! The production path is the Jacobi-Trudi identity
//! `s_λ = det(h_{λ_i − i + j})` evaluated over the integers: with a common
//! denominator `D` and integer numerators `p_i = α_i D`, every `h_k(α)` equals
//! `h_k(p)/D^k`, and the determinant is homogeneous of degree `n`, so
//! `s_λ(α) = det(h_{λ_i−i+j}(p)) / D^n`. The integer determinant is computed
//! with fraction-free (Bareiss) elimination.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partitions::{hook_lengths, Partition};
use crate::spectrum::ExactSpectrum;

/// Guards for the brute-force tableau oracle.
pub const SSYT_ORACLE_MAX_N: u32 = 10;
pub const SSYT_ORACLE_MAX_D: usize = 5;

/// `h_0, …, h_n` of the integer vector `xs` by the recurrence
/// `h_k(x_1..x_i) = h_k(x_1..x_{i-1}) + x_i h_{k-1}(x_1..x_i)`.
fn complete_homogeneous(xs: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut h = vec![BigInt::zero(); n + 1];
    h[0] = BigInt::one();
    for x in xs {
        for k in 1..=n {
            let add = x * &h[k - 1];
            h[k] += add;
        }
    }
    h
}

/// Determinant of a square integer matrix by Bareiss elimination. All
/// intermediate divisions are exact.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let size = m.len();
    if size == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..size - 1 {
        if m[k][k].is_zero() {
            match (k + 1..size).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[size - 1][size - 1]
}

/// Writes every entry as `p_i / D` with a shared denominator.
fn common_denominator(alpha: &ExactSpectrum) -> (Vec<BigInt>, BigInt) {
    let denom = alpha
        .values()
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let numers = alpha
        .values()
        .iter()
        .map(|v| v.numer() * (&denom / v.denom()))
        .collect();
    (numers, denom)
}

/// Jacobi-Trudi evaluator with the `h_k` table cached, for evaluating many
/// shapes of the same size against one spectrum.
#[derive(Clone, Debug)]
pub struct JacobiTrudi {
    h: Vec<BigInt>,
    denom: BigInt,
    dim: usize,
}

impl JacobiTrudi {
    /// Prepares `h_0..h_{max_n}` of `α`.
    pub fn new(alpha: &ExactSpectrum, max_n: u32) -> Self {
        let (numers, denom) = common_denominator(alpha);
        JacobiTrudi {
            h: complete_homogeneous(&numers, max_n as usize),
            denom,
            dim: alpha.dim(),
        }
    }

    /// `s_λ(α)`; shapes larger than `max_n` panic.
    pub fn eval(&self, lambda: &Partition) -> BigRational {
        if lambda.len() > self.dim {
            return BigRational::zero();
        }
        let n = lambda.n() as usize;
        assert!(n < self.h.len(), "shape larger than the prepared table");
        let len = lambda.len();
        let matrix: Vec<Vec<BigInt>> = (0..len)
            .map(|i| {
                (0..len)
                    .map(|j| {
                        let idx = lambda.rows()[i] as i64 - i as i64 + j as i64;
                        if idx < 0 {
                            BigInt::zero()
                        } else {
                            self.h[idx as usize].clone()
                        }
                    })
                    .collect()
            })
            .collect();
        let det = bareiss_determinant(matrix);
        BigRational::new(det, num_traits::pow(self.denom.clone(), n))
    }
}

/// `s_λ(α)` exactly. Zero when `λ` has more rows than `α` has entries.
pub fn schur_poly(lambda: &Partition, alpha: &ExactSpectrum) -> BigRational {
    JacobiTrudi::new(alpha, lambda.n()).eval(lambda)
}

/// Brute-force `s_λ(α) = Σ_T α^{content(T)}` over semistandard tableaux with
/// entries in `1..=d`. Exponential; only for cross-checking.
pub fn schur_ssyt_oracle(lambda: &Partition, alpha: &ExactSpectrum) -> Result<BigRational> {
    if lambda.n() > SSYT_ORACLE_MAX_N {
        return Err(Error::SizeLimit {
            what: "n (tableau oracle)",
            value: lambda.n() as u64,
            limit: SSYT_ORACLE_MAX_N as u64,
        });
    }
    if alpha.dim() > SSYT_ORACLE_MAX_D {
        return Err(Error::SizeLimit {
            what: "d (tableau oracle)",
            value: alpha.dim() as u64,
            limit: SSYT_ORACLE_MAX_D as u64,
        });
    }
    let cells: Vec<(u32, u32)> = lambda.cells().collect();
    let width = lambda.rows()[0] as usize;
    let mut grid = vec![vec![0usize; width]; lambda.len()];
    let mut total = BigRational::zero();
    fill_ssyt(
        &cells,
        0,
        &mut grid,
        alpha.values(),
        &BigRational::one(),
        &mut total,
    );
    Ok(total)
}

fn fill_ssyt(
    cells: &[(u32, u32)],
    idx: usize,
    grid: &mut Vec<Vec<usize>>,
    alpha: &[BigRational],
    weight: &BigRational,
    total: &mut BigRational,
) {
    if weight.is_zero() {
        return;
    }
    let Some(&(i, j)) = cells.get(idx) else {
        *total += weight;
        return;
    };
    let (i, j) = (i as usize, j as usize);
    // Weakly increasing along rows, strictly increasing down columns.
    let mut lo = 1;
    if j > 0 {
        lo = lo.max(grid[i][j - 1]);
    }
    if i > 0 {
        lo = lo.max(grid[i - 1][j] + 1);
    }
    for v in lo..=alpha.len() {
        grid[i][j] = v;
        let w = weight * &alpha[v - 1];
        fill_ssyt(cells, idx + 1, grid, alpha, &w, total);
    }
    grid[i][j] = 0;
}

/// `s_λ(1/d, …, 1/d)` by the hook-content formula
/// `d^{-n} ∏_{cells} (d + j − i)/hook(i, j)`.
pub fn schur_uniform(lambda: &Partition, d: u64) -> BigRational {
    if d == 0 || lambda.len() as u64 > d {
        return BigRational::zero();
    }
    let mut numer = BigUint::one();
    for (i, j) in lambda.cells() {
        // d + j - i > 0 because i < ℓ(λ) ≤ d.
        numer *= d + j as u64 - i as u64;
    }
    let mut denom = num_traits::pow(BigUint::from(d), lambda.n() as usize);
    for h in hook_lengths(lambda) {
        denom *= h;
    }
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Binary64 Jacobi-Trudi evaluation with partially pivoted elimination.
/// Only meant for quick looks at large `d`; the exact paths never use it.
pub fn schur_poly_f64(lambda: &Partition, alpha: &[f64]) -> f64 {
    if lambda.len() > alpha.len() {
        return 0.0;
    }
    let n = lambda.n() as usize;
    let mut h = vec![0.0; n + 1];
    h[0] = 1.0;
    for &x in alpha {
        for k in 1..=n {
            h[k] += x * h[k - 1];
        }
    }
    let len = lambda.len();
    let mut m: Vec<Vec<f64>> = (0..len)
        .map(|i| {
            (0..len)
                .map(|j| {
                    let idx = lambda.rows()[i] as i64 - i as i64 + j as i64;
                    if idx < 0 {
                        0.0
                    } else {
                        h[idx as usize]
                    }
                })
                .collect()
        })
        .collect();
    let mut det = 1.0;
    for k in 0..len {
        let pivot = (k..len)
            .max_by(|&a, &b| m[a][k].abs().total_cmp(&m[b][k].abs()))
            .unwrap();
        if m[pivot][k] == 0.0 {
            return 0.0;
        }
        if pivot != k {
            m.swap(pivot, k);
            det = -det;
        }
        det *= m[k][k];
        for i in k + 1..len {
            let f = m[i][k] / m[k][k];
            let (top, rest) = m.split_at_mut(i);
            for (x, y) in rest[0][k..len].iter_mut().zip(&top[k][k..len]) {
                *x -= f * y;
            }
        }
    }
    det
}
