//! Young diagrams: representation, enumeration, hook lengths and the number
//! of standard tableaux.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `n` accepted by [`enumerate_partitions`]; `p(60) ≈ 10^6`.
pub const MAX_ENUMERATION_N: u32 = 60;

/// A Young diagram `λ = (λ₁ ≥ λ₂ ≥ … ≥ λ_ℓ > 0)`.
///
/// Serializes as a JSON array of row lengths, e.g. `[4,2,1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    rows: Vec<u32>,
    n: u32,
}

impl Partition {
    pub fn new(rows: Vec<u32>) -> Result<Self> {
        if rows.contains(&0) {
            return Err(Error::InvalidPartition {
                rows,
                reason: "rows must be positive".into(),
            });
        }
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition {
                rows,
                reason: "rows must be non-increasing".into(),
            });
        }
        let n = rows
            .iter()
            .try_fold(0u32, |acc, &r| acc.checked_add(r))
            .ok_or_else(|| Error::InvalidPartition {
                rows: rows.clone(),
                reason: "box count overflows u32".into(),
            })?;
        if n == 0 {
            return Err(Error::InvalidPartition {
                rows,
                reason: "a partition of n ≥ 1 needs at least one box".into(),
            });
        }
        Ok(Partition { rows, n })
    }

    /// Builds a partition from row lengths that may contain trailing zeros
    /// (as produced by the samplers).
    pub fn from_padded(mut rows: Vec<u32>) -> Result<Self> {
        while rows.last() == Some(&0) {
            rows.pop();
        }
        Partition::new(rows)
    }

    /// The one-row diagram `(n)`.
    pub fn single_row(n: u32) -> Result<Self> {
        Partition::new(vec![n])
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of nonzero rows `ℓ(λ)`.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `λ_j` with 1-based `j`; rows beyond `ℓ(λ)` are zero.
    pub fn row(&self, j: usize) -> u32 {
        assert!(j >= 1, "rows are 1-indexed");
        self.rows.get(j - 1).copied().unwrap_or(0)
    }

    /// Length of column `j` (0-based), i.e. the conjugate partition entry.
    pub fn column_len(&self, j: u32) -> u32 {
        self.rows.iter().take_while(|&&r| r > j).count() as u32
    }

    /// Iterates over cells `(i, j)` (0-based row, column) in reading order.
    pub fn cells(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, &r)| (0..r).map(move |j| (i as u32, j)))
    }

    /// `"4|2|1"`, the CSV shape encoding.
    pub fn to_bar_string(&self) -> String {
        let parts: Vec<String> = self.rows.iter().map(u32::to_string).collect();
        parts.join("|")
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;

    fn try_from(rows: Vec<u32>) -> Result<Self> {
        Partition::new(rows)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.rows
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `n` with at most `max_rows` rows, in descending
/// lexicographic order (`(n)` first).
pub fn enumerate_partitions(n: u32, max_rows: Option<usize>) -> Result<Vec<Partition>> {
    if n == 0 {
        return Err(Error::OutOfRange {
            name: "n",
            reason: "partitions are enumerated for n ≥ 1".into(),
        });
    }
    if n > MAX_ENUMERATION_N {
        return Err(Error::SizeLimit {
            what: "n",
            value: n as u64,
            limit: MAX_ENUMERATION_N as u64,
        });
    }
    if max_rows == Some(0) {
        return Err(Error::OutOfRange {
            name: "max_rows",
            reason: "must be at least 1".into(),
        });
    }
    let max_rows = max_rows.unwrap_or(n as usize);
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(n, n, max_rows, &mut current, &mut out);
    Ok(out)
}

fn fill(remaining: u32, cap: u32, rows_left: usize, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        let n = current.iter().sum();
        out.push(Partition {
            rows: current.clone(),
            n,
        });
        return;
    }
    if rows_left == 0 {
        return;
    }
    // Largest part first gives descending lexicographic order.
    for part in (1..=cap.min(remaining)).rev() {
        // Prune: the remaining rows cannot hold what is left.
        if (part as u64) * (rows_left as u64) < remaining as u64 {
            break;
        }
        current.push(part);
        fill(remaining - part, part, rows_left - 1, current, out);
        current.pop();
    }
}

/// Hook length of every cell, in reading order.
pub fn hook_lengths(lambda: &Partition) -> Vec<u32> {
    lambda
        .cells()
        .map(|(i, j)| {
            let arm = lambda.rows[i as usize] - j - 1;
            let leg = lambda.column_len(j) - i - 1;
            arm + leg + 1
        })
        .collect()
}

/// `f^λ`, the number of standard Young tableaux of shape `λ`, via the hook
/// length formula `n!/∏ hooks`.
pub fn dim_sym(lambda: &Partition) -> BigUint {
    let mut numer = BigUint::one();
    for k in 2..=lambda.n() {
        numer *= k;
    }
    let mut denom = BigUint::one();
    for h in hook_lengths(lambda) {
        denom *= h;
    }
    debug_assert!((&numer % &denom) == BigUint::from(0u32));
    numer / denom
}

pub fn factorial(n: u32) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}
