//! Monte-Carlo sampling of Young diagrams.
//!
//! `λ ~ SW^n(α)` is drawn as the shape of the Robinson-Schensted insertion
//! tableau of `n` i.i.d. letters with law `α`; `λ ~ Planch(n)` as the shape of
//! a uniform random permutation. Only the shape is tracked: each row keeps the
//! multiset of its letters, and inserting a letter bumps the smallest strictly
//! larger letter of the row into the next row.
//!
//! For very large `n` and a handful of distinct eigenvalues the insertion
//! cost `O(n)` per draw is prohibitive, so [`SwSampler`] can switch to an
//! exact rejection sampler built on the bialternant form of
//! `dim(P_λ)·s_λ(α)`; see [`Strategy::Bialternant`].

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::spectrum::Spectrum;

/// Alphabets up to this size use per-row letter counts; larger ones keep
/// each row as a sorted vector.
const COUNTS_MAX_ALPHABET: usize = 1024;

/// Shape-only Robinson-Schensted row insertion.
#[derive(Clone, Debug)]
pub struct ShapeInserter {
    store: RowStore,
    lens: Vec<u32>,
}

#[derive(Clone, Debug)]
enum RowStore {
    /// Per row: count of each letter plus a bitset of letters present.
    Counts {
        alphabet: usize,
        counts: Vec<Vec<u32>>,
        present: Vec<Vec<u64>>,
    },
    /// Per row: the letters in weakly increasing order.
    Sorted(Vec<Vec<u32>>),
}

impl ShapeInserter {
    /// Inserter for letters `0..alphabet`.
    pub fn new(alphabet: usize) -> Self {
        let store = if alphabet <= COUNTS_MAX_ALPHABET {
            RowStore::Counts {
                alphabet,
                counts: Vec::new(),
                present: Vec::new(),
            }
        } else {
            RowStore::Sorted(Vec::new())
        };
        ShapeInserter {
            store,
            lens: Vec::new(),
        }
    }

    pub fn insert(&mut self, letter: u32) {
        let mut x = letter;
        let mut row = 0;
        match &mut self.store {
            RowStore::Counts {
                alphabet,
                counts,
                present,
            } => loop {
                if row == counts.len() {
                    counts.push(vec![0; *alphabet]);
                    present.push(vec![0; alphabet.div_ceil(64)]);
                    self.lens.push(0);
                }
                let bumped = next_present_above(&present[row], x);
                let c = &mut counts[row];
                c[x as usize] += 1;
                present[row][(x >> 6) as usize] |= 1 << (x & 63);
                match bumped {
                    Some(y) => {
                        c[y as usize] -= 1;
                        if c[y as usize] == 0 {
                            present[row][(y >> 6) as usize] &= !(1 << (y & 63));
                        }
                        x = y;
                        row += 1;
                    }
                    None => {
                        self.lens[row] += 1;
                        return;
                    }
                }
            },
            RowStore::Sorted(rows) => loop {
                if row == rows.len() {
                    rows.push(Vec::new());
                    self.lens.push(0);
                }
                let r = &mut rows[row];
                let pos = r.partition_point(|&y| y <= x);
                if pos == r.len() {
                    r.push(x);
                    self.lens[row] += 1;
                    return;
                }
                std::mem::swap(&mut r[pos], &mut x);
                row += 1;
            },
        }
    }

    /// Current row lengths (no trailing zeros).
    pub fn row_lengths(&self) -> &[u32] {
        &self.lens
    }

    pub fn shape(&self) -> Result<Partition> {
        Partition::new(self.lens.clone())
    }
}

/// Smallest letter `> x` whose bit is set.
fn next_present_above(bits: &[u64], x: u32) -> Option<u32> {
    let start = x as usize + 1;
    let mut word = start >> 6;
    if word >= bits.len() {
        return None;
    }
    let mut w = bits[word] & (!0u64).checked_shl((start & 63) as u32).unwrap_or(0);
    loop {
        if w != 0 {
            return Some((word * 64) as u32 + w.trailing_zeros());
        }
        word += 1;
        if word >= bits.len() {
            return None;
        }
        w = bits[word];
    }
}

/// Shape of the insertion tableau of `word` (letters `1..=d`).
pub fn rs_shape(word: &[u32], d: usize) -> Result<Partition> {
    if word.is_empty() {
        return Err(Error::Empty("word"));
    }
    if d == 0 {
        return Err(Error::OutOfRange {
            name: "d",
            reason: "alphabet must be non-empty".into(),
        });
    }
    let mut ins = ShapeInserter::new(d);
    for &letter in word {
        if letter == 0 || letter as usize > d {
            return Err(Error::OutOfRange {
                name: "word",
                reason: format!("letter {letter} outside 1..={d}"),
            });
        }
        ins.insert(letter - 1);
    }
    ins.shape()
}

/// Inverse-CDF sampler for letters with law `α` (support only).
#[derive(Clone, Debug)]
pub struct LetterSampler {
    cdf: Vec<f64>,
}

impl LetterSampler {
    pub fn new(alpha: &Spectrum) -> Self {
        let mut acc = 0.0;
        let cdf = alpha
            .support()
            .iter()
            .map(|v| {
                acc += v;
                acc
            })
            .collect();
        LetterSampler { cdf }
    }

    pub fn alphabet(&self) -> usize {
        self.cdf.len()
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        let u: f64 = rng.random::<f64>() * self.cdf[self.cdf.len() - 1];
        let idx = self.cdf.partition_point(|&c| c <= u);
        idx.min(self.cdf.len() - 1) as u32
    }
}

/// How [`SwSampler`] realizes a draw. Both strategies have law `SW^n(α)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Robinson-Schensted insertion of `n` i.i.d. letters.
    Rsk,
    /// Rejection from a sorted multinomial using the bialternant formula.
    /// Needs the nonzero eigenvalues to be pairwise distinct and few.
    Bialternant,
}

/// Reusable `SW^n(α)` sampler.
#[derive(Clone, Debug)]
pub struct SwSampler {
    n: u32,
    dim: usize,
    kind: SamplerKind,
}

#[derive(Clone, Debug)]
enum SamplerKind {
    Point,
    Rsk(LetterSampler),
    Bialternant(Box<Bialternant>),
}

impl SwSampler {
    /// Picks the cheaper exact strategy for `(α, n)`.
    pub fn new(alpha: &Spectrum, n: u32) -> Result<Self> {
        let strategy = match Bialternant::new(alpha.support(), n) {
            Some(b) if b.is_cheaper_than_rsk() => Strategy::Bialternant,
            _ => Strategy::Rsk,
        };
        SwSampler::with_strategy(alpha, n, strategy)
    }

    pub fn with_strategy(alpha: &Spectrum, n: u32, strategy: Strategy) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange {
                name: "n",
                reason: "need at least one copy".into(),
            });
        }
        let dim = alpha.dim();
        if alpha.support().len() == 1 {
            return Ok(SwSampler {
                n,
                dim,
                kind: SamplerKind::Point,
            });
        }
        let kind = match strategy {
            Strategy::Rsk => SamplerKind::Rsk(LetterSampler::new(alpha)),
            Strategy::Bialternant => {
                let b = Bialternant::new(alpha.support(), n).ok_or_else(|| Error::OutOfRange {
                    name: "strategy",
                    reason: "rejection sampler needs 2..=6 pairwise distinct nonzero eigenvalues"
                        .into(),
                })?;
                SamplerKind::Bialternant(Box::new(b))
            }
        };
        Ok(SwSampler { n, dim, kind })
    }

    pub fn strategy(&self) -> Strategy {
        match self.kind {
            SamplerKind::Bialternant(_) => Strategy::Bialternant,
            _ => Strategy::Rsk,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// One draw `λ ~ SW^n(α)`; at most `d` rows.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Partition {
        let lambda = match &self.kind {
            SamplerKind::Point => Partition::single_row(self.n).expect("n ≥ 1"),
            SamplerKind::Rsk(letters) => {
                let mut ins = ShapeInserter::new(letters.alphabet());
                for _ in 0..self.n {
                    ins.insert(letters.sample(rng));
                }
                ins.shape().expect("n ≥ 1 letters inserted")
            }
            SamplerKind::Bialternant(b) => b.sample(rng),
        };
        debug_assert!(lambda.len() <= self.dim);
        lambda
    }
}

/// One draw `λ ~ SW^n(α)` by Robinson-Schensted insertion.
pub fn sample_sw_rsk<R: Rng + ?Sized>(alpha: &Spectrum, n: u32, rng: &mut R) -> Result<Partition> {
    Ok(SwSampler::with_strategy(alpha, n, Strategy::Rsk)?.sample(rng))
}

/// One draw `λ ~ SW^n(α)` using the cheaper exact strategy.
pub fn sample_sw<R: Rng + ?Sized>(alpha: &Spectrum, n: u32, rng: &mut R) -> Result<Partition> {
    Ok(SwSampler::new(alpha, n)?.sample(rng))
}

/// One draw `λ ~ Planch(n)`: shape of a uniform random permutation.
pub fn sample_planch<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Result<Partition> {
    if n == 0 {
        return Err(Error::OutOfRange {
            name: "n",
            reason: "need n ≥ 1".into(),
        });
    }
    let mut perm: Vec<u32> = (0..n).collect();
    perm.shuffle(rng);
    let mut ins = ShapeInserter::new(n as usize);
    for x in perm {
        ins.insert(x);
    }
    ins.shape()
}

const BIALTERNANT_MAX_DIM: usize = 6;

/// Exact rejection sampler for `SW^n(α)` with pairwise distinct `α`.
///
/// With `l_i = λ_i + d − i` and `N = n + d(d−1)/2`, Frobenius' formula for
/// `f^λ` and the bialternant form of `s_λ` give
///
/// ```text
/// Pr[λ] = n!/(N! V(α)) · Δ(l) · Σ_σ sgn(σ) ∏_j α_{σ(j)}^{l_j} · N!/∏_j l_j!
/// ```
///
/// where `Δ(l) = ∏_{i<j}(l_i − l_j)` and `V(α) = Δ(α)`. Sorting a draw
/// `X ~ Multinomial(N, α)` proposes `l` with probability
/// `N!/∏ l_j! · Σ_σ ∏_j α_{σ(j)}^{l_j}`, so accepting with probability
/// `Δ(l)/Δ_max · Σ_σ sgn(σ) w_σ / Σ_σ w_σ` yields `SW^n(α)` exactly. The
/// expected number of proposals is `n!/N! · Δ_max/V(α)`, independent of how
/// large `n` is.
#[derive(Clone, Debug)]
struct Bialternant {
    n: u32,
    /// `N = n + d(d−1)/2`.
    trials: u64,
    ln_alpha: Vec<f64>,
    /// Conditional probabilities for the sequential binomial draws.
    conditional: Vec<f64>,
    perms: Vec<(Vec<usize>, f64)>,
    ln_delta_max: f64,
    ln_expected_proposals: f64,
}

impl Bialternant {
    fn new(alpha: &[f64], n: u32) -> Option<Self> {
        let d = alpha.len();
        if !(2..=BIALTERNANT_MAX_DIM).contains(&d) {
            return None;
        }
        if alpha.windows(2).any(|w| w[0] <= w[1]) || alpha[d - 1] <= 0.0 {
            return None;
        }
        let pairs = (d * (d - 1) / 2) as u64;
        let trials = n as u64 + pairs;
        let big_n = trials as f64;
        let ln_delta_max = match d {
            2 => big_n.ln(),
            // max of (a−b)(a−c)(b−c) on a+b+c = N is N³/(6√3).
            3 => 3.0 * big_n.ln() - (6.0 * 3f64.sqrt()).ln(),
            // Δ(l) ≤ ∏_i l_i^{d−i}, maximized at l_i ∝ d − i.
            _ => (0..d)
                .map(|i| {
                    let w = (d - 1 - i) as f64;
                    if w == 0.0 {
                        0.0
                    } else {
                        w * (big_n * w / pairs as f64).ln()
                    }
                })
                .sum(),
        };
        let mut ln_v = 0.0;
        for i in 0..d {
            for j in i + 1..d {
                ln_v += (alpha[i] - alpha[j]).ln();
            }
        }
        let ln_ratio: f64 = (1..=pairs).map(|t| (n as f64 + t as f64).ln()).sum();
        let ln_expected_proposals = ln_delta_max - ln_v - ln_ratio;

        let mut suffix = 0.0;
        let mut conditional = vec![0.0; d];
        for i in (0..d).rev() {
            suffix += alpha[i];
            conditional[i] = (alpha[i] / suffix).clamp(0.0, 1.0);
        }
        Some(Bialternant {
            n,
            trials,
            ln_alpha: alpha.iter().map(|a| a.ln()).collect(),
            conditional,
            perms: signed_permutations(d),
            ln_delta_max,
            ln_expected_proposals,
        })
    }

    fn is_cheaper_than_rsk(&self) -> bool {
        let d = self.ln_alpha.len() as f64;
        // Rough per-draw costs in nanoseconds.
        let proposal = 80.0 * d + 4.0 * d * self.perms.len() as f64;
        let rsk = 8.0 * self.n as f64;
        self.ln_expected_proposals.exp() * proposal < rsk
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Partition {
        let d = self.ln_alpha.len();
        let mut l = vec![0u64; d];
        loop {
            let mut left = self.trials;
            for (i, slot) in l.iter_mut().enumerate() {
                let x = if i + 1 == d || left == 0 {
                    left
                } else {
                    Binomial::new(left, self.conditional[i])
                        .expect("probability in [0,1]")
                        .sample(rng)
                };
                *slot = x;
                left -= x;
            }
            l.sort_unstable_by(|a, b| b.cmp(a));
            if l.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            if rng.random::<f64>() < self.acceptance(&l) {
                let rows = l
                    .iter()
                    .enumerate()
                    .map(|(i, &li)| (li - (d - 1 - i) as u64) as u32)
                    .collect();
                let lambda = Partition::from_padded(rows).expect("valid shape");
                debug_assert_eq!(lambda.n(), self.n);
                return lambda;
            }
        }
    }

    /// `Δ(l)/Δ_max · Σ sgn(σ) w_σ / Σ w_σ` for strictly decreasing `l`.
    fn acceptance(&self, l: &[u64]) -> f64 {
        let d = l.len();
        let mut ln_delta = 0.0;
        for i in 0..d {
            for j in i + 1..d {
                ln_delta += ((l[i] - l[j]) as f64).ln();
            }
        }
        let log_weight = |perm: &[usize]| -> f64 {
            perm.iter()
                .zip(l)
                .map(|(&s, &lj)| lj as f64 * self.ln_alpha[s])
                .sum()
        };
        // The identity is the heaviest term (rearrangement inequality).
        let base = log_weight(&self.perms[0].0);
        let mut signed = 0.0;
        let mut total = 0.0;
        for (perm, sign) in &self.perms {
            let w = (log_weight(perm) - base).exp();
            signed += sign * w;
            total += w;
        }
        ((ln_delta - self.ln_delta_max).exp() * signed / total).clamp(0.0, 1.0)
    }
}

/// All permutations of `0..d` with their signs, identity first.
fn signed_permutations(d: usize) -> Vec<(Vec<usize>, f64)> {
    fn heap(k: usize, a: &mut Vec<usize>, sign: &mut f64, out: &mut Vec<(Vec<usize>, f64)>) {
        if k <= 1 {
            out.push((a.clone(), *sign));
            return;
        }
        for i in 0..k - 1 {
            heap(k - 1, a, sign, out);
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
            *sign = -*sign;
        }
        heap(k - 1, a, sign, out);
    }
    let mut a: Vec<usize> = (0..d).collect();
    let mut out = Vec::new();
    let mut sign = 1.0;
    heap(d, &mut a, &mut sign, &mut out);
    out
}
