//! Robinson-Schensted insertion, Greene's k-increasing-subsequence oracle,
//! and seeded parallel Monte Carlo sampling of scaled row statistics.
//!
//! A uniform permutation of size `N` pushes forward to the Plancherel
//! measure through its insertion-tableau shape, so row lengths of random
//! diagrams can be sampled by shuffling and bumping.  Only the first two
//! rows are ever needed here, which makes the insertion step a pair of
//! binary searches instead of a full tableau.

use crate::combinat::Partition;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

/// Largest permutation size accepted by the exponential Greene oracle.
pub const GREENE_CAP: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RskError {
    #[error("values must be a permutation of 1..=N")]
    InvalidPermutation,
    #[error("Greene oracle supports N <= {GREENE_CAP}, got {0}")]
    GreeneCap(usize),
    #[error("k must be positive")]
    ZeroK,
    #[error("sample set is empty")]
    EmptySamples,
}

/// A permutation of `{1, …, N}` in one-line notation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Permutation {
    values: Vec<u32>,
}

impl Permutation {
    /// Validates that `values` is a rearrangement of `1..=N`.
    pub fn new(values: Vec<u32>) -> Result<Self, RskError> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            let idx = v as usize;
            if idx == 0 || idx > n || seen[idx - 1] {
                return Err(RskError::InvalidPermutation);
            }
            seen[idx - 1] = true;
        }
        Ok(Permutation { values })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            values: (1..=n as u32).collect(),
        }
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Shape of the RSK insertion tableau of `pi`, by full row bumping.
pub fn rsk_shape(pi: &Permutation) -> Partition {
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for &x in &pi.values {
        let mut carry = x;
        let mut placed = false;
        for row in rows.iter_mut() {
            match row.binary_search(&carry) {
                Err(pos) if pos == row.len() => {
                    row.push(carry);
                    placed = true;
                    break;
                }
                Err(pos) => {
                    std::mem::swap(&mut row[pos], &mut carry);
                }
                Ok(_) => unreachable!("permutation entries are distinct"),
            }
        }
        if !placed {
            rows.push(vec![carry]);
        }
    }
    let parts: Vec<u32> = rows.iter().map(|r| r.len() as u32).collect();
    Partition::new(parts).expect("row lengths of a tableau decrease weakly")
}

/// First two row lengths of the RSK shape, via insertion truncated to two
/// rows: an element bumped out of row 2 would land in row 3 or deeper and
/// can never return, so it is simply dropped.
pub fn two_row_lengths(pi: &Permutation) -> (u32, u32) {
    two_row_lengths_slice(&pi.values)
}

fn two_row_lengths_slice(values: &[u32]) -> (u32, u32) {
    let mut row1: Vec<u32> = Vec::new();
    let mut row2: Vec<u32> = Vec::new();
    for &x in values {
        match row1.binary_search(&x) {
            Err(pos) if pos == row1.len() => row1.push(x),
            Err(pos) => {
                let bumped = std::mem::replace(&mut row1[pos], x);
                match row2.binary_search(&bumped) {
                    Err(pos2) if pos2 == row2.len() => row2.push(bumped),
                    Err(pos2) => row2[pos2] = bumped,
                    Ok(_) => unreachable!("permutation entries are distinct"),
                }
            }
            Ok(_) => unreachable!("permutation entries are distinct"),
        }
    }
    (row1.len() as u32, row2.len() as u32)
}

/// Longest decreasing subsequence length of `seq`.
fn longest_decreasing(seq: &[u32]) -> usize {
    // Patience sorting on the reversed order: tails[j] holds the largest
    // possible last element of a decreasing subsequence of length j+1.
    let mut tails: Vec<u32> = Vec::new();
    for &x in seq {
        // First index with tails[idx] <= x gets replaced; tails stays
        // strictly decreasing.
        let idx = tails.partition_point(|&t| t > x);
        if idx == tails.len() {
            tails.push(x);
        } else {
            tails[idx] = x;
        }
    }
    tails.len()
}

/// Best union sizes for every `k` at once: `out[k]` is the largest subset of
/// positions whose subsequence has no decreasing subsequence longer than
/// `k`.  A sequence splits into `k` increasing subsequences exactly when its
/// longest decreasing subsequence has length at most `k` (Dilworth), so this
/// is Greene's statistic.
fn greene_all_by_scan(values: &[u32]) -> Vec<usize> {
    let n = values.len();
    let mut best = vec![0usize; n + 1];
    let mut subseq = Vec::with_capacity(n);
    for mask in 0u64..(1u64 << n) {
        subseq.clear();
        for (i, &v) in values.iter().enumerate() {
            if mask >> i & 1 == 1 {
                subseq.push(v);
            }
        }
        let lds = longest_decreasing(&subseq);
        if subseq.len() > best[lds] {
            best[lds] = subseq.len();
        }
    }
    // A witness for LDS <= j is also a witness for LDS <= j+1.
    for j in 1..=n {
        best[j] = best[j].max(best[j - 1]);
    }
    best
}

/// Max total length of a union of `k` disjoint increasing subsequences of
/// `pi`, by exhaustive subset scan.  Test oracle only; `N` is capped.
pub fn greene_k_increasing(pi: &Permutation, k: usize) -> Result<u32, RskError> {
    if k == 0 {
        return Err(RskError::ZeroK);
    }
    let n = pi.len();
    if n > GREENE_CAP {
        return Err(RskError::GreeneCap(n));
    }
    let best = greene_all_by_scan(&pi.values);
    Ok(best[k.min(n)] as u32)
}

/// Independent Greene oracle for k = 2: dynamic programming over pairs of
/// disjoint increasing subsequences.  The future of a partial pair depends
/// only on its two tail values, so states are the sorted tail pairs
/// `(a, b)` seen so far, each holding the best total length; every element
/// is either skipped or appended to a subsequence whose tail it exceeds.
#[cfg(test)]
fn greene_two_by_pair_dp(values: &[u32]) -> u32 {
    use std::collections::HashMap;
    // State: (tail_a, tail_b) with tail_a <= tail_b, 0 = empty subsequence.
    // Value: max boxes used so far.
    let mut states: HashMap<(u32, u32), u32> = HashMap::new();
    states.insert((0, 0), 0);
    for &x in values {
        let mut next = states.clone();
        for (&(a, b), &len) in &states {
            for (t, other) in [(a, b), (b, a)] {
                if t < x {
                    let (lo, hi) = if x <= other { (x, other) } else { (other, x) };
                    let e = next.entry((lo, hi)).or_insert(0);
                    *e = (*e).max(len + 1);
                }
            }
        }
        states = next;
    }
    states.values().copied().max().unwrap_or(0)
}

/// Scaled Monte Carlo samples of one row-length statistic.
#[derive(Clone, Debug)]
pub struct ScaledSampleSet {
    pub k: u8,
    pub n: u64,
    pub seed: u64,
    /// Values of `(l⁽ᵏ⁾ − 2√N) / N^{1/6}`, in sampling order.
    pub samples: Vec<f64>,
}

/// Draws `count` independent uniform permutations of size `n` and records
/// the scaled row statistic `χ⁽ᵏ⁾ = (l⁽ᵏ⁾ − 2√N)/N^{1/6}` for each.
///
/// Each sample runs on its own counter-indexed RNG stream, so results are
/// bit-identical for a fixed seed regardless of thread count or scheduling.
pub fn sample_scaled(k: u8, n: u64, count: usize, seed: u64) -> Result<ScaledSampleSet, RskError> {
    if !(k == 1 || k == 2) {
        return Err(RskError::InvalidPermutation);
    }
    if n == 0 {
        return Err(RskError::InvalidPermutation);
    }
    let center = 2.0 * (n as f64).sqrt();
    let scale = (n as f64).powf(1.0 / 6.0);
    let samples: Vec<f64> = (0..count as u64)
        .into_par_iter()
        .map_init(
            || Vec::new(),
            |values, i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i);
                values.clear();
                values.extend(1..=n as u32);
                values.shuffle(&mut rng);
                let (l1, l2) = two_row_lengths_slice(values);
                let l = if k == 1 { l1 } else { l2 };
                (l as f64 - center) / scale
            },
        )
        .collect();
    Ok(ScaledSampleSet {
        k,
        n,
        seed,
        samples,
    })
}

/// Fraction of samples `≤ x` at each grid point.  Weakly increasing when
/// the grid is.
pub fn empirical_cdf(samples: &ScaledSampleSet, grid: &[f64]) -> Result<Vec<f64>, RskError> {
    if samples.samples.is_empty() {
        return Err(RskError::EmptySamples);
    }
    let mut sorted = samples.samples.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("samples are finite"));
    let total = sorted.len() as f64;
    Ok(grid
        .iter()
        .map(|&x| sorted.partition_point(|&s| s <= x) as f64 / total)
        .collect())
}

/// Sup-distance between the empirical CDF of `samples` and reference CDF
/// values `f` on `grid` (evaluated at grid points only).
pub fn ks_distance(samples: &ScaledSampleSet, grid: &[f64], f: &[f64]) -> Result<f64, RskError> {
    let emp = empirical_cdf(samples, grid)?;
    Ok(emp
        .iter()
        .zip(f)
        .map(|(e, r)| (e - r).abs())
        .fold(0.0, f64::max))
}
