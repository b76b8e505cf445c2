//! Exact Young-diagram combinatorics: enumeration, dimensions, Plancherel
//! probabilities, and finite-N row-length distribution functions.
//!
//! Everything in this module is exact.  Dimensions are big integers,
//! probabilities are reduced big rationals, and floating point is deliberately
//! absent: `21!` already overflows 64 bits, and identities like
//! `Σ_{μ⊢N} d_μ² = N!` are only worth checking if they come out exactly.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{BigUint, One, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

/// Partitions larger than this are refused by [`partitions_of`] and
/// [`exact_row_cdf`]; p(60) = 966467 shapes is the practical ceiling for
/// exact desk-scale enumeration.
pub const ENUMERATION_CAP: u32 = 60;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CombinatError {
    #[error("partition parts must be positive and weakly decreasing")]
    InvalidPartition,
    #[error("enumeration of partitions of {0} exceeds the cap of {ENUMERATION_CAP}")]
    EnumerationCap(u32),
    #[error("row index {0} is not supported (only rows 1 and 2 are)")]
    UnsupportedRow(u8),
}

/// An integer partition `μ = (μ_1 ≥ μ_2 ≥ … ≥ μ_r > 0)`, i.e. a Young
/// diagram with `μ_i` boxes in row `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition, rejecting parts that are zero or increase.
    pub fn new(parts: Vec<u32>) -> Result<Self, CombinatError> {
        let ok = parts.iter().all(|&p| p > 0)
            && parts.windows(2).all(|w| w[0] >= w[1]);
        if ok {
            Ok(Partition { parts })
        } else {
            Err(CombinatError::InvalidPartition)
        }
    }

    /// The empty partition of 0.
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of boxes, `N = Σ μ_i`.
    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// Length of row `k` (1-based); zero when the diagram has fewer than
    /// `k` rows.
    pub fn row(&self, k: usize) -> u32 {
        if k == 0 {
            0
        } else {
            self.parts.get(k - 1).copied().unwrap_or(0)
        }
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.parts.len()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Calls `visit` once per partition of `n`, in reverse lexicographic order,
/// passing the parts as a slice valid only for the duration of the call.
fn for_each_partition(n: u32, visit: &mut impl FnMut(&[u32])) {
    fn rec(remaining: u32, max_part: u32, buf: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
        if remaining == 0 {
            visit(buf);
            return;
        }
        let hi = remaining.min(max_part);
        for first in (1..=hi).rev() {
            buf.push(first);
            rec(remaining - first, first, buf, visit);
            buf.pop();
        }
    }
    let mut buf = Vec::new();
    rec(n, n.max(1), &mut buf, visit);
}

/// All partitions of `n` in reverse lexicographic order:
/// `(4), (3,1), (2,2), (2,1,1), (1,1,1,1)` for `n = 4`.
pub fn partitions_of(n: u32) -> Result<Vec<Partition>, CombinatError> {
    if n > ENUMERATION_CAP {
        return Err(CombinatError::EnumerationCap(n));
    }
    let mut out = Vec::new();
    for_each_partition(n, &mut |parts| {
        out.push(Partition {
            parts: parts.to_vec(),
        });
    });
    Ok(out)
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= BigUint::from(i);
    }
    acc
}

fn dim_hook_parts(parts: &[u32]) -> BigUint {
    let n: u64 = parts.iter().map(|&p| p as u64).sum();
    if parts.is_empty() {
        return BigUint::one();
    }
    // Column heights of the diagram, so the hook of box (i, j) is
    // (arm) + (leg) + 1 = (μ_i − j) + (col_j − i) − 1 with 0-based i, j.
    let width = parts[0] as usize;
    let mut col = vec![0u32; width];
    for &p in parts {
        for c in col.iter_mut().take(p as usize) {
            *c += 1;
        }
    }
    let mut hooks = BigUint::one();
    for (i, &p) in parts.iter().enumerate() {
        for j in 0..p as usize {
            let h = (p as u64 - j as u64) + (col[j] as u64 - i as u64) - 1;
            hooks *= BigUint::from(h);
        }
    }
    factorial(n) / hooks
}

/// Number of standard Young tableaux of shape `mu`, by the hook length
/// formula `d_μ = N! / Π hooks`.
pub fn dim_hook(mu: &Partition) -> BigUint {
    dim_hook_parts(&mu.parts)
}

/// The same dimension through the Frobenius-Young determinant evaluation:
/// with `h_j = μ_j + r − j` over the `r` rows,
/// `d_μ = N! · Π_{i<j}(h_i − h_j) / Π_j h_j!`.
pub fn dim_frobenius(mu: &Partition) -> BigUint {
    let parts = &mu.parts;
    if parts.is_empty() {
        return BigUint::one();
    }
    let r = parts.len() as u64;
    let h: Vec<u64> = parts
        .iter()
        .enumerate()
        .map(|(j, &p)| p as u64 + r - (j as u64 + 1))
        .collect();
    let mut vandermonde = BigUint::one();
    for i in 0..h.len() {
        for j in i + 1..h.len() {
            vandermonde *= BigUint::from(h[i] - h[j]);
        }
    }
    let mut denom = BigUint::one();
    for &hj in &h {
        denom *= factorial(hj);
    }
    factorial(mu.size()) * vandermonde / denom
}

/// Plancherel probability `d_μ² / N!` as a reduced rational.
pub fn plancherel_prob(mu: &Partition) -> BigRational {
    let d = dim_hook(mu);
    let num = BigInt::from(&d * &d);
    let den = BigInt::from(factorial(mu.size()));
    BigRational::new(num, den)
}

/// Conjugate (transposed) diagram.
pub fn transpose(mu: &Partition) -> Partition {
    let parts = &mu.parts;
    if parts.is_empty() {
        return Partition::empty();
    }
    let width = parts[0] as usize;
    let mut t = vec![0u32; width];
    for &p in parts {
        for c in t.iter_mut().take(p as usize) {
            *c += 1;
        }
    }
    Partition { parts: t }
}

/// Joint weight of the first two row lengths under the unnormalized
/// Plancherel measure: entries `(l1, l2, Σ d_μ²)` summed over all shapes of
/// `n` with those first two rows.  Memoized: exact enumeration at, say,
/// N = 40 is worth doing once, not once per query.
fn row_histogram(n: u32) -> Result<Arc<Vec<(u32, u32, BigUint)>>, CombinatError> {
    if n > ENUMERATION_CAP {
        return Err(CombinatError::EnumerationCap(n));
    }
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<(u32, u32, BigUint)>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("row histogram cache poisoned");
    if let Some(hit) = guard.get(&n) {
        return Ok(Arc::clone(hit));
    }
    let mut acc: HashMap<(u32, u32), BigUint> = HashMap::new();
    for_each_partition(n, &mut |parts| {
        let d = dim_hook_parts(parts);
        let l1 = parts.first().copied().unwrap_or(0);
        let l2 = parts.get(1).copied().unwrap_or(0);
        *acc.entry((l1, l2)).or_insert_with(BigUint::zero) += &d * &d;
    });
    let mut rows: Vec<(u32, u32, BigUint)> =
        acc.into_iter().map(|((a, b), w)| (a, b, w)).collect();
    rows.sort();
    let rows = Arc::new(rows);
    guard.insert(n, Arc::clone(&rows));
    Ok(rows)
}

/// Exact `q⁽ᵏ⁾ₙ,ₙ = Prob(l⁽ᵏ⁾ ≤ n)` for a Plancherel-random partition of
/// `big_n`, with the convention `q⁽ᵏ⁾ₙ,₀ = 1`.
pub fn exact_row_cdf(k: u8, n: u32, big_n: u32) -> Result<BigRational, CombinatError> {
    if !(k == 1 || k == 2) {
        return Err(CombinatError::UnsupportedRow(k));
    }
    let hist = row_histogram(big_n)?;
    let mut num = BigUint::zero();
    for (l1, l2, w) in hist.iter() {
        let l = if k == 1 { *l1 } else { *l2 };
        if l <= n {
            num += w;
        }
    }
    Ok(BigRational::new(
        BigInt::from(num),
        BigInt::from(factorial(big_n as u64)),
    ))
}
