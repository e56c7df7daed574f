//! Lexicographically ordered k-subsets of `{1, ..., n}`.
//!
//! Tuple entries are 1-based, ranks are 0-based: `rank((1, 2, ..., k)) == 0`.
//! The rank of a tuple is its row (or column) position in a k-th compound.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper limit on `C(n, k)` for anything that materializes compounds.
pub const DEFAULT_MAX_COMPOUND: usize = 1_000_000;

/// Environment variable that overrides [`DEFAULT_MAX_COMPOUND`].
pub const MAX_COMPOUND_ENV: &str = "KCONTRACT_MAX_COMPOUND";

// 0 means "not yet resolved".
static MAX_COMPOUND: AtomicUsize = AtomicUsize::new(0);

/// Current capacity limit on `C(n, k)`.
///
/// Resolved once from `KCONTRACT_MAX_COMPOUND` if set and valid, otherwise
/// [`DEFAULT_MAX_COMPOUND`]; [`set_max_compound`] overrides both.
pub fn max_compound() -> usize {
    match MAX_COMPOUND.load(Ordering::Relaxed) {
        0 => {
            let limit = std::env::var(MAX_COMPOUND_ENV)
                .ok()
                .and_then(|v| v.trim().parse::<usize>().ok())
                .filter(|&v| v > 0)
                .unwrap_or(DEFAULT_MAX_COMPOUND);
            MAX_COMPOUND.store(limit, Ordering::Relaxed);
            limit
        }
        v => v,
    }
}

pub fn set_max_compound(limit: usize) {
    MAX_COMPOUND.store(limit.max(1), Ordering::Relaxed);
}

/// Exact binomial coefficient; overflow of `usize` is a capacity error.
pub fn binomial(n: usize, k: usize) -> Result<usize> {
    if k > n {
        return Err(Error::InvalidDimension { k, n });
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is exact at every step.
        acc = acc.checked_mul((n - i) as u128).ok_or_else(|| overflow(n, k))? / (i as u128 + 1);
        if acc > usize::MAX as u128 {
            return Err(overflow(n, k));
        }
    }
    Ok(acc as usize)
}

fn overflow(n: usize, k: usize) -> Error {
    Error::Capacity { what: format!("C({n}, {k}) overflows usize"), limit: usize::MAX }
}

/// `C(n, k)` after checking it against [`max_compound`].
pub fn checked_count(n: usize, k: usize) -> Result<usize> {
    let count = binomial(n, k)?;
    let limit = max_compound();
    if count > limit {
        return Err(Error::Capacity { what: format!("C({n}, {k}) = {count}"), limit });
    }
    Ok(count)
}

fn check_dims(k: usize, n: usize) -> Result<()> {
    if n < 1 || k < 1 || k > n {
        return Err(Error::InvalidDimension { k, n });
    }
    Ok(())
}

/// Strictly increasing tuple of 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexTuple(Vec<usize>);

impl IndexTuple {
    /// Validates that `entries` is strictly increasing within `[1, n]`.
    pub fn new(entries: Vec<usize>, n: usize) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidTuple("empty tuple".into()));
        }
        if entries.iter().any(|&e| e < 1 || e > n) {
            return Err(Error::InvalidTuple(format!("{entries:?} has entries outside [1, {n}]")));
        }
        if entries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidTuple(format!("{entries:?} is not strictly increasing")));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entries shifted to 0-based positions.
    pub fn zero_based(&self) -> Vec<usize> {
        self.0.iter().map(|&e| e - 1).collect()
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// 0-based lexicographic position of a k-subset of `{1..n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LexIndex {
    pub rank: usize,
    pub k: usize,
    pub n: usize,
}

impl LexIndex {
    pub fn new(rank: usize, k: usize, n: usize) -> Result<Self> {
        check_dims(k, n)?;
        if rank >= binomial(n, k)? {
            return Err(Error::InvalidRank { rank, k, n });
        }
        Ok(Self { rank, k, n })
    }
}

/// All `C(n, k)` increasing k-tuples of `{1..n}` in lexicographic order.
pub fn enumerate_qkn(k: usize, n: usize) -> Result<Vec<IndexTuple>> {
    check_dims(k, n)?;
    checked_count(n, k)?;
    Ok(combinations(k, n).into_iter().map(|c| IndexTuple(c.into_iter().map(|e| e + 1).collect())).collect())
}

/// Lexicographic rank of a tuple in `Q_{k,n}`.
pub fn rank(t: &IndexTuple, n: usize) -> Result<LexIndex> {
    let k = t.len();
    let validated = IndexTuple::new(t.0.clone(), n)?;
    let zb = validated.zero_based();
    Ok(LexIndex { rank: rank_zero_based(&zb, n), k, n })
}

/// Inverse of [`rank`].
pub fn unrank(r: LexIndex) -> Result<IndexTuple> {
    check_dims(r.k, r.n)?;
    if r.rank >= binomial(r.n, r.k)? {
        return Err(Error::InvalidRank { rank: r.rank, k: r.k, n: r.n });
    }
    let mut rem = r.rank;
    let mut out = Vec::with_capacity(r.k);
    let mut next = 1;
    for slot in 0..r.k {
        let left = r.k - slot - 1;
        let mut v = next;
        loop {
            // Number of tuples whose entry at this slot equals v.
            let block = binomial(r.n - v, left).expect("n - v >= left inside the valid range");
            if rem < block {
                break;
            }
            rem -= block;
            v += 1;
        }
        out.push(v);
        next = v + 1;
    }
    Ok(IndexTuple(out))
}

/// 0-based k-subsets of `{0..n}` in lexicographic order. Callers check dims.
pub(crate) fn combinations(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(c.clone());
        let mut i = k;
        while i > 0 && c[i - 1] == n - k + (i - 1) {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        c[i - 1] += 1;
        for j in i..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// Rank of a validated, 0-based, strictly increasing subset of `{0..n}`.
pub(crate) fn rank_zero_based(c: &[usize], n: usize) -> usize {
    let k = c.len();
    let mut r = 0;
    let mut start = 0;
    for (slot, &e) in c.iter().enumerate() {
        for v in start..e {
            r += binomial(n - v - 1, k - slot - 1).expect("sub-binomial of a valid count");
        }
        start = e + 1;
    }
    r
}
