//! Information-theoretic and pair-counting comparison of two pixel partitions.
//!
//! Each connected component (foreground or background) of a labeling is one
//! cluster; two labelings of the same grid are compared through their
//! contingency table.

use alloc::vec::Vec;

use crate::labeling::{ComponentLabeling, Phase};
use crate::{Error, Result};

/// Which pixels take part in the comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Scope {
    /// Every pixel; background components are clusters too.
    #[default]
    Full,
    /// Only pixels that are foreground in both labelings.
    FgOnly,
}

/// Logarithm base for entropies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LogBase {
    /// Nats.
    #[default]
    E,
    /// Bits.
    Two,
}

/// Sparse co-occurrence counts of cluster ids from two partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    /// Non-zero cells `(x id, y id, count)`, sorted by ids.
    pub entries: Vec<(u32, u32, u64)>,
    /// Non-zero row marginals `(x id, count)`, sorted.
    pub rows: Vec<(u32, u64)>,
    /// Non-zero column marginals `(y id, count)`, sorted.
    pub cols: Vec<(u32, u64)>,
    /// Number of pixels counted.
    pub total: u64,
}

impl ContingencyTable {
    /// Builds the table from two aligned label sequences.
    pub fn from_labels(x: &[u32], y: &[u32]) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimsMismatch {
                left: alloc::vec![x.len()],
                right: alloc::vec![y.len()],
            });
        }
        Ok(Self::from_pairs(x.iter().copied().zip(y.iter().copied())))
    }

    fn from_pairs(pairs: impl Iterator<Item = (u32, u32)>) -> Self {
        let mut keys: Vec<u64> = pairs.map(|(a, b)| (a as u64) << 32 | b as u64).collect();
        keys.sort_unstable();
        let total = keys.len() as u64;

        let mut entries: Vec<(u32, u32, u64)> = Vec::new();
        for k in keys {
            let (a, b) = ((k >> 32) as u32, k as u32);
            match entries.last_mut() {
                Some(last) if last.0 == a && last.1 == b => last.2 += 1,
                _ => entries.push((a, b, 1)),
            }
        }
        let rows = marginal(entries.iter().map(|&(a, _, n)| (a, n)));
        let cols = marginal(entries.iter().map(|&(_, b, n)| (b, n)));
        ContingencyTable {
            entries,
            rows,
            cols,
            total,
        }
    }
}

fn marginal(cells: impl Iterator<Item = (u32, u64)>) -> Vec<(u32, u64)> {
    let mut v: Vec<(u32, u64)> = cells.collect();
    v.sort_unstable_by_key(|&(id, _)| id);
    let mut out: Vec<(u32, u64)> = Vec::new();
    for (id, n) in v {
        match out.last_mut() {
            Some(last) if last.0 == id => last.1 += n,
            _ => out.push((id, n)),
        }
    }
    out
}

/// Contingency table of two labelings of the same grid.
pub fn build_contingency(
    x: &ComponentLabeling,
    y: &ComponentLabeling,
    scope: Scope,
) -> Result<ContingencyTable> {
    if x.dims() != y.dims() {
        return Err(Error::DimsMismatch {
            left: x.dims().to_vec(),
            right: y.dims().to_vec(),
        });
    }
    let pairs = x.labels().iter().copied().zip(y.labels().iter().copied());
    let table = match scope {
        Scope::Full => ContingencyTable::from_pairs(pairs),
        Scope::FgOnly => ContingencyTable::from_pairs(pairs.filter(|&(a, b)| {
            x.phase_of(a) == Phase::Foreground && y.phase_of(b) == Phase::Foreground
        })),
    };
    if table.total == 0 {
        return Err(Error::UndefinedMetric(
            "no pixel is foreground in both masks",
        ));
    }
    Ok(table)
}

fn entropy(counts: impl Iterator<Item = u64>, total: f64) -> f64 {
    counts
        .filter(|&n| n > 0)
        .map(|n| {
            let p = n as f64 / total;
            -p * libm::log(p)
        })
        .sum()
}

/// `H(X|Y) + H(Y|X)` of the partitions behind the table.
pub fn variation_of_information(t: &ContingencyTable, base: LogBase) -> f64 {
    if t.total == 0 {
        return 0.0;
    }
    let n = t.total as f64;
    let hxy = entropy(t.entries.iter().map(|e| e.2), n);
    let hx = entropy(t.rows.iter().map(|r| r.1), n);
    let hy = entropy(t.cols.iter().map(|c| c.1), n);
    let voi = (2.0 * hxy - hx - hy).max(0.0);
    match base {
        LogBase::E => voi,
        LogBase::Two => voi / core::f64::consts::LN_2,
    }
}

/// Rand index, adjusted Rand index and adapted Rand error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandScores {
    /// Fraction of pixel pairs on which the partitions agree.
    pub ri: f64,
    /// Rand index corrected for chance (1 for identical partitions).
    pub ari: f64,
    /// One minus the Rand F-score `2 sum p_ij^2 / (sum s_i^2 + sum t_j^2)`.
    pub are: f64,
}

fn pairs(n: u64) -> f64 {
    let n = n as f64;
    n * (n - 1.0) / 2.0
}

/// Pair-counting scores of the table. Needs at least two pixels.
pub fn rand_scores(t: &ContingencyTable) -> Result<RandScores> {
    if t.total < 2 {
        return Err(Error::UndefinedMetric(
            "Rand scores need at least two pixels",
        ));
    }
    let total_pairs = pairs(t.total);
    let same_both: f64 = t.entries.iter().map(|e| pairs(e.2)).sum();
    let same_x: f64 = t.rows.iter().map(|r| pairs(r.1)).sum();
    let same_y: f64 = t.cols.iter().map(|c| pairs(c.1)).sum();

    let ri = (total_pairs + 2.0 * same_both - same_x - same_y) / total_pairs;

    let expected = same_x * same_y / total_pairs;
    let max_index = 0.5 * (same_x + same_y);
    let ari = if max_index == expected {
        1.0
    } else {
        (same_both - expected) / (max_index - expected)
    };

    let sq = |v: u64| (v as u128) * (v as u128);
    let joint: u128 = t.entries.iter().map(|e| sq(e.2)).sum();
    let marg: u128 =
        t.rows.iter().map(|r| sq(r.1)).sum::<u128>() + t.cols.iter().map(|c| sq(c.1)).sum::<u128>();
    let are = 1.0 - 2.0 * joint as f64 / marg as f64;

    Ok(RandScores {
        ri,
        ari,
        are: are.clamp(0.0, 1.0),
    })
}
