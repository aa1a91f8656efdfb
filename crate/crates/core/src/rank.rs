//! Method rankings and their agreement across evaluation settings.

use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Whether larger scores are better.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// E.g. Dice.
    HigherBetter,
    /// E.g. Betti errors, VOI.
    LowerBetter,
}

impl Direction {
    /// The opposite direction.
    pub fn flipped(self) -> Direction {
        match self {
            Direction::HigherBetter => Direction::LowerBetter,
            Direction::LowerBetter => Direction::HigherBetter,
        }
    }
}

/// How tied scores share ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TieMethod {
    /// Tied entries get the mean of the ranks they span.
    #[default]
    Average,
    /// Ties are broken by input order, earlier entries ranking better.
    Ordinal,
}

/// One metric's scores for a set of methods.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    metric: String,
    direction: Direction,
    names: Vec<String>,
    values: Vec<f64>,
}

impl ScoreVector {
    /// Validates unique names, matching lengths and finite values.
    pub fn new(
        metric: impl Into<String>,
        direction: Direction,
        names: Vec<String>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if names.len() != values.len() {
            return Err(Error::MismatchedMethods);
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::InvalidParameter("duplicate method name"));
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "score vectors may not contain missing values",
            ));
        }
        Ok(ScoreVector {
            metric: metric.into(),
            direction,
            names,
            values,
        })
    }

    /// Metric name, e.g. `BM1_D`.
    pub fn metric(&self) -> &str {
        &self.metric
    }

    /// Ranking direction.
    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Method names in order.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Scores in method order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of methods.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True without methods.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The same scores with the opposite direction.
    pub fn with_direction(mut self, direction: Direction) -> Self {
        self.direction = direction;
        self
    }

    /// Scores negated where lower is better, so larger always means better.
    fn oriented(&self) -> Vec<f64> {
        match self.direction {
            Direction::HigherBetter => self.values.clone(),
            Direction::LowerBetter => self.values.iter().map(|v| -v).collect(),
        }
    }

    /// Scores of `other` reordered to this vector's method order.
    fn align(&self, other: &ScoreVector) -> Result<ScoreVector> {
        if self.len() != other.len() {
            return Err(Error::MismatchedMethods);
        }
        let mut values = Vec::with_capacity(self.len());
        for name in &self.names {
            let j = other
                .names
                .iter()
                .position(|n| n == name)
                .ok_or(Error::MismatchedMethods)?;
            values.push(other.values[j]);
        }
        Ok(ScoreVector {
            metric: other.metric.clone(),
            direction: other.direction,
            names: self.names.clone(),
            values,
        })
    }
}

/// Ranks 1..n (1 = best) with average ranks for ties.
pub fn rank(v: &ScoreVector) -> Result<Vec<f64>> {
    rank_with(v, TieMethod::Average)
}

/// Ranks 1..n (1 = best) with the given tie handling.
pub fn rank_with(v: &ScoreVector, ties: TieMethod) -> Result<Vec<f64>> {
    if v.len() < 2 {
        return Err(Error::TooFewEntries {
            needed: 2,
            got: v.len(),
        });
    }
    let score = v.oriented();
    let mut order: Vec<usize> = (0..score.len()).collect();
    // best first; stable sort keeps input order among ties
    order.sort_by(|&i, &j| score[j].total_cmp(&score[i]));
    let mut ranks = alloc::vec![0.0; score.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && score[order[end]] == score[order[start]] {
            end += 1;
        }
        for (k, &i) in order[start..end].iter().enumerate() {
            ranks[i] = match ties {
                TieMethod::Average => (start + end + 1) as f64 / 2.0,
                TieMethod::Ordinal => (start + k + 1) as f64,
            };
        }
        start = end;
    }
    Ok(ranks)
}

fn pearson_raw(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((sxy / libm::sqrt(sxx * syy)).clamp(-1.0, 1.0))
}

/// Spearman's rho with average ranks for ties.
pub fn spearman(a: &ScoreVector, b: &ScoreVector) -> Result<f64> {
    spearman_with(a, b, TieMethod::Average)
}

/// Spearman's rho: Pearson correlation of the two rank vectors.
pub fn spearman_with(a: &ScoreVector, b: &ScoreVector, ties: TieMethod) -> Result<f64> {
    let b = a.align(b)?;
    pearson_raw(&rank_with(a, ties)?, &rank_with(&b, ties)?)
}

/// Kendall's tau-b.
pub fn kendall(a: &ScoreVector, b: &ScoreVector) -> Result<f64> {
    let b = a.align(b)?;
    if a.len() < 2 {
        return Err(Error::TooFewEntries {
            needed: 2,
            got: a.len(),
        });
    }
    let x = a.oriented();
    let y = b.oriented();
    let (mut concordant, mut discordant, mut tied_x, mut tied_y) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let dx = x[i].total_cmp(&x[j]) as i64;
            let dy = y[i].total_cmp(&y[j]) as i64;
            match (dx, dy) {
                (0, 0) => {
                    tied_x += 1;
                    tied_y += 1;
                }
                (0, _) => tied_x += 1,
                (_, 0) => tied_y += 1,
                _ if dx == dy => concordant += 1,
                _ => discordant += 1,
            }
        }
    }
    let pairs = (x.len() * (x.len() - 1) / 2) as i64;
    let denom = ((pairs - tied_x) * (pairs - tied_y)) as f64;
    if denom == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(((concordant - discordant) as f64 / libm::sqrt(denom)).clamp(-1.0, 1.0))
}

/// Pearson's r on the scores, negated where lower is better.
pub fn pearson(a: &ScoreVector, b: &ScoreVector) -> Result<f64> {
    let b = a.align(b)?;
    if a.len() < 2 {
        return Err(Error::TooFewEntries {
            needed: 2,
            got: a.len(),
        });
    }
    pearson_raw(&a.oriented(), &b.oriented())
}

/// Mean of `corrected - original` over methods.
pub fn avg_difference(corrected: &ScoreVector, original: &ScoreVector) -> Result<f64> {
    let original = corrected.align(original)?;
    if corrected.is_empty() {
        return Err(Error::TooFewEntries { needed: 1, got: 0 });
    }
    let sum: f64 = corrected
        .values
        .iter()
        .zip(&original.values)
        .map(|(c, o)| c - o)
        .sum();
    Ok(sum / corrected.len() as f64)
}

/// Mean relative change and the number of methods skipped for a zero original score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelChange {
    /// Mean of `(corrected - original) / original`, as a fraction.
    pub value: f64,
    /// Entries left out because the original score was 0.
    pub skipped: usize,
}

/// Mean of `(corrected - original) / original`, skipping zero originals.
pub fn avg_rel_change(corrected: &ScoreVector, original: &ScoreVector) -> Result<RelChange> {
    let original = corrected.align(original)?;
    let ratios: Vec<f64> = corrected
        .values
        .iter()
        .zip(&original.values)
        .filter(|(_, &o)| o != 0.0)
        .map(|(c, o)| (c - o) / o)
        .collect();
    if ratios.is_empty() {
        return Err(Error::UndefinedMetric("every original score is zero"));
    }
    Ok(RelChange {
        value: ratios.iter().sum::<f64>() / ratios.len() as f64,
        skipped: corrected.len() - ratios.len(),
    })
}
