//! Method score tables and their rank comparison.
//!
//! A score table is a CSV file whose first column names the methods and whose
//! other columns hold one metric each. An optional row whose first cell is
//! `direction` marks each column `higher` or `lower` (better).

use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use topocheck_core::{
    avg_difference, avg_rel_change, kendall, pearson, spearman_with, Direction, ScoreVector,
    TieMethod,
};

use crate::error::{Error, Result};
use crate::report::{finish_csv, Header};

/// Parsed score table.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    pub methods: Vec<String>,
    pub columns: IndexMap<String, ScoreVector>,
}

/// Metric name without a trailing `_A`/`_D`.
pub fn base_metric(name: &str) -> &str {
    match name.rsplit_once('_') {
        Some((b, "A" | "D" | "a" | "d")) => b,
        _ => name,
    }
}

/// Direction assumed when a table has no direction row.
pub fn default_direction(name: &str) -> Direction {
    match base_metric(name).to_ascii_uppercase().as_str() {
        "DICE" | "CLDICE" | "RI" | "ARI" => Direction::HigherBetter,
        _ => Direction::LowerBetter,
    }
}

fn parse_direction(cell: &str) -> Option<Direction> {
    match cell.trim().to_ascii_lowercase().as_str() {
        "higher" | "high" | "up" | "max" | "↑" => Some(Direction::HigherBetter),
        "lower" | "low" | "down" | "min" | "↓" => Some(Direction::LowerBetter),
        _ => None,
    }
}

impl ScoreTable {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|reason| Error::Manifest {
            path: path.to_path_buf(),
            reason,
        })
    }

    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = rdr.headers().map_err(|e| e.to_string())?.clone();
        if headers.len() < 2 {
            return Err("need a method column and at least one metric column".into());
        }
        let metrics: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
        let mut directions: Vec<Direction> = metrics.iter().map(|m| default_direction(m)).collect();
        let mut methods = Vec::new();
        let mut values: Vec<Vec<f64>> = vec![Vec::new(); metrics.len()];
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| e.to_string())?;
            let name = rec.get(0).unwrap_or_default();
            if i == 0 && name.eq_ignore_ascii_case("direction") {
                for (j, cell) in rec.iter().skip(1).enumerate() {
                    directions[j] = parse_direction(cell)
                        .ok_or_else(|| format!("direction {cell:?} is neither higher nor lower"))?;
                }
                continue;
            }
            methods.push(name.to_string());
            for (j, cell) in rec.iter().skip(1).enumerate() {
                let v: f64 = cell
                    .parse()
                    .map_err(|_| format!("method {name:?}: {cell:?} is not a number"))?;
                values[j].push(v);
            }
        }
        let mut columns = IndexMap::new();
        for ((m, dir), vals) in metrics.into_iter().zip(directions).zip(values) {
            let sv = ScoreVector::new(m.clone(), dir, methods.clone(), vals)
                .map_err(|e| format!("column {m}: {e}"))?;
            if columns.insert(m.clone(), sv).is_some() {
                return Err(format!("column {m} appears twice"));
            }
        }
        Ok(ScoreTable { methods, columns })
    }
}

/// Agreement statistics of one column pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairComparison {
    pub a: String,
    pub b: String,
    pub spearman: Option<f64>,
    pub kendall: Option<f64>,
    pub pearson: Option<f64>,
    /// Mean of `a - b`.
    pub avg_difference: Option<f64>,
    /// Mean of `(a - b) / b` in percent, skipping methods with `b = 0`.
    pub avg_rel_change_percent: Option<f64>,
    pub rel_change_skipped: usize,
}

/// Columns paired by equal name, or by equal name once `_A`/`_D` is dropped.
pub fn auto_pairs(a: &ScoreTable, b: &ScoreTable) -> Vec<(String, String)> {
    a.columns
        .keys()
        .filter_map(|ka| {
            let exact = b.columns.get_key_value(ka).map(|(k, _)| k);
            let by_base = || {
                b.columns
                    .keys()
                    .find(|kb| base_metric(kb) == base_metric(ka))
            };
            exact.or_else(by_base).map(|kb| (ka.clone(), kb.clone()))
        })
        .collect()
}

/// Compares the requested column pairs.
pub fn compare(
    a: &ScoreTable,
    b: &ScoreTable,
    pairs: &[(String, String)],
    ties: TieMethod,
) -> Result<Vec<PairComparison>> {
    pairs
        .iter()
        .map(|(ka, kb)| {
            let va = a
                .columns
                .get(ka)
                .ok_or_else(|| Error::Metric(format!("no column {ka} in the first table")))?;
            let vb = b
                .columns
                .get(kb)
                .ok_or_else(|| Error::Metric(format!("no column {kb} in the second table")))?;
            // mismatched method sets are an input error, not an undefined value
            avg_difference(va, vb)?;
            let rel = avg_rel_change(va, vb).ok();
            Ok(PairComparison {
                a: ka.clone(),
                b: kb.clone(),
                spearman: spearman_with(va, vb, ties).ok(),
                kendall: kendall(va, vb).ok(),
                pearson: pearson(va, vb).ok(),
                avg_difference: avg_difference(va, vb).ok(),
                avg_rel_change_percent: rel.map(|r| 100.0 * r.value),
                rel_change_skipped: rel.map_or(0, |r| r.skipped),
            })
        })
        .collect()
}

/// Rank comparison report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    #[serde(flatten)]
    pub header: Header,
    pub methods: Vec<String>,
    pub pairs: Vec<PairComparison>,
}

impl RankReport {
    /// One row per statistic, one column per pair (`a:b`).
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut head = vec!["statistic".to_string()];
        head.extend(self.pairs.iter().map(|p| {
            if p.a == p.b {
                p.a.clone()
            } else {
                format!("{}:{}", p.a, p.b)
            }
        }));
        w.write_record(&head)?;
        type Stat = fn(&PairComparison) -> Option<f64>;
        let rows: [(&str, Stat); 5] = [
            ("spearman", |p| p.spearman),
            ("kendall", |p| p.kendall),
            ("pearson", |p| p.pearson),
            ("avg_difference", |p| p.avg_difference),
            ("avg_rel_change_percent", |p| p.avg_rel_change_percent),
        ];
        for (label, f) in rows {
            let mut row = vec![label.to_string()];
            row.extend(
                self.pairs
                    .iter()
                    .map(|p| f(p).map(|v| format!("{v:.4}")).unwrap_or_default()),
            );
            w.write_record(&row)?;
        }
        finish_csv(w)
    }
}
