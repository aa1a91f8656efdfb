//! Versioned JSON reports and their CSV tables.

use std::fs;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Bumped whenever a field is renamed, removed or changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

/// Fields common to every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub command: String,
    /// Settings the numbers depend on (connectivity, log base, removal mode, ...).
    pub metadata: IndexMap<String, Value>,
}

impl Header {
    pub fn new(command: &str) -> Self {
        Header {
            schema_version: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME").into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            metadata: IndexMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }
}

/// An input that could not be processed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileError {
    pub name: String,
    pub message: String,
}

/// Metric values of one image (or image pair).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageValues {
    pub name: String,
    /// `null` where the metric is undefined for this input.
    pub values: IndexMap<String, Option<f64>>,
}

/// Mean over the images where a metric is defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: Option<f64>,
    pub count: usize,
}

/// True for `DICE`/`CLDICE` and for names ending in `_A` or `_D`.
pub fn is_valid_metric_name(name: &str) -> bool {
    matches!(name, "DICE" | "CLDICE") || name.ends_with("_A") || name.ends_with("_D")
}

/// Per-image metric values with dataset means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    #[serde(flatten)]
    pub header: Header,
    pub dataset: String,
    pub metrics: Vec<String>,
    pub images: Vec<ImageValues>,
    pub aggregate: IndexMap<String, Aggregate>,
    pub errors: Vec<FileError>,
}

impl MetricReport {
    /// Empty report; every topological name must carry its connectivity.
    pub fn new(header: Header, dataset: &str, metrics: Vec<String>) -> Result<Self> {
        if let Some(bad) = metrics.iter().find(|m| !is_valid_metric_name(m)) {
            return Err(Error::Metric(format!(
                "metric name {bad:?} does not state its connectivity"
            )));
        }
        Ok(MetricReport {
            header,
            dataset: dataset.into(),
            metrics,
            images: Vec::new(),
            aggregate: IndexMap::new(),
            errors: Vec::new(),
        })
    }

    pub fn push_image(&mut self, name: String, values: Vec<Option<f64>>) {
        assert_eq!(values.len(), self.metrics.len());
        let values = self.metrics.iter().cloned().zip(values).collect();
        self.images.push(ImageValues { name, values });
    }

    pub fn push_error(&mut self, name: String, message: String) {
        self.errors.push(FileError { name, message });
    }

    /// Recomputes the means from the image rows.
    pub fn finish(&mut self) {
        self.aggregate = self
            .metrics
            .iter()
            .map(|m| {
                let vals: Vec<f64> = self.images.iter().filter_map(|i| i.values[m]).collect();
                let mean = (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64);
                (
                    m.clone(),
                    Aggregate {
                        mean,
                        count: vals.len(),
                    },
                )
            })
            .collect();
    }

    /// `image,<metrics...>` rows followed by a `mean` row; undefined cells are empty.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut head = vec!["image".to_string()];
        head.extend(self.metrics.iter().cloned());
        w.write_record(&head)?;
        for img in &self.images {
            let mut row = vec![img.name.clone()];
            row.extend(self.metrics.iter().map(|m| fmt_opt(img.values[m])));
            w.write_record(&row)?;
        }
        let mut row = vec!["mean".to_string()];
        row.extend(
            self.metrics
                .iter()
                .map(|m| fmt_opt(self.aggregate.get(m).and_then(|a| a.mean))),
        );
        w.write_record(&row)?;
        finish_csv(w)
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub(crate) fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Metric(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

/// Output format chosen by extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl ReportFormat {
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "json" => Some(ReportFormat::Json),
            "csv" => Some(ReportFormat::Csv),
            _ => None,
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes a metric report as JSON or CSV.
pub fn write_report(report: &MetricReport, path: &Path, format: ReportFormat) -> Result<()> {
    let text = match format {
        ReportFormat::Json => to_json(report)?,
        ReportFormat::Csv => report.to_csv()?,
    };
    write_text(path, &text)
}
