//! Mask IO, dataset manifests, metric reports and the `topocheck` command line.

pub mod cli;
mod error;
pub mod io;
pub mod manifest;
pub mod metric;
pub mod nrrd;
pub mod report;
pub mod scores;

pub use error::{Error, Result};
pub use io::{load_mask, save_mask, MaskFormat};
pub use manifest::DatasetManifest;
pub use metric::{evaluate_pair, EvalOptions, MetricKey, MetricKind};
pub use report::{write_report, Header, MetricReport, ReportFormat, SCHEMA_VERSION};

/// Environment variable holding the worker-pool size.
pub const WORKERS_ENV: &str = "TOPOCHECK_WORKERS";
