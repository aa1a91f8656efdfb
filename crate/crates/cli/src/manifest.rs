//! Dataset manifests: a JSON file listing label (and optional prediction)
//! masks, or a plain directory of masks.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use topocheck_core::{BinaryMask, Connectivity};

use crate::error::{Error, Result};
use crate::io::{is_mask_file, load_mask};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    name: String,
    dimensionality: usize,
    connectivity: String,
    labels: Vec<PathBuf>,
    #[serde(default)]
    predictions: Option<Vec<PathBuf>>,
    #[serde(default)]
    binarize_threshold: u8,
}

/// A resolved dataset. Paths are absolute or relative to the working directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetManifest {
    pub name: String,
    /// 2 or 3; `None` for a directory whose masks were not inspected yet.
    pub dimensionality: Option<usize>,
    /// Setting declared for the dataset's semantics; `None` for directories.
    pub connectivity: Option<Connectivity>,
    pub labels: Vec<PathBuf>,
    pub predictions: Option<Vec<PathBuf>>,
    pub binarize_threshold: u8,
}

fn invalid(path: &Path, reason: impl Into<String>) -> Error {
    Error::Manifest {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

/// Mask files of a directory, sorted by file name.
pub fn list_masks(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if is_mask_file(&path) {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

/// Display name of a mask path: its file name.
pub fn item_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

impl DatasetManifest {
    /// Reads a manifest file, or lists a directory of masks.
    pub fn open(path: &Path) -> Result<Self> {
        if path.is_dir() {
            let labels = list_masks(path)?;
            if labels.is_empty() {
                return Err(invalid(
                    path,
                    "directory holds no .png, .gif or .nrrd files",
                ));
            }
            return Ok(DatasetManifest {
                name: item_name(path),
                dimensionality: None,
                connectivity: None,
                labels,
                predictions: None,
                binarize_threshold: 0,
            });
        }
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&text, base).map_err(|reason| invalid(path, reason))
    }

    /// Parses manifest JSON; relative paths are resolved against `base`.
    pub fn parse(text: &str, base: &Path) -> std::result::Result<Self, String> {
        let raw: RawManifest = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if !(2..=3).contains(&raw.dimensionality) {
            return Err(format!(
                "dimensionality must be 2 or 3, got {}",
                raw.dimensionality
            ));
        }
        let connectivity: Connectivity = raw.connectivity.parse().map_err(|_| {
            format!(
                "connectivity must be \"A\" or \"D\", got {:?}",
                raw.connectivity
            )
        })?;
        if raw.labels.is_empty() {
            return Err("no labels listed".into());
        }
        let resolve = |p: PathBuf| if p.is_absolute() { p } else { base.join(p) };
        let labels: Vec<PathBuf> = raw.labels.into_iter().map(resolve).collect();
        let predictions: Option<Vec<PathBuf>> = raw
            .predictions
            .map(|p| p.into_iter().map(resolve).collect());
        if let Some(p) = &predictions {
            if p.len() != labels.len() {
                return Err(format!(
                    "{} predictions for {} labels",
                    p.len(),
                    labels.len()
                ));
            }
        }
        let mut seen = HashSet::new();
        for p in labels.iter().chain(predictions.iter().flatten()) {
            if !seen.insert(p) {
                return Err(format!("path listed twice: {}", p.display()));
            }
        }
        Ok(DatasetManifest {
            name: raw.name,
            dimensionality: Some(raw.dimensionality),
            connectivity: Some(connectivity),
            labels,
            predictions,
            binarize_threshold: raw.binarize_threshold,
        })
    }

    /// Loads a mask listed by this manifest and checks its dimensionality.
    pub fn load(&self, path: &Path) -> Result<BinaryMask> {
        let mask = load_mask(path, self.binarize_threshold)?;
        match self.dimensionality {
            Some(d) if d != mask.ndim() => Err(Error::UnsupportedFormat {
                path: path.to_path_buf(),
                reason: format!("{}D mask in a {d}D dataset", mask.ndim()),
            }),
            _ => Ok(mask),
        }
    }
}
