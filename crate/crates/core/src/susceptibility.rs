//! Sensitivity of a label to the choice between `A` and `D` connectivity.
//!
//! A label is partitioned twice, once per setting, and a metric is evaluated
//! between the two partitions. Large values mean the dataset's topology
//! depends strongly on the connectivity choice.

use alloc::string::String;
use alloc::vec::Vec;

use crate::connectivity::ConnectivityPair;
use crate::labeling::label_components;
use crate::mask::BinaryMask;
use crate::partition::{build_contingency, rand_scores, variation_of_information, LogBase, Scope};
use crate::topology::betti_numbers;
use crate::{Error, Result};

/// Partition metrics available for susceptibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PartitionMetric {
    /// Variation of information.
    Voi,
    /// Adapted Rand error.
    Are,
}

/// `|b_dim under D - b_dim under A|` for one label.
pub fn susceptibility_beta(label: &BinaryMask, dim: usize) -> Result<usize> {
    if dim >= label.ndim() {
        return Err(Error::InvalidParameter(
            "Betti dimension exceeds mask dimensionality",
        ));
    }
    let d = betti_numbers(label, ConnectivityPair::D).betti(dim);
    let a = betti_numbers(label, ConnectivityPair::A).betti(dim);
    Ok(d.abs_diff(a))
}

/// Metric between the `D` and `A` partitions of one label (full scope).
pub fn susceptibility_partition(
    label: &BinaryMask,
    metric: PartitionMetric,
    base: LogBase,
) -> Result<f64> {
    let pd = label_components(label, ConnectivityPair::D);
    let pa = label_components(label, ConnectivityPair::A);
    let table = build_contingency(&pd, &pa, Scope::Full)?;
    match metric {
        PartitionMetric::Voi => Ok(variation_of_information(&table, base)),
        PartitionMetric::Are => Ok(rand_scores(&table)?.are),
    }
}

/// Susceptibility values of one label.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageSusceptibility {
    /// Identifier, typically the file name.
    pub name: String,
    /// Foreground component count difference.
    pub beta0: f64,
    /// Hole (loop) count difference.
    pub beta1: f64,
    /// Variation of information between the partitions.
    pub voi: f64,
    /// Adapted Rand error between the partitions; `None` for single-pixel labels.
    pub are: Option<f64>,
}

impl ImageSusceptibility {
    /// Evaluates all four values for a label.
    pub fn compute(name: impl Into<String>, label: &BinaryMask, base: LogBase) -> Self {
        let d = betti_numbers(label, ConnectivityPair::D);
        let a = betti_numbers(label, ConnectivityPair::A);
        let pd = label_components(label, ConnectivityPair::D);
        let pa = label_components(label, ConnectivityPair::A);
        let table = build_contingency(&pd, &pa, Scope::Full)
            .expect("full scope over a non-empty grid always has pixels");
        ImageSusceptibility {
            name: name.into(),
            beta0: d.betti(0).abs_diff(a.betti(0)) as f64,
            beta1: d.betti(1).abs_diff(a.betti(1)) as f64,
            voi: variation_of_information(&table, base),
            are: rand_scores(&table).ok().map(|r| r.are),
        }
    }
}

/// Per-image means over a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct SusceptibilityReport {
    /// Per-image values in input order.
    pub images: Vec<ImageSusceptibility>,
    /// Number of images averaged.
    pub image_count: usize,
    /// Mean foreground component count difference.
    pub beta0: f64,
    /// Mean hole count difference.
    pub beta1: f64,
    /// Mean variation of information.
    pub voi: f64,
    /// Mean adapted Rand error over images where it is defined.
    pub are: f64,
}

impl SusceptibilityReport {
    /// Aggregates per-image values; fails on an empty dataset.
    pub fn from_images(images: Vec<ImageSusceptibility>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::UndefinedMetric("susceptibility of an empty dataset"));
        }
        let n = images.len() as f64;
        let mean = |f: fn(&ImageSusceptibility) -> f64| images.iter().map(f).sum::<f64>() / n;
        let are: Vec<f64> = images.iter().filter_map(|i| i.are).collect();
        Ok(SusceptibilityReport {
            image_count: images.len(),
            beta0: mean(|i| i.beta0),
            beta1: mean(|i| i.beta1),
            voi: mean(|i| i.voi),
            are: if are.is_empty() {
                0.0
            } else {
                are.iter().sum::<f64>() / are.len() as f64
            },
            images,
        })
    }
}
