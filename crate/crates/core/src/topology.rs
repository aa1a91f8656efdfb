//! Betti numbers and Euler characteristics of binary masks.
//!
//! Foreground components and bounded background components are counted by
//! labeling; the Euler characteristic is counted from cells of the cubical
//! complex whose construction matches the connectivity (`A` with the
//! T-construction, `D` with the V-construction). In 3D the first Betti
//! number follows from the Euler identity.

use alloc::vec::Vec;

use crate::connectivity::{Connectivity, ConnectivityPair};
use crate::labeling::{label_components, Phase};
use crate::mask::BinaryMask;
use crate::{Error, Result};

/// Cubical complex construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Construction {
    /// Pixels are vertices; a cell is present when all its vertices are foreground.
    V,
    /// Pixels are top-dimensional cells together with all their faces.
    T,
}

impl Construction {
    /// Construction whose foreground topology matches a connectivity setting.
    pub fn for_connectivity(setting: Connectivity) -> Construction {
        match setting {
            Connectivity::A => Construction::T,
            Connectivity::D => Construction::V,
        }
    }
}

/// Cells of a cubical complex by dimension: vertices, edges, squares, cubes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CellCensus {
    /// `counts[k]` is the number of `k`-cells.
    pub counts: [usize; 4],
}

impl CellCensus {
    /// Alternating sum of the cell counts.
    pub fn euler(&self) -> i64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }
}

/// Betti numbers and Euler characteristic of a mask under one connectivity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologySummary {
    /// `[b0, b1]` in 2D, `[b0, b1, b2]` in 3D.
    pub betti: Vec<usize>,
    /// Euler characteristic of the matching construction.
    pub euler: i64,
    /// Construction used for `euler`.
    pub construction: Construction,
    /// Connectivity used for component counts.
    pub connectivity: ConnectivityPair,
}

impl TopologySummary {
    /// Betti number of a dimension; 0 above the mask's dimensionality.
    pub fn betti(&self, dim: usize) -> usize {
        self.betti.get(dim).copied().unwrap_or(0)
    }
}

/// Counts the distinct cells of the chosen cubical complex.
pub fn cell_census(mask: &BinaryMask, construction: Construction) -> CellCensus {
    match construction {
        Construction::V => census_v(mask),
        Construction::T => census_t(mask),
    }
}

/// Euler characteristic of the chosen cubical complex.
pub fn euler_characteristic(mask: &BinaryMask, construction: Construction) -> i64 {
    cell_census(mask, construction).euler()
}

fn census_v(mask: &BinaryMask) -> CellCensus {
    let ndim = mask.ndim();
    let ext = mask.extents3();
    let axes: &[usize] = if ndim == 3 { &[0, 1, 2] } else { &[1, 2] };
    let data = mask.data();
    let strides = [ext[1] * ext[2], ext[2], 1];
    let mut census = CellCensus::default();

    // each cell is anchored at its lowest-coordinate vertex and spans a set of axes
    let subsets: Vec<Vec<usize>> = (0u32..(1 << axes.len()))
        .map(|bits| {
            axes.iter()
                .enumerate()
                .filter(|(i, _)| bits & (1 << i) != 0)
                .map(|(_, &a)| a)
                .collect()
        })
        .collect();

    for z in 0..ext[0] {
        for y in 0..ext[1] {
            for x in 0..ext[2] {
                let idx = (z * ext[1] + y) * ext[2] + x;
                if !data[idx] {
                    continue;
                }
                let pos = [z, y, x];
                'cells: for span in &subsets {
                    if span.iter().any(|&a| pos[a] + 1 >= ext[a]) {
                        continue;
                    }
                    for corner in 1u32..(1 << span.len()) {
                        let mut j = idx;
                        for (i, &a) in span.iter().enumerate() {
                            if corner & (1 << i) != 0 {
                                j += strides[a];
                            }
                        }
                        if !data[j] {
                            continue 'cells;
                        }
                    }
                    census.counts[span.len()] += 1;
                }
            }
        }
    }
    census
}

fn census_t(mask: &BinaryMask) -> CellCensus {
    let ndim = mask.ndim();
    let ext = mask.extents3();
    // doubled grid: even coordinates are pixel boundaries, odd ones pixel interiors
    let g = if ndim == 3 {
        [2 * ext[0] + 1, 2 * ext[1] + 1, 2 * ext[2] + 1]
    } else {
        [1, 2 * ext[1] + 1, 2 * ext[2] + 1]
    };
    let mut present = alloc::vec![false; g[0] * g[1] * g[2]];
    let z_span: &[usize] = if ndim == 3 { &[0, 1, 2] } else { &[0] };
    let data = mask.data();
    for z in 0..ext[0] {
        for y in 0..ext[1] {
            for x in 0..ext[2] {
                if !data[(z * ext[1] + y) * ext[2] + x] {
                    continue;
                }
                let (cz, cy, cx) = if ndim == 3 {
                    (2 * z, 2 * y, 2 * x)
                } else {
                    (0, 2 * y, 2 * x)
                };
                for &dz in z_span {
                    for dy in 0..3 {
                        let row = ((cz + dz) * g[1] + cy + dy) * g[2] + cx;
                        present[row..row + 3].iter_mut().for_each(|p| *p = true);
                    }
                }
            }
        }
    }
    let mut census = CellCensus::default();
    for z in 0..g[0] {
        for y in 0..g[1] {
            for x in 0..g[2] {
                if present[(z * g[1] + y) * g[2] + x] {
                    let z_odd = if ndim == 3 { z % 2 } else { 0 };
                    census.counts[z_odd + y % 2 + x % 2] += 1;
                }
            }
        }
    }
    census
}

/// Betti numbers of the foreground under `conn`.
///
/// `b0` counts foreground components. The top-dimensional number (`b1` in
/// 2D, `b2` in 3D) counts background components that do not reach the
/// one-pixel background frame added around the mask. In 3D, `b1` comes from
/// `b0 - b1 + b2 = chi`.
pub fn betti_numbers(mask: &BinaryMask, conn: ConnectivityPair) -> TopologySummary {
    let padded = mask.pad_with_background(1);
    let labeling = label_components(&padded, conn);
    let b0 = labeling.count(Phase::Foreground);
    // the frame is one background component, never a hole
    let holes = labeling.count(Phase::Background) - 1;
    let construction = Construction::for_connectivity(conn.setting());
    let euler = euler_characteristic(mask, construction);
    let betti = if mask.ndim() == 2 {
        debug_assert_eq!(b0 as i64 - holes as i64, euler);
        alloc::vec![b0, holes]
    } else {
        let b1 = b0 as i64 + holes as i64 - euler;
        debug_assert!(b1 >= 0);
        alloc::vec![b0, b1.max(0) as usize, holes]
    };
    TopologySummary {
        betti,
        euler,
        construction,
        connectivity: conn,
    }
}

/// `|b_dim(pred) - b_dim(gt)|` under `conn`.
pub fn betti_number_error(
    pred: &BinaryMask,
    gt: &BinaryMask,
    conn: ConnectivityPair,
    dim: usize,
) -> Result<usize> {
    pred.check_same_shape(gt)?;
    if dim >= pred.ndim() {
        return Err(Error::InvalidParameter(
            "Betti dimension exceeds mask dimensionality",
        ));
    }
    let p = betti_numbers(pred, conn).betti(dim);
    let g = betti_numbers(gt, conn).betti(dim);
    Ok(p.abs_diff(g))
}
