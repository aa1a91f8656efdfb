//! Connected-component labeling of both phases of a mask.
//!
//! Labels come from a two-pass union-find scan: the first pass merges each
//! pixel with its raster-preceding neighbours of the same phase, the second
//! assigns final ids in order of each component's first pixel.

use alloc::vec::Vec;

use crate::connectivity::ConnectivityPair;
use crate::mask::BinaryMask;
use crate::union_find::UnionFind;

/// Foreground or background.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    /// `true` pixels.
    Foreground,
    /// `false` pixels.
    Background,
}

impl Phase {
    /// Phase of a pixel value.
    pub fn of(value: bool) -> Phase {
        if value {
            Phase::Foreground
        } else {
            Phase::Background
        }
    }

    /// The other phase.
    pub fn opposite(self) -> Phase {
        match self {
            Phase::Foreground => Phase::Background,
            Phase::Background => Phase::Foreground,
        }
    }
}

/// Metadata of one connected component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentInfo {
    /// Label id, equal to the component's index in [`ComponentLabeling::components`].
    pub id: u32,
    /// Phase shared by all its pixels.
    pub phase: Phase,
    /// Pixel count.
    pub size: usize,
    /// Whether any pixel lies on the outer face of the grid.
    pub touches_border: bool,
    /// Flat index of the component's first pixel in raster order.
    pub first_pixel: usize,
}

/// A partition of every pixel into foreground and background components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabeling {
    dims: Vec<usize>,
    labels: Vec<u32>,
    components: Vec<ComponentInfo>,
    connectivity: ConnectivityPair,
}

impl ComponentLabeling {
    /// Per-pixel component ids, row-major.
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Components ordered by id.
    pub fn components(&self) -> &[ComponentInfo] {
        &self.components
    }

    /// Shape of the labelled mask.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Connectivity used for labeling.
    pub fn connectivity(&self) -> ConnectivityPair {
        self.connectivity
    }

    /// Number of components of a phase.
    pub fn count(&self, phase: Phase) -> usize {
        self.components.iter().filter(|c| c.phase == phase).count()
    }

    /// Phase of a component id.
    pub fn phase_of(&self, id: u32) -> Phase {
        self.components[id as usize].phase
    }

    /// Components of a phase, in id order.
    pub fn components_of(&self, phase: Phase) -> impl Iterator<Item = &ComponentInfo> + '_ {
        self.components.iter().filter(move |c| c.phase == phase)
    }
}

/// Labels foreground and background components under the given connectivity.
///
/// Ids are contiguous from 0 and assigned in raster order of each
/// component's first pixel, so output is reproducible.
pub fn label_components(mask: &BinaryMask, conn: ConnectivityPair) -> ComponentLabeling {
    let ndim = mask.ndim();
    let [depth, rows, cols] = mask.extents3();
    let data = mask.data();
    let fg_offsets = conn.foreground().causal_offsets(ndim);
    let bg_offsets = conn.background().causal_offsets(ndim);

    let mut uf = UnionFind::new(data.len());
    for z in 0..depth {
        for y in 0..rows {
            for x in 0..cols {
                let idx = (z * rows + y) * cols + x;
                let v = data[idx];
                let offsets = if v { &fg_offsets } else { &bg_offsets };
                for &[dz, dy, dx] in offsets {
                    let (Some(nz), Some(ny), Some(nx)) = (
                        z.checked_add_signed(dz),
                        y.checked_add_signed(dy),
                        x.checked_add_signed(dx),
                    ) else {
                        continue;
                    };
                    if nz >= depth || ny >= rows || nx >= cols {
                        continue;
                    }
                    let nidx = (nz * rows + ny) * cols + nx;
                    if data[nidx] == v {
                        uf.union(idx as u32, nidx as u32);
                    }
                }
            }
        }
    }

    let mut root_to_id = alloc::vec![u32::MAX; data.len()];
    let mut labels = Vec::with_capacity(data.len());
    let mut components: Vec<ComponentInfo> = Vec::new();
    for z in 0..depth {
        let z_edge = ndim == 3 && (z == 0 || z + 1 == depth);
        for y in 0..rows {
            let y_edge = y == 0 || y + 1 == rows;
            for x in 0..cols {
                let idx = (z * rows + y) * cols + x;
                let on_border = z_edge || y_edge || x == 0 || x + 1 == cols;
                let root = uf.find(idx as u32) as usize;
                let id = if root_to_id[root] == u32::MAX {
                    let id = components.len() as u32;
                    root_to_id[root] = id;
                    components.push(ComponentInfo {
                        id,
                        phase: Phase::of(data[idx]),
                        size: 0,
                        touches_border: false,
                        first_pixel: idx,
                    });
                    id
                } else {
                    root_to_id[root]
                };
                let info = &mut components[id as usize];
                info.size += 1;
                info.touches_border |= on_border;
                labels.push(id);
            }
        }
    }

    ComponentLabeling {
        dims: mask.dims().to_vec(),
        labels,
        components,
        connectivity: conn,
    }
}

/// Number of components of `phase` in a labeling.
pub fn count_components(labeling: &ComponentLabeling, phase: Phase) -> usize {
    labeling.count(phase)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(mask: &BinaryMask, conn: ConnectivityPair) -> (usize, usize) {
        let l = label_components(mask, conn);
        (l.count(Phase::Foreground), l.count(Phase::Background))
    }

    #[test]
    fn diagonal_pair_depends_on_connectivity() {
        let m = BinaryMask::from_ascii(&["#..", ".#.", "..."]).unwrap();
        assert_eq!(counts(&m, ConnectivityPair::A), (1, 1));
        assert_eq!(counts(&m, ConnectivityPair::D), (2, 1));
    }

    #[test]
    fn empty_and_full_masks() {
        let empty = BinaryMask::zeros(&[2, 2]).unwrap();
        let full = BinaryMask::ones(&[4, 3]).unwrap();
        for conn in [ConnectivityPair::A, ConnectivityPair::D] {
            assert_eq!(counts(&empty, conn), (0, 1));
            assert_eq!(counts(&full, conn), (1, 0));
        }
    }

    #[test]
    fn ids_follow_raster_order() {
        let m = BinaryMask::from_ascii(&["#.#", "...", "#.."]).unwrap();
        let l = label_components(&m, ConnectivityPair::D);
        assert_eq!(l.labels(), &[0, 1, 2, 1, 1, 1, 3, 1, 1]);
        let phases: Vec<Phase> = l.components().iter().map(|c| c.phase).collect();
        assert_eq!(
            phases,
            [
                Phase::Foreground,
                Phase::Background,
                Phase::Foreground,
                Phase::Foreground
            ]
        );
        assert_eq!(l.components()[1].size, 6);
    }

    #[test]
    fn border_flags() {
        let m = BinaryMask::from_ascii(&["#####", "#...#", "#.#.#", "#...#", "#####"]).unwrap();
        let l = label_components(&m, ConnectivityPair::A);
        let info: Vec<(Phase, usize, bool)> = l
            .components()
            .iter()
            .map(|c| (c.phase, c.size, c.touches_border))
            .collect();
        assert_eq!(
            info,
            [
                (Phase::Foreground, 16, true),
                (Phase::Background, 8, false),
                (Phase::Foreground, 1, false)
            ]
        );
    }

    #[test]
    fn three_d_corner_adjacency() {
        let mut m = BinaryMask::zeros(&[2, 2, 2]).unwrap();
        m.set(&[0, 0, 0], true);
        m.set(&[1, 1, 1], true);
        assert_eq!(counts(&m, ConnectivityPair::A).0, 1);
        assert_eq!(counts(&m, ConnectivityPair::D).0, 2);
        // background of 6 voxels is face-connected either way
        assert_eq!(counts(&m, ConnectivityPair::A).1, 1);
    }

    #[test]
    fn depth_one_volume_has_all_border() {
        let m = BinaryMask::ones(&[1, 3, 3]).unwrap();
        let l = label_components(&m, ConnectivityPair::D);
        assert!(l.components()[0].touches_border);
    }
}
