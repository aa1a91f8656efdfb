//! Ground-truth audits: component size statistics, removal of small
//! components, and component counts under both connectivity settings.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::connectivity::{Connectivity, ConnectivityPair};
use crate::labeling::{label_components, ComponentLabeling, Phase};
use crate::mask::BinaryMask;
use crate::{Error, Result};

/// Component size distribution per phase.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ComponentHistogram {
    /// Foreground: size -> number of components.
    pub foreground: BTreeMap<usize, usize>,
    /// Background: size -> number of components.
    pub background: BTreeMap<usize, usize>,
}

impl ComponentHistogram {
    /// Histogram of one phase.
    pub fn phase(&self, phase: Phase) -> &BTreeMap<usize, usize> {
        match phase {
            Phase::Foreground => &self.foreground,
            Phase::Background => &self.background,
        }
    }

    /// Number of components of a phase.
    pub fn total(&self, phase: Phase) -> usize {
        self.phase(phase).values().sum()
    }

    /// Components of a phase with at most `max_size` pixels.
    pub fn count_up_to(&self, phase: Phase, max_size: usize) -> usize {
        self.phase(phase).range(..=max_size).map(|(_, &n)| n).sum()
    }
}

/// Exact size distribution of a labeling.
pub fn size_histogram(labeling: &ComponentLabeling) -> ComponentHistogram {
    let mut h = ComponentHistogram::default();
    for c in labeling.components() {
        let map = match c.phase {
            Phase::Foreground => &mut h.foreground,
            Phase::Background => &mut h.background,
        };
        *map.entry(c.size).or_insert(0) += 1;
    }
    h
}

/// Phases targeted by a removal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhaseSet {
    /// Remove small foreground components.
    pub foreground: bool,
    /// Remove small background components.
    pub background: bool,
}

impl PhaseSet {
    /// Foreground only.
    pub const FG: PhaseSet = PhaseSet {
        foreground: true,
        background: false,
    };
    /// Background only.
    pub const BG: PhaseSet = PhaseSet {
        foreground: false,
        background: true,
    };
    /// Both phases.
    pub const BOTH: PhaseSet = PhaseSet {
        foreground: true,
        background: true,
    };

    /// Whether a phase is selected.
    pub fn contains(self, phase: Phase) -> bool {
        match phase {
            Phase::Foreground => self.foreground,
            Phase::Background => self.background,
        }
    }
}

/// Order in which the two phases are cleaned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum RemovalMode {
    /// All victims are chosen on the original labeling and flipped at once.
    #[default]
    Simultaneous,
    /// Foreground first, then relabel, then background.
    Sequential,
}

/// Flips every selected component with at most `max_size` pixels to the opposite phase.
pub fn remove_small_components(
    mask: &BinaryMask,
    conn: ConnectivityPair,
    max_size: usize,
    phases: PhaseSet,
    mode: RemovalMode,
) -> Result<BinaryMask> {
    if max_size == 0 {
        return Err(Error::InvalidParameter("removal size must be at least 1"));
    }
    match mode {
        RemovalMode::Simultaneous => Ok(flip_small(mask, conn, max_size, phases)),
        RemovalMode::Sequential => {
            let mut out = mask.clone();
            for phase in [Phase::Foreground, Phase::Background] {
                if phases.contains(phase) {
                    let only = if phase == Phase::Foreground {
                        PhaseSet::FG
                    } else {
                        PhaseSet::BG
                    };
                    out = flip_small(&out, conn, max_size, only);
                }
            }
            Ok(out)
        }
    }
}

fn flip_small(
    mask: &BinaryMask,
    conn: ConnectivityPair,
    max_size: usize,
    phases: PhaseSet,
) -> BinaryMask {
    let labeling = label_components(mask, conn);
    let victim: Vec<bool> = labeling
        .components()
        .iter()
        .map(|c| phases.contains(c.phase) && c.size <= max_size)
        .collect();
    let mut out = mask.clone();
    for (idx, &l) in labeling.labels().iter().enumerate() {
        if victim[l as usize] {
            out.set_flat(idx, !mask.get_flat(idx));
        }
    }
    out
}

/// `min / max` as a percentage; 100 when every value is equal (including all zero).
pub fn min_max_ratio(values: impl IntoIterator<Item = usize>) -> f64 {
    let (mut lo, mut hi) = (usize::MAX, 0usize);
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if hi == 0 || lo == usize::MAX {
        return 100.0;
    }
    100.0 * lo as f64 / hi as f64
}

/// Component totals of a dataset under both connectivity settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConnectivityCounts {
    /// `(fg, bg)` under `A`.
    pub a: (usize, usize),
    /// `(fg, bg)` under `D`.
    pub d: (usize, usize),
}

impl ConnectivityCounts {
    /// Counts for a single mask.
    pub fn of_mask(mask: &BinaryMask) -> Self {
        let count = |conn| {
            let l = label_components(mask, conn);
            (l.count(Phase::Foreground), l.count(Phase::Background))
        };
        ConnectivityCounts {
            a: count(ConnectivityPair::A),
            d: count(ConnectivityPair::D),
        }
    }

    /// Adds another mask's counts.
    pub fn accumulate(&mut self, other: &ConnectivityCounts) {
        self.a.0 += other.a.0;
        self.a.1 += other.a.1;
        self.d.0 += other.d.0;
        self.d.1 += other.d.1;
    }

    /// `(fg, bg)` for a setting.
    pub fn get(&self, setting: Connectivity) -> (usize, usize) {
        match setting {
            Connectivity::A => self.a,
            Connectivity::D => self.d,
        }
    }

    /// Smaller over larger count of a phase, in percent.
    pub fn ratio(&self, phase: Phase) -> f64 {
        match phase {
            Phase::Foreground => min_max_ratio([self.a.0, self.d.0]),
            Phase::Background => min_max_ratio([self.a.1, self.d.1]),
        }
    }
}

/// One line of a removal report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RemovalRow {
    /// Maximum removed component size; `None` for the untouched labels.
    pub threshold: Option<usize>,
    /// Foreground components after removal.
    pub foreground: usize,
    /// Background components after removal.
    pub background: usize,
}

/// Component counts after removing small components at several sizes.
///
/// Every threshold is applied independently to the original masks.
#[derive(Debug, Clone, PartialEq)]
pub struct RemovalReport {
    /// Connectivity used for labeling and removal.
    pub connectivity: ConnectivityPair,
    /// Phases cleaned.
    pub phases: PhaseSet,
    /// Cleaning order.
    pub mode: RemovalMode,
    /// No-removal row followed by one row per threshold.
    pub rows: Vec<RemovalRow>,
}

impl RemovalReport {
    /// Empty report; thresholds must be ascending and at least 1.
    pub fn new(
        connectivity: ConnectivityPair,
        thresholds: &[usize],
        phases: PhaseSet,
        mode: RemovalMode,
    ) -> Result<Self> {
        if thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "removal sizes must be strictly ascending",
            ));
        }
        if thresholds.first() == Some(&0) {
            return Err(Error::InvalidParameter("removal size must be at least 1"));
        }
        let mut rows = alloc::vec![RemovalRow {
            threshold: None,
            foreground: 0,
            background: 0,
        }];
        rows.extend(thresholds.iter().map(|&t| RemovalRow {
            threshold: Some(t),
            foreground: 0,
            background: 0,
        }));
        Ok(RemovalReport {
            connectivity,
            phases,
            mode,
            rows,
        })
    }

    /// Per-mask row counts, in row order.
    pub fn counts_for(&self, mask: &BinaryMask) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .map(|row| {
                let cleaned = match row.threshold {
                    None => mask.clone(),
                    Some(t) => {
                        remove_small_components(mask, self.connectivity, t, self.phases, self.mode)
                            .expect("thresholds validated at construction")
                    }
                };
                let l = label_components(&cleaned, self.connectivity);
                (l.count(Phase::Foreground), l.count(Phase::Background))
            })
            .collect()
    }

    /// Adds counts previously obtained from [`RemovalReport::counts_for`].
    pub fn accumulate(&mut self, counts: &[(usize, usize)]) {
        for (row, &(fg, bg)) in self.rows.iter_mut().zip(counts) {
            row.foreground += fg;
            row.background += bg;
        }
    }

    /// Adds one mask.
    pub fn add_mask(&mut self, mask: &BinaryMask) {
        let counts = self.counts_for(mask);
        self.accumulate(&counts);
    }

    /// Smallest over largest count of a phase across rows, in percent.
    pub fn ratio(&self, phase: Phase) -> f64 {
        min_max_ratio(self.rows.iter().map(|r| match phase {
            Phase::Foreground => r.foreground,
            Phase::Background => r.background,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_of_two_blobs() {
        let m = BinaryMask::from_ascii(&["#..##", "...##", "....#"]).unwrap();
        let h = size_histogram(&label_components(&m, ConnectivityPair::D));
        assert_eq!(
            h.foreground
                .iter()
                .map(|(&k, &v)| (k, v))
                .collect::<Vec<_>>(),
            [(1, 1), (5, 1)]
        );
        assert_eq!(h.total(Phase::Background), 1);
        assert_eq!(h.count_up_to(Phase::Foreground, 4), 1);
    }

    #[test]
    fn empty_phase_histogram() {
        let m = BinaryMask::zeros(&[3, 3]).unwrap();
        let h = size_histogram(&label_components(&m, ConnectivityPair::A));
        assert!(h.foreground.is_empty());
        assert_eq!(h.background.get(&9), Some(&1));
    }

    #[test]
    fn speck_removal() {
        let m = BinaryMask::from_ascii(&["##...", "##..#", "....."]).unwrap();
        let out = remove_small_components(
            &m,
            ConnectivityPair::A,
            1,
            PhaseSet::FG,
            RemovalMode::Simultaneous,
        )
        .unwrap();
        assert_eq!(
            out,
            BinaryMask::from_ascii(&["##...", "##...", "....."]).unwrap()
        );
        assert!(remove_small_components(
            &m,
            ConnectivityPair::A,
            0,
            PhaseSet::FG,
            RemovalMode::Simultaneous
        )
        .is_err());
    }

    #[test]
    fn hole_filling() {
        let m = BinaryMask::from_ascii(&["###", "#.#", "###"]).unwrap();
        let out = remove_small_components(
            &m,
            ConnectivityPair::D,
            1,
            PhaseSet::BG,
            RemovalMode::Sequential,
        )
        .unwrap();
        assert_eq!(out, BinaryMask::ones(&[3, 3]).unwrap());
    }

    #[test]
    fn modes_can_differ() {
        // a speck inside an 8-pixel hole: simultaneous flips both, sequential erases the
        // speck first so the hole grows to 9 pixels and survives
        let m = BinaryMask::from_ascii(&["#####", "#...#", "#.#.#", "#...#", "#####"]).unwrap();
        let conn = ConnectivityPair::A;
        let sim = remove_small_components(&m, conn, 8, PhaseSet::BOTH, RemovalMode::Simultaneous)
            .unwrap();
        let seq =
            remove_small_components(&m, conn, 8, PhaseSet::BOTH, RemovalMode::Sequential).unwrap();
        assert_eq!(
            sim,
            BinaryMask::from_ascii(&["#####", "#####", "##.##", "#####", "#####"]).unwrap()
        );
        assert_eq!(
            seq,
            BinaryMask::from_ascii(&["#####", "#...#", "#...#", "#...#", "#####"]).unwrap()
        );
    }

    #[test]
    fn removal_report_rows() {
        let m =
            BinaryMask::from_ascii(&["#....#", "......", "..##..", "..##..", "#....."]).unwrap();
        let mut report = RemovalReport::new(
            ConnectivityPair::A,
            &[1, 2],
            PhaseSet::BOTH,
            RemovalMode::Simultaneous,
        )
        .unwrap();
        report.add_mask(&m);
        report.add_mask(&m);
        let rows: Vec<(Option<usize>, usize, usize)> = report
            .rows
            .iter()
            .map(|r| (r.threshold, r.foreground, r.background))
            .collect();
        assert_eq!(rows, [(None, 8, 2), (Some(1), 2, 2), (Some(2), 2, 2)]);
        assert_eq!(report.ratio(Phase::Foreground), 25.0);
        assert_eq!(report.ratio(Phase::Background), 100.0);
    }

    #[test]
    fn removal_report_validation() {
        let conn = ConnectivityPair::D;
        assert!(
            RemovalReport::new(conn, &[2, 1], PhaseSet::BOTH, RemovalMode::Simultaneous).is_err()
        );
        assert!(
            RemovalReport::new(conn, &[0, 1], PhaseSet::BOTH, RemovalMode::Simultaneous).is_err()
        );
        let r = RemovalReport::new(conn, &[], PhaseSet::BOTH, RemovalMode::Simultaneous).unwrap();
        assert_eq!(r.rows.len(), 1);
    }

    #[test]
    fn connectivity_counts() {
        let m = BinaryMask::from_ascii(&["#.", ".#"]).unwrap();
        let mut c = ConnectivityCounts::of_mask(&m);
        assert_eq!(c.a, (1, 2));
        assert_eq!(c.d, (2, 1));
        c.accumulate(&ConnectivityCounts::of_mask(&m));
        assert_eq!(c.ratio(Phase::Foreground), 50.0);
        let flat = ConnectivityCounts::of_mask(&BinaryMask::ones(&[2, 2]).unwrap());
        assert_eq!(flat.ratio(Phase::Foreground), 100.0);
        assert_eq!(flat.ratio(Phase::Background), 100.0);
    }
}
