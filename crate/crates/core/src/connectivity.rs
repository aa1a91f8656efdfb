//! Foreground/background adjacency policies.

use core::fmt;
use core::str::FromStr;

use alloc::vec::Vec;

use crate::labeling::Phase;

/// Pixel adjacency: `Direct` shares a face (4 / 6 neighbours), `All` shares
/// any boundary point (8 / 26 neighbours).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Adjacency {
    /// `2 * ndim` neighbours.
    Direct,
    /// `3^ndim - 1` neighbours.
    All,
}

impl Adjacency {
    /// Number of neighbours in a grid of the given dimensionality.
    pub fn neighbor_count(self, ndim: usize) -> usize {
        match self {
            Adjacency::Direct => 2 * ndim,
            Adjacency::All => 3usize.pow(ndim as u32) - 1,
        }
    }

    /// The opposite policy.
    pub fn dual(self) -> Adjacency {
        match self {
            Adjacency::Direct => Adjacency::All,
            Adjacency::All => Adjacency::Direct,
        }
    }

    /// Neighbour offsets as `[dz, dy, dx]`; `dz` is always 0 for 2D.
    pub fn offsets(self, ndim: usize) -> Vec<[isize; 3]> {
        let z_range: &[isize] = if ndim == 3 { &[-1, 0, 1] } else { &[0] };
        let mut out = Vec::new();
        for &dz in z_range {
            for dy in -1isize..=1 {
                for dx in -1isize..=1 {
                    let l1 = dz.abs() + dy.abs() + dx.abs();
                    let keep = match self {
                        Adjacency::Direct => l1 == 1,
                        Adjacency::All => l1 >= 1,
                    };
                    if keep {
                        out.push([dz, dy, dx]);
                    }
                }
            }
        }
        out
    }

    /// Offsets that precede the origin in raster order.
    pub(crate) fn causal_offsets(self, ndim: usize) -> Vec<[isize; 3]> {
        self.offsets(ndim)
            .into_iter()
            .filter(|o| *o < [0, 0, 0])
            .collect()
    }
}

/// The connectivity setting of a dataset.
///
/// `A` applies all-neighbour adjacency to the foreground and direct adjacency
/// to the background; `D` is the inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Connectivity {
    /// Foreground all, background direct.
    A,
    /// Foreground direct, background all.
    D,
}

impl Connectivity {
    /// Both settings, `A` first.
    pub const BOTH: [Connectivity; 2] = [Connectivity::A, Connectivity::D];

    /// The other setting.
    pub fn opposite(self) -> Connectivity {
        match self {
            Connectivity::A => Connectivity::D,
            Connectivity::D => Connectivity::A,
        }
    }

    /// Suffix used in metric names, e.g. `B0_A`.
    pub fn suffix(self) -> &'static str {
        match self {
            Connectivity::A => "A",
            Connectivity::D => "D",
        }
    }
}

impl fmt::Display for Connectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.suffix())
    }
}

impl FromStr for Connectivity {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(Connectivity::A),
            "D" | "d" => Ok(Connectivity::D),
            _ => Err(crate::Error::InvalidParameter(
                "connectivity must be A or D",
            )),
        }
    }
}

/// Resolved foreground and background adjacency for a setting. The two are
/// always opposite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConnectivityPair {
    setting: Connectivity,
}

impl ConnectivityPair {
    /// Pair for a setting.
    pub const fn new(setting: Connectivity) -> Self {
        Self { setting }
    }

    /// `A` setting.
    pub const A: ConnectivityPair = ConnectivityPair::new(Connectivity::A);
    /// `D` setting.
    pub const D: ConnectivityPair = ConnectivityPair::new(Connectivity::D);

    /// The underlying setting.
    pub fn setting(self) -> Connectivity {
        self.setting
    }

    /// Foreground adjacency.
    pub fn foreground(self) -> Adjacency {
        match self.setting {
            Connectivity::A => Adjacency::All,
            Connectivity::D => Adjacency::Direct,
        }
    }

    /// Background adjacency.
    pub fn background(self) -> Adjacency {
        self.foreground().dual()
    }

    /// Adjacency for a phase.
    pub fn for_phase(self, phase: Phase) -> Adjacency {
        match phase {
            Phase::Foreground => self.foreground(),
            Phase::Background => self.background(),
        }
    }

    /// The inverted pair.
    pub fn opposite(self) -> ConnectivityPair {
        ConnectivityPair::new(self.setting.opposite())
    }
}

impl From<Connectivity> for ConnectivityPair {
    fn from(setting: Connectivity) -> Self {
        ConnectivityPair::new(setting)
    }
}
