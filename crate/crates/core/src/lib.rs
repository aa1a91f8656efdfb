//! Connectivity-aware topological evaluation of binary segmentation masks.
//!
//! Every topological quantity in this crate is computed under an explicit
//! [`Connectivity`] setting: `A` uses all-neighbour adjacency (8 in 2D, 26 in
//! 3D) for the foreground and direct adjacency (4 / 6) for the background, `D`
//! is the inverse. The crate is `no_std` with `alloc`; file formats, dataset
//! manifests and the command line live in the `topocheck` companion crate.

#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![deny(missing_docs)]

extern crate alloc;

mod error;
mod union_find;

pub mod audit;
pub mod connectivity;
pub mod labeling;
pub mod mask;
pub mod matching;
pub mod overlap;
pub mod partition;
pub mod rank;
pub mod susceptibility;
pub mod topology;

pub use error::{Error, Result};

pub use audit::{
    remove_small_components, size_histogram, ComponentHistogram, ConnectivityCounts, RemovalMode,
    RemovalReport, RemovalRow,
};
pub use connectivity::{Adjacency, Connectivity, ConnectivityPair};
pub use labeling::{count_components, label_components, ComponentInfo, ComponentLabeling, Phase};
pub use mask::{mask_complement, mask_intersection, mask_union, BinaryMask};
pub use matching::{match_dim, match_dim0, match_dim1_2d, match_dim2_3d, MatchingResult};
pub use overlap::{cldice, dice, skeletonize_2d, Skeleton};
pub use partition::{
    build_contingency, rand_scores, variation_of_information, ContingencyTable, LogBase,
    RandScores, Scope,
};
pub use rank::{
    avg_difference, avg_rel_change, kendall, pearson, rank, rank_with, spearman, spearman_with,
    Direction, RelChange, ScoreVector, TieMethod,
};
pub use susceptibility::{
    susceptibility_beta, susceptibility_partition, ImageSusceptibility, PartitionMetric,
    SusceptibilityReport,
};
pub use topology::{
    betti_number_error, betti_numbers, cell_census, euler_characteristic, CellCensus, Construction,
    TopologySummary,
};
