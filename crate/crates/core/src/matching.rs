//! Betti matching error between two binary masks.
//!
//! Features are matched through the union of the two foregrounds. In
//! dimension 0 a component of the union pairs one prediction component with
//! one ground-truth component whenever it contains both. In the top dimension
//! (holes in 2D, cavities in 3D) the background of the union is the
//! intersection of both backgrounds; each of its bounded components lies in
//! exactly one hole of each mask and links those two holes. The holes are
//! then paired by a maximum-cardinality bipartite matching.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::connectivity::ConnectivityPair;
use crate::labeling::{label_components, ComponentLabeling, Phase};
use crate::mask::BinaryMask;
use crate::{Error, Result};

/// Outcome of matching the features of one dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingResult {
    /// Homology dimension.
    pub dim: usize,
    /// Matched `(prediction component id, ground-truth component id)` pairs.
    ///
    /// Ids refer to [`label_components`] of the mask for dimension 0 and of
    /// the mask padded with a one-pixel background frame otherwise.
    pub matched_pairs: Vec<(u32, u32)>,
    /// Prediction features without a partner.
    pub unmatched_pred: usize,
    /// Ground-truth features without a partner.
    pub unmatched_gt: usize,
    /// `unmatched_pred + unmatched_gt`.
    pub bm_error: usize,
}

impl MatchingResult {
    fn new(dim: usize, matched_pairs: Vec<(u32, u32)>, n_pred: usize, n_gt: usize) -> Self {
        let m = matched_pairs.len();
        MatchingResult {
            dim,
            matched_pairs,
            unmatched_pred: n_pred - m,
            unmatched_gt: n_gt - m,
            bm_error: n_pred + n_gt - 2 * m,
        }
    }
}

/// Matches foreground components through the components of `pred | gt`.
pub fn match_dim0(
    pred: &BinaryMask,
    gt: &BinaryMask,
    conn: ConnectivityPair,
) -> Result<MatchingResult> {
    let union = pred.union(gt)?;
    let lp = label_components(pred, conn);
    let lg = label_components(gt, conn);
    let lu = label_components(&union, conn);

    let n_union = lu.components().len();
    let mut pred_rep = alloc::vec![u32::MAX; n_union];
    let mut gt_rep = alloc::vec![u32::MAX; n_union];
    for idx in 0..union.len() {
        let u = lu.labels()[idx] as usize;
        if pred.get_flat(idx) {
            pred_rep[u] = pred_rep[u].min(lp.labels()[idx]);
        }
        if gt.get_flat(idx) {
            gt_rep[u] = gt_rep[u].min(lg.labels()[idx]);
        }
    }
    let pairs: Vec<(u32, u32)> = pred_rep
        .into_iter()
        .zip(gt_rep)
        .filter(|&(p, g)| p != u32::MAX && g != u32::MAX)
        .collect();

    Ok(MatchingResult::new(
        0,
        pairs,
        lp.count(Phase::Foreground),
        lg.count(Phase::Foreground),
    ))
}

/// Matches holes of two 2D masks.
pub fn match_dim1_2d(
    pred: &BinaryMask,
    gt: &BinaryMask,
    conn: ConnectivityPair,
) -> Result<MatchingResult> {
    if pred.ndim() != 2 {
        return Err(Error::UnsupportedDimensionality {
            expected: 2,
            got: pred.ndim(),
        });
    }
    match_top_dim(pred, gt, conn, 1)
}

/// Matches cavities of two 3D masks.
pub fn match_dim2_3d(
    pred: &BinaryMask,
    gt: &BinaryMask,
    conn: ConnectivityPair,
) -> Result<MatchingResult> {
    if pred.ndim() != 3 {
        return Err(Error::UnsupportedDimensionality {
            expected: 3,
            got: pred.ndim(),
        });
    }
    match_top_dim(pred, gt, conn, 2)
}

/// Dispatches to the matcher for `dim`. Dimension 1 of a 3D mask is not supported.
pub fn match_dim(
    pred: &BinaryMask,
    gt: &BinaryMask,
    conn: ConnectivityPair,
    dim: usize,
) -> Result<MatchingResult> {
    match (dim, pred.ndim()) {
        (0, _) => match_dim0(pred, gt, conn),
        (1, 2) => match_dim1_2d(pred, gt, conn),
        (2, 3) => match_dim2_3d(pred, gt, conn),
        (1, 3) => Err(Error::InvalidParameter(
            "dimension-1 Betti matching is only available for 2D masks",
        )),
        _ => Err(Error::InvalidParameter(
            "Betti dimension exceeds mask dimensionality",
        )),
    }
}

fn match_top_dim(
    pred: &BinaryMask,
    gt: &BinaryMask,
    conn: ConnectivityPair,
    dim: usize,
) -> Result<MatchingResult> {
    let union = pred.union(gt)?;
    let pp = pred.pad_with_background(1);
    let gp = gt.pad_with_background(1);
    let up = union.pad_with_background(1);
    let lp = label_components(&pp, conn);
    let lg = label_components(&gp, conn);
    let lu = label_components(&up, conn);

    let (pred_holes, pred_slot) = holes(&lp);
    let (gt_holes, gt_slot) = holes(&lg);

    // one edge per bounded background component of the union
    let mut seen = alloc::vec![false; lu.components().len()];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (idx, &u) in lu.labels().iter().enumerate() {
        if up.get_flat(idx) || seen[u as usize] {
            continue;
        }
        seen[u as usize] = true;
        let ps = pred_slot[lp.labels()[idx] as usize];
        let gs = gt_slot[lg.labels()[idx] as usize];
        if ps != usize::MAX && gs != usize::MAX {
            edges.push((ps, gs));
        }
    }
    edges.sort_unstable();
    edges.dedup();

    let mut adj = alloc::vec![Vec::new(); pred_holes.len()];
    for &(p, g) in &edges {
        adj[p].push(g);
    }
    let mate = hopcroft_karp(&adj, gt_holes.len());
    let pairs: Vec<(u32, u32)> = mate
        .iter()
        .enumerate()
        .filter(|(_, m)| m.is_some())
        .map(|(p, m)| (pred_holes[p], gt_holes[m.unwrap()]))
        .collect();

    Ok(MatchingResult::new(
        dim,
        pairs,
        pred_holes.len(),
        gt_holes.len(),
    ))
}

/// Bounded background component ids and a component-id -> hole-slot map.
fn holes(labeling: &ComponentLabeling) -> (Vec<u32>, Vec<usize>) {
    let mut ids = Vec::new();
    let mut slot = alloc::vec![usize::MAX; labeling.components().len()];
    for c in labeling.components_of(Phase::Background) {
        if !c.touches_border {
            slot[c.id as usize] = ids.len();
            ids.push(c.id);
        }
    }
    (ids, slot)
}

/// Maximum-cardinality matching; returns the right partner of each left vertex.
pub(crate) fn hopcroft_karp(adj: &[Vec<usize>], n_right: usize) -> Vec<Option<usize>> {
    const INF: usize = usize::MAX;
    let n_left = adj.len();
    let mut mate_l: Vec<Option<usize>> = alloc::vec![None; n_left];
    let mut mate_r: Vec<Option<usize>> = alloc::vec![None; n_right];
    let mut dist = alloc::vec![INF; n_left];

    loop {
        // layered BFS from free left vertices
        let mut queue = VecDeque::new();
        for l in 0..n_left {
            if mate_l[l].is_none() {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = INF;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                match mate_r[r] {
                    None => found = true,
                    Some(l2) if dist[l2] == INF => {
                        dist[l2] = dist[l] + 1;
                        queue.push_back(l2);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found {
            break;
        }
        for l in 0..n_left {
            if mate_l[l].is_none() {
                augment(l, adj, &mut mate_l, &mut mate_r, &mut dist);
            }
        }
    }
    mate_l
}

fn augment(
    l: usize,
    adj: &[Vec<usize>],
    mate_l: &mut [Option<usize>],
    mate_r: &mut [Option<usize>],
    dist: &mut [usize],
) -> bool {
    for &r in &adj[l] {
        let ok = match mate_r[r] {
            None => true,
            Some(l2) => dist[l2] == dist[l] + 1 && augment(l2, adj, mate_l, mate_r, dist),
        };
        if ok {
            mate_l[l] = Some(r);
            mate_r[r] = Some(l);
            return true;
        }
    }
    dist[l] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ascii(rows: &[&str]) -> BinaryMask {
        BinaryMask::from_ascii(rows).unwrap()
    }

    #[test]
    fn identical_masks_match_fully() {
        let m = ascii(&["##..#", "#..##", "..#.."]);
        for conn in [ConnectivityPair::A, ConnectivityPair::D] {
            let r = match_dim0(&m, &m, conn).unwrap();
            assert_eq!(r.bm_error, 0);
            assert_eq!(r.unmatched_pred, 0);
        }
    }

    #[test]
    fn split_row() {
        let pred = ascii(&["#...#"]);
        let gt = ascii(&["#####"]);
        let r = match_dim0(&pred, &gt, ConnectivityPair::D).unwrap();
        assert_eq!(r.matched_pairs, [(0, 0)]);
        assert_eq!((r.unmatched_pred, r.unmatched_gt, r.bm_error), (1, 0, 1));
    }

    #[test]
    fn far_apart_blobs() {
        let pred = ascii(&["##....", "##...."]);
        let gt = ascii(&["....##", "....##"]);
        let r = match_dim0(&pred, &gt, ConnectivityPair::A).unwrap();
        assert!(r.matched_pairs.is_empty());
        assert_eq!(r.bm_error, 2);
    }

    #[test]
    fn ring_against_itself_and_block() {
        let ring = ascii(&["###", "#.#", "###"]);
        let block = ascii(&["###", "###", "###"]);
        let same = match_dim1_2d(&ring, &ring, ConnectivityPair::D).unwrap();
        assert_eq!((same.matched_pairs.len(), same.bm_error), (1, 0));
        let r = match_dim1_2d(&ring, &block, ConnectivityPair::D).unwrap();
        assert_eq!((r.matched_pairs.len(), r.bm_error), (0, 1));
    }

    #[test]
    fn shifted_rings_with_disjoint_holes() {
        let pred = ascii(&["###.", "#.#.", "###.", "...."]);
        let gt = ascii(&["....", ".###", ".#.#", ".###"]);
        let r = match_dim1_2d(&pred, &gt, ConnectivityPair::D).unwrap();
        assert_eq!((r.matched_pairs.len(), r.bm_error), (0, 2));
    }

    #[test]
    fn hole_split_by_other_mask_still_matches_once() {
        // gt's wall splits pred's hole into two union holes; both link the same pair
        let pred = ascii(&["#####", "#...#", "#####"]);
        let gt = ascii(&["#####", "#.#.#", "#####"]);
        let r = match_dim1_2d(&pred, &gt, ConnectivityPair::D).unwrap();
        assert_eq!(r.matched_pairs.len(), 1);
        assert_eq!((r.unmatched_pred, r.unmatched_gt, r.bm_error), (0, 1, 1));
    }

    #[test]
    fn cavities() {
        let hollow = BinaryMask::from_fn(&[3, 3, 3], |c| c != [1, 1, 1]).unwrap();
        let solid = BinaryMask::ones(&[3, 3, 3]).unwrap();
        let conn = ConnectivityPair::A;
        assert_eq!(match_dim2_3d(&hollow, &hollow, conn).unwrap().bm_error, 0);
        assert_eq!(match_dim2_3d(&hollow, &solid, conn).unwrap().bm_error, 1);
        let left = BinaryMask::from_fn(&[3, 3, 7], |c| c[2] < 3 && c != [1, 1, 1]).unwrap();
        let right = BinaryMask::from_fn(&[3, 3, 7], |c| c[2] >= 4 && c != [1, 1, 5]).unwrap();
        assert_eq!(match_dim2_3d(&left, &right, conn).unwrap().bm_error, 2);
    }

    #[test]
    fn dimension_guards() {
        let m2 = BinaryMask::zeros(&[3, 3]).unwrap();
        let m3 = BinaryMask::zeros(&[3, 3, 3]).unwrap();
        assert!(match_dim1_2d(&m3, &m3, ConnectivityPair::A).is_err());
        assert!(match_dim2_3d(&m2, &m2, ConnectivityPair::A).is_err());
        assert!(match_dim(&m3, &m3, ConnectivityPair::A, 1).is_err());
        assert!(match_dim(&m2, &m2, ConnectivityPair::A, 2).is_err());
    }

    #[test]
    fn hopcroft_karp_finds_maximum() {
        // greedy on the first edge would give 1; maximum is 2
        let adj = alloc::vec![alloc::vec![0, 1], alloc::vec![0]];
        let m = hopcroft_karp(&adj, 2);
        assert_eq!(m, [Some(1), Some(0)]);
    }
}
