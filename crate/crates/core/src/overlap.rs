//! Dice, thinning and centerline Dice.

use crate::mask::BinaryMask;
use crate::{Error, Result};

/// `2|P & G| / (|P| + |G|)`; 1 when both masks are empty.
pub fn dice(pred: &BinaryMask, gt: &BinaryMask) -> Result<f64> {
    pred.check_same_shape(gt)?;
    let (mut inter, mut p, mut g) = (0usize, 0usize, 0usize);
    for (&a, &b) in pred.data().iter().zip(gt.data()) {
        inter += (a && b) as usize;
        p += a as usize;
        g += b as usize;
    }
    if p + g == 0 {
        return Ok(1.0);
    }
    Ok(2.0 * inter as f64 / (p + g) as f64)
}

/// A one-pixel-wide thinning of a 2D mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    mask: BinaryMask,
}

impl Skeleton {
    /// Skeleton pixels.
    pub fn mask(&self) -> &BinaryMask {
        &self.mask
    }

    /// Unwraps the skeleton mask.
    pub fn into_mask(self) -> BinaryMask {
        self.mask
    }
}

/// Zhang–Suen thinning run to convergence.
///
/// Each sub-iteration marks pixels with the classic Zhang–Suen conditions
/// on the current image, then deletes the marked pixels in raster order,
/// skipping any that are no longer simple (8-connected foreground, 4-connected
/// background) at the time of deletion. Without that check, parallel deletion
/// erases 2x2 blocks and two-pixel-thick diagonals. Pixels outside the grid
/// count as background.
pub fn skeletonize_2d(mask: &BinaryMask) -> Result<Skeleton> {
    if mask.ndim() != 2 {
        return Err(Error::UnsupportedDimensionality {
            expected: 2,
            got: mask.ndim(),
        });
    }
    let (rows, cols) = (mask.dims()[0], mask.dims()[1]);
    let mut img = mask.clone();
    let mut marked = alloc::vec::Vec::new();
    loop {
        let mut changed = false;
        for step in 0..2 {
            marked.clear();
            for y in 0..rows {
                for x in 0..cols {
                    if img.get_flat(y * cols + x) && zhang_suen_candidate(&img, y, x, step) {
                        marked.push((y, x));
                    }
                }
            }
            for &(y, x) in &marked {
                if is_simple(&neighbours(&img, y, x)) {
                    img.set_flat(y * cols + x, false);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(Skeleton { mask: img })
}

/// Neighbours clockwise from north: P2..P9 in Zhang–Suen notation.
fn neighbours(img: &BinaryMask, y: usize, x: usize) -> [bool; 8] {
    let cols = img.dims()[1];
    let rows = img.dims()[0];
    let at = |dy: isize, dx: isize| -> bool {
        match (y.checked_add_signed(dy), x.checked_add_signed(dx)) {
            (Some(ny), Some(nx)) if ny < rows && nx < cols => img.get_flat(ny * cols + nx),
            _ => false,
        }
    };
    [
        at(-1, 0),
        at(-1, 1),
        at(0, 1),
        at(1, 1),
        at(1, 0),
        at(1, -1),
        at(0, -1),
        at(-1, -1),
    ]
}

fn zhang_suen_candidate(img: &BinaryMask, y: usize, x: usize, step: usize) -> bool {
    let p = neighbours(img, y, x);
    let b = p.iter().filter(|&&v| v).count();
    let a = (0..8).filter(|&i| !p[i] && p[(i + 1) % 8]).count();
    if !(2..=6).contains(&b) || a != 1 {
        return false;
    }
    let [p2, _, p4, _, p6, _, p8, _] = p;
    if step == 0 {
        !(p2 && p4 && p6) && !(p4 && p6 && p8)
    } else {
        !(p2 && p4 && p8) && !(p2 && p6 && p8)
    }
}

/// Yokoi 8-connectivity number equals 1.
fn is_simple(p: &[bool; 8]) -> bool {
    // reorder to E, NE, N, NW, W, SW, S, SE and complement
    let order = [2, 1, 0, 7, 6, 5, 4, 3];
    let bg: [i32; 8] = core::array::from_fn(|k| !p[order[k]] as i32);
    let n8: i32 = [0, 2, 4, 6]
        .iter()
        .map(|&k| bg[k] - bg[k] * bg[(k + 1) % 8] * bg[(k + 2) % 8])
        .sum();
    n8 == 1
}

/// Harmonic mean of topology precision `|S(P) & G| / |S(P)|` and topology
/// sensitivity `|S(G) & P| / |S(G)|`. 2D only.
pub fn cldice(pred: &BinaryMask, gt: &BinaryMask) -> Result<f64> {
    pred.check_same_shape(gt)?;
    let sp = skeletonize_2d(pred)?;
    let sg = skeletonize_2d(gt)?;
    let sp_n = sp.mask.count_foreground();
    let sg_n = sg.mask.count_foreground();
    if sp_n == 0 || sg_n == 0 {
        return Err(Error::UndefinedMetric("clDice needs non-empty skeletons"));
    }
    let prec = sp.mask.intersection(gt)?.count_foreground() as f64 / sp_n as f64;
    let sens = sg.mask.intersection(pred)?.count_foreground() as f64 / sg_n as f64;
    if prec + sens == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * prec * sens / (prec + sens))
}
