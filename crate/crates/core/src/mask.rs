//! Dense binary masks in row-major order.

use alloc::vec::Vec;

use crate::{Error, Result};

/// A dense 2D or 3D binary grid; `true` is foreground.
///
/// Data is row-major: the last extent varies fastest. A 2D mask has dims
/// `[rows, cols]`, a 3D mask `[depth, rows, cols]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    dims: Vec<usize>,
    data: Vec<bool>,
}

impl core::fmt::Debug for BinaryMask {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "BinaryMask{:?}", self.dims)?;
        if self.ndim() == 2 && self.len() <= 1024 {
            let cols = self.dims[1];
            for row in self.data.chunks(cols) {
                f.write_str("\n  ")?;
                for &v in row {
                    f.write_str(if v { "#" } else { "." })?;
                }
            }
        }
        Ok(())
    }
}

impl BinaryMask {
    /// Builds a mask, validating the shape against the data length.
    pub fn new(dims: &[usize], data: Vec<bool>) -> Result<Self> {
        validate_dims(dims, data.len())?;
        Ok(Self {
            dims: dims.to_vec(),
            data,
        })
    }

    /// All-background mask.
    pub fn zeros(dims: &[usize]) -> Result<Self> {
        let n = dims.iter().product();
        Self::new(dims, alloc::vec![false; n])
    }

    /// All-foreground mask.
    pub fn ones(dims: &[usize]) -> Result<Self> {
        let n = dims.iter().product();
        Self::new(dims, alloc::vec![true; n])
    }

    /// Mask whose pixel at `coords` is `f(coords)`.
    pub fn from_fn(dims: &[usize], mut f: impl FnMut(&[usize]) -> bool) -> Result<Self> {
        validate_dims(dims, dims.iter().product())?;
        let n: usize = dims.iter().product();
        let mut coords = alloc::vec![0usize; dims.len()];
        let mut data = Vec::with_capacity(n);
        for _ in 0..n {
            data.push(f(&coords));
            for axis in (0..dims.len()).rev() {
                coords[axis] += 1;
                if coords[axis] < dims[axis] {
                    break;
                }
                coords[axis] = 0;
            }
        }
        Self::new(dims, data)
    }

    /// Parses a 2D mask from text rows; `#`, `1` or `X` mark foreground.
    ///
    /// ```
    /// use topocheck_core::BinaryMask;
    /// let ring = BinaryMask::from_ascii(&["###", "#.#", "###"]).unwrap();
    /// assert_eq!(ring.count_foreground(), 8);
    /// ```
    pub fn from_ascii(rows: &[&str]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.chars().count());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.chars().count() != cols {
                return Err(Error::InvalidDims {
                    dims: alloc::vec![rows.len(), cols],
                    len: data.len(),
                });
            }
            data.extend(row.chars().map(|c| matches!(c, '#' | '1' | 'X')));
        }
        Self::new(&[rows.len(), cols], data)
    }

    /// Extents, outermost first.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// 2 or 3.
    pub fn ndim(&self) -> usize {
        self.dims.len()
    }

    /// Number of pixels (voxels).
    pub fn len(&self) -> usize {
        self.data.len()
    }

    /// Always false for a valid mask; present for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Flat row-major data.
    pub fn data(&self) -> &[bool] {
        &self.data
    }

    /// Consumes the mask, returning its flat data.
    pub fn into_data(self) -> Vec<bool> {
        self.data
    }

    /// Value at a flat index.
    pub fn get_flat(&self, idx: usize) -> bool {
        self.data[idx]
    }

    /// Value at `coords`, or `None` outside the grid.
    pub fn get(&self, coords: &[usize]) -> Option<bool> {
        self.flat_index(coords).map(|i| self.data[i])
    }

    /// Sets the value at `coords`. Panics outside the grid.
    pub fn set(&mut self, coords: &[usize], value: bool) {
        let i = self
            .flat_index(coords)
            .expect("coordinates outside the mask");
        self.data[i] = value;
    }

    /// Sets the value at a flat index.
    pub fn set_flat(&mut self, idx: usize, value: bool) {
        self.data[idx] = value;
    }

    /// Row-major flat index of `coords`.
    pub fn flat_index(&self, coords: &[usize]) -> Option<usize> {
        if coords.len() != self.dims.len() {
            return None;
        }
        let mut idx = 0;
        for (&c, &d) in coords.iter().zip(&self.dims) {
            if c >= d {
                return None;
            }
            idx = idx * d + c;
        }
        Some(idx)
    }

    /// Number of foreground pixels.
    pub fn count_foreground(&self) -> usize {
        self.data.iter().filter(|&&v| v).count()
    }

    /// Extents as `[depth, rows, cols]`, with depth 1 for 2D masks.
    pub(crate) fn extents3(&self) -> [usize; 3] {
        match *self.dims.as_slice() {
            [r, c] => [1, r, c],
            [d, r, c] => [d, r, c],
            _ => unreachable!("mask dims validated at construction"),
        }
    }

    /// Fails with [`Error::DimsMismatch`] unless both masks share a shape.
    pub fn check_same_shape(&self, other: &BinaryMask) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimsMismatch {
                left: self.dims.clone(),
                right: other.dims.clone(),
            });
        }
        Ok(())
    }

    /// Pointwise OR.
    pub fn union(&self, other: &BinaryMask) -> Result<BinaryMask> {
        self.zip_with(other, |a, b| a | b)
    }

    /// Pointwise AND.
    pub fn intersection(&self, other: &BinaryMask) -> Result<BinaryMask> {
        self.zip_with(other, |a, b| a & b)
    }

    /// Pointwise NOT.
    pub fn complement(&self) -> BinaryMask {
        BinaryMask {
            dims: self.dims.clone(),
            data: self.data.iter().map(|&v| !v).collect(),
        }
    }

    /// Surrounds the mask with a background frame `width` pixels thick.
    pub fn pad_with_background(&self, width: usize) -> BinaryMask {
        let new_dims: Vec<usize> = self.dims.iter().map(|&d| d + 2 * width).collect();
        let [d, r, c] = self.extents3();
        let [nd, nr, nc] = match *new_dims.as_slice() {
            [r, c] => [1, r, c],
            [d, r, c] => [d, r, c],
            _ => unreachable!(),
        };
        let z_off = if self.ndim() == 3 { width } else { 0 };
        let mut data = alloc::vec![false; nd * nr * nc];
        for z in 0..d {
            for y in 0..r {
                let src = (z * r + y) * c;
                let dst = ((z + z_off) * nr + y + width) * nc + width;
                data[dst..dst + c].copy_from_slice(&self.data[src..src + c]);
            }
        }
        BinaryMask {
            dims: new_dims,
            data,
        }
    }

    fn zip_with(&self, other: &BinaryMask, op: impl Fn(bool, bool) -> bool) -> Result<BinaryMask> {
        self.check_same_shape(other)?;
        Ok(BinaryMask {
            dims: self.dims.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        })
    }
}

fn validate_dims(dims: &[usize], len: usize) -> Result<()> {
    let ok = matches!(dims.len(), 2 | 3)
        && dims.iter().all(|&d| d >= 1)
        && dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)) == Some(len);
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidDims {
            dims: dims.to_vec(),
            len,
        })
    }
}

/// `mask_union` under its free-function name.
pub fn mask_union(a: &BinaryMask, b: &BinaryMask) -> Result<BinaryMask> {
    a.union(b)
}

/// `mask_intersection` under its free-function name.
pub fn mask_intersection(a: &BinaryMask, b: &BinaryMask) -> Result<BinaryMask> {
    a.intersection(b)
}

/// `mask_complement` under its free-function name.
pub fn mask_complement(a: &BinaryMask) -> BinaryMask {
    a.complement()
}
