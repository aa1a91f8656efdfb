//! Reading and writing binary masks.
//!
//! 2D masks are PNG (or GIF) images, 3D masks are NRRD volumes. Pixels above
//! the binarization threshold are foreground.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use image::{DynamicImage, ImageFormat};
use topocheck_core::BinaryMask;

use crate::error::{Error, Result};
use crate::nrrd;

/// Mask file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskFormat {
    Png,
    Gif,
    Nrrd,
}

impl MaskFormat {
    /// Format implied by the file extension.
    pub fn from_path(path: &Path) -> Option<MaskFormat> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "png" => Some(MaskFormat::Png),
            "gif" => Some(MaskFormat::Gif),
            "nrrd" => Some(MaskFormat::Nrrd),
            _ => None,
        }
    }
}

/// Whether a path has a mask extension.
pub fn is_mask_file(path: &Path) -> bool {
    path.is_file() && MaskFormat::from_path(path).is_some()
}

fn format_of(path: &Path) -> Result<MaskFormat> {
    MaskFormat::from_path(path).ok_or_else(|| Error::UnsupportedFormat {
        path: path.to_path_buf(),
        reason: "expected a .png, .gif or .nrrd file".into(),
    })
}

/// Loads a mask; values strictly greater than `threshold` become foreground.
pub fn load_mask(path: &Path, threshold: u8) -> Result<BinaryMask> {
    match format_of(path)? {
        MaskFormat::Png => load_image(path, ImageFormat::Png, threshold),
        MaskFormat::Gif => load_image(path, ImageFormat::Gif, threshold),
        MaskFormat::Nrrd => {
            let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
            let vol = nrrd::decode(&bytes).map_err(|e| e.at(path))?;
            let data = vol.data.iter().map(|&v| v > threshold).collect();
            Ok(BinaryMask::new(&vol.dims, data)?)
        }
    }
}

fn load_image(path: &Path, format: ImageFormat, threshold: u8) -> Result<BinaryMask> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let img =
        image::load_from_memory_with_format(&bytes, format).map_err(|source| Error::Image {
            path: path.to_path_buf(),
            source,
        })?;
    let gray = match img {
        DynamicImage::ImageLuma8(g) => g,
        DynamicImage::ImageLumaA8(_) | DynamicImage::ImageRgb8(_) | DynamicImage::ImageRgba8(_) => {
            img.to_luma8()
        }
        other => {
            return Err(Error::UnsupportedBitDepth {
                path: path.to_path_buf(),
                reason: format!("{:?}; only 8-bit images are read", other.color()),
            })
        }
    };
    let (w, h) = gray.dimensions();
    let data = gray.into_raw().into_iter().map(|v| v > threshold).collect();
    Ok(BinaryMask::new(&[h as usize, w as usize], data)?)
}

/// Writes a mask losslessly: 8-bit PNG with 0/255, or gzip NRRD with 0/1.
pub fn save_mask(mask: &BinaryMask, path: &Path) -> Result<()> {
    match format_of(path)? {
        MaskFormat::Png => {
            if mask.ndim() != 2 {
                return Err(Error::UnsupportedFormat {
                    path: path.to_path_buf(),
                    reason: "PNG holds 2D masks only".into(),
                });
            }
            let (h, w) = (mask.dims()[0] as u32, mask.dims()[1] as u32);
            let raw = mask
                .data()
                .iter()
                .map(|&b| if b { 255 } else { 0 })
                .collect();
            let img = image::GrayImage::from_raw(w, h, raw).expect("buffer matches dims");
            img.save_with_format(path, ImageFormat::Png)
                .map_err(|source| Error::Image {
                    path: path.to_path_buf(),
                    source,
                })
        }
        MaskFormat::Gif => Err(Error::UnsupportedFormat {
            path: path.to_path_buf(),
            reason: "GIF is read-only; write PNG instead".into(),
        }),
        MaskFormat::Nrrd => {
            let data: Vec<u8> = mask.data().iter().map(|&b| b as u8).collect();
            let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
            let mut out = BufWriter::new(file);
            nrrd::encode(&mut out, mask.dims(), &data, nrrd::Encoding::Gzip)
                .and_then(|_| out.flush())
                .map_err(|e| Error::io(path, e))
        }
    }
}
