//! Minimal NRRD support: attached uint8 data, raw or gzip encoded.

use std::io::{self, Read, Write};
use std::path::Path;

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;

use crate::error::Error;

/// Data encodings understood by the reader and writer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    Raw,
    Gzip,
}

/// Decoded volume. `dims` is slowest axis first, matching row-major data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Volume {
    pub dims: Vec<usize>,
    pub data: Vec<u8>,
}

#[derive(Debug)]
pub(crate) enum DecodeError {
    Unsupported(String),
    BitDepth(String),
    Corrupt(String),
}

impl DecodeError {
    pub(crate) fn at(self, path: &Path) -> Error {
        let path = path.to_path_buf();
        match self {
            DecodeError::Unsupported(reason) => Error::UnsupportedFormat { path, reason },
            DecodeError::BitDepth(reason) => Error::UnsupportedBitDepth { path, reason },
            DecodeError::Corrupt(reason) => Error::CorruptHeader { path, reason },
        }
    }
}

fn corrupt(reason: impl Into<String>) -> DecodeError {
    DecodeError::Corrupt(reason.into())
}

fn split_header(bytes: &[u8]) -> Result<(&str, &[u8]), DecodeError> {
    let end = bytes
        .windows(2)
        .position(|w| w == b"\n\n")
        .map(|p| (p + 1, p + 2))
        .or_else(|| {
            bytes
                .windows(4)
                .position(|w| w == b"\r\n\r\n")
                .map(|p| (p + 2, p + 4))
        })
        .ok_or_else(|| corrupt("no blank line ends the header"))?;
    let header = std::str::from_utf8(&bytes[..end.0]).map_err(|_| corrupt("header is not text"))?;
    Ok((header, &bytes[end.1..]))
}

pub(crate) fn decode(bytes: &[u8]) -> Result<Volume, DecodeError> {
    if !bytes.starts_with(b"NRRD000") {
        return Err(corrupt("missing NRRD magic"));
    }
    let (header, payload) = split_header(bytes)?;
    let mut lines = header.lines();
    lines.next();

    let mut kind = None;
    let mut dimension = None;
    let mut sizes = None;
    let mut encoding = None;
    for line in lines {
        let line = line.trim_end_matches('\r');
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        // key/value pairs (`key:=value`) carry no geometry
        if line.contains(":=") {
            continue;
        }
        let (key, value) = line
            .split_once(": ")
            .ok_or_else(|| corrupt(format!("malformed field line {line:?}")))?;
        let value = value.trim();
        match key.trim().to_ascii_lowercase().as_str() {
            "type" => kind = Some(value.to_ascii_lowercase()),
            "dimension" => {
                dimension = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| corrupt(format!("bad dimension {value:?}")))?,
                )
            }
            "sizes" => {
                let s: Result<Vec<usize>, _> = value.split_whitespace().map(str::parse).collect();
                sizes = Some(s.map_err(|_| corrupt(format!("bad sizes {value:?}")))?);
            }
            "encoding" => encoding = Some(value.to_ascii_lowercase()),
            "data file" | "datafile" => {
                return Err(DecodeError::Unsupported("detached data files".into()))
            }
            "line skip" | "lineskip" | "byte skip" | "byteskip" if value != "0" => {
                return Err(DecodeError::Unsupported("skipped header bytes".into()))
            }
            _ => {}
        }
    }

    let kind = kind.ok_or_else(|| corrupt("missing type field"))?;
    if !matches!(
        kind.as_str(),
        "uchar" | "unsigned char" | "uint8" | "uint8_t"
    ) {
        return Err(DecodeError::BitDepth(format!(
            "type {kind:?}; only uint8 is read"
        )));
    }
    let dimension = dimension.ok_or_else(|| corrupt("missing dimension field"))?;
    let mut sizes = sizes.ok_or_else(|| corrupt("missing sizes field"))?;
    if sizes.len() != dimension {
        return Err(corrupt(format!(
            "dimension {dimension} but {} sizes",
            sizes.len()
        )));
    }
    if !(2..=3).contains(&dimension) {
        return Err(DecodeError::Unsupported(format!(
            "{dimension}-dimensional volumes"
        )));
    }
    if sizes.contains(&0) {
        return Err(corrupt("zero extent"));
    }
    let encoding = match encoding.as_deref() {
        Some("raw") => Encoding::Raw,
        Some("gzip") | Some("gz") => Encoding::Gzip,
        Some(other) => return Err(DecodeError::Unsupported(format!("encoding {other:?}"))),
        None => return Err(corrupt("missing encoding field")),
    };

    let len: usize = sizes.iter().product();
    let data = match encoding {
        Encoding::Raw => payload.to_vec(),
        Encoding::Gzip => {
            let mut out = Vec::with_capacity(len);
            GzDecoder::new(payload)
                .read_to_end(&mut out)
                .map_err(|e| corrupt(format!("gzip stream: {e}")))?;
            out
        }
    };
    if data.len() != len {
        return Err(corrupt(format!(
            "expected {len} data bytes, found {}",
            data.len()
        )));
    }
    // NRRD lists the fastest axis first
    sizes.reverse();
    Ok(Volume { dims: sizes, data })
}

/// Writes a uint8 volume with `dims` given slowest axis first.
pub fn encode(
    out: &mut impl Write,
    dims: &[usize],
    data: &[u8],
    encoding: Encoding,
) -> io::Result<()> {
    let sizes: Vec<String> = dims.iter().rev().map(|d| d.to_string()).collect();
    write!(
        out,
        "NRRD0004\ntype: uint8\ndimension: {}\nsizes: {}\nencoding: {}\n\n",
        dims.len(),
        sizes.join(" "),
        match encoding {
            Encoding::Raw => "raw",
            Encoding::Gzip => "gzip",
        }
    )?;
    match encoding {
        Encoding::Raw => out.write_all(data),
        Encoding::Gzip => {
            let mut gz = GzEncoder::new(out, Compression::default());
            gz.write_all(data)?;
            gz.finish().map(|_| ())
        }
    }
}
