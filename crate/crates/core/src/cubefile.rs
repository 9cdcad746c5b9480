//! Binary cube file.
//!
//! ```text
//! offset  size  field
//! 0       4     magic "HC3D"
//! 4       1     version (1)
//! 5       1     depth r
//! 6       1     layout: 0 = row-major, 1 = hilbert
//! 7       9     reserved, written as zero and ignored on read
//! 16      8*8^r values, u64 little-endian, in layout order
//! ```

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::curve::Depth;
use crate::error::HilbertError;
use crate::ordering::{CubeArray, Layout};

pub const MAGIC: [u8; 4] = *b"HC3D";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 16;
pub const VALUE_LEN: usize = 8;

#[derive(Debug, Error)]
pub enum CubeFileError {
    #[error("bad magic {found:02x?}, expected \"HC3D\"")]
    BadMagic { found: Vec<u8> },

    #[error("unsupported version {0}, expected {VERSION}")]
    UnsupportedVersion(u8),

    #[error("invalid depth in header: {0}")]
    BadDepth(HilbertError),

    #[error("unknown layout code {0}")]
    BadLayout(u8),

    #[error("truncated file: {section} needs {expected} bytes, found {found}")]
    Truncated {
        section: &'static str,
        expected: u64,
        found: u64,
    },

    #[error("{0} unexpected bytes after the payload")]
    TrailingData(u64),

    #[error(transparent)]
    Io(#[from] io::Error),
}

fn layout_code(layout: Layout) -> u8 {
    match layout {
        Layout::RowMajor => 0,
        Layout::Hilbert => 1,
    }
}

fn layout_from_code(code: u8) -> Result<Layout, CubeFileError> {
    match code {
        0 => Ok(Layout::RowMajor),
        1 => Ok(Layout::Hilbert),
        other => Err(CubeFileError::BadLayout(other)),
    }
}

pub fn encode_header(depth: Depth, layout: Layout) -> [u8; HEADER_LEN] {
    let mut header = [0u8; HEADER_LEN];
    header[..4].copy_from_slice(&MAGIC);
    header[4] = VERSION;
    header[5] = depth.get();
    header[6] = layout_code(layout);
    header
}

pub fn to_bytes(a: &CubeArray) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + VALUE_LEN * a.data().len());
    out.extend_from_slice(&encode_header(a.depth(), a.layout()));
    for v in a.data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn from_bytes(bytes: &[u8]) -> Result<CubeArray, CubeFileError> {
    if bytes.len() < HEADER_LEN {
        if bytes.len() >= 4 && bytes[..4] != MAGIC {
            return Err(CubeFileError::BadMagic {
                found: bytes[..4].to_vec(),
            });
        }
        return Err(CubeFileError::Truncated {
            section: "header",
            expected: HEADER_LEN as u64,
            found: bytes.len() as u64,
        });
    }
    let (header, payload) = bytes.split_at(HEADER_LEN);
    if header[..4] != MAGIC {
        return Err(CubeFileError::BadMagic {
            found: header[..4].to_vec(),
        });
    }
    if header[4] != VERSION {
        return Err(CubeFileError::UnsupportedVersion(header[4]));
    }
    let depth = Depth::new(header[5] as u64).map_err(CubeFileError::BadDepth)?;
    let layout = layout_from_code(header[6])?;

    let expected = depth.cells() * VALUE_LEN as u64;
    let found = payload.len() as u64;
    if found < expected {
        return Err(CubeFileError::Truncated {
            section: "payload",
            expected,
            found,
        });
    }
    if found > expected {
        return Err(CubeFileError::TrailingData(found - expected));
    }
    let data = payload
        .chunks_exact(VALUE_LEN)
        .map(|c| u64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    Ok(CubeArray::new(depth, layout, data).expect("length checked above"))
}

pub fn write<W: Write>(mut w: W, a: &CubeArray) -> io::Result<()> {
    w.write_all(&to_bytes(a))?;
    w.flush()
}

pub fn read<R: Read>(mut r: R) -> Result<CubeArray, CubeFileError> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    from_bytes(&bytes)
}

pub fn write_file(path: &Path, a: &CubeArray) -> io::Result<()> {
    fs::write(path, to_bytes(a))
}

pub fn read_file(path: &Path) -> Result<CubeArray, CubeFileError> {
    from_bytes(&fs::read(path)?)
}
