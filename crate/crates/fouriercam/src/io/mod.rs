//! Binary file formats and exports.
//!
//! All multi-byte integers are little-endian; reals are IEEE-754
//! little-endian (64-bit in headers and detection/coefficient payloads,
//! 32-bit in bulk video payloads). Every header is self-describing: no
//! out-of-band metadata is needed to decode a file.
//!
//! | magic  | payload                       |
//! |--------|-------------------------------|
//! | `FCV1` | video cube                    |
//! | `FCE1` | coded exposure                |
//! | `FCS1` | temporal spectrum             |
//! | `FCK1` | kernel block (inline only)    |

mod export;
mod exposure;
mod kernel;
mod spectrum;
mod video;

pub use export::{
    color_ramp, write_amplitude_pgm, write_gray_pgm, write_phase_pgm, write_time_map_ppm,
    write_trajectory_csv,
};
pub use exposure::{read_coded_exposure, write_coded_exposure};
pub use spectrum::{read_spectrum, write_spectrum};
pub use video::{read_video_cube, write_video_cube};

pub const FORMAT_VERSION: u16 = 1;
pub const VIDEO_MAGIC: [u8; 4] = *b"FCV1";
pub const EXPOSURE_MAGIC: [u8; 4] = *b"FCE1";
pub const SPECTRUM_MAGIC: [u8; 4] = *b"FCS1";
pub const KERNEL_MAGIC: [u8; 4] = *b"FCK1";

use crate::error::{Error, Result};
use std::io::Read;

pub(crate) fn read_magic(reader: &mut impl Read, expected: [u8; 4]) -> Result<()> {
    let mut magic = [0u8; 4];
    reader
        .read_exact(&mut magic)
        .map_err(|_| Error::format("file shorter than its magic number"))?;
    if magic != expected {
        return Err(Error::format(format!(
            "bad magic {:?} (expected {:?})",
            String::from_utf8_lossy(&magic),
            String::from_utf8_lossy(&expected)
        )));
    }
    Ok(())
}

pub(crate) fn read_version(reader: &mut impl Read) -> Result<()> {
    use byteorder::{LittleEndian, ReadBytesExt};
    let found = reader
        .read_u16::<LittleEndian>()
        .map_err(|_| Error::format("file truncated in version field"))?;
    if found != FORMAT_VERSION {
        return Err(Error::VersionMismatch {
            found,
            expected: FORMAT_VERSION,
        });
    }
    Ok(())
}

/// Reads exactly `expected` payload bytes, reporting expected vs actual
/// length on truncation, and rejects trailing data.
pub(crate) fn read_payload(reader: &mut impl Read, expected: usize) -> Result<Vec<u8>> {
    let mut buf = Vec::with_capacity(expected.min(1 << 24));
    reader
        .by_ref()
        .take(expected as u64)
        .read_to_end(&mut buf)?;
    if buf.len() != expected {
        return Err(Error::format(format!(
            "truncated payload: expected {expected} bytes, found {}",
            buf.len()
        )));
    }
    let mut probe = [0u8; 1];
    if reader.read(&mut probe)? != 0 {
        return Err(Error::format("trailing data after payload"));
    }
    Ok(buf)
}
