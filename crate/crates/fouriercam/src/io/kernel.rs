//! Inline kernel block (`FCK1`), embedded in exposure and spectrum files:
//! magic, version u16, kind u8, exposure f64, amplitude f64, contrast
//! f64, fundamental f64 (0 unless periodic), count u32, frequencies
//! f64 each.

use super::{read_magic, read_version, FORMAT_VERSION, KERNEL_MAGIC};
use crate::error::{Error, Result};
use crate::kernels::{KernelKind, KernelSpec};
use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use std::io::{Read, Write};

fn kind_code(kind: &KernelKind) -> u8 {
    match kind {
        KernelKind::Compression => 0,
        KernelKind::Periodic { .. } => 1,
        KernelKind::BackgroundSubtract => 2,
        KernelKind::Extraction => 3,
        KernelKind::Tracking => 4,
    }
}

pub(crate) fn write_kernel_block(writer: &mut impl Write, kernel: &KernelSpec) -> Result<()> {
    writer.write_all(&KERNEL_MAGIC)?;
    writer.write_u16::<LittleEndian>(FORMAT_VERSION)?;
    writer.write_u8(kind_code(&kernel.kind))?;
    writer.write_f64::<LittleEndian>(kernel.exposure_s)?;
    writer.write_f64::<LittleEndian>(kernel.amplitude)?;
    writer.write_f64::<LittleEndian>(kernel.contrast)?;
    let fundamental = match kernel.kind {
        KernelKind::Periodic { fundamental_hz } => fundamental_hz,
        _ => 0.0,
    };
    writer.write_f64::<LittleEndian>(fundamental)?;
    writer.write_u32::<LittleEndian>(kernel.frequencies_hz.len() as u32)?;
    for &f in &kernel.frequencies_hz {
        writer.write_f64::<LittleEndian>(f)?;
    }
    Ok(())
}

pub(crate) fn read_kernel_block(reader: &mut impl Read) -> Result<KernelSpec> {
    read_magic(reader, KERNEL_MAGIC)?;
    read_version(reader)?;
    let truncated = |_| Error::format("truncated kernel block");
    let kind_code = reader.read_u8().map_err(truncated)?;
    let exposure_s = reader.read_f64::<LittleEndian>().map_err(truncated)?;
    let amplitude = reader.read_f64::<LittleEndian>().map_err(truncated)?;
    let contrast = reader.read_f64::<LittleEndian>().map_err(truncated)?;
    let fundamental = reader.read_f64::<LittleEndian>().map_err(truncated)?;
    let count = reader.read_u32::<LittleEndian>().map_err(truncated)? as usize;
    let mut frequencies_hz = Vec::with_capacity(count);
    for _ in 0..count {
        frequencies_hz.push(reader.read_f64::<LittleEndian>().map_err(truncated)?);
    }
    let kind = match kind_code {
        0 => KernelKind::Compression,
        1 => {
            if !fundamental.is_finite() || fundamental <= 0.0 {
                return Err(Error::format("periodic kernel without a fundamental"));
            }
            KernelKind::Periodic {
                fundamental_hz: fundamental,
            }
        }
        2 => KernelKind::BackgroundSubtract,
        3 => KernelKind::Extraction,
        4 => KernelKind::Tracking,
        other => return Err(Error::format(format!("unknown kernel kind {other}"))),
    };
    if !exposure_s.is_finite() || exposure_s <= 0.0 {
        return Err(Error::format("kernel block holds a non-positive exposure"));
    }
    Ok(KernelSpec {
        exposure_s,
        frequencies_hz,
        amplitude,
        contrast,
        kind,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{make_periodic_kernel, make_tracking_kernel};

    #[test]
    fn kernel_block_round_trip() {
        for kernel in [
            make_periodic_kernel(91.0, &[3, 5, 7, 11], 0.5).unwrap(),
            make_tracking_kernel(2.0).unwrap(),
        ] {
            let mut bytes = Vec::new();
            write_kernel_block(&mut bytes, &kernel).unwrap();
            let back = read_kernel_block(&mut bytes.as_slice()).unwrap();
            assert_eq!(back, kernel);
        }
    }

    #[test]
    fn unknown_kind_rejected() {
        let kernel = make_tracking_kernel(1.0).unwrap();
        let mut bytes = Vec::new();
        write_kernel_block(&mut bytes, &kernel).unwrap();
        bytes[6] = 250; // kind byte
        assert!(read_kernel_block(&mut bytes.as_slice()).is_err());
    }
}
