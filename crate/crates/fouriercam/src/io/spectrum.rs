//! Temporal spectrum format (`FCS1`): magic, version u16, layout counts
//! (m, n, p, q as u32), inline kernel block, scale constant f64, then
//! `m * n * h` coefficients as (re, im) f64 pairs, coefficient index
//! fastest.

use super::kernel::{read_kernel_block, write_kernel_block};
use super::{read_magic, read_payload, read_version, FORMAT_VERSION, SPECTRUM_MAGIC};
use crate::decode::TemporalSpectrum;
use crate::error::{Error, Result};
use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use ndarray::Array3;
use num_complex::Complex64;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

pub fn write_spectrum(path: impl AsRef<Path>, spectrum: &TemporalSpectrum) -> Result<()> {
    let mut writer = BufWriter::new(File::create(path)?);
    write_spectrum_to(&mut writer, spectrum)?;
    writer.flush()?;
    Ok(())
}

pub(crate) fn write_spectrum_to(
    writer: &mut impl Write,
    spectrum: &TemporalSpectrum,
) -> Result<()> {
    writer.write_all(&SPECTRUM_MAGIC)?;
    writer.write_u16::<LittleEndian>(FORMAT_VERSION)?;
    writer.write_u32::<LittleEndian>(spectrum.cg_rows() as u32)?;
    writer.write_u32::<LittleEndian>(spectrum.cg_cols() as u32)?;
    writer.write_u32::<LittleEndian>(spectrum.ce_rows() as u32)?;
    writer.write_u32::<LittleEndian>(spectrum.ce_cols() as u32)?;
    write_kernel_block(writer, spectrum.kernel())?;
    writer.write_f64::<LittleEndian>(spectrum.scale())?;
    for c in spectrum.coefficients() {
        writer.write_f64::<LittleEndian>(c.re)?;
        writer.write_f64::<LittleEndian>(c.im)?;
    }
    Ok(())
}

pub fn read_spectrum(path: impl AsRef<Path>) -> Result<TemporalSpectrum> {
    read_spectrum_from(&mut BufReader::new(File::open(path)?))
}

pub(crate) fn read_spectrum_from(reader: &mut impl Read) -> Result<TemporalSpectrum> {
    read_magic(reader, SPECTRUM_MAGIC)?;
    read_version(reader)?;
    let truncated = |_| Error::format("truncated spectrum header");
    let m = reader.read_u32::<LittleEndian>().map_err(truncated)? as usize;
    let n = reader.read_u32::<LittleEndian>().map_err(truncated)? as usize;
    let p = reader.read_u32::<LittleEndian>().map_err(truncated)? as usize;
    let q = reader.read_u32::<LittleEndian>().map_err(truncated)? as usize;
    let kernel = read_kernel_block(reader)?;
    let h = kernel.frequency_count();
    if h != p * q || m == 0 || n == 0 {
        return Err(Error::format(
            "spectrum header counts and kernel frequency count disagree",
        ));
    }
    let scale = reader.read_f64::<LittleEndian>().map_err(truncated)?;
    let payload = read_payload(reader, m * n * h * 16)?;
    let values: Vec<Complex64> = payload
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect();
    let coefficients = Array3::from_shape_vec((m, n, h), values)
        .map_err(|e| Error::format(format!("spectrum payload shape: {e}")))?;
    TemporalSpectrum::new(coefficients, kernel, p, q, scale)
        .map_err(|e| Error::format(format!("spectrum payload: {e}")))
}
