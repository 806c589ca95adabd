//! Coded exposure format (`FCE1`): magic, version u16, layout counts
//! (m, n, p, q as u32), inline kernel block, integration dt f64, noise
//! descriptor, then the sensor pixels as f64, row-major.
//!
//! Noise descriptor: present u8; when present, shot-noise flag u8 +
//! photon budget f64, read sigma f64, ADC flag u8 + bits u8, seed u64.

use super::kernel::{read_kernel_block, write_kernel_block};
use super::{read_magic, read_payload, read_version, EXPOSURE_MAGIC, FORMAT_VERSION};
use crate::error::{Error, Result};
use crate::forward::{CodedExposure, NoiseConfig};
use crate::geometry::CodingLayout;
use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use ndarray::Array2;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

pub fn write_coded_exposure(path: impl AsRef<Path>, coded: &CodedExposure) -> Result<()> {
    let mut writer = BufWriter::new(File::create(path)?);
    write_coded_exposure_to(&mut writer, coded)?;
    writer.flush()?;
    Ok(())
}

pub(crate) fn write_coded_exposure_to(
    writer: &mut impl Write,
    coded: &CodedExposure,
) -> Result<()> {
    writer.write_all(&EXPOSURE_MAGIC)?;
    writer.write_u16::<LittleEndian>(FORMAT_VERSION)?;
    writer.write_u32::<LittleEndian>(coded.layout.cg_rows() as u32)?;
    writer.write_u32::<LittleEndian>(coded.layout.cg_cols() as u32)?;
    writer.write_u32::<LittleEndian>(coded.layout.ce_rows() as u32)?;
    writer.write_u32::<LittleEndian>(coded.layout.ce_cols() as u32)?;
    write_kernel_block(writer, &coded.kernel)?;
    writer.write_f64::<LittleEndian>(coded.dt_s)?;
    match &coded.noise {
        None => writer.write_u8(0)?,
        Some(cfg) => {
            writer.write_u8(1)?;
            writer.write_u8(cfg.photon_budget.is_some() as u8)?;
            writer.write_f64::<LittleEndian>(cfg.photon_budget.unwrap_or(0.0))?;
            writer.write_f64::<LittleEndian>(cfg.read_noise_sigma)?;
            writer.write_u8(cfg.adc_bits.is_some() as u8)?;
            writer.write_u8(cfg.adc_bits.unwrap_or(0))?;
            writer.write_u64::<LittleEndian>(cfg.rng_seed)?;
        }
    }
    for &v in &coded.pixels {
        writer.write_f64::<LittleEndian>(v)?;
    }
    Ok(())
}

pub fn read_coded_exposure(path: impl AsRef<Path>) -> Result<CodedExposure> {
    read_coded_exposure_from(&mut BufReader::new(File::open(path)?))
}

pub(crate) fn read_coded_exposure_from(reader: &mut impl Read) -> Result<CodedExposure> {
    read_magic(reader, EXPOSURE_MAGIC)?;
    read_version(reader)?;
    let truncated = |_| Error::format("truncated exposure header");
    let m = reader.read_u32::<LittleEndian>().map_err(truncated)? as usize;
    let n = reader.read_u32::<LittleEndian>().map_err(truncated)? as usize;
    let p = reader.read_u32::<LittleEndian>().map_err(truncated)? as usize;
    let q = reader.read_u32::<LittleEndian>().map_err(truncated)? as usize;
    let layout = CodingLayout::new(m, n, p, q)
        .map_err(|e| Error::format(format!("exposure header layout: {e}")))?;
    let kernel = read_kernel_block(reader)?;
    if kernel.frequency_count() != layout.frequencies_per_group() {
        return Err(Error::format(
            "exposure header kernel and layout disagree on frequency count",
        ));
    }
    let dt_s = reader.read_f64::<LittleEndian>().map_err(truncated)?;
    let noise = match reader.read_u8().map_err(truncated)? {
        0 => None,
        1 => {
            let has_poisson = reader.read_u8().map_err(truncated)? != 0;
            let budget = reader.read_f64::<LittleEndian>().map_err(truncated)?;
            let read_noise_sigma = reader.read_f64::<LittleEndian>().map_err(truncated)?;
            let has_adc = reader.read_u8().map_err(truncated)? != 0;
            let bits = reader.read_u8().map_err(truncated)?;
            let rng_seed = reader.read_u64::<LittleEndian>().map_err(truncated)?;
            Some(NoiseConfig {
                photon_budget: has_poisson.then_some(budget),
                read_noise_sigma,
                adc_bits: has_adc.then_some(bits),
                rng_seed,
            })
        }
        other => return Err(Error::format(format!("bad noise flag {other}"))),
    };
    let (rows, cols) = (layout.sensor_rows(), layout.sensor_cols());
    let payload = read_payload(reader, rows * cols * 8)?;
    let values: Vec<f64> = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let pixels = Array2::from_shape_vec((rows, cols), values)
        .map_err(|e| Error::format(format!("exposure payload shape: {e}")))?;
    Ok(CodedExposure {
        pixels,
        layout,
        kernel,
        dt_s,
        noise,
    })
}
