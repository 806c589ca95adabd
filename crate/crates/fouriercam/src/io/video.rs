//! Video cube format (`FCV1`).
//!
//! 26-byte header — magic, version u16, frames u32, rows u32, cols u32,
//! frame_rate f64 — then `frames * rows * cols` intensities as f32,
//! frame-major then row-major. Values are rounded to f32 on write; the
//! file round-trips bit-exactly.

use super::{read_magic, read_payload, read_version, FORMAT_VERSION, VIDEO_MAGIC};
use crate::error::{Error, Result};
use crate::video::VideoCube;
use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use ndarray::Array3;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

pub fn write_video_cube(path: impl AsRef<Path>, cube: &VideoCube) -> Result<()> {
    let mut writer = BufWriter::new(File::create(path)?);
    write_video_cube_to(&mut writer, cube)?;
    writer.flush()?;
    Ok(())
}

pub(crate) fn write_video_cube_to(writer: &mut impl Write, cube: &VideoCube) -> Result<()> {
    writer.write_all(&VIDEO_MAGIC)?;
    writer.write_u16::<LittleEndian>(FORMAT_VERSION)?;
    writer.write_u32::<LittleEndian>(cube.frames() as u32)?;
    writer.write_u32::<LittleEndian>(cube.rows() as u32)?;
    writer.write_u32::<LittleEndian>(cube.cols() as u32)?;
    writer.write_f64::<LittleEndian>(cube.frame_rate_hz())?;
    for &v in cube.data() {
        writer.write_f32::<LittleEndian>(v as f32)?;
    }
    Ok(())
}

pub fn read_video_cube(path: impl AsRef<Path>) -> Result<VideoCube> {
    read_video_cube_from(&mut BufReader::new(File::open(path)?))
}

pub(crate) fn read_video_cube_from(reader: &mut impl Read) -> Result<VideoCube> {
    read_magic(reader, VIDEO_MAGIC)?;
    read_version(reader)?;
    let truncated = |_| Error::format("truncated video header");
    let frames = reader.read_u32::<LittleEndian>().map_err(truncated)? as usize;
    let rows = reader.read_u32::<LittleEndian>().map_err(truncated)? as usize;
    let cols = reader.read_u32::<LittleEndian>().map_err(truncated)? as usize;
    let frame_rate = reader.read_f64::<LittleEndian>().map_err(truncated)?;
    let count = frames
        .checked_mul(rows)
        .and_then(|v| v.checked_mul(cols))
        .ok_or_else(|| Error::format("video dimensions overflow"))?;
    let payload = read_payload(reader, count * 4)?;
    let mut values = Vec::with_capacity(count);
    for chunk in payload.chunks_exact(4) {
        values.push(f32::from_le_bytes(chunk.try_into().unwrap()) as f64);
    }
    let data = Array3::from_shape_vec((frames, rows, cols), values)
        .map_err(|e| Error::format(format!("video payload shape: {e}")))?;
    VideoCube::signed(data, frame_rate)
}
