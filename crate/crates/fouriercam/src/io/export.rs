//! Image and CSV exports: binary PGM/PPM maps and the trajectory table.

use crate::error::Result;
use crate::tracking::Trajectory;
use ndarray::ArrayView2;
use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

/// Writes a [0, 1] image as a binary graymap (P5), clamping out-of-range
/// values.
pub fn write_gray_pgm(path: impl AsRef<Path>, image: ArrayView2<f64>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write!(w, "P5\n{} {}\n255\n", image.ncols(), image.nrows())?;
    for &v in image.iter() {
        w.write_all(&[(v.clamp(0.0, 1.0) * 255.0).round() as u8])?;
    }
    w.flush()?;
    Ok(())
}

/// Amplitude map normalized by its peak (all-zero maps stay black).
pub fn write_amplitude_pgm(path: impl AsRef<Path>, amplitude: ArrayView2<f64>) -> Result<()> {
    let peak = amplitude.iter().cloned().fold(0.0, f64::max);
    if peak > 0.0 {
        write_gray_pgm(path, amplitude.mapv(|v| v / peak).view())
    } else {
        write_gray_pgm(path, amplitude)
    }
}

/// Phase map with [-pi, pi) spanning the full gray range.
pub fn write_phase_pgm(path: impl AsRef<Path>, phase: ArrayView2<f64>) -> Result<()> {
    write_gray_pgm(path, phase.mapv(|v| (v + PI) / (2.0 * PI)).view())
}

/// Entry `i` of the 256-color time ramp: hue sweeps 240 degrees (blue)
/// down to 0 (red) at full saturation and value.
pub fn color_ramp(i: u8) -> [u8; 3] {
    let hue = 240.0 * (1.0 - i as f64 / 255.0);
    let x = 1.0 - ((hue / 60.0) % 2.0 - 1.0).abs();
    let (r, g, b) = match (hue / 60.0) as u32 {
        0 => (1.0, x, 0.0),
        1 => (x, 1.0, 0.0),
        2 => (0.0, 1.0, x),
        3 => (0.0, x, 1.0),
        _ => (x, 0.0, 1.0),
    };
    [
        (r * 255.0).round() as u8,
        (g * 255.0).round() as u8,
        (b * 255.0).round() as u8,
    ]
}

/// Writes the recovered-time map as a binary pixmap (P6): detected pixels
/// take the ramp color of `t / exposure`, undetected pixels are black.
pub fn write_time_map_ppm(
    path: impl AsRef<Path>,
    trajectory: &Trajectory,
    exposure_s: f64,
) -> Result<()> {
    let mask = &trajectory.detection_mask;
    let mut w = BufWriter::new(File::create(path)?);
    write!(w, "P6\n{} {}\n255\n", mask.ncols(), mask.nrows())?;
    for r in 0..mask.nrows() {
        for c in 0..mask.ncols() {
            let rgb = if mask[(r, c)] {
                let frac = (trajectory.time_map[(r, c)] / exposure_s).clamp(0.0, 1.0);
                color_ramp((frac * 255.0).round().min(255.0) as u8)
            } else {
                [0, 0, 0]
            };
            w.write_all(&rgb)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes the track as `row,col,t_s,amplitude` CSV with a header line,
/// UTF-8, LF line endings.
pub fn write_trajectory_csv(path: impl AsRef<Path>, trajectory: &Trajectory) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_trajectory_csv_to(&mut w, trajectory)?;
    w.flush()?;
    Ok(())
}

pub(crate) fn write_trajectory_csv_to(w: &mut impl Write, trajectory: &Trajectory) -> Result<()> {
    w.write_all(b"row,col,t_s,amplitude\n")?;
    for p in &trajectory.track {
        writeln!(w, "{},{},{:.9},{:.9}", p.row, p.col, p.t_s, p.amplitude)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracking::TrackPoint;
    use ndarray::Array2;

    fn sample_trajectory() -> Trajectory {
        let mut mask = Array2::from_elem((2, 3), false);
        mask[(0, 1)] = true;
        mask[(1, 2)] = true;
        let mut time_map = Array2::zeros((2, 3));
        time_map[(0, 1)] = 0.25;
        time_map[(1, 2)] = 0.75;
        let mut amplitude_map = Array2::zeros((2, 3));
        amplitude_map[(0, 1)] = 0.5;
        amplitude_map[(1, 2)] = 1.0;
        Trajectory {
            amplitude_map,
            time_map,
            detection_mask: mask,
            track: vec![
                TrackPoint {
                    row: 0,
                    col: 1,
                    t_s: 0.25,
                    amplitude: 0.5,
                },
                TrackPoint {
                    row: 1,
                    col: 2,
                    t_s: 0.75,
                    amplitude: 1.0,
                },
            ],
        }
    }

    #[test]
    fn csv_layout() {
        let mut bytes = Vec::new();
        write_trajectory_csv_to(&mut bytes, &sample_trajectory()).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "row,col,t_s,amplitude");
        assert_eq!(lines[1], "0,1,0.250000000,0.500000000");
        assert_eq!(lines.len(), 3);
        assert!(!text.contains('\r'));
    }

    #[test]
    fn ramp_endpoints() {
        assert_eq!(color_ramp(0), [0, 0, 255]); // earliest: blue
        assert_eq!(color_ramp(255), [255, 0, 0]); // latest: red
    }

    #[test]
    fn image_files_have_expected_sizes() {
        let dir = tempfile::tempdir().unwrap();
        let gray = dir.path().join("g.pgm");
        let img = Array2::from_elem((4, 6), 0.5);
        write_gray_pgm(&gray, img.view()).unwrap();
        let bytes = std::fs::read(&gray).unwrap();
        assert!(bytes.starts_with(b"P5\n6 4\n255\n"));
        assert_eq!(bytes.len(), 11 + 24);

        let ppm = dir.path().join("t.ppm");
        write_time_map_ppm(&ppm, &sample_trajectory(), 1.0).unwrap();
        let bytes = std::fs::read(&ppm).unwrap();
        assert!(bytes.starts_with(b"P6\n3 2\n255\n"));
        assert_eq!(bytes.len(), 11 + 18);
        // Undetected pixel black, detected pixel colored.
        assert_eq!(&bytes[11..14], &[0, 0, 0]);
        assert_ne!(&bytes[14..17], &[0, 0, 0]);
    }
}
