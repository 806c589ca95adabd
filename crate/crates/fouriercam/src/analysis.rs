//! Closed-form comparisons between frame-sequence capture and single-shot
//! spectrum capture (detection bandwidth, light throughput, data volume,
//! arithmetic cost, spatial-resolution cost), plus reconstruction quality
//! metrics.

use crate::error::{Error, Result};
use ndarray::ArrayView2;

/// Minimum detector bandwidth needed for a scene of maximum temporal
/// frequency `f_max`: the full `f_max` for a frame-sequence camera versus
/// `f_max / (2h)` when `h` coefficients are read out over the exposure.
pub fn detection_bandwidth(f_max_hz: f64, h: usize) -> Result<(f64, f64)> {
    if h == 0 {
        return Err(Error::invalid("need at least one coefficient"));
    }
    if !f_max_hz.is_finite() || f_max_hz < 0.0 {
        return Err(Error::invalid("maximum frequency must be non-negative"));
    }
    Ok((f_max_hz, f_max_hz / (2.0 * h as f64)))
}

/// Per-pixel light throughput over one exposure `T` at scene intensity
/// `L`, comparing an impulse-shutter camera at frame-rate gain `m`
/// (each frame integrates `T/m`) against sinusoidal coding (integrating
/// half the light over the whole exposure).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LightThroughput {
    pub impulse: f64,
    pub fouriercam: f64,
}

impl LightThroughput {
    /// Advantage factor `m / 2`.
    pub fn advantage_ratio(&self) -> f64 {
        self.fouriercam / self.impulse
    }
}

pub fn light_throughput(intensity: f64, exposure_s: f64, gain_m: usize) -> Result<LightThroughput> {
    if gain_m == 0 {
        return Err(Error::invalid("frame-rate gain must be at least 1"));
    }
    if !intensity.is_finite() || intensity < 0.0 || !exposure_s.is_finite() || exposure_s <= 0.0 {
        return Err(Error::invalid(
            "intensity and exposure must be non-negative",
        ));
    }
    Ok(LightThroughput {
        impulse: intensity * exposure_s / gain_m as f64,
        fouriercam: intensity * exposure_s / 2.0,
    })
}

/// Storage for `M` frames of `N` pixels (1 byte per pixel) versus `h`
/// complex coefficients per pixel (2 bytes each): `(M*N, 2*h*N)` bytes.
/// The volumes cross exactly at `M = 2h`.
pub fn data_volume(frames_m: u64, pixels_n: u64, h: u64) -> Result<(u64, u64)> {
    if frames_m == 0 || pixels_n == 0 || h == 0 {
        return Err(Error::invalid("counts must be positive"));
    }
    let traditional = frames_m
        .checked_mul(pixels_n)
        .ok_or_else(|| Error::invalid("data volume overflows"))?;
    let fouriercam = (2 * h)
        .checked_mul(pixels_n)
        .ok_or_else(|| Error::invalid("data volume overflows"))?;
    Ok((traditional, fouriercam))
}

/// Arithmetic cost of computing the temporal spectrum of `M` frames of
/// `N` pixels after capture (FFT) versus reading it off the four
/// phase-shifted detections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlopsComparison {
    /// `5*M*N*log2(M)`, with `log2` rounded up for non-power-of-two `M`.
    pub fft: f64,
    /// `3*M*N` for the phase-shifting combinations.
    pub fouriercam: f64,
    /// `(5*M*log2(M) - 3*M) * N`.
    pub saved: f64,
}

pub fn flops_comparison(frames_m: u64, pixels_n: u64) -> Result<FlopsComparison> {
    if frames_m == 0 || pixels_n == 0 {
        return Err(Error::invalid("counts must be positive"));
    }
    let m = frames_m as f64;
    let n = pixels_n as f64;
    let log2_m = if frames_m.is_power_of_two() {
        (frames_m.trailing_zeros()) as f64
    } else {
        m.log2().ceil()
    };
    let fft = 5.0 * m * n * log2_m;
    let fouriercam = 3.0 * m * n;
    Ok(FlopsComparison {
        fft,
        fouriercam,
        saved: fft - fouriercam,
    })
}

/// Sensor pixels a coding group spends to acquire `h` coefficients: four
/// per coefficient, i.e. a spatial-resolution reduction factor of `4h`.
pub fn resolution_tradeoff(h: usize) -> Result<usize> {
    if h == 0 {
        return Err(Error::invalid("need at least one coefficient"));
    }
    Ok(4 * h)
}

const SSIM_WINDOW: usize = 8;
const SSIM_C1: f64 = 0.01 * 0.01;
const SSIM_C2: f64 = 0.03 * 0.03;

/// Structural similarity of two images on unit dynamic range: mean of the
/// per-window index over all 8x8 sliding windows (the whole image when it
/// is smaller than a window).
pub fn ssim(a: ArrayView2<f64>, b: ArrayView2<f64>) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::invalid(format!(
            "image dimensions differ: {:?} vs {:?}",
            a.dim(),
            b.dim()
        )));
    }
    let (rows, cols) = a.dim();
    let wr = SSIM_WINDOW.min(rows);
    let wc = SSIM_WINDOW.min(cols);
    let mut total = 0.0;
    let mut windows = 0usize;
    for r0 in 0..=(rows - wr) {
        for c0 in 0..=(cols - wc) {
            let wa = a.slice(ndarray::s![r0..r0 + wr, c0..c0 + wc]);
            let wb = b.slice(ndarray::s![r0..r0 + wr, c0..c0 + wc]);
            total += window_ssim(&wa, &wb);
            windows += 1;
        }
    }
    Ok(total / windows as f64)
}

fn window_ssim(a: &ArrayView2<f64>, b: &ArrayView2<f64>) -> f64 {
    let n = a.len() as f64;
    let mean_a = a.sum() / n;
    let mean_b = b.sum() / n;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    let mut cov = 0.0;
    for (&x, &y) in a.iter().zip(b.iter()) {
        let dx = x - mean_a;
        let dy = y - mean_b;
        var_a += dx * dx;
        var_b += dy * dy;
        cov += dx * dy;
    }
    var_a /= n;
    var_b /= n;
    cov /= n;
    ((2.0 * mean_a * mean_b + SSIM_C1) * (2.0 * cov + SSIM_C2))
        / ((mean_a * mean_a + mean_b * mean_b + SSIM_C1) * (var_a + var_b + SSIM_C2))
}

/// A labeled scalar with its unit, for comparison reports.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportEntry {
    pub name: String,
    pub value: f64,
    pub unit: &'static str,
}

/// Named results of the comparison calculators, printable as aligned
/// key-value lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ComparisonReport {
    pub entries: Vec<ReportEntry>,
}

impl ComparisonReport {
    pub fn push(&mut self, name: impl Into<String>, value: f64, unit: &'static str) {
        self.entries.push(ReportEntry {
            name: name.into(),
            value,
            unit,
        });
    }
}

impl std::fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let width = self.entries.iter().map(|e| e.name.len()).max().unwrap_or(0);
        for e in &self.entries {
            writeln!(f, "{:width$}  {} {}", e.name, e.value, e.unit)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use ndarray::Array2;

    #[test]
    fn detection_bandwidth_values() {
        assert_eq!(detection_bandwidth(80.0, 8).unwrap(), (80.0, 5.0));
        assert_eq!(detection_bandwidth(42.0, 1).unwrap(), (42.0, 21.0));
        assert_eq!(detection_bandwidth(1001.0, 4).unwrap(), (1001.0, 125.125));
        assert!(detection_bandwidth(80.0, 0).is_err());
    }

    #[test]
    fn light_throughput_values() {
        let lt = light_throughput(1.0, 1.0, 16).unwrap();
        assert_eq!((lt.impulse, lt.fouriercam), (1.0 / 16.0, 0.5));
        assert_relative_eq!(lt.advantage_ratio(), 8.0);

        let lt = light_throughput(1.0, 1.0, 2).unwrap();
        assert_eq!(lt.impulse, lt.fouriercam);

        let lt = light_throughput(1.0, 0.5, 1001).unwrap();
        assert_relative_eq!(lt.advantage_ratio(), 500.5);
    }

    #[test]
    fn data_volume_values() {
        let n = 1080 * 1080;
        assert_eq!(data_volume(100, n, 16).unwrap(), (116_640_000, 37_324_800));
        // Crossover at M = 2h exactly.
        assert_eq!(
            data_volume(32, 999, 16).unwrap().0,
            data_volume(32, 999, 16).unwrap().1
        );
        let (a, b) = data_volume(16, 235 * 157, 9).unwrap();
        assert_eq!((a, b), (590_320, 664_110)); // spectrum larger here; reported as-is
    }

    #[test]
    fn flops_values() {
        let f = flops_comparison(1024, 1).unwrap();
        assert_eq!((f.fft, f.fouriercam, f.saved), (51200.0, 3072.0, 48128.0));

        let f = flops_comparison(1, 7).unwrap();
        assert_eq!((f.fft, f.fouriercam), (0.0, 21.0));

        // Non-power-of-two frame counts round the log term up.
        let f = flops_comparison(1001, 353 * 235).unwrap();
        assert_eq!(f.saved, 47047.0 * 82955.0);
        assert!((f.saved / 1e9 - 3.9).abs() < 0.01);
    }

    #[test]
    fn resolution_tradeoff_values() {
        assert_eq!(resolution_tradeoff(9).unwrap(), 36); // a 6x6 pixel group
        assert_eq!(resolution_tradeoff(1).unwrap(), 4);
        assert_eq!(resolution_tradeoff(4).unwrap(), 16);
        assert!(resolution_tradeoff(0).is_err());
    }

    #[test]
    fn ssim_identical_images() {
        let img = Array2::from_shape_fn((16, 16), |(r, c)| {
            0.5 + 0.5 * ((r * 3 + c) as f64 * 0.37).sin().abs() * 0.9
        });
        let s = ssim(img.view(), img.view()).unwrap();
        assert_relative_eq!(s, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn ssim_anti_correlated_structure_is_negative() {
        // 0.5-mean checkerboard against its negative.
        let a = Array2::from_shape_fn((16, 16), |(r, c)| if (r + c) % 2 == 0 { 0.9 } else { 0.1 });
        let b = a.mapv(|v| 1.0 - v);
        let s = ssim(a.view(), b.view()).unwrap();
        assert!(s < 0.0, "got {s}");
    }

    #[test]
    fn ssim_dimension_mismatch() {
        let a = Array2::<f64>::zeros((8, 8));
        let b = Array2::<f64>::zeros((8, 9));
        assert!(ssim(a.view(), b.view()).is_err());
    }

    #[test]
    fn ssim_small_images_use_one_window() {
        let a = Array2::from_elem((3, 3), 0.25);
        assert_relative_eq!(ssim(a.view(), a.view()).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn report_display_lists_entries() {
        let mut report = ComparisonReport::default();
        report.push("bandwidth_traditional", 80.0, "Hz");
        report.push("bandwidth_fouriercam", 5.0, "Hz");
        let text = report.to_string();
        assert!(text.contains("bandwidth_traditional"));
        assert!(text.contains("5 Hz"));
    }
}
