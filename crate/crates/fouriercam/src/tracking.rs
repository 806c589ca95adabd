//! Moving-object detection and time-of-passage recovery from a
//! single-coefficient capture.
//!
//! With the tracking kernel (one frequency, exactly one coding period per
//! exposure) a static pixel carries no energy at the coding frequency,
//! while a pixel the object crosses holds a temporal pulse whose delay
//! appears as a linear phase: under the forward-transform convention used
//! by the decoder, a pulse at time `t` has phase `-2*pi*t/t_expo`. The
//! phase-to-time map is therefore injective over one exposure, with no
//! 2-pi ambiguity to unwrap.

use crate::decode::TemporalSpectrum;
use crate::error::{Error, Result};
use crate::kernels::KernelKind;
use ndarray::Array2;
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Default relative detection threshold; overridable everywhere it is
/// consumed.
pub const DEFAULT_DETECTION_THRESHOLD: f64 = 0.1;

/// One detected pixel with its recovered passage time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackPoint {
    pub row: usize,
    pub col: usize,
    pub t_s: f64,
    pub amplitude: f64,
}

/// Detection amplitudes, recovered event times, and the time-ordered
/// track extracted from a tracking capture.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub amplitude_map: Array2<f64>,
    /// Recovered time in [0, t_expo); meaningful only where detected.
    pub time_map: Array2<f64>,
    pub detection_mask: Array2<bool>,
    /// Detected pixels sorted by time, ties broken row-major.
    pub track: Vec<TrackPoint>,
}

fn require_tracking(spectrum: &TemporalSpectrum) -> Result<()> {
    if spectrum.kernel().kind != KernelKind::Tracking || spectrum.frequency_count() != 1 {
        return Err(Error::invalid(format!(
            "detection needs a single-coefficient tracking capture, got a {} kernel of {} frequencies",
            spectrum.kernel().kind.name(),
            spectrum.frequency_count()
        )));
    }
    Ok(())
}

/// Thresholds the coefficient amplitude into a detection mask.
///
/// The threshold is relative to the peak amplitude; an absolute floor
/// tied to the largest coefficient a unit-intensity scene can produce
/// keeps all-static captures (peak is numerical dust) empty.
pub fn detect(
    spectrum: &TemporalSpectrum,
    threshold_rel: f64,
) -> Result<(Array2<bool>, Array2<f64>)> {
    require_tracking(spectrum)?;
    if !(0.0..=1.0).contains(&threshold_rel) {
        return Err(Error::invalid(format!(
            "relative threshold must lie in [0, 1], got {threshold_rel}"
        )));
    }
    let amplitude = spectrum.amplitude_image(0)?;
    let peak = amplitude.iter().cloned().fold(0.0, f64::max);
    let kernel = spectrum.kernel();
    let floor = 1e-9 * 2.0 * kernel.contrast * kernel.exposure_s;
    let mask = if peak <= floor {
        Array2::from_elem(amplitude.dim(), false)
    } else {
        amplitude.mapv(|a| a > threshold_rel * peak)
    };
    Ok((mask, amplitude))
}

/// Recovers the pulse time of a coefficient: `t = (-arg F mod 2*pi) /
/// (2*pi) * t_expo`, in [0, t_expo).
pub fn phase_to_time(coefficient: Complex64, exposure_s: f64) -> Result<f64> {
    if coefficient.norm() == 0.0 {
        return Err(Error::UndefinedPhase);
    }
    let t = (-coefficient.arg()).rem_euclid(TAU) / TAU * exposure_s;
    // rem_euclid can round a sub-ulp negative phase up to a full turn;
    // fold it back onto the half-open interval.
    Ok(if t >= exposure_s { t - exposure_s } else { t })
}

/// Detects and time-stamps every moving pixel of a tracking capture.
pub fn extract_trajectory(spectrum: &TemporalSpectrum, threshold_rel: f64) -> Result<Trajectory> {
    let (mask, amplitude) = detect(spectrum, threshold_rel)?;
    let exposure = spectrum.kernel().exposure_s;
    let mut time_map = Array2::<f64>::zeros(mask.dim());
    let mut track = Vec::new();
    for r in 0..mask.nrows() {
        for c in 0..mask.ncols() {
            if mask[(r, c)] {
                let t = phase_to_time(spectrum.coefficient(r, c, 0), exposure)?;
                time_map[(r, c)] = t;
                track.push(TrackPoint {
                    row: r,
                    col: c,
                    t_s: t,
                    amplitude: amplitude[(r, c)],
                });
            }
        }
    }
    track.sort_by(|a, b| {
        a.t_s
            .total_cmp(&b.t_s)
            .then(a.row.cmp(&b.row))
            .then(a.col.cmp(&b.col))
    });
    Ok(Trajectory {
        amplitude_map: amplitude,
        time_map,
        detection_mask: mask,
        track,
    })
}

/// Smallest resolvable time step of phase recovery: the exposure divided
/// by the coding device's grayscale level count.
pub fn tracking_temporal_resolution(exposure_s: f64, grayscale_levels: u32) -> Result<f64> {
    if !exposure_s.is_finite() || exposure_s <= 0.0 {
        return Err(Error::invalid("exposure must be positive"));
    }
    if grayscale_levels < 2 {
        return Err(Error::invalid("need at least 2 grayscale levels"));
    }
    Ok(exposure_s / grayscale_levels as f64)
}
