//! Temporal filter kernels: the frequency sets a capture acquires.
//!
//! A kernel pairs an exposure time with the ordered list of coding
//! frequencies and the coding waveform's mean level and modulation depth.
//! Constructors cover the stock designs (full low-frequency grid,
//! harmonic combs, DC-excluded grids, single-frequency tracking);
//! arbitrary frequency sets are built with [`extraction_kernel`].

use crate::error::{Error, Result};

/// Default coding mean level: maximizes modulation depth subject to the
/// waveform staying within [0, 1].
pub const DEFAULT_AMPLITUDE: f64 = 0.5;
/// Default coding modulation depth.
pub const DEFAULT_CONTRAST: f64 = 0.5;

/// What the frequency set was designed for. Drives the choice of
/// reconstruction grid and which downstream operations accept the
/// spectrum.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelKind {
    /// Dense low-frequency grid `0, 1/t, 2/t, ...` for compressive
    /// acquisition of ordinary scenes.
    Compression,
    /// Harmonic comb of a known fundamental; reconstruction runs over one
    /// fundamental period.
    Periodic { fundamental_hz: f64 },
    /// Dense grid with the DC bin removed: static content cancels.
    BackgroundSubtract,
    /// Caller-chosen frequency set matched to a known target spectrum.
    Extraction,
    /// Single frequency `1/t_expo` for detection and time-of-passage
    /// recovery.
    Tracking,
}

impl KernelKind {
    pub fn name(&self) -> &'static str {
        match self {
            KernelKind::Compression => "compression",
            KernelKind::Periodic { .. } => "periodic",
            KernelKind::BackgroundSubtract => "background-subtract",
            KernelKind::Extraction => "extraction",
            KernelKind::Tracking => "tracking",
        }
    }
}

/// A temporal filter kernel.
///
/// The coding waveform of frequency `f` and phase `phi` is
/// `amplitude + contrast * cos(2*pi*f*t + phi)`; `amplitude >= contrast`
/// keeps it a physical (non-negative) light intensity. The fields are
/// open so that deliberately invalid kernels can be built and fed to
/// [`validate_kernel`].
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    pub exposure_s: f64,
    /// Distinct non-negative frequencies in ascending order.
    pub frequencies_hz: Vec<f64>,
    pub amplitude: f64,
    pub contrast: f64,
    pub kind: KernelKind,
}

impl KernelSpec {
    pub fn frequency_count(&self) -> usize {
        self.frequencies_hz.len()
    }

    pub fn max_frequency_hz(&self) -> f64 {
        self.frequencies_hz.iter().cloned().fold(0.0, f64::max)
    }

    /// Frequency spacing of the exposure-time acquisition grid.
    pub fn grid_spacing_hz(&self) -> f64 {
        1.0 / self.exposure_s
    }
}

fn check_exposure(exposure_s: f64) -> Result<()> {
    if !exposure_s.is_finite() || exposure_s <= 0.0 {
        return Err(Error::invalid(format!(
            "exposure must be a positive finite time, got {exposure_s}"
        )));
    }
    Ok(())
}

/// Grid kernel `{0, df, ..., (h-1)*df}` with `df = 1/exposure_s`: the
/// densest alias-free spacing the exposure supports.
pub fn make_compression_kernel(exposure_s: f64, h: usize) -> Result<KernelSpec> {
    check_exposure(exposure_s)?;
    if h == 0 {
        return Err(Error::invalid(
            "compression kernel needs at least one frequency",
        ));
    }
    let df = 1.0 / exposure_s;
    Ok(KernelSpec {
        exposure_s,
        frequencies_hz: (0..h).map(|k| k as f64 * df).collect(),
        amplitude: DEFAULT_AMPLITUDE,
        contrast: DEFAULT_CONTRAST,
        kind: KernelKind::Compression,
    })
}

/// Harmonic comb `{k * fundamental : k in harmonics}` for scenes with a
/// known motion period.
pub fn make_periodic_kernel(
    fundamental_hz: f64,
    harmonics: &[u32],
    exposure_s: f64,
) -> Result<KernelSpec> {
    check_exposure(exposure_s)?;
    if !fundamental_hz.is_finite() || fundamental_hz <= 0.0 {
        return Err(Error::invalid(format!(
            "fundamental must be positive, got {fundamental_hz}"
        )));
    }
    if harmonics.is_empty() {
        return Err(Error::invalid(
            "periodic kernel needs at least one harmonic",
        ));
    }
    let mut sorted = harmonics.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid(format!(
            "duplicate harmonic in {harmonics:?}"
        )));
    }
    if sorted[0] == 0 {
        return Err(Error::invalid("harmonics must be positive integers"));
    }
    Ok(KernelSpec {
        exposure_s,
        frequencies_hz: sorted.iter().map(|&k| k as f64 * fundamental_hz).collect(),
        amplitude: DEFAULT_AMPLITUDE,
        contrast: DEFAULT_CONTRAST,
        kind: KernelKind::Periodic { fundamental_hz },
    })
}

/// Grid kernel `{df, ..., h*df}` with the DC bin excluded, so static
/// scene content integrates to zero in every coefficient.
pub fn make_background_subtract_kernel(exposure_s: f64, h: usize) -> Result<KernelSpec> {
    check_exposure(exposure_s)?;
    if h == 0 {
        return Err(Error::invalid(
            "background-subtract kernel needs at least one frequency",
        ));
    }
    let df = 1.0 / exposure_s;
    Ok(KernelSpec {
        exposure_s,
        frequencies_hz: (1..=h).map(|k| k as f64 * df).collect(),
        amplitude: DEFAULT_AMPLITUDE,
        contrast: DEFAULT_CONTRAST,
        kind: KernelKind::BackgroundSubtract,
    })
}

/// Single-frequency kernel at `1/exposure_s`: exactly one coding period
/// per exposure, so recovered phase maps injectively onto event time.
pub fn make_tracking_kernel(exposure_s: f64) -> Result<KernelSpec> {
    check_exposure(exposure_s)?;
    Ok(KernelSpec {
        exposure_s,
        frequencies_hz: vec![1.0 / exposure_s],
        amplitude: DEFAULT_AMPLITUDE,
        contrast: DEFAULT_CONTRAST,
        kind: KernelKind::Tracking,
    })
}

/// Kernel over an explicit frequency list, for object extraction against
/// a known target spectrum. Frequencies are sorted ascending; duplicates
/// and negative values are rejected.
pub fn extraction_kernel(exposure_s: f64, frequencies_hz: Vec<f64>) -> Result<KernelSpec> {
    check_exposure(exposure_s)?;
    if frequencies_hz.is_empty() {
        return Err(Error::invalid(
            "extraction kernel needs at least one frequency",
        ));
    }
    if frequencies_hz.iter().any(|f| !f.is_finite() || *f < 0.0) {
        return Err(Error::invalid(format!(
            "frequencies must be finite and non-negative, got {frequencies_hz:?}"
        )));
    }
    let mut sorted = frequencies_hz;
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid("duplicate frequency in extraction kernel"));
    }
    Ok(KernelSpec {
        exposure_s,
        frequencies_hz: sorted,
        amplitude: DEFAULT_AMPLITUDE,
        contrast: DEFAULT_CONTRAST,
        kind: KernelKind::Extraction,
    })
}

/// One finding of [`validate_kernel`].
#[derive(Debug, Clone, PartialEq)]
pub enum KernelIssue {
    /// Coding frequency exceeds the Nyquist rate of the input video.
    FrequencyAboveNyquist { frequency_hz: f64, nyquist_hz: f64 },
    /// Consecutive-frequency spacing exceeds `1/t_expo`, so a grid kernel
    /// cannot reconstruct alias-free.
    SpacingExceedsGrid { spacing_hz: f64, limit_hz: f64 },
    /// `amplitude < contrast`: the coding waveform would go negative.
    NegativeLight { amplitude: f64, contrast: f64 },
    /// Frequency off the `1/t_expo` acquisition grid. A warning for
    /// periodic/extraction kernels, which reconstruct per period instead.
    OffGridFrequency { frequency_hz: f64 },
    /// Tracking kernel whose frequency-exposure product is not 1.
    TrackingFrequencyMismatch { frequency_hz: f64, expected_hz: f64 },
}

impl std::fmt::Display for KernelIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KernelIssue::FrequencyAboveNyquist {
                frequency_hz,
                nyquist_hz,
            } => write!(
                f,
                "coding frequency {frequency_hz} Hz exceeds video Nyquist {nyquist_hz} Hz"
            ),
            KernelIssue::SpacingExceedsGrid {
                spacing_hz,
                limit_hz,
            } => write!(
                f,
                "frequency spacing {spacing_hz} Hz exceeds grid limit {limit_hz} Hz"
            ),
            KernelIssue::NegativeLight {
                amplitude,
                contrast,
            } => write!(
                f,
                "amplitude {amplitude} < contrast {contrast}: coding waveform goes negative"
            ),
            KernelIssue::OffGridFrequency { frequency_hz } => {
                write!(f, "frequency {frequency_hz} Hz is off the 1/t_expo grid")
            }
            KernelIssue::TrackingFrequencyMismatch {
                frequency_hz,
                expected_hz,
            } => write!(
                f,
                "tracking frequency {frequency_hz} Hz != 1/t_expo = {expected_hz} Hz"
            ),
        }
    }
}

/// Outcome of [`validate_kernel`]: hard violations plus advisory
/// warnings. A kernel is clean when it has no violations.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<KernelIssue>,
    pub warnings: Vec<KernelIssue>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks a kernel against an input video frame rate: Nyquist headroom,
/// alias-free grid spacing for grid kernels, waveform non-negativity,
/// and the tracking one-period rule. Reports; never errors.
pub fn validate_kernel(kernel: &KernelSpec, video_frame_rate_hz: f64) -> ValidationReport {
    let mut report = ValidationReport::default();
    let tol = 1e-9;

    if kernel.amplitude < kernel.contrast {
        report.violations.push(KernelIssue::NegativeLight {
            amplitude: kernel.amplitude,
            contrast: kernel.contrast,
        });
    }

    let nyquist = video_frame_rate_hz / 2.0;
    for &f in &kernel.frequencies_hz {
        if f > nyquist * (1.0 + tol) {
            report.violations.push(KernelIssue::FrequencyAboveNyquist {
                frequency_hz: f,
                nyquist_hz: nyquist,
            });
        }
    }

    let df = kernel.grid_spacing_hz();
    match kernel.kind {
        KernelKind::Compression | KernelKind::BackgroundSubtract => {
            for pair in kernel.frequencies_hz.windows(2) {
                let spacing = pair[1] - pair[0];
                if spacing > df * (1.0 + tol) {
                    report.violations.push(KernelIssue::SpacingExceedsGrid {
                        spacing_hz: spacing,
                        limit_hz: df,
                    });
                }
            }
        }
        KernelKind::Periodic { .. } | KernelKind::Extraction => {
            for &f in &kernel.frequencies_hz {
                let bins = f * kernel.exposure_s;
                if (bins - bins.round()).abs() > 1e-6 {
                    report
                        .warnings
                        .push(KernelIssue::OffGridFrequency { frequency_hz: f });
                }
            }
        }
        KernelKind::Tracking => {
            for &f in &kernel.frequencies_hz {
                if (f * kernel.exposure_s - 1.0).abs() > 1e-9 {
                    report
                        .violations
                        .push(KernelIssue::TrackingFrequencyMismatch {
                            frequency_hz: f,
                            expected_hz: df,
                        });
                }
            }
        }
    }

    report
}
