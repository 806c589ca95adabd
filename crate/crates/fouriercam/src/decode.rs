//! Spectrum recovery and video reconstruction.
//!
//! Four phase-shifted detections of one coding element combine into one
//! complex Fourier coefficient:
//!
//! ```text
//! (D_0 - D_pi) + i*(D_pi/2 - D_3pi/2) = 2*B*dt * sum_t I(t) * e^(-i*2*pi*f*t)
//! ```
//!
//! so a stored coefficient equals `2*B*dt` times the plain forward-DFT
//! sum of the pixel temporal vector, and the mean coding level cancels.
//! The negative exponent here is forced by that identity; the tracking
//! module's phase sign convention follows from it.
//!
//! Reconstruction assembles a conjugate-symmetric bin-indexed spectrum
//! per coding group and inverse-transforms it. Grid kernels (compression,
//! background-subtract, on-grid extraction) reconstruct over the exposure
//! window; harmonic kernels reconstruct over one fundamental period.

use crate::error::{Error, Result};
use crate::forward::CodedExposure;
use crate::kernels::{KernelKind, KernelSpec};
use crate::video::VideoCube;
use ndarray::{Array2, Array3};
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Per-pixel complex Fourier coefficients of a capture, in kernel
/// frequency order.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalSpectrum {
    /// `cg_rows x cg_cols x h` coefficients.
    coefficients: Array3<Complex64>,
    kernel: KernelSpec,
    ce_rows: usize,
    ce_cols: usize,
    /// `2 * contrast * dt`: stored values are this factor times the
    /// forward-DFT sums of the pixel temporal vectors.
    scale: f64,
}

impl TemporalSpectrum {
    pub fn new(
        coefficients: Array3<Complex64>,
        kernel: KernelSpec,
        ce_rows: usize,
        ce_cols: usize,
        scale: f64,
    ) -> Result<Self> {
        if coefficients.shape()[2] != kernel.frequency_count()
            || ce_rows * ce_cols != kernel.frequency_count()
        {
            return Err(Error::invalid(
                "coefficient depth, CE grid and kernel frequency count must agree",
            ));
        }
        Ok(Self {
            coefficients,
            kernel,
            ce_rows,
            ce_cols,
            scale,
        })
    }

    pub fn cg_rows(&self) -> usize {
        self.coefficients.shape()[0]
    }

    pub fn cg_cols(&self) -> usize {
        self.coefficients.shape()[1]
    }

    pub fn ce_rows(&self) -> usize {
        self.ce_rows
    }

    pub fn ce_cols(&self) -> usize {
        self.ce_cols
    }

    pub fn frequency_count(&self) -> usize {
        self.kernel.frequency_count()
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn coefficients(&self) -> &Array3<Complex64> {
        &self.coefficients
    }

    pub fn coefficient(&self, cg_row: usize, cg_col: usize, k: usize) -> Complex64 {
        self.coefficients[(cg_row, cg_col, k)]
    }

    /// Scale constant relating stored values to plain DFT sums.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// |F| of coefficient `k` over the CG grid.
    pub fn amplitude_image(&self, k: usize) -> Result<Array2<f64>> {
        self.check_k(k)?;
        Ok(self
            .coefficients
            .index_axis(ndarray::Axis(2), k)
            .mapv(|c| c.norm()))
    }

    /// arg(F) of coefficient `k` over the CG grid, in [-pi, pi].
    pub fn phase_image(&self, k: usize) -> Result<Array2<f64>> {
        self.check_k(k)?;
        Ok(self
            .coefficients
            .index_axis(ndarray::Axis(2), k)
            .mapv(|c| c.arg()))
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k >= self.frequency_count() {
            return Err(Error::invalid(format!(
                "coefficient index {k} out of range 0..{}",
                self.frequency_count()
            )));
        }
        Ok(())
    }
}

/// Combines the four phase-slot detections of one coding element:
/// `(d_0 - d_pi) + i*(d_half_pi - d_3half_pi)`.
pub fn extract_coefficient(d_0: f64, d_half_pi: f64, d_pi: f64, d_3half_pi: f64) -> Complex64 {
    Complex64::new(d_0 - d_pi, d_half_pi - d_3half_pi)
}

/// Recovers the per-pixel temporal spectrum of a coded exposure by
/// applying [`extract_coefficient`] to every coding element.
pub fn decode_spectrum(coded: &CodedExposure) -> Result<TemporalSpectrum> {
    let layout = &coded.layout;
    let kernel = &coded.kernel;
    let h = kernel.frequency_count();
    if h != layout.frequencies_per_group() {
        return Err(Error::invalid(
            "coded exposure kernel and layout disagree on frequency count",
        ));
    }
    if coded.pixels.dim() != (layout.sensor_rows(), layout.sensor_cols()) {
        return Err(Error::invalid(format!(
            "coded exposure holds {:?} pixels but the layout extent is {}x{}",
            coded.pixels.dim(),
            layout.sensor_rows(),
            layout.sensor_cols()
        )));
    }

    let mut coefficients = Array3::<Complex64>::zeros((layout.cg_rows(), layout.cg_cols(), h));
    for cg_r in 0..layout.cg_rows() {
        for cg_c in 0..layout.cg_cols() {
            for k in 0..h {
                let ce = layout.ce_for_frequency(k);
                let mut d = [0.0; 4];
                for (slot, value) in d.iter_mut().enumerate() {
                    let (r, c) = layout.sensor_index((cg_r, cg_c), ce, slot)?;
                    *value = coded.pixels[(r, c)];
                }
                coefficients[(cg_r, cg_c, k)] = extract_coefficient(d[0], d[1], d[2], d[3]);
            }
        }
    }

    TemporalSpectrum::new(
        coefficients,
        kernel.clone(),
        layout.ce_rows(),
        layout.ce_cols(),
        2.0 * kernel.contrast * coded.dt_s,
    )
}

/// The bin-indexed grid a kernel reconstructs on.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionGrid {
    /// Output frame count N.
    pub len: usize,
    /// Time the N frames span: the exposure for grid kernels, one
    /// fundamental period for harmonic kernels.
    pub window_s: f64,
    /// Bin index of each kernel frequency, in kernel order.
    pub bins: Vec<usize>,
}

impl ReconstructionGrid {
    /// Frame rate of the reconstructed video.
    pub fn frame_rate_hz(&self) -> f64 {
        self.len as f64 / self.window_s
    }
}

const BIN_TOL: f64 = 1e-6;

fn bins_for(frequencies: &[f64], spacing_hz: f64) -> Option<Vec<usize>> {
    let mut bins = Vec::with_capacity(frequencies.len());
    for &f in frequencies {
        let b = f / spacing_hz;
        if (b - b.round()).abs() > BIN_TOL * b.round().max(1.0) {
            return None;
        }
        bins.push(b.round() as usize);
    }
    Some(bins)
}

/// Approximate greatest common divisor of a frequency set, for harmonic
/// sets provided without an explicit fundamental.
fn approx_gcd(frequencies: &[f64]) -> Option<f64> {
    let max = frequencies.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return None;
    }
    let tol = max * 1e-9;
    let mut g = 0.0f64;
    for &f in frequencies {
        if f == 0.0 {
            continue;
        }
        let (mut a, mut b) = (g.max(f), g.min(f));
        if b == 0.0 {
            g = a;
            continue;
        }
        while b > tol {
            let r = a % b;
            a = b;
            b = r;
        }
        g = a;
    }
    // Reject degenerate fundamentals (near-incommensurate sets).
    if g < max / 4096.0 {
        None
    } else {
        Some(g)
    }
}

/// Chooses the reconstruction grid for a kernel.
///
/// Grid kernels use frequency spacing `1/t_expo` over the exposure
/// window. Harmonic kernels use the fundamental over one period.
/// Extraction kernels take the exposure grid when every frequency lands
/// on it and otherwise infer a fundamental as the common divisor of the
/// set. `N = 2 * highest bin` (at least 1), so the highest sampled
/// frequency sits at the output Nyquist rate.
pub fn reconstruction_grid(kernel: &KernelSpec) -> Result<ReconstructionGrid> {
    let (spacing, window) = match &kernel.kind {
        KernelKind::Compression | KernelKind::BackgroundSubtract => {
            (kernel.grid_spacing_hz(), kernel.exposure_s)
        }
        KernelKind::Periodic { fundamental_hz } => (*fundamental_hz, 1.0 / fundamental_hz),
        KernelKind::Extraction => {
            if bins_for(&kernel.frequencies_hz, kernel.grid_spacing_hz()).is_some() {
                (kernel.grid_spacing_hz(), kernel.exposure_s)
            } else {
                let g = approx_gcd(&kernel.frequencies_hz).ok_or_else(|| {
                    Error::grid(format!(
                        "no common fundamental for extraction frequencies {:?}",
                        kernel.frequencies_hz
                    ))
                })?;
                (g, 1.0 / g)
            }
        }
        KernelKind::Tracking => {
            return Err(Error::invalid(
                "tracking spectra carry phase, not video; use the tracking operations",
            ))
        }
    };

    let bins = bins_for(&kernel.frequencies_hz, spacing).ok_or_else(|| {
        Error::grid(format!(
            "kernel frequencies {:?} do not land on integer bins of spacing {spacing} Hz",
            kernel.frequencies_hz
        ))
    })?;
    let mut sorted = bins.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::grid("two kernel frequencies fall on the same bin"));
    }
    let len = (2 * *sorted.last().unwrap()).max(1);
    Ok(ReconstructionGrid {
        len,
        window_s: window,
        bins,
    })
}

/// Expands one coding group's coefficients into a full conjugate-
/// symmetric spectrum of length N: coefficient k lands on its bin, its
/// conjugate on `N - bin`, the DC bin is coerced real, and so is the
/// Nyquist bin when occupied.
pub fn assemble_symmetric(
    coefficients: &[Complex64],
    kernel: &KernelSpec,
) -> Result<Vec<Complex64>> {
    if coefficients.len() != kernel.frequency_count() {
        return Err(Error::invalid(format!(
            "{} coefficients supplied for a kernel of {} frequencies",
            coefficients.len(),
            kernel.frequency_count()
        )));
    }
    let grid = reconstruction_grid(kernel)?;
    let mut spectrum = vec![Complex64::new(0.0, 0.0); grid.len];
    for (&c, &bin) in coefficients.iter().zip(&grid.bins) {
        if bin == 0 {
            spectrum[0] = Complex64::new(c.re, 0.0);
        } else if 2 * bin == grid.len {
            spectrum[bin] = Complex64::new(c.re, 0.0);
        } else {
            spectrum[bin] = c;
            spectrum[grid.len - bin] = c.conj();
        }
    }
    Ok(spectrum)
}

/// Inverse DFT without the 1/N normalization.
fn inverse_dft_raw(spectrum: &[Complex64]) -> Vec<Complex64> {
    let n = spectrum.len();
    (0..n)
        .map(|i| {
            spectrum
                .iter()
                .enumerate()
                .map(|(k, &f)| f * Complex64::from_polar(1.0, TAU * (k * i % n) as f64 / n as f64))
                .sum()
        })
        .collect()
}

/// Inverse-transforms every coding group's assembled spectrum into a
/// video of N frames over the reconstruction window.
///
/// Output intensities are the inverse transform divided by
/// `2 * contrast * t_expo`, which recovers the scene's own scale; with no
/// DC bin sampled the result is mean-free (signed).
pub fn reconstruct_video(spectrum: &TemporalSpectrum) -> Result<VideoCube> {
    let kernel = spectrum.kernel();
    let grid = reconstruction_grid(kernel)?;
    let (m, n) = (spectrum.cg_rows(), spectrum.cg_cols());
    let h = spectrum.frequency_count();

    if !kernel.contrast.is_finite() || kernel.contrast <= 0.0 {
        return Err(Error::invalid(
            "reconstruction needs a kernel with positive contrast",
        ));
    }
    // Stored coefficients are 2*B*dt times DFT sums over t_expo/dt frames,
    // so the raw inverse sum divided by 2*B*t_expo recovers intensities.
    let divisor = 2.0 * kernel.contrast * kernel.exposure_s;
    let mut data = Array3::<f64>::zeros((grid.len, m, n));
    let mut coeffs = vec![Complex64::new(0.0, 0.0); h];
    for r in 0..m {
        for c in 0..n {
            for (k, slot) in coeffs.iter_mut().enumerate() {
                *slot = spectrum.coefficient(r, c, k);
            }
            let assembled = assemble_symmetric(&coeffs, kernel)?;
            let series = inverse_dft_raw(&assembled);
            let scale_ref = series.iter().map(|v| v.norm()).fold(0.0, f64::max);
            for (i, v) in series.iter().enumerate() {
                if v.im.abs() > 1e-9 * scale_ref + 1e-12 {
                    return Err(Error::NumericalFailure(format!(
                        "imaginary residue {} after inverse transform of group ({r}, {c})",
                        v.im
                    )));
                }
                data[(i, r, c)] = v.re / divisor;
            }
        }
    }
    VideoCube::signed(data, grid.frame_rate_hz())
}
