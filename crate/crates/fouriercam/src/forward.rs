//! The virtual camera: modulates every scene pixel by its coding
//! element's sinusoidal sampling waveform and integrates over the
//! exposure, producing the single coded sensor image.
//!
//! Integration is a left-Riemann sum on the input video's frame grid
//! (`dt = 1/frame_rate`): the video is the finest truth available, so no
//! interpolation is invented. Optional stages model a pulse-width
//! modulated coding device (amplitude quantization of the waveform) and
//! sensor noise (Poisson shot noise, Gaussian read noise, ADC
//! quantization), all behind a seeded per-pixel RNG so serial and
//! parallel evaluation orders agree bit for bit.

use crate::error::{Error, Result};
use crate::geometry::{CodingLayout, PHASE_ORDER};
use crate::kernels::KernelSpec;
use crate::video::VideoCube;
use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use std::f64::consts::TAU;

/// How scene pixels map onto the sensor mosaic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpatialMode {
    /// Every sensor pixel of a coding group sees that group's single
    /// scene pixel: the homogeneity assumption the decode math relies on.
    /// The video resolution must equal the CG grid.
    Ideal,
    /// Every sensor pixel sees its own scene pixel, exposing mosaic
    /// artifacts when content varies within a group. The video resolution
    /// must equal the sensor extent.
    Block,
}

/// Sensor noise model, applied after integration in the order shot noise,
/// read noise, ADC quantization. The RNG stream of a pixel is derived
/// from `(rng_seed, linear pixel index)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseConfig {
    /// Expected photons at full scale; `None` disables shot noise.
    pub photon_budget: Option<f64>,
    /// Standard deviation of additive Gaussian read noise, in detection
    /// units. Zero disables it.
    pub read_noise_sigma: f64,
    /// ADC bit depth; `None` skips quantization.
    pub adc_bits: Option<u8>,
    pub rng_seed: u64,
}

impl NoiseConfig {
    fn validate(&self) -> Result<()> {
        if let Some(budget) = self.photon_budget {
            if !budget.is_finite() || budget <= 0.0 {
                return Err(Error::invalid(format!(
                    "photon budget must be positive, got {budget}"
                )));
            }
        }
        if self.read_noise_sigma < 0.0 || !self.read_noise_sigma.is_finite() {
            return Err(Error::invalid("read noise sigma must be non-negative"));
        }
        if let Some(bits) = self.adc_bits {
            if bits == 0 || bits > 32 {
                return Err(Error::invalid("ADC depth must be 1..=32 bits"));
            }
        }
        Ok(())
    }
}

/// The single coded sensor image plus the capture metadata needed to
/// decode it.
#[derive(Debug, Clone, PartialEq)]
pub struct CodedExposure {
    /// Detected values, one per sensor pixel of the layout extent.
    pub pixels: Array2<f64>,
    pub layout: CodingLayout,
    pub kernel: KernelSpec,
    /// Time step of the integration grid (1/frame_rate of the input).
    pub dt_s: f64,
    pub noise: Option<NoiseConfig>,
}

/// Coding waveform `A + B*cos(2*pi*f*t + phase)` sampled on `times_s`.
pub fn sampling_vector(
    f_hz: f64,
    phase: f64,
    amplitude: f64,
    contrast: f64,
    times_s: &[f64],
) -> Result<Vec<f64>> {
    if !contrast.is_finite() || !amplitude.is_finite() || contrast < 0.0 || amplitude < contrast {
        return Err(Error::invalid(format!(
            "need amplitude >= contrast >= 0 for non-negative light, got A={amplitude}, B={contrast}"
        )));
    }
    Ok(times_s
        .iter()
        .map(|&t| amplitude + contrast * (TAU * f_hz * t + phase).cos())
        .collect())
}

/// Rounds every sample to the nearest of `levels` evenly spaced values on
/// [0, 1], modeling a pulse-width-modulated binary device emulating
/// grayscale. Idempotent.
pub fn quantize_pwm(waveform: &[f64], levels: u32) -> Result<Vec<f64>> {
    if levels < 2 {
        return Err(Error::invalid("quantization needs at least 2 levels"));
    }
    if waveform.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
        return Err(Error::invalid("waveform must lie in [0, 1] to quantize"));
    }
    let steps = (levels - 1) as f64;
    Ok(waveform
        .iter()
        .map(|&v| (v * steps).round() / steps)
        .collect())
}

/// Integrates the scene against the coding mosaic, producing the coded
/// sensor image.
///
/// The video must span the kernel exposure (within one frame), keep the
/// highest coding frequency at or below its Nyquist rate, and match the
/// resolution the spatial mode dictates.
pub fn encode_exposure(
    video: &VideoCube,
    layout: &CodingLayout,
    kernel: &KernelSpec,
    mode: SpatialMode,
    pwm_levels: Option<u32>,
    noise: Option<&NoiseConfig>,
) -> Result<CodedExposure> {
    if kernel.frequency_count() != layout.frequencies_per_group() {
        return Err(Error::invalid(format!(
            "kernel holds {} frequencies but the layout's {}x{} CE grid measures {}",
            kernel.frequency_count(),
            layout.ce_rows(),
            layout.ce_cols(),
            layout.frequencies_per_group()
        )));
    }
    if !kernel.contrast.is_finite()
        || !kernel.amplitude.is_finite()
        || kernel.contrast < 0.0
        || kernel.amplitude < kernel.contrast
    {
        return Err(Error::invalid(
            "kernel coding waveform must be non-negative (amplitude >= contrast >= 0)",
        ));
    }
    let dt = video.dt_s();
    if (video.duration_s() - kernel.exposure_s).abs() > dt * (1.0 + 1e-9) {
        return Err(Error::invalid(format!(
            "video spans {:.6} s but the kernel exposure is {:.6} s",
            video.duration_s(),
            kernel.exposure_s
        )));
    }
    let nyquist = video.frame_rate_hz() / 2.0;
    if kernel.max_frequency_hz() > nyquist * (1.0 + 1e-12) {
        return Err(Error::invalid(format!(
            "coding frequency {} Hz exceeds the video Nyquist rate {} Hz",
            kernel.max_frequency_hz(),
            nyquist
        )));
    }
    match mode {
        SpatialMode::Ideal => {
            if video.rows() != layout.cg_rows() || video.cols() != layout.cg_cols() {
                return Err(Error::invalid(format!(
                    "ideal mode needs video at CG resolution {}x{}, got {}x{}",
                    layout.cg_rows(),
                    layout.cg_cols(),
                    video.rows(),
                    video.cols()
                )));
            }
        }
        SpatialMode::Block => {
            if video.rows() != layout.sensor_rows() || video.cols() != layout.sensor_cols() {
                return Err(Error::invalid(format!(
                    "block mode needs video at sensor extent {}x{}, got {}x{}",
                    layout.sensor_rows(),
                    layout.sensor_cols(),
                    video.rows(),
                    video.cols()
                )));
            }
        }
    }
    if let Some(cfg) = noise {
        cfg.validate()?;
    }

    let frames = video.frames();
    let times: Vec<f64> = (0..frames).map(|i| i as f64 * dt).collect();

    // Only h*4 distinct waveforms exist; sample (and quantize) each once.
    let h = kernel.frequency_count();
    let mut waveforms: Vec<Vec<f64>> = Vec::with_capacity(h * 4);
    for &f in &kernel.frequencies_hz {
        for phase in PHASE_ORDER {
            let wave = sampling_vector(f, phase, kernel.amplitude, kernel.contrast, &times)?;
            waveforms.push(match pwm_levels {
                Some(levels) => quantize_pwm(&wave, levels)?,
                None => wave,
            });
        }
    }

    let mut pixels = Array2::<f64>::zeros((layout.sensor_rows(), layout.sensor_cols()));
    let data = video.data();
    for sr in 0..layout.sensor_rows() {
        for sc in 0..layout.sensor_cols() {
            let site = layout.inverse_sensor_index((sr, sc))?;
            let wave = &waveforms[layout.frequency_index(site.ce) * 4 + site.phase_slot];
            let (vr, vc) = match mode {
                SpatialMode::Ideal => site.cg,
                SpatialMode::Block => (sr, sc),
            };
            let mut acc = 0.0;
            for (i, w) in wave.iter().enumerate() {
                acc += data[(i, vr, vc)] * w;
            }
            pixels[(sr, sc)] = acc * dt;
        }
    }

    if let Some(cfg) = noise {
        apply_noise(&mut pixels, cfg, kernel)?;
    }

    Ok(CodedExposure {
        pixels,
        layout: *layout,
        kernel: kernel.clone(),
        dt_s: dt,
        noise: noise.cloned(),
    })
}

fn apply_noise(pixels: &mut Array2<f64>, cfg: &NoiseConfig, kernel: &KernelSpec) -> Result<()> {
    // Full scale: a unit-intensity scene under the brightest coding phase.
    let full_scale = (kernel.amplitude + kernel.contrast) * kernel.exposure_s;
    // Row-major enumeration: idx is the pixel's linear index, which pins
    // its RNG stream independently of evaluation order.
    for (idx, value) in pixels.iter_mut().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
        rng.set_stream(idx as u64);
        let mut v = *value;
        if let Some(budget) = cfg.photon_budget {
            let lambda = v * budget;
            v = if lambda > 0.0 {
                Poisson::new(lambda)
                    .map_err(|e| Error::NumericalFailure(format!("poisson: {e}")))?
                    .sample(&mut rng)
                    / budget
            } else {
                0.0
            };
        }
        if cfg.read_noise_sigma > 0.0 {
            let normal = Normal::new(0.0, cfg.read_noise_sigma)
                .map_err(|e| Error::NumericalFailure(format!("normal: {e}")))?;
            v += normal.sample(&mut rng);
        }
        if let Some(bits) = cfg.adc_bits {
            let steps = (2u64.pow(bits as u32) - 1) as f64;
            v = (v.clamp(0.0, full_scale) / full_scale * steps).round() / steps * full_scale;
        }
        // Detected values are non-negative by construction; read noise may
        // undershoot, which a physical sensor clips.
        *value = v.max(0.0);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{make_compression_kernel, make_tracking_kernel};
    use approx::assert_relative_eq;
    use ndarray::Array3;

    fn constant_video(value: f64, rows: usize, cols: usize, frames: usize, fps: f64) -> VideoCube {
        VideoCube::new(Array3::from_elem((frames, rows, cols), value), fps).unwrap()
    }

    #[test]
    fn sampling_vector_dc_extremes() {
        let ones = sampling_vector(0.0, 0.0, 0.5, 0.5, &[0.0, 0.1, 0.2]).unwrap();
        assert!(ones.iter().all(|&v| (v - 1.0).abs() < 1e-15));
        let zeros = sampling_vector(0.0, std::f64::consts::PI, 0.5, 0.5, &[0.0, 0.1]).unwrap();
        assert!(zeros.iter().all(|&v| v.abs() < 1e-15));
    }

    #[test]
    fn sampling_vector_quarter_phase() {
        let t = [0.0, 0.25, 0.5, 0.75];
        let wave = sampling_vector(1.0, std::f64::consts::FRAC_PI_2, 0.5, 0.5, &t).unwrap();
        let expected = [0.5, 0.0, 0.5, 1.0];
        for (w, e) in wave.iter().zip(expected) {
            assert_relative_eq!(*w, e, epsilon = 1e-12);
        }
    }

    #[test]
    fn sampling_vector_rejects_negative_light() {
        assert!(sampling_vector(1.0, 0.0, 0.3, 0.5, &[0.0]).is_err());
        assert!(sampling_vector(1.0, 0.0, 0.5, -0.1, &[0.0]).is_err());
    }

    #[test]
    fn pwm_quantization() {
        let q = quantize_pwm(&[0.5], 256).unwrap();
        assert_relative_eq!(q[0], 128.0 / 255.0, epsilon = 1e-15);

        let q = quantize_pwm(&[0.2, 0.5, 0.8], 2).unwrap();
        assert_eq!(q, vec![0.0, 1.0, 1.0]); // binarization, 0.5 rounds up

        let first = quantize_pwm(&[0.137, 0.91], 64).unwrap();
        let second = quantize_pwm(&first, 64).unwrap();
        assert_eq!(first, second); // idempotent

        assert!(quantize_pwm(&[1.2], 256).is_err());
        assert!(quantize_pwm(&[0.5], 1).is_err());
    }

    #[test]
    fn constant_scene_gives_equal_phase_detections() {
        // Any on-grid frequency integrates its cosine to zero, leaving
        // D = c * A * t_expo for all four phases.
        let kernel = make_compression_kernel(0.5, 4).unwrap();
        let layout = CodingLayout::new(2, 2, 2, 2).unwrap();
        let video = constant_video(0.6, 2, 2, 32, 64.0);
        let coded =
            encode_exposure(&video, &layout, &kernel, SpatialMode::Ideal, None, None).unwrap();
        let expected = 0.6 * kernel.amplitude * kernel.exposure_s;
        for cg in [(0, 0), (1, 1)] {
            for k in 1..4 {
                let ce = layout.ce_for_frequency(k);
                for slot in 0..4 {
                    let (r, c) = layout.sensor_index(cg, ce, slot).unwrap();
                    assert_relative_eq!(coded.pixels[(r, c)], expected, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn matched_cosine_peak_response() {
        // Scene pixel 0.5 + contrast*cos(2*pi*f*t) probed at f: the phase-0
        // and phase-pi detections differ by B * t_expo * contrast.
        let kernel = make_compression_kernel(0.5, 2).unwrap();
        let layout = CodingLayout::new(1, 1, 1, 2).unwrap();
        let (frames, fps) = (64, 128.0);
        let f1 = kernel.frequencies_hz[1];
        let contrast = 0.4;
        let mut data = Array3::zeros((frames, 1, 1));
        for i in 0..frames {
            let t = i as f64 / fps;
            data[(i, 0, 0)] = 0.5 + contrast * (TAU * f1 * t).cos();
        }
        let video = VideoCube::new(data, fps).unwrap();
        let coded =
            encode_exposure(&video, &layout, &kernel, SpatialMode::Ideal, None, None).unwrap();
        let ce = layout.ce_for_frequency(1);
        let d0 = coded.pixels[layout.sensor_index((0, 0), ce, 0).unwrap()];
        let d_pi = coded.pixels[layout.sensor_index((0, 0), ce, 2).unwrap()];
        assert_relative_eq!(
            d0 - d_pi,
            kernel.contrast * kernel.exposure_s * contrast,
            epsilon = 1e-12
        );
    }

    #[test]
    fn encode_is_linear_in_the_scene() {
        use rand::Rng;
        let kernel = make_compression_kernel(0.25, 4).unwrap();
        let layout = CodingLayout::new(3, 3, 2, 2).unwrap();
        let (frames, fps) = (16, 64.0);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut cube = || {
            let data = Array3::from_shape_fn((frames, 3, 3), |_| rng.gen::<f64>());
            VideoCube::new(data, fps).unwrap()
        };
        let v1 = cube();
        let v2 = cube();
        let blend = VideoCube::blend(&[(0.3, &v1), (0.45, &v2)]).unwrap();
        let e1 = encode_exposure(&v1, &layout, &kernel, SpatialMode::Ideal, None, None).unwrap();
        let e2 = encode_exposure(&v2, &layout, &kernel, SpatialMode::Ideal, None, None).unwrap();
        let eb = encode_exposure(&blend, &layout, &kernel, SpatialMode::Ideal, None, None).unwrap();
        for (b, (a1, a2)) in eb.pixels.iter().zip(e1.pixels.iter().zip(e2.pixels.iter())) {
            assert_relative_eq!(*b, 0.3 * a1 + 0.45 * a2, epsilon = 1e-13);
        }
    }

    #[test]
    fn unit_scene_light_throughput_is_half_exposure() {
        // Every pixel coding a whole number of periods integrates to
        // A * t_expo = t_expo / 2 at default coding values.
        let kernel = make_tracking_kernel(1.0).unwrap();
        let layout = CodingLayout::new(1, 1, 1, 1).unwrap();
        let video = constant_video(1.0, 1, 1, 32, 32.0);
        let coded =
            encode_exposure(&video, &layout, &kernel, SpatialMode::Ideal, None, None).unwrap();
        // Phase 0 and pi pair off around A*t, as do pi/2 and 3pi/2.
        let mean = coded.pixels.iter().sum::<f64>() / 4.0;
        assert_relative_eq!(mean, 0.5, epsilon = 1e-12);
        for slot in 0..4 {
            let (r, c) = layout.sensor_index((0, 0), (0, 0), slot).unwrap();
            assert_relative_eq!(coded.pixels[(r, c)], 0.5, epsilon = 1e-10);
        }
        // Upper bound for any pixel: (A + B) * t_expo.
        assert!(coded
            .pixels
            .iter()
            .all(|&d| d <= (kernel.amplitude + kernel.contrast) * kernel.exposure_s + 1e-12));
    }

    #[test]
    fn dimension_and_nyquist_mismatches_rejected() {
        let kernel = make_compression_kernel(0.5, 4).unwrap();
        let layout = CodingLayout::new(2, 2, 2, 2).unwrap();
        // Wrong scene resolution for ideal mode.
        let video = constant_video(0.5, 3, 2, 32, 64.0);
        assert!(encode_exposure(&video, &layout, &kernel, SpatialMode::Ideal, None, None).is_err());
        // Wrong resolution for block mode (needs 8x8).
        let video = constant_video(0.5, 2, 2, 32, 64.0);
        assert!(encode_exposure(&video, &layout, &kernel, SpatialMode::Block, None, None).is_err());
        // Duration mismatch.
        let video = constant_video(0.5, 2, 2, 16, 64.0);
        assert!(encode_exposure(&video, &layout, &kernel, SpatialMode::Ideal, None, None).is_err());
        // Nyquist violation: 6 Hz kernel frequency over a 8 fps video.
        let video = constant_video(0.5, 2, 2, 4, 8.0);
        assert!(encode_exposure(&video, &layout, &kernel, SpatialMode::Ideal, None, None).is_err());
        // Kernel/layout frequency count mismatch.
        let video = constant_video(0.5, 2, 2, 32, 64.0);
        let small = make_compression_kernel(0.5, 3).unwrap();
        assert!(encode_exposure(&video, &layout, &small, SpatialMode::Ideal, None, None).is_err());
    }

    #[test]
    fn block_mode_on_groupwise_constant_scene_matches_ideal() {
        let kernel = make_compression_kernel(0.5, 1).unwrap();
        let layout = CodingLayout::new(2, 2, 1, 1).unwrap();
        let (frames, fps) = (16, 32.0);
        let ideal_video = VideoCube::new(
            Array3::from_shape_fn((frames, 2, 2), |(f, r, c)| {
                0.2 + 0.1 * (r as f64) + 0.05 * (c as f64) + 0.01 * (f as f64 % 3.0)
            }),
            fps,
        )
        .unwrap();
        // Upsample to sensor extent so each group is spatially uniform.
        let block_video = VideoCube::new(
            Array3::from_shape_fn((frames, 4, 4), |(f, r, c)| {
                ideal_video.data()[(f, r / 2, c / 2)]
            }),
            fps,
        )
        .unwrap();
        let a = encode_exposure(
            &ideal_video,
            &layout,
            &kernel,
            SpatialMode::Ideal,
            None,
            None,
        )
        .unwrap();
        let b = encode_exposure(
            &block_video,
            &layout,
            &kernel,
            SpatialMode::Block,
            None,
            None,
        )
        .unwrap();
        for (x, y) in a.pixels.iter().zip(b.pixels.iter()) {
            assert_relative_eq!(*x, *y, epsilon = 1e-14);
        }
    }

    #[test]
    fn noise_is_reproducible_for_a_seed_and_varies_across_seeds() {
        let kernel = make_compression_kernel(0.5, 4).unwrap();
        let layout = CodingLayout::new(2, 2, 2, 2).unwrap();
        let video = constant_video(0.5, 2, 2, 32, 64.0);
        let noise = |seed| NoiseConfig {
            photon_budget: Some(1e4),
            read_noise_sigma: 1e-3,
            adc_bits: Some(12),
            rng_seed: seed,
        };
        let a = encode_exposure(
            &video,
            &layout,
            &kernel,
            SpatialMode::Ideal,
            None,
            Some(&noise(7)),
        )
        .unwrap();
        let b = encode_exposure(
            &video,
            &layout,
            &kernel,
            SpatialMode::Ideal,
            None,
            Some(&noise(7)),
        )
        .unwrap();
        assert_eq!(a.pixels, b.pixels);
        let c = encode_exposure(
            &video,
            &layout,
            &kernel,
            SpatialMode::Ideal,
            None,
            Some(&noise(8)),
        )
        .unwrap();
        assert_ne!(a.pixels, c.pixels);
        assert!(c.pixels.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn noise_config_validation() {
        assert!(NoiseConfig {
            photon_budget: Some(0.0),
            read_noise_sigma: 0.0,
            adc_bits: None,
            rng_seed: 0,
        }
        .validate()
        .is_err());
        assert!(NoiseConfig {
            photon_budget: None,
            read_noise_sigma: -1.0,
            adc_bits: None,
            rng_seed: 0,
        }
        .validate()
        .is_err());
    }
}
