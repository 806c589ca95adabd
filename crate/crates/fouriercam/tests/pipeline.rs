//! Whole-pipeline scenario tests: synthetic scene -> coded exposure ->
//! spectrum -> reconstruction or trajectory, checked against ground
//! truth derived from the scene itself.

use fouriercam::*;
use ndarray::{Array3, Zip};
use num_complex::Complex64;
use std::f64::consts::TAU;

fn tracking_capture(video: &VideoCube) -> TemporalSpectrum {
    let kernel = make_tracking_kernel(video.duration_s()).unwrap();
    let layout = CodingLayout::new(video.rows(), video.cols(), 1, 1).unwrap();
    let coded = encode_exposure(video, &layout, &kernel, SpatialMode::Ideal, None, None).unwrap();
    decode_spectrum(&coded).unwrap()
}

/// Frames during which a pixel is lit, when they form one contiguous run.
fn single_pulse_run(series: &[f64]) -> Option<(usize, usize)> {
    let lit: Vec<usize> = series
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.5)
        .map(|(i, _)| i)
        .collect();
    match (lit.first(), lit.last()) {
        (Some(&a), Some(&b)) if b - a + 1 == lit.len() => Some((a, b)),
        _ => None,
    }
}

#[test]
fn heart_trajectory_times_match_pulse_centers() {
    // For any pixel the spot crosses exactly once, the recovered time
    // equals the center of its lit-frame run, and times increase along
    // the path.
    let (dim, frames, fps) = (64usize, 64usize, 64.0);
    let radius = 2.0;
    let path = synth::SpotPath::Heart {
        center: ((dim as f64 - 1.0) / 2.0, (dim as f64 - 1.0) / 2.0),
        scale: (dim as f64 - 4.0 * radius) / 40.0,
    };
    let video = synth::moving_spot(&path, radius, dim, dim, frames, fps).unwrap();
    let trajectory = extract_trajectory(&tracking_capture(&video), 0.1).unwrap();
    assert!(!trajectory.track.is_empty());

    let dt = 1.0 / fps;
    let mut checked = 0usize;
    for r in 0..dim {
        for c in 0..dim {
            let series: Vec<f64> = video.pixel_series(r, c).to_vec();
            if let Some((a, b)) = single_pulse_run(&series) {
                assert!(trajectory.detection_mask[(r, c)], "pixel ({r},{c}) missed");
                let truth = dt * (a + b) as f64 / 2.0;
                let err = (trajectory.time_map[(r, c)] - truth).abs();
                assert!(err < 1e-9, "pixel ({r},{c}): {err}");
                checked += 1;
            }
        }
    }
    assert!(checked > 100, "only {checked} single-pass pixels");

    // Monotone along the path parameter (away from the start/end seam).
    let mut last = 0.0;
    for k in 0..=32 {
        let u = 0.1 + 0.8 * k as f64 / 32.0;
        let (pr, pc) = path.position(u);
        let (r, c) = (pr.round() as usize, pc.round() as usize);
        if single_pulse_run(&video.pixel_series(r, c).to_vec()).is_some() {
            let t = trajectory.time_map[(r, c)];
            assert!(
                t + 1e-9 >= last,
                "time went backwards along the path: {t} after {last}"
            );
            last = t;
        }
    }
}

#[test]
fn two_circling_spots_leave_two_timed_annular_traces() {
    // Two spots on concentric circles, one revolution per exposure
    // (60 rpm over 1 s): both traces detect, and recovered times follow
    // the angular position of each spot.
    let (dim, frames, fps) = (64usize, 64usize, 64.0);
    let center = ((dim as f64 - 1.0) / 2.0, (dim as f64 - 1.0) / 2.0);
    let circle = |radius: f64| synth::SpotPath::Circle {
        center,
        radius,
        revolutions: 1.0,
        start_angle: 0.0,
    };
    let inner = synth::moving_spot(&circle(10.0), 2.0, dim, dim, frames, fps).unwrap();
    let outer = synth::moving_spot(&circle(24.0), 2.0, dim, dim, frames, fps).unwrap();
    let mut data = Array3::<f64>::zeros((frames, dim, dim));
    Zip::from(&mut data)
        .and(inner.data())
        .and(outer.data())
        .for_each(|d, &a, &b| *d = a.max(b));
    let video = VideoCube::new(data, fps).unwrap();
    let trajectory = extract_trajectory(&tracking_capture(&video), 0.1).unwrap();

    for radius in [10.0, 24.0] {
        let path = circle(radius);
        for k in 1..8 {
            let u = 0.1 + 0.1 * k as f64;
            let (pr, pc) = path.position(u);
            let (r, c) = (pr.round() as usize, pc.round() as usize);
            assert!(trajectory.detection_mask[(r, c)], "r={radius} u={u}");
            let err = (trajectory.time_map[(r, c)] - u).abs();
            // Within the spot's dwell time over the pixel plus a frame.
            let dwell = 2.0 / (TAU * radius); // radius px over one turn per second
            assert!(err <= dwell + 2.0 / fps, "r={radius} u={u}: err {err}");
        }
    }
    // Pixels between and outside the traces stay silent.
    assert!(!trajectory.detection_mask[(dim / 2, dim / 2)]);
    let between = (center.0 - 17.0).round() as usize;
    assert!(!trajectory.detection_mask[(between, dim / 2)]);
}

#[test]
fn disk_capture_concentrates_ring_energy_in_its_coefficient() {
    // Rotating disk captured with the four-ring comb: for mid-ring
    // pixels, the coefficient of that ring's frequency dominates the
    // other three.
    let (dim, fps) = (48usize, 4004.0);
    let exposure = 0.5;
    let frames = (exposure * fps) as usize;
    let rings = [3u32, 5, 7, 11];
    let video = synth::rotating_disk(5460.0, &rings, dim, dim, frames, fps).unwrap();
    let kernel = make_periodic_kernel(91.0, &[3, 5, 7, 11], exposure).unwrap();
    let layout = CodingLayout::new(dim, dim, 2, 2).unwrap();
    let coded = encode_exposure(&video, &layout, &kernel, SpatialMode::Ideal, None, None).unwrap();
    let spectrum = decode_spectrum(&coded).unwrap();

    let mut checked = 0usize;
    for r in 0..dim {
        for c in 0..dim {
            let Some(ring) = synth::disk_ring_index(dim, dim, rings.len(), r, c) else {
                continue;
            };
            // Stay off ring borders where a pixel straddles two rings.
            let neighbors_same_ring = [(r + 1, c), (r, c + 1)].iter().all(|&(nr, nc)| {
                nr < dim
                    && nc < dim
                    && synth::disk_ring_index(dim, dim, rings.len(), nr, nc) == Some(ring)
            });
            if !neighbors_same_ring {
                continue;
            }
            let own = spectrum.coefficient(r, c, ring).norm_sqr();
            let rest: f64 = (0..4)
                .filter(|&k| k != ring)
                .map(|k| spectrum.coefficient(r, c, k).norm_sqr())
                .sum();
            if own > 1e-6 {
                assert!(
                    own > 50.0 * rest,
                    "pixel ({r},{c}) ring {ring}: {own} vs {rest}"
                );
                checked += 1;
            }
        }
    }
    assert!(checked > 200, "only {checked} ring pixels checked");
}

#[test]
fn block_mode_exposes_mosaic_structure_that_ideal_mode_hides() {
    // A scene with detail finer than one coding group: ideal-mode
    // detections are uniform inside each group's phase-0 pixels, block
    // mode's are not.
    let kernel = make_compression_kernel(0.5, 1).unwrap();
    let layout = CodingLayout::new(4, 4, 1, 1).unwrap();
    let (frames, fps) = (16, 32.0);
    let fine = VideoCube::new(
        Array3::from_shape_fn(
            (frames, 8, 8),
            |(_, r, c)| {
                if (r + c) % 2 == 0 {
                    0.9
                } else {
                    0.1
                }
            },
        ),
        fps,
    )
    .unwrap();
    let coarse = VideoCube::new(Array3::from_elem((frames, 4, 4), 0.5), fps).unwrap();
    let ideal = encode_exposure(&coarse, &layout, &kernel, SpatialMode::Ideal, None, None).unwrap();
    let block = encode_exposure(&fine, &layout, &kernel, SpatialMode::Block, None, None).unwrap();
    // Ideal mode sees each group's single scene pixel, so the four phase
    // detections vary only through the coding waveform; block mode mixes
    // sub-group detail into the phase combination, skewing the decoded
    // coefficient even though the group averages agree.
    let group = block.pixels.slice(ndarray::s![0..2, 0..2]);
    assert!((group[(0, 0)] - group[(0, 1)]).abs() > 0.01);
    let si = decode_spectrum(&ideal).unwrap();
    let sb = decode_spectrum(&block).unwrap();
    let mut max_shift: f64 = 0.0;
    for r in 0..4 {
        for c in 0..4 {
            let a = si.coefficient(r, c, 0);
            let b = sb.coefficient(r, c, 0);
            max_shift = max_shift.max((a - b).norm());
        }
    }
    assert!(
        max_shift > 0.05,
        "block mode hid the mosaic artifact: {max_shift}"
    );
}

#[test]
fn noisy_capture_still_reconstructs_and_tracks() {
    // Moderate shot noise: reconstruction stays close to the scene and
    // the tracked flash times stay within a frame of truth.
    let (rows, cols, fps) = (16usize, 16usize, 64.0);
    let glyphs: Vec<ndarray::Array2<f64>> = (0..4)
        .map(|g| {
            let mut m = ndarray::Array2::zeros((rows, cols));
            for r in 0..6 {
                for c in 0..6 {
                    m[(1 + (g / 2) * 8 + r, 1 + (g % 2) * 8 + c)] = 1.0;
                }
            }
            m
        })
        .collect();
    let video = synth::character_flash(&glyphs, 0.25, fps).unwrap();
    let kernel = make_tracking_kernel(1.0).unwrap();
    let layout = CodingLayout::new(rows, cols, 1, 1).unwrap();
    let noise = NoiseConfig {
        photon_budget: Some(1e6),
        read_noise_sigma: 1e-4,
        adc_bits: Some(14),
        rng_seed: 3,
    };
    let coded = encode_exposure(
        &video,
        &layout,
        &kernel,
        SpatialMode::Ideal,
        Some(256),
        Some(&noise),
    )
    .unwrap();
    let trajectory = extract_trajectory(&decode_spectrum(&coded).unwrap(), 0.2).unwrap();
    for (g, glyph) in glyphs.iter().enumerate() {
        let center = 0.125 + 0.25 * g as f64;
        let mid = (1 + (g / 2) * 8 + 3, 1 + (g % 2) * 8 + 3);
        assert!(glyph[mid] == 1.0);
        assert!(trajectory.detection_mask[mid]);
        assert!(
            (trajectory.time_map[mid] - center).abs() < 1.0 / fps,
            "glyph {g}: {} vs {center}",
            trajectory.time_map[mid]
        );
    }
}

#[test]
fn file_formats_carry_the_pipeline() {
    // Write/read at every stage and make sure the downstream math sees
    // identical data.
    let dir = tempfile::tempdir().unwrap();
    let video = synth::translating_block(0.1, 10.0, 8, 12, 32, 64.0).unwrap();
    let video_path = dir.path().join("v.fcv");
    io::write_video_cube(&video_path, &video).unwrap();
    let video2 = io::read_video_cube(&video_path).unwrap();

    let kernel = make_compression_kernel(0.5, 4).unwrap();
    let layout = CodingLayout::new(8, 12, 2, 2).unwrap();
    let coded = encode_exposure(&video2, &layout, &kernel, SpatialMode::Ideal, None, None).unwrap();
    let coded_path = dir.path().join("c.fce");
    io::write_coded_exposure(&coded_path, &coded).unwrap();
    let coded2 = io::read_coded_exposure(&coded_path).unwrap();
    assert_eq!(coded, coded2);

    let spectrum = decode_spectrum(&coded2).unwrap();
    let spec_path = dir.path().join("s.fcs");
    io::write_spectrum(&spec_path, &spectrum).unwrap();
    let spectrum2 = io::read_spectrum(&spec_path).unwrap();
    assert_eq!(spectrum, spectrum2);

    let a = reconstruct_video(&spectrum).unwrap();
    let b = reconstruct_video(&spectrum2).unwrap();
    assert_eq!(a, b);
}

#[test]
fn static_scene_has_real_dc_coefficient() {
    let video = VideoCube::new(Array3::from_elem((32, 4, 4), 0.6), 64.0).unwrap();
    let kernel = make_compression_kernel(0.5, 4).unwrap();
    let layout = CodingLayout::new(4, 4, 2, 2).unwrap();
    let coded = encode_exposure(&video, &layout, &kernel, SpatialMode::Ideal, None, None).unwrap();
    let spectrum = decode_spectrum(&coded).unwrap();
    for r in 0..4 {
        for c in 0..4 {
            let dc: Complex64 = spectrum.coefficient(r, c, 0);
            assert!(dc.im.abs() < 1e-12 * dc.re.abs().max(1.0));
        }
    }
}
