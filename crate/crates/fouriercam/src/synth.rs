//! Deterministic synthetic scenes: rotating disks with harmonic rings,
//! moving spots, flashed glyph sequences, and translating fringe
//! textures.
//!
//! Generators evaluate analytic intensity functions at pixel centers
//! (point sampling, no anti-aliasing) so every pixel temporal vector has
//! an exact closed form and clean spectra. They never clamp: parameters
//! are constrained so intensities stay in [0, 1] by construction.

use crate::error::{Error, Result};
use crate::video::VideoCube;
use ndarray::{Array2, Array3};
use std::f64::consts::TAU;

/// Ring geometry shared by the disk renderer and region masks: the disk
/// fills 95% of the smaller dimension, with a blank hub of 20% of the
/// disk radius, and the rings split the remaining band evenly.
pub fn disk_ring_index(
    rows: usize,
    cols: usize,
    n_rings: usize,
    row: usize,
    col: usize,
) -> Option<usize> {
    let cy = (rows as f64 - 1.0) / 2.0;
    let cx = (cols as f64 - 1.0) / 2.0;
    let outer = 0.475 * rows.min(cols) as f64;
    let inner = 0.2 * outer;
    let radius = (row as f64 - cy).hypot(col as f64 - cx);
    if radius < inner || radius >= outer {
        return None;
    }
    let width = (outer - inner) / n_rings as f64;
    let idx = ((radius - inner) / width) as usize;
    Some(idx.min(n_rings - 1))
}

/// Disk of concentric rings spinning at `rpm`. The ring at index `i`
/// carries `ring_periods[i]` angular periods, so a fixed pixel on it sees
/// intensity `0.5 + 0.5*cos(s*(theta - omega*t))` at temporal frequency
/// `(rpm/60) * s`.
pub fn rotating_disk(
    rpm: f64,
    ring_periods: &[u32],
    rows: usize,
    cols: usize,
    frames: usize,
    frame_rate_hz: f64,
) -> Result<VideoCube> {
    if ring_periods.is_empty() || ring_periods.contains(&0) {
        return Err(Error::invalid(
            "ring periods must be positive and non-empty",
        ));
    }
    if rpm < 0.0 || !rpm.is_finite() {
        return Err(Error::invalid(format!(
            "rpm must be non-negative, got {rpm}"
        )));
    }
    check_render_dims(rows, cols, frames, frame_rate_hz)?;
    let rev_hz = rpm / 60.0;
    let max_temporal = rev_hz * *ring_periods.iter().max().unwrap() as f64;
    if max_temporal > frame_rate_hz / 2.0 * (1.0 + 1e-12) {
        return Err(Error::invalid(format!(
            "temporal aliasing: ring frequency {max_temporal} Hz exceeds Nyquist {} Hz",
            frame_rate_hz / 2.0
        )));
    }

    let cy = (rows as f64 - 1.0) / 2.0;
    let cx = (cols as f64 - 1.0) / 2.0;
    // Per-pixel angle and ring maps are time-invariant; hoist them.
    let mut theta = Array2::<f64>::zeros((rows, cols));
    let mut ring = Array2::<i32>::from_elem((rows, cols), -1);
    for r in 0..rows {
        for c in 0..cols {
            theta[(r, c)] = (r as f64 - cy).atan2(c as f64 - cx);
            if let Some(i) = disk_ring_index(rows, cols, ring_periods.len(), r, c) {
                ring[(r, c)] = i as i32;
            }
        }
    }

    let omega = TAU * rev_hz;
    let mut data = Array3::<f64>::zeros((frames, rows, cols));
    for f in 0..frames {
        let t = f as f64 / frame_rate_hz;
        for r in 0..rows {
            for c in 0..cols {
                let i = ring[(r, c)];
                if i >= 0 {
                    let s = ring_periods[i as usize] as f64;
                    data[(f, r, c)] = 0.5 + 0.5 * (s * (theta[(r, c)] - omega * t)).cos();
                }
            }
        }
    }
    VideoCube::new(data, frame_rate_hz)
}

/// Parametric spot trajectories over a normalized progress in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub enum SpotPath {
    Stationary {
        row: f64,
        col: f64,
    },
    Line {
        from: (f64, f64),
        to: (f64, f64),
    },
    Circle {
        center: (f64, f64),
        radius: f64,
        /// Turns completed over the full progress range; fractions allowed.
        revolutions: f64,
        start_angle: f64,
    },
    /// Classic cardioid-like closed curve, traversed once. `scale` is in
    /// pixels per curve unit; the curve spans roughly `34*scale` pixels
    /// wide and `29*scale` tall around `center`.
    Heart {
        center: (f64, f64),
        scale: f64,
    },
}

impl SpotPath {
    /// (row, col) position at `progress` in [0, 1].
    pub fn position(&self, progress: f64) -> (f64, f64) {
        match *self {
            SpotPath::Stationary { row, col } => (row, col),
            SpotPath::Line { from, to } => (
                from.0 + (to.0 - from.0) * progress,
                from.1 + (to.1 - from.1) * progress,
            ),
            SpotPath::Circle {
                center,
                radius,
                revolutions,
                start_angle,
            } => {
                let a = start_angle + TAU * revolutions * progress;
                (center.0 + radius * a.sin(), center.1 + radius * a.cos())
            }
            SpotPath::Heart { center, scale } => {
                let u = TAU * progress;
                let x = 16.0 * u.sin().powi(3);
                let y = 13.0 * u.cos()
                    - 5.0 * (2.0 * u).cos()
                    - 2.0 * (3.0 * u).cos()
                    - (4.0 * u).cos();
                (center.0 - scale * y, center.1 + scale * x)
            }
        }
    }
}

/// Bright disk of `spot_radius` pixels following `path`, dark elsewhere.
/// The path must keep the whole spot inside the frame.
pub fn moving_spot(
    path: &SpotPath,
    spot_radius: f64,
    rows: usize,
    cols: usize,
    frames: usize,
    frame_rate_hz: f64,
) -> Result<VideoCube> {
    check_render_dims(rows, cols, frames, frame_rate_hz)?;
    if !spot_radius.is_finite() || spot_radius <= 0.0 {
        return Err(Error::invalid("spot radius must be positive"));
    }
    let mut data = Array3::<f64>::zeros((frames, rows, cols));
    let r2 = spot_radius * spot_radius;
    for f in 0..frames {
        let progress = if frames > 1 {
            f as f64 / frames as f64
        } else {
            0.0
        };
        let (pr, pc) = path.position(progress);
        if pr - spot_radius < -0.5
            || pr + spot_radius > rows as f64 - 0.5
            || pc - spot_radius < -0.5
            || pc + spot_radius > cols as f64 - 0.5
        {
            return Err(Error::invalid(format!(
                "path leaves the frame at progress {progress:.4}: center ({pr:.1}, {pc:.1})"
            )));
        }
        let r_lo = (pr - spot_radius).floor().max(0.0) as usize;
        let r_hi = ((pr + spot_radius).ceil() as usize).min(rows - 1);
        let c_lo = (pc - spot_radius).floor().max(0.0) as usize;
        let c_hi = ((pc + spot_radius).ceil() as usize).min(cols - 1);
        for r in r_lo..=r_hi {
            for c in c_lo..=c_hi {
                let dr = r as f64 - pr;
                let dc = c as f64 - pc;
                if dr * dr + dc * dc <= r2 {
                    data[(f, r, c)] = 1.0;
                }
            }
        }
    }
    VideoCube::new(data, frame_rate_hz)
}

/// Shows `glyph_masks[g]` during `[g*dwell, (g+1)*dwell)`. Masks must
/// share dimensions and hold values in [0, 1].
pub fn character_flash(
    glyph_masks: &[Array2<f64>],
    dwell_s: f64,
    frame_rate_hz: f64,
) -> Result<VideoCube> {
    let first = glyph_masks
        .first()
        .ok_or_else(|| Error::invalid("need at least one glyph"))?;
    if glyph_masks.iter().any(|g| g.dim() != first.dim()) {
        return Err(Error::invalid("glyph masks must share dimensions"));
    }
    if glyph_masks
        .iter()
        .any(|g| g.iter().any(|&v| !(0.0..=1.0).contains(&v)))
    {
        return Err(Error::invalid("glyph masks must hold values in [0, 1]"));
    }
    if !dwell_s.is_finite() || dwell_s <= 0.0 || !frame_rate_hz.is_finite() || frame_rate_hz <= 0.0
    {
        return Err(Error::invalid("dwell and frame rate must be positive"));
    }
    let (rows, cols) = first.dim();
    let frames = (glyph_masks.len() as f64 * dwell_s * frame_rate_hz).round() as usize;
    if frames == 0 {
        return Err(Error::invalid(
            "frame rate too low for one frame per sequence",
        ));
    }
    let mut data = Array3::<f64>::zeros((frames, rows, cols));
    for f in 0..frames {
        let t = f as f64 / frame_rate_hz;
        let g = ((t / dwell_s) as usize).min(glyph_masks.len() - 1);
        data.index_axis_mut(ndarray::Axis(0), f)
            .assign(&glyph_masks[g]);
    }
    VideoCube::new(data, frame_rate_hz)
}

/// Full-frame sinusoidal fringe (variation along columns) drifting at
/// `speed_px_per_s`, so every pixel sees temporal frequency
/// `texture_cycles_per_px * speed_px_per_s`.
pub fn translating_block(
    texture_cycles_per_px: f64,
    speed_px_per_s: f64,
    rows: usize,
    cols: usize,
    frames: usize,
    frame_rate_hz: f64,
) -> Result<VideoCube> {
    check_render_dims(rows, cols, frames, frame_rate_hz)?;
    if !texture_cycles_per_px.is_finite() || texture_cycles_per_px <= 0.0 {
        return Err(Error::invalid("texture frequency must be positive"));
    }
    let temporal = texture_cycles_per_px * speed_px_per_s.abs();
    if temporal > frame_rate_hz / 2.0 * (1.0 + 1e-12) {
        return Err(Error::invalid(format!(
            "temporal aliasing: fringe frequency {temporal} Hz exceeds Nyquist {} Hz",
            frame_rate_hz / 2.0
        )));
    }
    let mut data = Array3::<f64>::zeros((frames, rows, cols));
    for f in 0..frames {
        let t = f as f64 / frame_rate_hz;
        let shift = speed_px_per_s * t;
        for c in 0..cols {
            let v = 0.5 + 0.5 * (TAU * texture_cycles_per_px * (c as f64 - shift)).cos();
            for r in 0..rows {
                data[(f, r, c)] = v;
            }
        }
    }
    VideoCube::new(data, frame_rate_hz)
}

fn check_render_dims(rows: usize, cols: usize, frames: usize, frame_rate_hz: f64) -> Result<()> {
    if rows == 0 || cols == 0 || frames == 0 {
        return Err(Error::invalid("render dimensions must be positive"));
    }
    if !frame_rate_hz.is_finite() || frame_rate_hz <= 0.0 {
        return Err(Error::invalid(format!(
            "frame rate must be positive, got {frame_rate_hz}"
        )));
    }
    Ok(())
}

const GLYPH_ROWS: usize = 7;

fn glyph_rows(ch: char) -> Result<[&'static str; GLYPH_ROWS]> {
    match ch {
        'T' => Ok([
            "#####", "  #  ", "  #  ", "  #  ", "  #  ", "  #  ", "  #  ",
        ]),
        'H' => Ok([
            "#   #", "#   #", "#   #", "#####", "#   #", "#   #", "#   #",
        ]),
        'U' => Ok([
            "#   #", "#   #", "#   #", "#   #", "#   #", "#   #", " ### ",
        ]),
        'E' => Ok([
            "#####", "#    ", "#    ", "#### ", "#    ", "#    ", "#####",
        ]),
        _ => Err(Error::invalid(format!("no glyph bitmap for {ch:?}"))),
    }
}

/// Renders up to four text labels into disjoint quadrants of a
/// `rows x cols` canvas, one mask per label, for flash sequences whose
/// recovered event times separate spatially.
pub fn letter_glyphs(labels: &[&str], rows: usize, cols: usize) -> Result<Vec<Array2<f64>>> {
    if labels.is_empty() || labels.len() > 4 {
        return Err(Error::invalid("between 1 and 4 labels supported"));
    }
    let cell_rows = rows / 2;
    let cell_cols = cols / 2;
    let mut masks = Vec::with_capacity(labels.len());
    for (i, label) in labels.iter().enumerate() {
        if label.is_empty() {
            return Err(Error::invalid("labels must be non-empty"));
        }
        let glyphs: Vec<_> = label.chars().map(glyph_rows).collect::<Result<_>>()?;
        let bitmap_cols = glyphs.len() * 5 + (glyphs.len() - 1);
        let scale = ((cell_rows as f64 * 0.7 / GLYPH_ROWS as f64) as usize)
            .min((cell_cols as f64 * 0.7 / bitmap_cols as f64) as usize);
        if scale == 0 {
            return Err(Error::invalid(format!(
                "canvas {rows}x{cols} too small for label {label:?}"
            )));
        }
        let (cell_r, cell_c) = (i / 2, i % 2);
        let origin_r = cell_r * cell_rows + (cell_rows - GLYPH_ROWS * scale) / 2;
        let origin_c = cell_c * cell_cols + (cell_cols - bitmap_cols * scale) / 2;
        let mut mask = Array2::<f64>::zeros((rows, cols));
        for (gi, glyph) in glyphs.iter().enumerate() {
            for (br, line) in glyph.iter().enumerate() {
                for (bc, ch) in line.chars().enumerate() {
                    if ch == '#' {
                        for dr in 0..scale {
                            for dc in 0..scale {
                                let r = origin_r + br * scale + dr;
                                let c = origin_c + (gi * 6 + bc) * scale + dc;
                                mask[(r, c)] = 1.0;
                            }
                        }
                    }
                }
            }
        }
        masks.push(mask);
    }
    Ok(masks)
}
