//! Coding-mosaic geometry.
//!
//! The modulator/sensor plane is tiled into *coding groups* (CG), one per
//! scene pixel: the CG grid resolution is the resolution of the
//! reconstructed video. Each CG holds `ce_rows x ce_cols` *coding
//! elements* (CE), one per acquired frequency, and each CE is a 2x2 block
//! of sensor pixels whose coding waveforms share that frequency but carry
//! the four phases 0, pi/2, pi, 3pi/2. A layout is therefore a bijection
//! between sensor pixels and (coding group, coding element, phase slot)
//! triples, with sensor extent exactly
//! `(2 * ce_rows * cg_rows) x (2 * ce_cols * cg_cols)`.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Coding phases of the four pixels inside a CE, indexed by phase slot.
///
/// Slots run row-major over the 2x2 block: `[0, pi/2; pi, 3pi/2]`.
pub const PHASE_ORDER: [f64; 4] = [0.0, 0.5 * PI, PI, 1.5 * PI];

/// Mosaic geometry pairing a CG grid with a per-group CE grid.
///
/// Partially covered coding groups are not representable: the layout owns
/// its exact sensor extent and callers crop their sensor to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodingLayout {
    cg_rows: usize,
    cg_cols: usize,
    ce_rows: usize,
    ce_cols: usize,
}

/// The (coding group, coding element, phase slot) triple behind one
/// sensor pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SensorSite {
    pub cg: (usize, usize),
    pub ce: (usize, usize),
    pub phase_slot: usize,
}

impl CodingLayout {
    /// Builds a layout of `cg_rows x cg_cols` coding groups, each holding
    /// `ce_rows x ce_cols` coding elements.
    ///
    /// Frequencies map to CEs row-major in ascending index order, and the
    /// four phases map row-major onto each CE's 2x2 sub-block.
    pub fn new(cg_rows: usize, cg_cols: usize, ce_rows: usize, ce_cols: usize) -> Result<Self> {
        if cg_rows == 0 || cg_cols == 0 || ce_rows == 0 || ce_cols == 0 {
            return Err(Error::invalid(format!(
                "layout counts must be positive, got CG {cg_rows}x{cg_cols}, CE {ce_rows}x{ce_cols}"
            )));
        }
        Ok(Self {
            cg_rows,
            cg_cols,
            ce_rows,
            ce_cols,
        })
    }

    pub fn cg_rows(&self) -> usize {
        self.cg_rows
    }

    pub fn cg_cols(&self) -> usize {
        self.cg_cols
    }

    pub fn ce_rows(&self) -> usize {
        self.ce_rows
    }

    pub fn ce_cols(&self) -> usize {
        self.ce_cols
    }

    /// Number of frequencies one coding group measures (`h`).
    pub fn frequencies_per_group(&self) -> usize {
        self.ce_rows * self.ce_cols
    }

    pub fn sensor_rows(&self) -> usize {
        2 * self.ce_rows * self.cg_rows
    }

    pub fn sensor_cols(&self) -> usize {
        2 * self.ce_cols * self.cg_cols
    }

    /// Index into the kernel frequency list measured by the CE at `ce`.
    pub fn frequency_index(&self, ce: (usize, usize)) -> usize {
        ce.0 * self.ce_cols + ce.1
    }

    /// CE grid position measuring frequency index `k` (inverse of
    /// [`frequency_index`](Self::frequency_index)).
    pub fn ce_for_frequency(&self, k: usize) -> (usize, usize) {
        (k / self.ce_cols, k % self.ce_cols)
    }

    /// Sensor coordinate of the phase-slot pixel of one CE in one CG.
    pub fn sensor_index(
        &self,
        cg: (usize, usize),
        ce: (usize, usize),
        phase_slot: usize,
    ) -> Result<(usize, usize)> {
        if cg.0 >= self.cg_rows || cg.1 >= self.cg_cols {
            return Err(Error::invalid(format!(
                "coding group {cg:?} out of bounds for {}x{} grid",
                self.cg_rows, self.cg_cols
            )));
        }
        if ce.0 >= self.ce_rows || ce.1 >= self.ce_cols {
            return Err(Error::invalid(format!(
                "coding element {ce:?} out of bounds for {}x{} grid",
                self.ce_rows, self.ce_cols
            )));
        }
        if phase_slot >= 4 {
            return Err(Error::invalid(format!(
                "phase slot {phase_slot} out of range 0..4"
            )));
        }
        let row = cg.0 * 2 * self.ce_rows + ce.0 * 2 + phase_slot / 2;
        let col = cg.1 * 2 * self.ce_cols + ce.1 * 2 + phase_slot % 2;
        Ok((row, col))
    }

    /// Inverse of [`sensor_index`](Self::sensor_index): the triple behind
    /// one sensor pixel.
    pub fn inverse_sensor_index(&self, sensor: (usize, usize)) -> Result<SensorSite> {
        if sensor.0 >= self.sensor_rows() || sensor.1 >= self.sensor_cols() {
            return Err(Error::invalid(format!(
                "sensor index {sensor:?} out of bounds for {}x{} extent",
                self.sensor_rows(),
                self.sensor_cols()
            )));
        }
        let group_h = 2 * self.ce_rows;
        let group_w = 2 * self.ce_cols;
        let (cg_r, rem_r) = (sensor.0 / group_h, sensor.0 % group_h);
        let (cg_c, rem_c) = (sensor.1 / group_w, sensor.1 % group_w);
        let (ce_r, sub_r) = (rem_r / 2, rem_r % 2);
        let (ce_c, sub_c) = (rem_c / 2, rem_c % 2);
        Ok(SensorSite {
            cg: (cg_r, cg_c),
            ce: (ce_r, ce_c),
            phase_slot: sub_r * 2 + sub_c,
        })
    }
}

/// Largest CG grid a sensor of the given extent can host with
/// `ce_rows x ce_cols` coding elements per group.
pub fn max_cg_grid(
    sensor_rows: usize,
    sensor_cols: usize,
    ce_rows: usize,
    ce_cols: usize,
) -> Result<(usize, usize)> {
    if ce_rows == 0 || ce_cols == 0 {
        return Err(Error::invalid("CE counts must be positive"));
    }
    let m = sensor_rows / (2 * ce_rows);
    let n = sensor_cols / (2 * ce_cols);
    if m == 0 || n == 0 {
        return Err(Error::invalid(format!(
            "sensor {sensor_rows}x{sensor_cols} cannot host a single {ce_rows}x{ce_cols}-CE group"
        )));
    }
    Ok((m, n))
}
