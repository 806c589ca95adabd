//! Scene videos as dense intensity grids.

use crate::error::{Error, Result};
use ndarray::{Array3, ArrayView1, ArrayView2, Axis};

/// A video as a `frames x rows x cols` grid of intensities.
///
/// Scene cubes (everything the generators in [`crate::synth`] produce)
/// hold values in [0, 1]. Reconstructions of kernels without a DC bin are
/// mean-free and therefore signed; they are built with
/// [`VideoCube::signed`] and carry values outside [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct VideoCube {
    data: Array3<f64>,
    frame_rate_hz: f64,
}

impl VideoCube {
    /// Builds a scene cube, requiring every intensity in [0, 1].
    /// Round-off dust within 1e-12 of the bounds is folded back in;
    /// anything further out is rejected.
    pub fn new(mut data: Array3<f64>, frame_rate_hz: f64) -> Result<Self> {
        const SLACK: f64 = 1e-12;
        if data.iter().any(|&v| !(-SLACK..=1.0 + SLACK).contains(&v)) {
            return Err(Error::invalid("scene intensities must lie in [0, 1]"));
        }
        data.mapv_inplace(|v| v.clamp(0.0, 1.0));
        Self::signed(data, frame_rate_hz)
    }

    /// Builds a cube that may hold signed values (mean-free
    /// reconstructions). Only finiteness and the frame rate are checked.
    pub fn signed(data: Array3<f64>, frame_rate_hz: f64) -> Result<Self> {
        if !frame_rate_hz.is_finite() || frame_rate_hz <= 0.0 {
            return Err(Error::invalid(format!(
                "frame rate must be positive, got {frame_rate_hz}"
            )));
        }
        if data.shape().contains(&0) {
            return Err(Error::invalid("video dimensions must be positive"));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("video intensities must be finite"));
        }
        Ok(Self {
            data,
            frame_rate_hz,
        })
    }

    pub fn frames(&self) -> usize {
        self.data.shape()[0]
    }

    pub fn rows(&self) -> usize {
        self.data.shape()[1]
    }

    pub fn cols(&self) -> usize {
        self.data.shape()[2]
    }

    pub fn frame_rate_hz(&self) -> f64 {
        self.frame_rate_hz
    }

    /// Time step between frames.
    pub fn dt_s(&self) -> f64 {
        1.0 / self.frame_rate_hz
    }

    pub fn duration_s(&self) -> f64 {
        self.frames() as f64 / self.frame_rate_hz
    }

    pub fn data(&self) -> &Array3<f64> {
        &self.data
    }

    pub fn frame(&self, index: usize) -> ArrayView2<'_, f64> {
        self.data.index_axis(Axis(0), index)
    }

    /// The temporal vector of one pixel: its intensity across frames.
    pub fn pixel_series(&self, row: usize, col: usize) -> ArrayView1<'_, f64> {
        self.data.slice(ndarray::s![.., row, col])
    }

    /// Places `self` and `right` side by side. Frame counts, rates and
    /// row counts must match.
    pub fn hstack(&self, right: &VideoCube) -> Result<VideoCube> {
        if self.frames() != right.frames()
            || self.rows() != right.rows()
            || self.frame_rate_hz != right.frame_rate_hz
        {
            return Err(Error::invalid(
                "hstack needs matching frame counts, rows and frame rates",
            ));
        }
        let data = ndarray::concatenate(Axis(2), &[self.data.view(), right.data.view()])
            .expect("shapes validated");
        VideoCube::signed(data, self.frame_rate_hz)
    }

    /// Weighted sum of cubes of identical shape and rate. The caller owns
    /// keeping the result in range; the sum is validated as a scene cube.
    pub fn blend(layers: &[(f64, &VideoCube)]) -> Result<VideoCube> {
        let (_, first) = layers
            .first()
            .ok_or_else(|| Error::invalid("blend needs at least one layer"))?;
        let mut acc = Array3::<f64>::zeros(first.data.raw_dim());
        for (weight, cube) in layers {
            if cube.data.raw_dim() != first.data.raw_dim()
                || cube.frame_rate_hz != first.frame_rate_hz
            {
                return Err(Error::invalid("blend layers must share shape and rate"));
            }
            acc.scaled_add(*weight, &cube.data);
        }
        VideoCube::new(acc, first.frame_rate_hz)
    }
}
