//! Simulator and codec for a camera that measures the pixel-wise
//! temporal Fourier spectrum of a dynamic scene in a single coded
//! exposure.
//!
//! The sensor plane is tiled into coding groups, one per scene pixel;
//! each group spends a 2x2 block of pixels per acquired frequency, the
//! four pixels coding sinusoids of that frequency at phases 0, pi/2, pi
//! and 3pi/2. One long exposure integrates the modulated scene, and the
//! four phase-shifted detections of each block combine into one complex
//! Fourier coefficient of that pixel's temporal waveform. From the
//! coefficients the pipeline reconstructs video by inverse transform,
//! isolates frequency-selected objects, subtracts static backgrounds, or
//! recovers per-pixel event times from coefficient phase.
//!
//! Modules follow the pipeline:
//!
//! - [`geometry`]: the coding mosaic and its sensor index maps
//! - [`kernels`]: temporal filter kernels (which frequencies to acquire)
//! - [`synth`]: deterministic synthetic test scenes
//! - [`forward`]: the virtual camera (coded integration, PWM, noise)
//! - [`decode`]: phase-shifting demodulation and video reconstruction
//! - [`tracking`]: detection and time-of-passage recovery from phase
//! - [`analysis`]: closed-form comparisons and quality metrics
//! - [`io`]: binary file formats and image/CSV exports

pub use ndarray;

pub mod analysis;
pub mod decode;
pub mod error;
pub mod forward;
pub mod geometry;
pub mod io;
pub mod kernels;
pub mod synth;
pub mod tracking;
pub mod video;

pub use decode::{
    assemble_symmetric, decode_spectrum, extract_coefficient, reconstruct_video,
    reconstruction_grid, ReconstructionGrid, TemporalSpectrum,
};
pub use error::{Error, Result};
pub use forward::{
    encode_exposure, quantize_pwm, sampling_vector, CodedExposure, NoiseConfig, SpatialMode,
};
pub use geometry::{max_cg_grid, CodingLayout, SensorSite, PHASE_ORDER};
pub use kernels::{
    extraction_kernel, make_background_subtract_kernel, make_compression_kernel,
    make_periodic_kernel, make_tracking_kernel, validate_kernel, KernelIssue, KernelKind,
    KernelSpec, ValidationReport,
};
pub use tracking::{
    detect, extract_trajectory, phase_to_time, tracking_temporal_resolution, TrackPoint,
    Trajectory, DEFAULT_DETECTION_THRESHOLD,
};
pub use video::VideoCube;
