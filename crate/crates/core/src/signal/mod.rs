//! Pulse shapes and dense-grid waveform primitives.

mod dense;
mod pulse;

pub use dense::{
    calibrate_noise, convolve_filter, shape_on_grid, shape_symbols, sinc2_reconstruct, sinc2_resample_baud,
    DenseSignal, NoiseLevels,
};
pub use pulse::{rc_pulse, rrc_pulse, sinc, sinc_kernel, PulseConfig, PulseShape, SincWindow};
