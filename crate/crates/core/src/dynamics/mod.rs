//! Time-domain integration of the driven Schrödinger equation, generalized
//! Rabi fits and Fourier analysis of population micromotion.

mod evolve;
mod micromotion;
mod rabi;

pub use evolve::{equal_superposition, evolve, EvolveOptions, TrackedState, Trajectory, NORM_DRIFT_LIMIT};
pub use micromotion::{
    check_aliasing, compare_peaks, micromotion_spectrum, sideband_lines, AmplitudeSpectrum, MicromotionOptions,
    MicromotionReport, Peak, PeakMatch, SidebandLine,
};
pub use rabi::{fit_generalized_rabi, RabiFit, RabiFitOptions};
