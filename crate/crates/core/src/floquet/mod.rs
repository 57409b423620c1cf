//! Quasienergy spectra of periodically modulated circuits.
//!
//! The one-period propagator is integrated in the frame of the diagonal
//! (bare plus drive) part of the Hamiltonian, block by block. Floquet modes
//! are labeled by overlap with the static dressed states or with a previous
//! sweep point.

mod angles;
mod anticrossing;
mod propagator;
mod sambe;
mod spectrum;
mod zz;

pub use angles::{
    collision_angle, max_collision_angle_landscape, sampled_floquet, AmplitudeRule, CollisionRecord, Landscape,
    LandscapePoint, PairAngles, SampledFloquet,
};
pub use anticrossing::{find_anticrossing, find_anticrossing_in_frequency, AnticrossingOptions, SplittingScan};
pub use propagator::{
    one_period_propagator, one_period_propagator_from_parts, Propagator, PropagatorOptions, UNITARITY_LIMIT,
};
pub use sambe::{sambe_agreement, sambe_spectrum, SambeSpectrum, MAX_SAMBE_CUTOFF};
pub use spectrum::{floquet_spectrum, quasienergy_from_eigenvalue, FloquetResult, Reference, DEFAULT_FLOQUET_FLOOR};
pub use zz::{dynamic_zz, dynamic_zz_ramp, ZzRamp};

pub(crate) use propagator::Frame;

use crate::error::Result;
use crate::model::{DriveSpec, SystemSpec};
use crate::statics::{exact_dressed_spectrum_with, DressedSpectrum, TrackingOptions};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FloquetOptions {
    pub propagator: PropagatorOptions,
    /// Overlap floor for labeling Floquet modes.
    pub floor: f64,
    /// Continuation settings for the static reference states.
    pub tracking: TrackingOptions,
}

impl Default for FloquetOptions {
    fn default() -> Self {
        FloquetOptions {
            propagator: PropagatorOptions::default(),
            floor: DEFAULT_FLOQUET_FLOOR,
            tracking: TrackingOptions::default(),
        }
    }
}

pub(crate) fn dressed_reference(system: &SystemSpec, opts: &FloquetOptions) -> Result<DressedSpectrum> {
    let tracking = TrackingOptions {
        form: opts.propagator.form,
        ..opts.tracking
    };
    exact_dressed_spectrum_with(system, tracking)
}

/// Propagator, diagonalization and labeling against the static dressed states.
pub fn floquet(system: &SystemSpec, drive: &DriveSpec, opts: &FloquetOptions) -> Result<FloquetResult> {
    let reference = dressed_reference(system, opts)?;
    floquet_with_reference(system, drive, Reference::Dressed(&reference), opts)
}

pub fn floquet_with_reference(
    system: &SystemSpec,
    drive: &DriveSpec,
    reference: Reference<'_>,
    opts: &FloquetOptions,
) -> Result<FloquetResult> {
    let prop = one_period_propagator(system, drive, &opts.propagator)?;
    spectrum::floquet_spectrum_with_drive(&prop, reference, opts.floor, Some(drive))
}
