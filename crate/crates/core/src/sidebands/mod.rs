//! Catalogue of parametric transitions and their analytic sideband strengths.

mod catalog;
mod strength;

pub use catalog::{
    catalog, catalog_qcq, catalog_qq, find_transition, resonance_frequency, CatalogOptions, Channel,
    DetuningSource, Rotating, TransitionEntry,
};
pub use strength::{
    coupler_mod_strength, default_taylor_order, harmonic_from_taylor, qubit_mod_strength,
    stark_shifted_detuning, Derivatives,
};
