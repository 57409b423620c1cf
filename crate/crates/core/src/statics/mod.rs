//! Spectra of the undriven circuit.

mod closed_form;
mod dressed;
mod perturbative;
mod sw;
mod zz;

pub use closed_form::{closed_form_terms, closed_form_zz, two_mode_zz, QcqParams};
pub use dressed::{exact_dressed_spectrum, exact_dressed_spectrum_with, DressedSpectrum, TrackingOptions};
pub use perturbative::{degeneracy_tolerance, perturbative_energy, perturbative_terms, PerturbativeTerms};
pub use sw::{
    dressed_qubit_function, effective_coupling_function, sw_effective_params, EffectiveCoupling,
    EffectiveQQParams, PoleSum, Triple,
};
pub use zz::{computational_states, static_zz, static_zz_exact_with, static_zz_pair, zz_states, ZzMethod};
