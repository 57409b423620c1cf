//! Floquet sideband analysis for parametrically modulated superconducting
//! circuits: Hamiltonian assembly, static spectra, sideband catalogs,
//! quasienergy spectra, time-domain dynamics, population-error budgets and
//! constraint-based frequency allocation.

pub mod allocator;
pub mod dynamics;
pub mod error;
pub mod errors;
pub mod floquet;
pub mod integrate;
pub mod linalg;
pub mod model;
pub mod sidebands;
pub mod special;
pub mod statics;
pub mod units;

pub use error::{Error, Result};
