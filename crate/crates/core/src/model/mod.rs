//! Circuit description and truncated bosonic Hamiltonians.

mod basis;
mod config;
mod hamiltonian;
pub mod presets;
mod system;

pub use basis::{BareBasis, BareState};
pub use config::{ConfigFile, CouplingEntry, DriveEntry, ModeEntry};
pub use hamiltonian::{
    build_drive_operator, build_static_hamiltonian, number_diagonal, sparse_hamiltonian,
    sparse_hamiltonian_capped, CouplingForm, SparseHamiltonian,
};
pub use system::{
    CouplingSpec, DriveSignature, DriveSpec, Edge, ModeRole, ModeSpec, SystemSpec,
    DEFAULT_DIMENSION_CAP,
};

/// Labels of every basis state in matrix row order.
pub fn enumerate_bare_states(system: &SystemSpec) -> Vec<BareState> {
    system.basis().states()
}
