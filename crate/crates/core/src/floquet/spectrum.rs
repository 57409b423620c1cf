use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::propagator::Propagator;
use crate::error::{Error, Result};
use crate::linalg::{max_weight_assignment, unitary_eigen};
use crate::model::{BareBasis, BareState, DriveSpec};
use crate::statics::DressedSpectrum;
use crate::units::fold;

/// Default overlap floor for Floquet labeling. Near an exact resonance the
/// two partners share weight about equally, so this sits well below 1/2.
pub const DEFAULT_FLOQUET_FLOOR: f64 = 0.25;

/// What the Floquet modes are matched against.
#[derive(Clone, Copy, Debug)]
pub enum Reference<'a> {
    Dressed(&'a DressedSpectrum),
    Previous(&'a FloquetResult),
}

/// Quasienergies and Floquet modes at t = 0, branch k labeled by bare state k.
#[derive(Clone, Debug)]
pub struct FloquetResult {
    basis: BareBasis,
    pub frequency: f64,
    /// rad/s in [−ω/2, ω/2)
    pub quasienergies: Vec<f64>,
    /// Column k: eigenvector of U(T, 0) continuing bare state k.
    pub modes_t0: DMatrix<Complex64>,
    /// Winning overlap of each branch against the reference.
    pub overlaps: Vec<f64>,
    pub drive: Option<DriveSpec>,
    pub unitarity_error: f64,
}

impl FloquetResult {
    pub fn basis(&self) -> &BareBasis {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.quasienergies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quasienergies.is_empty()
    }

    pub fn branch(&self, state: &BareState) -> Result<usize> {
        self.basis
            .index_of(state)
            .ok_or_else(|| Error::UnknownState(state.compact()))
    }

    pub fn branch_of(&self, label: &str) -> Result<usize> {
        self.branch(&BareState::parse(label)?)
    }

    pub fn quasienergy(&self, label: &str) -> Result<f64> {
        Ok(self.quasienergies[self.branch_of(label)?])
    }

    /// Bare label → branch index.
    pub fn labels(&self) -> BTreeMap<String, usize> {
        (0..self.len()).map(|k| (self.basis.state(k).compact(), k)).collect()
    }

    /// |ε_a − ε_b| folded into [0, ω/2].
    pub fn splitting(&self, a: &BareState, b: &BareState) -> Result<f64> {
        let (ia, ib) = (self.branch(a)?, self.branch(b)?);
        Ok(fold(self.quasienergies[ia] - self.quasienergies[ib], self.frequency).abs())
    }

    pub fn smallest_overlap(&self) -> f64 {
        self.overlaps.iter().copied().fold(1.0, f64::min)
    }
}

/// −arg(λ)/T folded into the first zone.
pub fn quasienergy_from_eigenvalue(lambda: Complex64, period: f64) -> f64 {
    let w = std::f64::consts::TAU / period;
    fold(-lambda.arg() / period, w)
}

/// Diagonalizes U(T, 0) block by block and labels every branch by the
/// globally optimal overlap assignment against `reference`.
pub fn floquet_spectrum(prop: &Propagator, reference: Reference<'_>, floor: f64) -> Result<FloquetResult> {
    floquet_spectrum_with_drive(prop, reference, floor, None)
}

pub(crate) fn floquet_spectrum_with_drive(
    prop: &Propagator,
    reference: Reference<'_>,
    floor: f64,
    drive: Option<&DriveSpec>,
) -> Result<FloquetResult> {
    let n = prop.dim;
    let basis = match reference {
        Reference::Dressed(d) => d.basis().clone(),
        Reference::Previous(p) => p.basis().clone(),
    };
    if basis.len() != n {
        return Err(Error::InvalidArgument(format!(
            "reference has {} states, propagator {}",
            basis.len(),
            n
        )));
    }
    let mut quasienergies = vec![0.0; n];
    let mut overlaps = vec![0.0; n];
    let mut modes = DMatrix::zeros(n, n);
    for (states, u) in prop.blocks.iter().zip(&prop.matrices) {
        let d = states.len();
        let (values, vectors) = unitary_eigen(u);
        // weight[(reference k, eigenvector α)]
        let weight = DMatrix::from_fn(d, d, |a, alpha| {
            let k = states[a];
            let mut acc = Complex64::new(0.0, 0.0);
            for (r, &i) in states.iter().enumerate() {
                let refv = match reference {
                    Reference::Dressed(ds) => Complex64::new(ds.vectors[(i, k)], 0.0),
                    Reference::Previous(p) => p.modes_t0[(i, k)],
                };
                acc += refv.conj() * vectors[(r, alpha)];
            }
            acc.norm_sqr()
        });
        let assign = max_weight_assignment(&weight);
        for (a, &alpha) in assign.iter().enumerate() {
            let k = states[a];
            let w = weight[(a, alpha)];
            if w < floor {
                return Err(Error::TrackingAmbiguity {
                    context: format!("Floquet labeling at ω/2π = {:.6} MHz", crate::units::to_mhz(prop.frequency)),
                    state: basis.state(k).to_string(),
                    overlap: w,
                    floor,
                });
            }
            overlaps[k] = w;
            quasienergies[k] = quasienergy_from_eigenvalue(values[alpha], prop.period);
            // phase convention: largest component on the reference state real positive
            let pivot = vectors[(a, alpha)];
            let phase = if pivot.norm() > 1e-300 { pivot.conj() / pivot.norm() } else { Complex64::new(1.0, 0.0) };
            for (r, &i) in states.iter().enumerate() {
                modes[(i, k)] = vectors[(r, alpha)] * phase;
            }
        }
    }
    Ok(FloquetResult {
        basis,
        frequency: prop.frequency,
        quasienergies,
        modes_t0: modes,
        overlaps,
        drive: drive.cloned(),
        unitarity_error: prop.unitarity_error,
    })
}
