use nalgebra::DMatrix;
use num_complex::Complex64;

use super::propagator::Frame;
use super::FloquetResult;
use crate::error::{Error, Result};
use crate::model::{number_diagonal, sparse_hamiltonian, CouplingForm, DriveSpec, SystemSpec};
use crate::units::fold;

/// Largest harmonic cutoff accepted by [`sambe_spectrum`].
pub const MAX_SAMBE_CUTOFF: usize = 200;

/// Eigenvalues of the truncated extended-space (Sambe) matrix.
#[derive(Clone, Debug)]
pub struct SambeSpectrum {
    pub frequency: f64,
    pub cutoff: usize,
    /// rad/s, every block together.
    pub values: Vec<f64>,
    /// Weight of each eigenvector on the two outermost harmonics at either end.
    pub edge_weights: Vec<f64>,
}

impl SambeSpectrum {
    /// Eigenvalues whose vectors stay clear of the truncation edge, folded
    /// into the first zone.
    pub fn quasienergies(&self, edge_threshold: f64) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .values
            .iter()
            .zip(&self.edge_weights)
            .filter(|(_, &w)| w < edge_threshold)
            .map(|(&e, _)| fold(e, self.frequency))
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// Extended-space eigenproblem with harmonics |n| ≤ cutoff; the cosine drive
/// only fills the blocks one harmonic off the diagonal.
pub fn sambe_spectrum(system: &SystemSpec, drive: &DriveSpec, cutoff: usize, form: CouplingForm) -> Result<SambeSpectrum> {
    if cutoff > MAX_SAMBE_CUTOFF {
        return Err(Error::InvalidArgument(format!("Sambe cutoff {cutoff} above {MAX_SAMBE_CUTOFF}")));
    }
    let k = drive.validate(system)?;
    let h = sparse_hamiltonian(system, form)?;
    let occ = number_diagonal(system, k);
    let frame = Frame::new(&h, occ.clone(), drive.signature());
    let dense = h.dense_real();
    let harmonics = 2 * cutoff + 1;
    let w = drive.frequency;
    let half = Complex64::from_polar(0.5 * drive.amplitude, drive.phase);
    let mut values = Vec::new();
    let mut edge_weights = Vec::new();
    for b in 0..frame.n_blocks() {
        let states = frame.block_states(b);
        let d = states.len();
        let mut m = DMatrix::<Complex64>::zeros(d * harmonics, d * harmonics);
        for p in 0..harmonics {
            let n = p as f64 - cutoff as f64;
            for (r, &i) in states.iter().enumerate() {
                for (c, &j) in states.iter().enumerate() {
                    m[(p * d + r, p * d + c)] = Complex64::new(dense[(i, j)], 0.0);
                }
                m[(p * d + r, p * d + r)] += Complex64::new(n * w, 0.0);
                if p + 1 < harmonics {
                    m[(p * d + r, (p + 1) * d + r)] = half.conj() * occ[i];
                    m[((p + 1) * d + r, p * d + r)] = half * occ[i];
                }
            }
        }
        let eig = m.symmetric_eigen();
        let edge: Vec<usize> = if harmonics <= 4 {
            Vec::new()
        } else {
            vec![0, 1, harmonics - 2, harmonics - 1]
        };
        for (col, &val) in eig.eigenvalues.iter().enumerate() {
            let mut wgt = 0.0;
            for &p in &edge {
                for r in 0..d {
                    wgt += eig.eigenvectors[(p * d + r, col)].norm_sqr();
                }
            }
            values.push(val);
            edge_weights.push(wgt);
        }
    }
    Ok(SambeSpectrum {
        frequency: w,
        cutoff,
        values,
        edge_weights,
    })
}

/// Largest distance, modulo ω, from a propagator quasienergy to the nearest
/// converged extended-space eigenvalue.
pub fn sambe_agreement(result: &FloquetResult, sambe: &SambeSpectrum, edge_threshold: f64) -> Result<f64> {
    let w = result.frequency;
    let converged = sambe.quasienergies(edge_threshold);
    if converged.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no extended-space eigenvalue converged with cutoff {}",
            sambe.cutoff
        )));
    }
    Ok(result
        .quasienergies
        .iter()
        .map(|&e| converged.iter().map(|&s| fold(s - e, w).abs()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max))
}
