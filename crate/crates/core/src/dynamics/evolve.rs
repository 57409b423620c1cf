use std::collections::BTreeMap;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::floquet::Frame;
use crate::integrate::Tolerance;
use crate::model::{BareState, CouplingForm, DriveSpec, SystemSpec};
use crate::statics::DressedSpectrum;

/// Norm drift that aborts an integration.
pub const NORM_DRIFT_LIMIT: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolveOptions {
    pub tol: Tolerance,
    pub form: CouplingForm,
    /// Keep the full state at every sample.
    pub keep_states: bool,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            tol: Tolerance::default(),
            form: CouplingForm::Full,
            keep_states: false,
        }
    }
}

/// A state whose population is recorded along a trajectory.
#[derive(Clone, Debug)]
pub struct TrackedState {
    pub label: String,
    pub vector: DVector<Complex64>,
}

impl TrackedState {
    pub fn bare(system: &SystemSpec, label: &str) -> Result<Self> {
        let k = system.parse_state(label)?;
        let mut v = DVector::zeros(system.dimension());
        v[k] = Complex64::new(1.0, 0.0);
        Ok(TrackedState { label: label.to_string(), vector: v })
    }

    pub fn dressed(spectrum: &DressedSpectrum, label: &str) -> Result<Self> {
        let k = spectrum.index(&BareState::parse(label)?)?;
        let v = spectrum.vectors.column(k).map(|x| Complex64::new(x, 0.0));
        Ok(TrackedState { label: label.to_string(), vector: v })
    }
}

/// Normalized superposition of the given dressed (or bare) states with equal weights.
pub fn equal_superposition(states: &[TrackedState]) -> Result<DVector<Complex64>> {
    let first = states
        .first()
        .ok_or_else(|| Error::InvalidArgument("superposition of no states".into()))?;
    let mut v = DVector::zeros(first.vector.len());
    for s in states {
        v += &s.vector;
    }
    let n = v.norm();
    Ok(v / Complex64::new(n, 0.0))
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    /// s, uniform: t_k = k · duration / n_samples
    pub times: Vec<f64>,
    #[serde(skip)]
    pub states: Option<Vec<DVector<Complex64>>>,
    pub populations: BTreeMap<String, Vec<f64>>,
    /// max_k |‖ψ(t_k)‖ − 1|
    pub max_norm_drift: f64,
    pub steps: usize,
}

impl Trajectory {
    pub fn population(&self, label: &str) -> Result<&[f64]> {
        self.populations
            .get(label)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::UnknownState(label.to_string()))
    }

    pub fn sample_interval(&self) -> f64 {
        if self.times.len() > 1 {
            self.times[1] - self.times[0]
        } else {
            0.0
        }
    }
}

/// Integrates i dψ/dt = H(t)ψ from ψ(0) = `psi0` and samples it at
/// `n_samples` uniform times starting at t = 0.
pub fn evolve(
    system: &SystemSpec,
    drive: &DriveSpec,
    psi0: &DVector<Complex64>,
    duration: f64,
    n_samples: usize,
    tracked: &[TrackedState],
    opts: &EvolveOptions,
) -> Result<Trajectory> {
    let n = system.dimension();
    if psi0.len() != n {
        return Err(Error::InvalidArgument(format!("initial state has {} entries, system {n}", psi0.len())));
    }
    if (psi0.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidArgument("initial state must be normalized".into()));
    }
    if !(duration > 0.0) || n_samples == 0 {
        return Err(Error::InvalidArgument("duration and sample count must be positive".into()));
    }
    for t in tracked {
        if t.vector.len() != n {
            return Err(Error::InvalidArgument(format!("tracked state {} has wrong dimension", t.label)));
        }
    }
    let frame = Frame::from_system(system, drive, opts.form)?;
    let dt = duration / n_samples as f64;
    let times: Vec<f64> = (0..n_samples).map(|k| k as f64 * dt).collect();
    let mut norms = vec![0.0; n_samples];
    let mut amps = vec![vec![Complex64::new(0.0, 0.0); n_samples]; tracked.len()];
    let mut states = opts
        .keep_states
        .then(|| vec![DVector::<Complex64>::zeros(n); n_samples]);
    let mut steps = 0;
    for b in 0..frame.n_blocks() {
        let idx = frame.block_states(b).to_vec();
        let mut y: Vec<Complex64> = idx.iter().map(|&i| psi0[i]).collect();
        if y.iter().all(|c| c.norm_sqr() == 0.0) {
            continue;
        }
        let conj: Vec<Vec<Complex64>> = tracked
            .iter()
            .map(|t| idx.iter().map(|&i| t.vector[i].conj()).collect())
            .collect();
        let mut lab = vec![Complex64::new(0.0, 0.0); idx.len()];
        steps += frame.integrate_block(b, &mut y, &times, opts.tol, |k, y| {
            let t = times[k];
            let mut norm = 0.0;
            for (r, &i) in idx.iter().enumerate() {
                lab[r] = y[r] * Complex64::from_polar(1.0, -frame.phase(i, t));
                norm += lab[r].norm_sqr();
            }
            norms[k] += norm;
            for (a, c) in amps.iter_mut().zip(&conj) {
                let mut acc = Complex64::new(0.0, 0.0);
                for (r, v) in c.iter().enumerate() {
                    acc += v * lab[r];
                }
                a[k] += acc;
            }
            if let Some(st) = states.as_mut() {
                for (r, &i) in idx.iter().enumerate() {
                    st[k][i] = lab[r];
                }
            }
            Ok(())
        })?;
    }
    let mut max_drift = 0.0f64;
    for (k, &nsq) in norms.iter().enumerate() {
        let drift = (nsq.sqrt() - 1.0).abs();
        if drift > NORM_DRIFT_LIMIT {
            return Err(Error::NormDrift { drift, t: times[k] });
        }
        max_drift = max_drift.max(drift);
    }
    let populations = tracked
        .iter()
        .zip(amps)
        .map(|(t, a)| (t.label.clone(), a.iter().map(|c| c.norm_sqr()).collect()))
        .collect();
    Ok(Trajectory {
        times,
        states,
        populations,
        max_norm_drift: max_drift,
        steps,
    })
}
