//! Exact eigenstates labeled by continuation from the uncoupled basis.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{max_weight_assignment, symmetric_eigen};
use crate::model::{sparse_hamiltonian, BareBasis, BareState, CouplingForm, SystemSpec};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrackingOptions {
    /// Uniform steps of the coupling scale from 0 to 1.
    pub steps: usize,
    /// Overlaps below this abort the tracking.
    pub floor: f64,
    /// Overlaps below this trigger step halving.
    pub refine_below: f64,
    pub max_halvings: u32,
    pub form: CouplingForm,
}

impl Default for TrackingOptions {
    fn default() -> Self {
        TrackingOptions {
            steps: 20,
            floor: 0.5,
            refine_below: 0.8,
            max_halvings: 10,
            form: CouplingForm::Full,
        }
    }
}

/// Eigenpairs indexed by the bare state they continue from.
#[derive(Clone, Debug)]
pub struct DressedSpectrum {
    basis: BareBasis,
    /// energies[k]: energy of the dressed state labeled by bare index k.
    pub energies: Vec<f64>,
    /// column k: dressed state labeled by bare index k.
    pub vectors: DMatrix<f64>,
    /// |⟨k|dressed k⟩|²
    pub bare_overlaps: Vec<f64>,
    /// smallest winning overlap met along the continuation path
    pub min_step_overlap: f64,
}

impl DressedSpectrum {
    pub fn basis(&self) -> &BareBasis {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn index(&self, state: &BareState) -> Result<usize> {
        self.basis
            .index_of(state)
            .ok_or_else(|| Error::UnknownState(state.compact()))
    }

    pub fn energy(&self, state: &BareState) -> Result<f64> {
        Ok(self.energies[self.index(state)?])
    }

    /// Energy by compact label such as `101`.
    pub fn energy_of(&self, label: &str) -> Result<f64> {
        self.energy(&BareState::parse(label)?)
    }

    pub fn complex_vectors(&self) -> DMatrix<Complex64> {
        self.vectors.map(|v| Complex64::new(v, 0.0))
    }

    /// Trivial labeling for an uncoupled system.
    pub fn bare(system: &SystemSpec) -> Self {
        let n = system.dimension();
        DressedSpectrum {
            basis: system.basis().clone(),
            energies: (0..n).map(|i| system.bare_energy_index(i)).collect(),
            vectors: DMatrix::identity(n, n),
            bare_overlaps: vec![1.0; n],
            min_step_overlap: 1.0,
        }
    }
}

struct Tracker<'a> {
    system: &'a SystemSpec,
    diag: Vec<f64>,
    coupling: DMatrix<f64>,
    opts: TrackingOptions,
    min_overlap: f64,
}

impl Tracker<'_> {
    fn eig(&self, lambda: f64) -> (Vec<f64>, DMatrix<f64>) {
        let mut h = &self.coupling * lambda;
        for (i, &d) in self.diag.iter().enumerate() {
            h[(i, i)] += d;
        }
        symmetric_eigen(&h)
    }

    /// Advances labeled vectors from `l0` to `l1`, halving on weak overlaps.
    fn step(
        &mut self,
        prev: &DMatrix<f64>,
        l0: f64,
        l1: f64,
        depth: u32,
    ) -> Result<(Vec<f64>, DMatrix<f64>)> {
        let (vals, vecs) = self.eig(l1);
        let n = vals.len();
        let ov = (prev.transpose() * &vecs).map(|x| x * x);
        let assign = max_weight_assignment(&ov);
        let worst = (0..n)
            .map(|i| (ov[(i, assign[i])], i))
            .fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a });
        if worst.0 < self.opts.refine_below && depth < self.opts.max_halvings {
            let mid = 0.5 * (l0 + l1);
            let (_, half) = self.step(prev, l0, mid, depth + 1)?;
            return self.step(&half, mid, l1, depth + 1);
        }
        if worst.0 < self.opts.floor {
            return Err(Error::TrackingAmbiguity {
                context: format!("coupling scale {l1:.6}"),
                state: self.system.basis().state(worst.1).to_string(),
                overlap: worst.0,
                floor: self.opts.floor,
            });
        }
        self.min_overlap = self.min_overlap.min(worst.0);
        let mut energies = vec![0.0; n];
        let mut out = DMatrix::zeros(n, n);
        for i in 0..n {
            let j = assign[i];
            energies[i] = vals[j];
            // keep the sign continuous with the previous vector
            let sign = if prev.column(i).dot(&vecs.column(j)) < 0.0 {
                -1.0
            } else {
                1.0
            };
            out.set_column(i, &(vecs.column(j) * sign));
        }
        Ok((energies, out))
    }
}

/// Exact spectrum of the static Hamiltonian with every eigenpair labeled by
/// the bare state it connects to as all couplings are ramped on.
pub fn exact_dressed_spectrum(system: &SystemSpec) -> Result<DressedSpectrum> {
    exact_dressed_spectrum_with(system, TrackingOptions::default())
}

pub fn exact_dressed_spectrum_with(system: &SystemSpec, opts: TrackingOptions) -> Result<DressedSpectrum> {
    if opts.steps == 0 {
        return Err(Error::InvalidArgument("tracking needs at least one step".into()));
    }
    let h = sparse_hamiltonian(system, opts.form)?;
    let n = h.dim();
    let mut tracker = Tracker {
        system,
        diag: h.diagonal.clone(),
        coupling: h.coupling_dense(),
        opts,
        min_overlap: 1.0,
    };
    let mut vecs = DMatrix::identity(n, n);
    let mut energies = h.diagonal.clone();
    if !h.upper.is_empty() {
        for k in 1..=opts.steps {
            let l0 = (k - 1) as f64 / opts.steps as f64;
            let l1 = k as f64 / opts.steps as f64;
            let (e, v) = tracker.step(&vecs, l0, l1, 0)?;
            energies = e;
            vecs = v;
        }
    }
    let bare_overlaps = (0..n).map(|k| vecs[(k, k)] * vecs[(k, k)]).collect();
    Ok(DressedSpectrum {
        basis: system.basis().clone(),
        energies,
        vectors: vecs,
        bare_overlaps,
        min_step_overlap: tracker.min_overlap,
    })
}
