use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::integrate::{Dop853, Tolerance};
use crate::model::{number_diagonal, sparse_hamiltonian, CouplingForm, DriveSignature, DriveSpec, SparseHamiltonian, SystemSpec};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Largest tolerated ‖U†U − I‖_max.
pub const UNITARITY_LIMIT: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropagatorOptions {
    pub tol: Tolerance,
    pub form: CouplingForm,
    /// Use U(T) = U(T/2)ᵀ U(T/2) when the drive is even in time.
    pub use_symmetry: bool,
}

impl Default for PropagatorOptions {
    fn default() -> Self {
        PropagatorOptions {
            tol: Tolerance::default(),
            form: CouplingForm::Full,
            use_symmetry: true,
        }
    }
}

struct Block {
    states: Vec<usize>,
    /// (local row, local col, value), row < col
    entries: Vec<(usize, usize, f64)>,
}

/// H(t) = diag(E) + V + s(t) diag(A) split into blocks that V never connects.
/// Integration runs in the frame of the diagonal part, where only V remains.
pub(crate) struct Frame {
    energies: Vec<f64>,
    drive: Vec<f64>,
    signature: DriveSignature,
    blocks: Vec<Block>,
}

impl Frame {
    pub(crate) fn new(h: &SparseHamiltonian, drive: Vec<f64>, signature: DriveSignature) -> Self {
        let n = h.dim();
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for &(i, j, v) in &h.upper {
            if v != 0.0 {
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
        let mut block_of = vec![usize::MAX; n];
        let mut local = vec![0usize; n];
        let mut blocks: Vec<Block> = Vec::new();
        for i in 0..n {
            let r = root(&mut parent, i);
            if block_of[r] == usize::MAX {
                block_of[r] = blocks.len();
                blocks.push(Block { states: Vec::new(), entries: Vec::new() });
            }
            let b = block_of[r];
            block_of[i] = b;
            local[i] = blocks[b].states.len();
            blocks[b].states.push(i);
        }
        for &(i, j, v) in &h.upper {
            if v != 0.0 {
                blocks[block_of[i]].entries.push((local[i], local[j], v));
            }
        }
        Frame { energies: h.diagonal.clone(), drive, signature, blocks }
    }

    pub(crate) fn from_system(system: &SystemSpec, drive: &DriveSpec, form: CouplingForm) -> Result<Self> {
        let k = drive.validate(system)?;
        let h = sparse_hamiltonian(system, form)?;
        Ok(Frame::new(&h, number_diagonal(system, k), drive.signature()))
    }

    pub(crate) fn dim(&self) -> usize {
        self.energies.len()
    }

    pub(crate) fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub(crate) fn block_states(&self, b: usize) -> &[usize] {
        &self.blocks[b].states
    }

    /// θ_k(t) = E_k t + A_k ∫₀ᵗ s
    pub(crate) fn phase(&self, k: usize, t: f64) -> f64 {
        self.energies[k] * t + self.drive[k] * self.signature.integral(t)
    }

    /// i dy/dt = V_I(t) y for `ncols` stacked columns of one block.
    fn rhs(&self, b: usize, t: f64, y: &[Complex64], dy: &mut [Complex64], phases: &mut Vec<Complex64>) {
        let block = &self.blocks[b];
        let d = block.states.len();
        let s = self.signature.integral(t);
        let e0 = self.energies[block.states[0]];
        phases.clear();
        for &k in &block.states {
            let th = (self.energies[k] - e0) * t + self.drive[k] * s;
            phases.push(Complex64::from_polar(1.0, th));
        }
        dy.fill(ZERO);
        let ncols = y.len() / d;
        for &(i, j, v) in &block.entries {
            let w = phases[i] * phases[j].conj() * v;
            let mw = -I * w;
            let mwc = -I * w.conj();
            for c in 0..ncols {
                let o = c * d;
                dy[o + i] += mw * y[o + j];
                dy[o + j] += mwc * y[o + i];
            }
        }
    }

    /// Interaction-frame evolution of `y` (ncols stacked block columns) from
    /// 0 through each time in `times`, calling `visit` after each one.
    pub(crate) fn integrate_block<F>(
        &self,
        b: usize,
        y: &mut [Complex64],
        times: &[f64],
        tol: Tolerance,
        mut visit: F,
    ) -> Result<usize>
    where
        F: FnMut(usize, &[Complex64]) -> Result<()>,
    {
        let block = &self.blocks[b];
        if block.entries.is_empty() {
            for (k, _) in times.iter().enumerate() {
                visit(k, y)?;
            }
            return Ok(0);
        }
        let mut phases = Vec::with_capacity(block.states.len());
        let mut f = |t: f64, y: &[Complex64], dy: &mut [Complex64]| self.rhs(b, t, y, dy, &mut phases);
        let mut stepper = Dop853::new(y.len(), tol);
        let mut t = 0.0;
        for (k, &te) in times.iter().enumerate() {
            stepper.advance(&mut f, &mut t, y, te)?;
            visit(k, y)?;
        }
        Ok(stepper.steps)
    }

    /// Lab-frame block propagators U_b(t, 0) at each requested time.
    pub(crate) fn block_propagators(&self, b: usize, times: &[f64], tol: Tolerance) -> Result<(Vec<DMatrix<Complex64>>, usize)> {
        let states = &self.blocks[b].states;
        let d = states.len();
        let mut y = vec![ZERO; d * d];
        for i in 0..d {
            y[i * d + i] = Complex64::new(1.0, 0.0);
        }
        let mut out = Vec::with_capacity(times.len());
        let steps = self.integrate_block(b, &mut y, times, tol, |k, y| {
            let t = times[k];
            let rot: Vec<Complex64> = states.iter().map(|&s| Complex64::from_polar(1.0, -self.phase(s, t))).collect();
            out.push(DMatrix::from_fn(d, d, |i, j| rot[i] * y[j * d + i]));
            Ok(())
        })?;
        Ok((out, steps))
    }
}

/// One-period propagator stored block by block.
#[derive(Clone, Debug)]
pub struct Propagator {
    pub period: f64,
    pub frequency: f64,
    pub dim: usize,
    /// Basis indices of each block.
    pub blocks: Vec<Vec<usize>>,
    /// U(T, 0) restricted to each block.
    pub matrices: Vec<DMatrix<Complex64>>,
    /// ‖U†U − I‖_max
    pub unitarity_error: f64,
    /// Accepted integrator steps summed over blocks.
    pub steps: usize,
}

impl Propagator {
    /// Full U(T, 0).
    pub fn dense(&self) -> DMatrix<Complex64> {
        let mut u = DMatrix::zeros(self.dim, self.dim);
        for (states, m) in self.blocks.iter().zip(&self.matrices) {
            for (a, &i) in states.iter().enumerate() {
                for (b, &j) in states.iter().enumerate() {
                    u[(i, j)] = m[(a, b)];
                }
            }
        }
        u
    }
}

fn unitarity(m: &DMatrix<Complex64>) -> f64 {
    crate::linalg::orthonormality_error(m)
}

pub(crate) fn time_symmetric(sig: &DriveSignature) -> bool {
    sig.phase.sin().abs() < 1e-14
}

/// U(T, 0) for H(t) = H_static + ε cos(ωt + φ) n̂_target.
pub fn one_period_propagator(system: &SystemSpec, drive: &DriveSpec, opts: &PropagatorOptions) -> Result<Propagator> {
    let frame = Frame::from_system(system, drive, opts.form)?;
    propagator_from_frame(&frame, opts)
}

/// Same as [`one_period_propagator`] from an assembled static Hamiltonian and
/// the diagonal of the driven operator.
pub fn one_period_propagator_from_parts(
    h: &SparseHamiltonian,
    drive_diagonal: &[f64],
    signature: DriveSignature,
    opts: &PropagatorOptions,
) -> Result<Propagator> {
    if drive_diagonal.len() != h.dim() {
        return Err(Error::InvalidArgument("drive operator dimension mismatch".into()));
    }
    if !(signature.frequency > 0.0) {
        return Err(Error::InvalidArgument("drive frequency must be positive".into()));
    }
    let frame = Frame::new(h, drive_diagonal.to_vec(), signature);
    propagator_from_frame(&frame, opts)
}

pub(crate) fn propagator_from_frame(frame: &Frame, opts: &PropagatorOptions) -> Result<Propagator> {
    let w = frame.signature.frequency;
    let period = std::f64::consts::TAU / w;
    let symmetric = opts.use_symmetry && time_symmetric(&frame.signature);
    let mut blocks = Vec::with_capacity(frame.n_blocks());
    let mut matrices = Vec::with_capacity(frame.n_blocks());
    let mut worst = 0.0f64;
    let mut steps = 0;
    for b in 0..frame.n_blocks() {
        let u = if symmetric {
            let (mut half, s) = frame.block_propagators(b, &[0.5 * period], opts.tol)?;
            steps += s;
            let m = half.pop().expect("one sample");
            m.transpose() * m
        } else {
            let (mut full, s) = frame.block_propagators(b, &[period], opts.tol)?;
            steps += s;
            full.pop().expect("one sample")
        };
        worst = worst.max(unitarity(&u));
        blocks.push(frame.block_states(b).to_vec());
        matrices.push(u);
    }
    if worst > UNITARITY_LIMIT {
        return Err(Error::NonUnitary { deviation: worst });
    }
    Ok(Propagator {
        period,
        frequency: w,
        dim: frame.dim(),
        blocks,
        matrices,
        unitarity_error: worst,
        steps,
    })
}

/// Block propagators U(t_k, 0) at t_k = kT/M, k = 0..M, plus U(T, 0).
pub(crate) struct SampledPropagator {
    /// per block: M + 1 matrices
    pub matrices: Vec<Vec<DMatrix<Complex64>>>,
}

pub(crate) fn sampled_propagator(frame: &Frame, samples: usize, opts: &PropagatorOptions) -> Result<SampledPropagator> {
    if samples < 2 || samples % 2 != 0 {
        return Err(Error::InvalidArgument("samples per period must be even and ≥ 2".into()));
    }
    let period = std::f64::consts::TAU / frame.signature.frequency;
    let symmetric = opts.use_symmetry && time_symmetric(&frame.signature);
    let mut matrices = Vec::with_capacity(frame.n_blocks());
    for b in 0..frame.n_blocks() {
        let d = frame.block_states(b).len();
        let last = if symmetric { samples / 2 } else { samples };
        let times: Vec<f64> = (1..=last).map(|k| k as f64 * period / samples as f64).collect();
        let (mut us, _) = frame.block_propagators(b, &times, opts.tol)?;
        us.insert(0, DMatrix::identity(d, d));
        if symmetric {
            // U(t) = conj(U(T − t)) U(T)
            let half = us[samples / 2].clone();
            let full = half.transpose() * &half;
            for k in samples / 2 + 1..=samples {
                let m = us[samples - k].conjugate() * &full;
                us.push(m);
            }
        }
        matrices.push(us);
    }
    Ok(SampledPropagator { matrices })
}
