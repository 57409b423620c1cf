use num_complex::Complex64;
use serde::Serialize;

use super::propagator::{sampled_propagator, Frame};
use super::spectrum::{floquet_spectrum_with_drive, FloquetResult, Reference};
use super::{dressed_reference, FloquetOptions};
use crate::error::{Error, Result};
use crate::model::{number_diagonal, BareState, DriveSpec, SystemSpec};
use crate::sidebands::TransitionEntry;

/// θ = arctan|2g/Δ|, π/2 on resonance.
pub fn collision_angle(gap: f64, detuning: f64) -> Result<f64> {
    if gap == 0.0 && detuning == 0.0 {
        return Err(Error::InvalidArgument("collision angle undefined for 2g = Δ = 0".into()));
    }
    if detuning == 0.0 {
        return Ok(std::f64::consts::FRAC_PI_2);
    }
    Ok((gap / detuning).abs().atan())
}

/// An anticrossing between two labeled quasienergy branches.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollisionRecord {
    pub bra: BareState,
    pub ket: BareState,
    /// Minimum splitting 2g, rad/s.
    pub gap: f64,
    /// Detuning Δ at the recorded point, rad/s.
    pub detuning: f64,
    pub angle: f64,
    /// Drive frequency (or knob value) at the record, rad/s.
    pub frequency: f64,
}

impl CollisionRecord {
    /// Detuning implied by a splitting away from the minimum, signed by the
    /// side of the resonance (`above` = knob larger than at the minimum).
    pub fn detuning_for(&self, splitting: f64, above: bool) -> f64 {
        let d = (splitting * splitting - self.gap * self.gap).max(0.0).sqrt();
        if above {
            d
        } else {
            -d
        }
    }

    /// Record moved to another point on the same pair of branches.
    pub fn at(&self, knob: f64, splitting: f64) -> CollisionRecord {
        let detuning = self.detuning_for(splitting, knob >= self.frequency);
        let angle = collision_angle(self.gap, detuning).unwrap_or(std::f64::consts::FRAC_PI_2);
        CollisionRecord {
            detuning,
            angle,
            frequency: knob,
            ..self.clone()
        }
    }
}

/// Mixing angle per drive harmonic for one pair of branches.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairAngles {
    pub bra: BareState,
    pub ket: BareState,
    /// (n, θ_n) for |n| below the sampling Nyquist index.
    pub harmonics: Vec<(i32, f64)>,
}

impl PairAngles {
    /// Largest θ_n and its harmonic.
    pub fn max(&self) -> (i32, f64) {
        self.harmonics
            .iter()
            .copied()
            .fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a })
    }

    pub fn at(&self, n: i32) -> Option<f64> {
        self.harmonics.iter().find(|h| h.0 == n).map(|h| h.1)
    }

    pub fn max_excluding(&self, skip: &[i32]) -> (i32, f64) {
        self.harmonics
            .iter()
            .copied()
            .filter(|h| !skip.contains(&h.0))
            .fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a })
    }
}

/// Floquet spectrum plus the modes sampled over one period.
pub struct SampledFloquet {
    pub result: FloquetResult,
    /// Per sample time t_m = mT/M (m = 0..M−1): U(t_m, 0) Φ(0) for every branch, as dense columns.
    modes: Vec<nalgebra::DMatrix<Complex64>>,
    drive_diag: Vec<f64>,
    drive: DriveSpec,
}

impl SampledFloquet {
    pub fn samples(&self) -> usize {
        self.modes.len()
    }

    /// Fourier harmonics q_n of q(t) = c_b(t)/c_a(t) · e^{i(A_b − A_a)S(t)}
    /// taken along the branch of `a`; q(t) = Σ q_n e^{−inωt}, so harmonic n
    /// peaks where E_a − E_b + nω = 0.
    fn ratio_harmonics(&self, a: usize, b: usize) -> Vec<(i32, Complex64)> {
        let m = self.samples();
        let sig = self.drive.signature();
        let period = self.drive.period();
        let da = self.drive_diag[b] - self.drive_diag[a];
        let q: Vec<Complex64> = (0..m)
            .map(|k| {
                let t = k as f64 * period / m as f64;
                let u = &self.modes[k];
                let ca = u[(a, a)];
                let cb = u[(b, a)];
                if ca.norm() < 1e-300 {
                    return Complex64::new(0.0, 0.0);
                }
                cb / ca * Complex64::from_polar(1.0, da * sig.integral(t))
            })
            .collect();
        let nmax = (m / 2) as i32 - 1;
        (-nmax..=nmax)
            .map(|n| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, v) in q.iter().enumerate() {
                    let ang = std::f64::consts::TAU * n as f64 * k as f64 / m as f64;
                    acc += v * Complex64::from_polar(1.0, ang);
                }
                (n, acc / m as f64)
            })
            .collect()
    }

    /// θ_n = 2 arctan|q_n|, averaged over the two branches.
    pub fn pair_angles(&self, bra: &BareState, ket: &BareState) -> Result<PairAngles> {
        let a = self.result.branch(bra)?;
        let b = self.result.branch(ket)?;
        let fwd = self.ratio_harmonics(a, b);
        let back = self.ratio_harmonics(b, a);
        let harmonics = fwd
            .iter()
            .map(|&(n, q)| {
                let qb = back.iter().find(|h| h.0 == -n).map(|h| h.1).unwrap_or_default();
                let th = (q.norm().atan() + qb.norm().atan()).min(std::f64::consts::FRAC_PI_2);
                (n, th)
            })
            .collect();
        Ok(PairAngles {
            bra: bra.clone(),
            ket: ket.clone(),
            harmonics,
        })
    }
}

/// Floquet spectrum with modes sampled at `samples` points per period.
pub fn sampled_floquet(system: &SystemSpec, drive: &DriveSpec, samples: usize, opts: &FloquetOptions) -> Result<SampledFloquet> {
    let k = drive.validate(system)?;
    let frame = Frame::from_system(system, drive, opts.propagator.form)?;
    let sampled = sampled_propagator(&frame, samples, &opts.propagator)?;
    let n = frame.dim();
    let mut blocks = Vec::new();
    let mut matrices = Vec::new();
    let mut worst = 0.0f64;
    for b in 0..frame.n_blocks() {
        let u = sampled.matrices[b][samples].clone();
        worst = worst.max(crate::linalg::orthonormality_error(&u));
        blocks.push(frame.block_states(b).to_vec());
        matrices.push(u);
    }
    if worst > super::UNITARITY_LIMIT {
        return Err(Error::NonUnitary { deviation: worst });
    }
    let prop = super::Propagator {
        period: drive.period(),
        frequency: drive.frequency,
        dim: n,
        blocks: blocks.clone(),
        matrices,
        unitarity_error: worst,
        steps: 0,
    };
    let reference = dressed_reference(system, opts)?;
    let result = floquet_spectrum_with_drive(&prop, Reference::Dressed(&reference), opts.floor, Some(drive))?;
    let mut modes = Vec::with_capacity(samples);
    for m in 0..samples {
        let mut cols = nalgebra::DMatrix::zeros(n, n);
        for (b, states) in blocks.iter().enumerate() {
            let u = &sampled.matrices[b][m];
            for &kcol in states {
                for (r, &i) in states.iter().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (c, &j) in states.iter().enumerate() {
                        acc += u[(r, c)] * result.modes_t0[(j, kcol)];
                    }
                    cols[(i, kcol)] = acc;
                }
            }
        }
        modes.push(cols);
    }
    Ok(SampledFloquet {
        result,
        modes,
        drive_diag: number_diagonal(system, k),
        drive: drive.clone(),
    })
}

/// How the drive amplitude follows the drive frequency along a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum AmplitudeRule {
    /// ε fixed, rad/s.
    Fixed(f64),
    /// ε = x ω.
    Ratio(f64),
}

impl AmplitudeRule {
    pub fn amplitude(&self, frequency: f64) -> f64 {
        match *self {
            AmplitudeRule::Fixed(e) => e,
            AmplitudeRule::Ratio(x) => x * frequency,
        }
    }

    pub fn drive(&self, template: &DriveSpec, frequency: f64) -> DriveSpec {
        template.with_frequency(frequency).with_amplitude(self.amplitude(frequency))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LandscapePoint {
    pub frequency: f64,
    /// θ for each transition (max over harmonics), None where labeling failed.
    pub angles: Vec<Option<f64>>,
    /// Dominant harmonic for each transition.
    pub harmonics: Vec<Option<i32>>,
    pub error: Option<String>,
}

impl LandscapePoint {
    /// (transition index, θ) of the largest angle.
    pub fn max(&self) -> Option<(usize, f64)> {
        self.angles
            .iter()
            .enumerate()
            .filter_map(|(i, a)| a.map(|v| (i, v)))
            .fold(None, |acc: Option<(usize, f64)>, x| match acc {
                Some(best) if best.1 >= x.1 => Some(best),
                _ => Some(x),
            })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Landscape {
    pub transitions: Vec<(BareState, BareState)>,
    pub points: Vec<LandscapePoint>,
}

/// Collision angles of every listed transition over a grid of drive
/// frequencies. Points where labeling fails are kept with `error` set.
pub fn max_collision_angle_landscape(
    system: &SystemSpec,
    template: &DriveSpec,
    rule: AmplitudeRule,
    frequencies: &[f64],
    transitions: &[TransitionEntry],
    samples: usize,
    opts: &FloquetOptions,
) -> Result<Landscape> {
    template.validate(system)?;
    let pairs: Vec<(BareState, BareState)> = transitions.iter().map(|t| (t.bra.clone(), t.ket.clone())).collect();
    let mut points = Vec::with_capacity(frequencies.len());
    for &w in frequencies {
        let drive = rule.drive(template, w);
        let point = match sampled_floquet(system, &drive, samples, opts) {
            Ok(sf) => {
                let mut angles = Vec::with_capacity(pairs.len());
                let mut harmonics = Vec::with_capacity(pairs.len());
                for (a, b) in &pairs {
                    let pa = sf.pair_angles(a, b)?;
                    let (n, th) = pa.max();
                    angles.push(Some(th));
                    harmonics.push(Some(n));
                }
                LandscapePoint { frequency: w, angles, harmonics, error: None }
            }
            Err(e @ Error::TrackingAmbiguity { .. }) => LandscapePoint {
                frequency: w,
                angles: vec![None; pairs.len()],
                harmonics: vec![None; pairs.len()],
                error: Some(e.to_string()),
            },
            Err(e) => return Err(e),
        };
        points.push(point);
    }
    Ok(Landscape { transitions: pairs, points })
}
