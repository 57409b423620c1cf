use serde::{Deserialize, Serialize};

use super::basis::{BareBasis, BareState};
use crate::error::{Error, Result};

pub const DEFAULT_DIMENSION_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeRole {
    Qubit,
    Coupler,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModeSpec {
    pub label: String,
    /// rad/s
    pub frequency: f64,
    /// rad/s, negative for transmons
    pub anharmonicity: f64,
    pub levels: usize,
    pub tunable: bool,
    pub role: ModeRole,
}

impl ModeSpec {
    pub fn qubit(label: &str, frequency: f64, anharmonicity: f64, levels: usize) -> Self {
        ModeSpec {
            label: label.to_string(),
            frequency,
            anharmonicity,
            levels,
            tunable: true,
            role: ModeRole::Qubit,
        }
    }

    pub fn coupler(label: &str, frequency: f64, anharmonicity: f64, levels: usize) -> Self {
        ModeSpec {
            role: ModeRole::Coupler,
            ..Self::qubit(label, frequency, anharmonicity, levels)
        }
    }

    pub fn fixed(mut self) -> Self {
        self.tunable = false;
        self
    }

    /// Duffing ladder energy of `n` quanta.
    pub fn energy(&self, n: usize) -> f64 {
        let n = n as f64;
        self.frequency * n + 0.5 * self.anharmonicity * n * (n - 1.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CouplingSpec {
    pub a: String,
    pub b: String,
    /// rad/s
    pub strength: f64,
}

impl CouplingSpec {
    pub fn new(a: &str, b: &str, strength: f64) -> Self {
        CouplingSpec {
            a: a.to_string(),
            b: b.to_string(),
            strength,
        }
    }
}

/// Coupling with mode indices resolved.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub strength: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemSpec {
    modes: Vec<ModeSpec>,
    couplings: Vec<CouplingSpec>,
    edges: Vec<Edge>,
    basis: BareBasis,
}

impl SystemSpec {
    pub fn new(modes: Vec<ModeSpec>, couplings: Vec<CouplingSpec>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidSystem("no modes".into()));
        }
        for (k, m) in modes.iter().enumerate() {
            if m.levels < 2 {
                return Err(Error::InvalidSystem(format!(
                    "mode `{}` has {} levels (need ≥ 2)",
                    m.label, m.levels
                )));
            }
            if !(m.frequency > 0.0) || !m.frequency.is_finite() {
                return Err(Error::InvalidSystem(format!(
                    "mode `{}` frequency must be positive",
                    m.label
                )));
            }
            if !m.anharmonicity.is_finite() {
                return Err(Error::InvalidSystem(format!(
                    "mode `{}` anharmonicity is not finite",
                    m.label
                )));
            }
            if modes[..k].iter().any(|o| o.label == m.label) {
                return Err(Error::InvalidSystem(format!("duplicate mode `{}`", m.label)));
            }
        }
        let find = |l: &str| {
            modes
                .iter()
                .position(|m| m.label == l)
                .ok_or_else(|| Error::UnknownMode(l.to_string()))
        };
        let mut edges: Vec<Edge> = Vec::with_capacity(couplings.len());
        for c in &couplings {
            let (a, b) = (find(&c.a)?, find(&c.b)?);
            if a == b {
                return Err(Error::InvalidSystem(format!("self coupling on `{}`", c.a)));
            }
            if !c.strength.is_finite() {
                return Err(Error::InvalidSystem("coupling strength not finite".into()));
            }
            let (a, b) = (a.min(b), a.max(b));
            if edges.iter().any(|e| e.a == a && e.b == b) {
                return Err(Error::InvalidSystem(format!(
                    "duplicate coupling {}-{}",
                    c.a, c.b
                )));
            }
            edges.push(Edge {
                a,
                b,
                strength: c.strength,
            });
        }
        let dims: Vec<usize> = modes.iter().map(|m| m.levels).collect();
        let dim = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or(Error::DimensionOverflow {
                dim: usize::MAX,
                cap: DEFAULT_DIMENSION_CAP,
            })?;
        let basis = if dim <= DEFAULT_DIMENSION_CAP {
            BareBasis::new(&dims)
        } else {
            return Err(Error::DimensionOverflow {
                dim,
                cap: DEFAULT_DIMENSION_CAP,
            });
        };
        Ok(SystemSpec {
            modes,
            couplings,
            edges,
            basis,
        })
    }

    pub fn modes(&self) -> &[ModeSpec] {
        &self.modes
    }

    pub fn couplings(&self) -> &[CouplingSpec] {
        &self.couplings
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn basis(&self) -> &BareBasis {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn mode_index(&self, label: &str) -> Result<usize> {
        self.modes
            .iter()
            .position(|m| m.label == label)
            .ok_or_else(|| Error::UnknownMode(label.to_string()))
    }

    pub fn mode(&self, label: &str) -> Result<&ModeSpec> {
        Ok(&self.modes[self.mode_index(label)?])
    }

    pub fn coupling_strength(&self, a: usize, b: usize) -> f64 {
        let (a, b) = (a.min(b), a.max(b));
        self.edges
            .iter()
            .find(|e| e.a == a && e.b == b)
            .map_or(0.0, |e| e.strength)
    }

    pub fn qubits(&self) -> Vec<usize> {
        (0..self.modes.len())
            .filter(|&k| self.modes[k].role == ModeRole::Qubit)
            .collect()
    }

    pub fn couplers(&self) -> Vec<usize> {
        (0..self.modes.len())
            .filter(|&k| self.modes[k].role == ModeRole::Coupler)
            .collect()
    }

    pub fn bare_energy(&self, state: &BareState) -> f64 {
        state
            .0
            .iter()
            .zip(&self.modes)
            .map(|(&n, m)| m.energy(n))
            .sum()
    }

    pub fn bare_energy_index(&self, index: usize) -> f64 {
        (0..self.modes.len())
            .map(|k| self.modes[k].energy(self.basis.occupation(index, k)))
            .sum()
    }

    pub fn state_index(&self, state: &BareState) -> Result<usize> {
        self.basis
            .index_of(state)
            .ok_or_else(|| Error::UnknownState(state.compact()))
    }

    pub fn parse_state(&self, s: &str) -> Result<usize> {
        self.state_index(&BareState::parse(s)?)
    }

    fn rebuild(&self, modes: Vec<ModeSpec>, couplings: Vec<CouplingSpec>) -> Result<Self> {
        SystemSpec::new(modes, couplings)
    }

    pub fn with_frequency(&self, label: &str, frequency: f64) -> Result<Self> {
        let k = self.mode_index(label)?;
        let mut modes = self.modes.clone();
        modes[k].frequency = frequency;
        self.rebuild(modes, self.couplings.clone())
    }

    pub fn with_anharmonicity(&self, label: &str, anharmonicity: f64) -> Result<Self> {
        let k = self.mode_index(label)?;
        let mut modes = self.modes.clone();
        modes[k].anharmonicity = anharmonicity;
        self.rebuild(modes, self.couplings.clone())
    }

    pub fn with_levels(&self, label: &str, levels: usize) -> Result<Self> {
        let k = self.mode_index(label)?;
        let mut modes = self.modes.clone();
        modes[k].levels = levels;
        self.rebuild(modes, self.couplings.clone())
    }

    pub fn with_all_levels(&self, levels: usize) -> Result<Self> {
        let mut modes = self.modes.clone();
        for m in &mut modes {
            m.levels = levels;
        }
        self.rebuild(modes, self.couplings.clone())
    }

    pub fn with_coupling(&self, a: &str, b: &str, strength: f64) -> Result<Self> {
        let (ia, ib) = (self.mode_index(a)?, self.mode_index(b)?);
        let mut couplings = self.couplings.clone();
        let mut found = false;
        for c in &mut couplings {
            let (ca, cb) = (self.mode_index(&c.a)?, self.mode_index(&c.b)?);
            if (ca, cb) == (ia, ib) || (ca, cb) == (ib, ia) {
                c.strength = strength;
                found = true;
            }
        }
        if !found {
            couplings.push(CouplingSpec::new(a, b, strength));
        }
        self.rebuild(self.modes.clone(), couplings)
    }

    pub fn with_scaled_couplings(&self, lambda: f64) -> Self {
        let mut s = self.clone();
        for c in &mut s.couplings {
            c.strength *= lambda;
        }
        for e in &mut s.edges {
            e.strength *= lambda;
        }
        s
    }

    /// Same system with modes listed in a different order.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let modes = order.iter().map(|&k| self.modes[k].clone()).collect();
        self.rebuild(modes, self.couplings.clone())
    }
}

/// Sinusoidal modulation of one tunable mode.
#[derive(Clone, Debug, PartialEq)]
pub struct DriveSpec {
    pub target: String,
    /// rad/s
    pub amplitude: f64,
    /// rad/s
    pub frequency: f64,
    pub phase: f64,
}

impl DriveSpec {
    pub fn new(target: &str, amplitude: f64, frequency: f64) -> Self {
        DriveSpec {
            target: target.to_string(),
            amplitude,
            frequency,
            phase: 0.0,
        }
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    pub fn with_frequency(&self, frequency: f64) -> Self {
        DriveSpec {
            frequency,
            ..self.clone()
        }
    }

    pub fn with_amplitude(&self, amplitude: f64) -> Self {
        DriveSpec {
            amplitude,
            ..self.clone()
        }
    }

    pub fn period(&self) -> f64 {
        std::f64::consts::TAU / self.frequency
    }

    pub fn modulation_index(&self) -> f64 {
        self.amplitude / self.frequency
    }

    pub fn validate(&self, system: &SystemSpec) -> Result<usize> {
        if !(self.frequency > 0.0) || !self.frequency.is_finite() {
            return Err(Error::InvalidArgument(
                "drive frequency must be positive".into(),
            ));
        }
        if !self.amplitude.is_finite() || !self.phase.is_finite() {
            return Err(Error::InvalidArgument("drive parameters not finite".into()));
        }
        let k = system.mode_index(&self.target)?;
        if !system.modes()[k].tunable {
            return Err(Error::NotTunable(self.target.clone()));
        }
        Ok(k)
    }

    pub fn signature(&self) -> DriveSignature {
        DriveSignature {
            amplitude: self.amplitude,
            frequency: self.frequency,
            phase: self.phase,
        }
    }
}

/// s(t) = ε cos(ωt + φ).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriveSignature {
    pub amplitude: f64,
    pub frequency: f64,
    pub phase: f64,
}

impl DriveSignature {
    pub fn value(&self, t: f64) -> f64 {
        self.amplitude * (self.frequency * t + self.phase).cos()
    }

    /// ∫₀ᵗ s(τ) dτ
    pub fn integral(&self, t: f64) -> f64 {
        self.amplitude / self.frequency
            * ((self.frequency * t + self.phase).sin() - self.phase.sin())
    }
}
