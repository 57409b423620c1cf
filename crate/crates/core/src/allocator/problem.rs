use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BareState, ModeRole, SystemSpec};
use crate::sidebands::{catalog, CatalogOptions, DetuningSource, TransitionEntry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Frequency,
    Anharmonicity,
}

/// One decision variable with its box, rad/s.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Variable {
    pub mode: usize,
    pub quantity: Quantity,
    pub lo: f64,
    pub hi: f64,
}

/// Drive amplitude of a target tone.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Amplitude {
    /// ε = x ω_p
    Ratio(f64),
    /// ε in rad/s
    Absolute(f64),
}

impl Amplitude {
    pub fn at(&self, frequency: f64) -> f64 {
        match *self {
            Amplitude::Ratio(x) => x * frequency,
            Amplitude::Absolute(e) => e,
        }
    }
}

/// A transition to be activated at sideband order `harmonic` by a tone on
/// `drive`. The harmonic follows the catalog orientation: resonance at
/// E(bra) − E(ket) + n ω_p = 0.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Target {
    pub bra: BareState,
    pub ket: BareState,
    pub harmonic: i32,
    pub drive: String,
    pub amplitude: Amplitude,
}

impl Target {
    pub fn label(&self) -> String {
        format!("{}<->{}", self.bra.compact(), self.ket.compact())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// First feasible point.
    #[default]
    None,
    MaxWorstMargin,
    /// Smallest summed Lorentzian bound over the margin rows.
    MinBound,
}

#[derive(Clone, Debug)]
pub struct AllocationProblem {
    pub template: SystemSpec,
    pub variables: Vec<Variable>,
    pub targets: Vec<Target>,
    /// Required ratio for every "much greater than" row.
    pub margin: f64,
    /// Parasitic harmonics |m| ≤ this are constrained.
    pub harmonics: i32,
    /// Effective amplitude ratio seen by transitions not touching the driven
    /// mode; 0 leaves them out.
    pub indirect_ratio: f64,
    /// Cap on |ζ| of the first two qubits, rad/s.
    pub zz_cap: Option<f64>,
    pub objective: Objective,
    /// Smallest box width per variable, rad/s.
    pub resolution: f64,
    /// Allowed residual of a resonance equality, rad/s.
    pub resonance_tolerance: f64,
    /// Box budget per feasibility search.
    pub max_boxes: usize,
    pub seed: u64,
    pub include_counter: bool,
    /// How far refinement may move mode frequencies, rad/s; 0 moves only ω_p.
    pub trust_radius: f64,
}

impl AllocationProblem {
    pub fn new(template: SystemSpec, variables: Vec<Variable>, targets: Vec<Target>) -> Self {
        AllocationProblem {
            template,
            variables,
            targets,
            margin: 10.0,
            harmonics: 15,
            indirect_ratio: 1.0,
            zz_cap: None,
            objective: Objective::None,
            resolution: crate::units::khz(10.0),
            resonance_tolerance: crate::units::khz(1.0),
            max_boxes: 200_000,
            seed: 0,
            include_counter: false,
            trust_radius: 0.0,
        }
    }

    pub fn variable_name(&self, k: usize) -> String {
        let v = &self.variables[k];
        let label = &self.template.modes()[v.mode].label;
        match v.quantity {
            Quantity::Frequency => format!("{label}.frequency"),
            Quantity::Anharmonicity => format!("{label}.anharmonicity"),
        }
    }

    pub fn drive_name(&self, k: usize) -> String {
        format!("wp.{k}")
    }

    pub fn catalog_options(&self) -> CatalogOptions {
        let base = match self.template.couplers().len() {
            0 if self.template.n_modes() > 2 => CatalogOptions::single_excitation(),
            _ => CatalogOptions::qubit_qubit(),
        };
        CatalogOptions {
            include_counter: self.include_counter,
            detunings: DetuningSource::Bare,
            ..base
        }
    }

    pub fn catalog(&self, system: &SystemSpec) -> Result<Vec<TransitionEntry>> {
        catalog(system, self.catalog_options())
    }

    /// Template with the decision variables set to `x`.
    pub fn system_at(&self, x: &[f64]) -> Result<SystemSpec> {
        let mut s = self.template.clone();
        for (v, &val) in self.variables.iter().zip(x) {
            let label = s.modes()[v.mode].label.clone();
            s = match v.quantity {
                Quantity::Frequency => s.with_frequency(&label, val)?,
                Quantity::Anharmonicity => s.with_anharmonicity(&label, val)?,
            };
        }
        Ok(s)
    }

    pub fn center(&self) -> Vec<f64> {
        self.variables.iter().map(|v| 0.5 * (v.lo + v.hi)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.margin > 1.0) {
            return Err(Error::InvalidArgument(format!("margin {} must exceed 1", self.margin)));
        }
        if self.harmonics < 0 || self.resolution <= 0.0 || self.resonance_tolerance <= 0.0 {
            return Err(Error::InvalidArgument("harmonics, resolution and tolerance must be positive".into()));
        }
        for (k, v) in self.variables.iter().enumerate() {
            if v.mode >= self.template.n_modes() {
                return Err(Error::InvalidArgument(format!("variable {k} refers to mode {}", v.mode)));
            }
            if !(v.lo <= v.hi) || !v.lo.is_finite() || !v.hi.is_finite() {
                return Err(Error::InvalidArgument(format!("{} has an empty or infinite box", self.variable_name(k))));
            }
            if v.quantity == Quantity::Frequency && v.lo <= 0.0 {
                return Err(Error::InvalidArgument(format!("{} box must be positive", self.variable_name(k))));
            }
            if self.variables[..k].iter().any(|w| w.mode == v.mode && w.quantity == v.quantity) {
                return Err(Error::InvalidArgument(format!("{} declared twice", self.variable_name(k))));
            }
        }
        for t in &self.targets {
            let k = self.template.mode_index(&t.drive)?;
            if !self.template.modes()[k].tunable {
                return Err(Error::NotTunable(t.drive.clone()));
            }
            if t.harmonic == 0 {
                return Err(Error::InvalidArgument(format!("target {} needs a nonzero order", t.label())));
            }
        }
        Ok(())
    }

    pub(crate) fn is_coupler_drive(&self, target: usize) -> Result<bool> {
        let k = self.template.mode_index(&self.targets[target].drive)?;
        Ok(self.template.modes()[k].role == ModeRole::Coupler)
    }
}
