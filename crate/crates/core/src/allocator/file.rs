use serde::{Deserialize, Serialize};

use super::problem::{AllocationProblem, Amplitude, Objective, Quantity, Target, Variable};
use crate::error::{Error, Result};
use crate::model::{BareState, ConfigFile};
use crate::units::{ghz, khz, mhz};

/// Box of one decision variable: GHz for frequencies, MHz for anharmonicities.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableEntry {
    pub mode: String,
    pub quantity: Quantity,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
pub struct TargetEntry {
    pub bra: String,
    pub ket: String,
    pub harmonic: i32,
    pub drive: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_MHz: Option<f64>,
}

fn default_margin() -> f64 {
    10.0
}

fn default_harmonics() -> i32 {
    15
}

fn default_kappa() -> f64 {
    1.0
}

fn default_resolution() -> f64 {
    10.0
}

fn default_boxes() -> usize {
    200_000
}

/// JSON allocation problem.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
pub struct ProblemFile {
    pub system: ConfigFile,
    pub variables: Vec<VariableEntry>,
    #[serde(default)]
    pub targets: Vec<TargetEntry>,
    #[serde(default = "default_margin")]
    pub margin: f64,
    #[serde(default = "default_harmonics")]
    pub harmonics: i32,
    /// Amplitude ratio for transitions away from the driven mode.
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zz_cap_kHz: Option<f64>,
    #[serde(default)]
    pub objective: Objective,
    #[serde(default = "default_resolution")]
    pub resolution_kHz: f64,
    #[serde(default)]
    pub trust_radius_MHz: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub include_counter: bool,
    #[serde(default = "default_boxes")]
    pub max_boxes: usize,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let inner = e.inner();
            Error::Config(format!("at `{}` (line {}, column {}): {}", e.path(), inner.line(), inner.column(), inner))
        })
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn problem(&self) -> Result<AllocationProblem> {
        let template = self.system.system()?;
        let variables = self
            .variables
            .iter()
            .map(|v| {
                let mode = template.mode_index(&v.mode)?;
                let scale = |x: f64| match v.quantity {
                    Quantity::Frequency => ghz(x),
                    Quantity::Anharmonicity => mhz(x),
                };
                Ok(Variable {
                    mode,
                    quantity: v.quantity,
                    lo: scale(v.lo),
                    hi: scale(v.hi),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let targets = self
            .targets
            .iter()
            .map(|t| {
                let amplitude = match (t.amplitude_ratio, t.eps_MHz) {
                    (Some(x), None) => Amplitude::Ratio(x),
                    (None, Some(e)) => Amplitude::Absolute(mhz(e)),
                    _ => {
                        return Err(Error::Config(format!(
                            "target {}<->{}: give exactly one of amplitude_ratio and eps_MHz",
                            t.bra, t.ket
                        )))
                    }
                };
                Ok(Target {
                    bra: BareState::parse(&t.bra)?,
                    ket: BareState::parse(&t.ket)?,
                    harmonic: t.harmonic,
                    drive: t.drive.clone(),
                    amplitude,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut p = AllocationProblem::new(template, variables, targets);
        p.margin = self.margin;
        p.harmonics = self.harmonics;
        p.indirect_ratio = self.kappa;
        p.zz_cap = self.zz_cap_kHz.map(khz);
        p.objective = self.objective;
        p.resolution = khz(self.resolution_kHz);
        p.trust_radius = mhz(self.trust_radius_MHz);
        p.seed = self.seed;
        p.include_counter = self.include_counter;
        p.max_boxes = self.max_boxes;
        p.validate()?;
        Ok(p)
    }
}
