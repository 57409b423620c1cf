//! JSON system description. Frequencies in the file are ordinary
//! frequencies (GHz for modes, MHz for couplings and drives).

use serde::{Deserialize, Serialize};

use super::system::{CouplingSpec, DriveSpec, ModeRole, ModeSpec, SystemSpec};
use crate::error::{Error, Result};
use crate::units::{ghz, mhz, to_ghz, to_mhz};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
pub struct ModeEntry {
    pub label: String,
    pub freq_GHz: f64,
    pub anharm_MHz: f64,
    pub levels: usize,
    pub tunable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<ModeRole>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
pub struct CouplingEntry {
    pub a: String,
    pub b: String,
    pub J_MHz: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
pub struct DriveEntry {
    pub target: String,
    pub eps_MHz: f64,
    pub fp_MHz: f64,
    #[serde(default)]
    pub phase_rad: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub modes: Vec<ModeEntry>,
    #[serde(default)]
    pub couplings: Vec<CouplingEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drive: Option<DriveEntry>,
}

/// Role when not given explicitly: labels starting with `c`/`C` are couplers.
fn default_role(label: &str) -> ModeRole {
    if label.starts_with(['c', 'C']) {
        ModeRole::Coupler
    } else {
        ModeRole::Qubit
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let inner = e.inner();
            Error::Config(format!(
                "at `{}` (line {}, column {}): {}",
                e.path(),
                inner.line(),
                inner.column(),
                inner
            ))
        })
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn system(&self) -> Result<SystemSpec> {
        let modes = self
            .modes
            .iter()
            .map(|m| ModeSpec {
                label: m.label.clone(),
                frequency: ghz(m.freq_GHz),
                anharmonicity: mhz(m.anharm_MHz),
                levels: m.levels,
                tunable: m.tunable,
                role: m.role.unwrap_or_else(|| default_role(&m.label)),
            })
            .collect();
        let couplings = self
            .couplings
            .iter()
            .map(|c| CouplingSpec::new(&c.a, &c.b, mhz(c.J_MHz)))
            .collect();
        SystemSpec::new(modes, couplings)
    }

    pub fn drive(&self) -> Option<DriveSpec> {
        self.drive.as_ref().map(|d| {
            DriveSpec::new(&d.target, mhz(d.eps_MHz), mhz(d.fp_MHz)).with_phase(d.phase_rad)
        })
    }

    pub fn from_system(system: &SystemSpec, drive: Option<&DriveSpec>) -> Self {
        ConfigFile {
            modes: system
                .modes()
                .iter()
                .map(|m| ModeEntry {
                    label: m.label.clone(),
                    freq_GHz: to_ghz(m.frequency),
                    anharm_MHz: to_mhz(m.anharmonicity),
                    levels: m.levels,
                    tunable: m.tunable,
                    role: Some(m.role),
                })
                .collect(),
            couplings: system
                .couplings()
                .iter()
                .map(|c| CouplingEntry {
                    a: c.a.clone(),
                    b: c.b.clone(),
                    J_MHz: to_mhz(c.strength),
                })
                .collect(),
            drive: drive.map(|d| DriveEntry {
                target: d.target.clone(),
                eps_MHz: to_mhz(d.amplitude),
                fp_MHz: to_mhz(d.frequency),
                phase_rad: d.phase,
            }),
        }
    }
}
