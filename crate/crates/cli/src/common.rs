use std::path::{Path, PathBuf};

use clap::ValueEnum;
use floqmap::floquet::AmplitudeRule;
use floqmap::model::{BareState, ConfigFile, DriveSpec, ModeRole, SystemSpec};
use floqmap::sidebands::{catalog, CatalogOptions, DetuningSource, TransitionEntry};
use floqmap::units::mhz;

use crate::CliError;

#[derive(clap::Args, Debug, Clone)]
pub struct ConfigArg {
    /// System description (JSON).
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(clap::Args, Debug, Clone)]
pub struct AmplitudeArgs {
    /// Drive amplitude as a multiple of the drive frequency.
    #[arg(long, conflicts_with = "eps_mhz")]
    pub eps_over_fp: Option<f64>,
    /// Fixed drive amplitude in MHz.
    #[arg(long)]
    pub eps_mhz: Option<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Qubit,
    Coupler,
}

pub struct Loaded {
    pub file: ConfigFile,
    pub system: SystemSpec,
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let file = ConfigFile::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let system = file
        .system()
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(Loaded { file, system })
}

impl Loaded {
    /// Drive on the mode selected by `scheme`: the configured target when
    /// its role matches, otherwise the first tunable mode of that role.
    pub fn drive(&self, scheme: Option<Scheme>) -> Result<DriveSpec, CliError> {
        let configured = self.file.drive();
        let role = match scheme {
            None => {
                return configured.ok_or_else(|| CliError::Usage("config has no drive and no --scheme was given".into()))
            }
            Some(Scheme::Qubit) => ModeRole::Qubit,
            Some(Scheme::Coupler) => ModeRole::Coupler,
        };
        if let Some(d) = &configured {
            if self.system.mode(&d.target)?.role == role {
                return Ok(d.clone());
            }
        }
        let mode = self
            .system
            .modes()
            .iter()
            .find(|m| m.role == role && m.tunable)
            .ok_or_else(|| CliError::Usage(format!("no tunable {role:?} mode to drive").to_lowercase()))?;
        let (eps, fp) = configured.map_or((0.0, mhz(100.0)), |d| (d.amplitude, d.frequency));
        Ok(DriveSpec::new(&mode.label, eps, fp))
    }
}

impl AmplitudeArgs {
    /// Amplitude rule; falls back to the configured drive amplitude.
    pub fn rule(&self, drive: &DriveSpec) -> AmplitudeRule {
        match (self.eps_over_fp, self.eps_mhz) {
            (Some(x), _) => AmplitudeRule::Ratio(x),
            (None, Some(e)) => AmplitudeRule::Fixed(mhz(e)),
            (None, None) => AmplitudeRule::Fixed(drive.amplitude),
        }
    }
}

/// `01-10`, `01,10` or `01<->10`.
pub fn parse_pair(s: &str) -> Result<(BareState, BareState), CliError> {
    let parts: Vec<&str> = if s.contains("<->") {
        s.split("<->").collect()
    } else if s.contains('-') {
        s.split('-').collect()
    } else {
        s.split(',').collect()
    };
    match parts.as_slice() {
        [a, b] => Ok((
            BareState::parse(a).map_err(|e| CliError::Usage(e.to_string()))?,
            BareState::parse(b).map_err(|e| CliError::Usage(e.to_string()))?,
        )),
        _ => Err(CliError::Usage(format!("transition `{s}` should look like 01-10"))),
    }
}

/// Catalog options suited to the topology.
pub fn catalog_options(system: &SystemSpec, counter: bool, bare: bool) -> CatalogOptions {
    let base = if !system.couplers().is_empty() {
        CatalogOptions::qubit_coupler_qubit()
    } else if system.n_modes() > 2 {
        CatalogOptions::single_excitation()
    } else {
        CatalogOptions::qubit_qubit()
    };
    CatalogOptions {
        include_counter: counter,
        detunings: if bare { DetuningSource::Bare } else { DetuningSource::Dressed },
        ..base
    }
}

pub fn full_catalog(system: &SystemSpec, counter: bool, bare: bool) -> Result<Vec<TransitionEntry>, CliError> {
    Ok(catalog(system, catalog_options(system, counter, bare))?)
}

/// Catalog row for a pair given in either order.
pub fn find_entry<'a>(entries: &'a [TransitionEntry], pair: &(BareState, BareState)) -> Result<&'a TransitionEntry, CliError> {
    entries
        .iter()
        .find(|e| e.involves(&pair.0, &pair.1))
        .ok_or_else(|| CliError::Usage(format!("{}-{} is not in the transition catalog", pair.0.compact(), pair.1.compact())))
}

/// `points` evenly spaced values from lo to hi inclusive.
pub fn grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, CliError> {
    if points == 0 || !lo.is_finite() || !hi.is_finite() || (points > 1 && hi < lo) {
        return Err(CliError::Usage(format!("bad grid {lo}..{hi} with {points} points")));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..points)
        .map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64)
        .collect())
}
