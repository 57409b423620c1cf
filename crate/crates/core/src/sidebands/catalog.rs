//! Enumeration of single-ladder parametric transitions.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{BareState, DriveSpec, ModeRole, SystemSpec};
use crate::statics::{exact_dressed_spectrum, sw_effective_params, EffectiveCoupling, Triple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rotating {
    Co,
    Counter,
}

/// Static interaction the transition borrows its strength from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Qubit,
    Coupler,
}

impl fmt::Display for Rotating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rotating::Co => "co",
            Rotating::Counter => "counter",
        })
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Channel::Qubit => "qubit",
            Channel::Coupler => "coupler",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetuningSource {
    Bare,
    Dressed,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CatalogOptions {
    /// Largest total excitation number of the lower state.
    pub max_excitations: usize,
    /// Largest coupler occupation anywhere in a listed pair.
    pub max_coupler: usize,
    pub include_counter: bool,
    pub detunings: DetuningSource,
}

impl CatalogOptions {
    pub fn qubit_qubit() -> Self {
        CatalogOptions {
            max_excitations: 2,
            max_coupler: 1,
            include_counter: true,
            detunings: DetuningSource::Bare,
        }
    }

    pub fn qubit_coupler_qubit() -> Self {
        CatalogOptions {
            detunings: DetuningSource::Dressed,
            ..Self::qubit_qubit()
        }
    }

    /// Single-excitation exchange only, as used for lattices.
    pub fn single_excitation() -> Self {
        CatalogOptions {
            max_excitations: 1,
            max_coupler: 1,
            include_counter: false,
            detunings: DetuningSource::Dressed,
        }
    }
}

/// One parametric transition. `bra` holds fewer quanta in mode `modes.0`
/// than `ket`, and `detuning = E(bra) − E(ket)`; the modulated coupling
/// then rotates as exp(i(detuning + nω_p)t).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransitionEntry {
    pub bra: BareState,
    pub ket: BareState,
    pub rotating: Rotating,
    pub channel: Channel,
    /// The two modes whose occupations change, in mode order.
    pub modes: (usize, usize),
    /// max(i₁, i₂)·max(j₁, j₂) over the two mode occupations.
    pub level_coefficient: u32,
    /// rad/s
    pub detuning: f64,
    /// Static strength being modulated, rad/s.
    pub base_strength: f64,
    /// Coupler-mediated effective coupling that carries a qubit-channel row.
    #[serde(skip)]
    pub effective: Option<EffectiveCoupling>,
}

impl TransitionEntry {
    pub fn label(&self) -> String {
        format!("{}<->{}", self.bra.compact(), self.ket.compact())
    }

    /// Phase of the n-th sideband term, n(φ + π) + (ε/ω) sin φ.
    pub fn beta(&self, n: i32, drive: &DriveSpec) -> f64 {
        n as f64 * (drive.phase + std::f64::consts::PI)
            + drive.modulation_index() * drive.phase.sin()
    }

    /// True if `drive` acts on one of the two modes of this transition.
    pub fn directly_driven(&self, system: &SystemSpec, drive: &DriveSpec) -> bool {
        system
            .mode_index(&drive.target)
            .map(|k| k == self.modes.0 || k == self.modes.1)
            .unwrap_or(false)
    }

    pub fn involves(&self, a: &BareState, b: &BareState) -> bool {
        (&self.bra == a && &self.ket == b) || (&self.bra == b && &self.ket == a)
    }
}

impl fmt::Display for TransitionEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}↔{}", self.bra, self.ket)
    }
}

/// ω_p = |detuning| / |n|.
pub fn resonance_frequency(entry: &TransitionEntry, n: i32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("resonance needs a nonzero harmonic".into()));
    }
    if entry.detuning == 0.0 {
        return Err(Error::InvalidArgument(format!(
            "{} has zero detuning; no sideband resonance",
            entry.label()
        )));
    }
    Ok(entry.detuning.abs() / n.unsigned_abs() as f64)
}

/// Mode pairs that carry transitions: direct edges plus qubit pairs that
/// share a coupler.
fn interaction_pairs(system: &SystemSpec) -> Vec<(usize, usize, Option<usize>)> {
    let mut out: BTreeSet<(usize, usize)> = system.edges().iter().map(|e| (e.a, e.b)).collect();
    let mut via = Vec::new();
    let modes = system.modes();
    for c in system.couplers() {
        let nbrs: Vec<usize> = system
            .edges()
            .iter()
            .filter_map(|e| {
                let other = if e.a == c { e.b } else if e.b == c { e.a } else { return None };
                (modes[other].role == ModeRole::Qubit).then_some(other)
            })
            .collect();
        for (i, &p) in nbrs.iter().enumerate() {
            for &q in &nbrs[i + 1..] {
                let key = (p.min(q), p.max(q));
                out.insert(key);
                via.push((key, c));
            }
        }
    }
    out.into_iter()
        .map(|(a, b)| {
            let c = via.iter().find(|(k, _)| *k == (a, b)).map(|(_, c)| *c);
            (a, b, c)
        })
        .collect()
}

pub fn catalog(system: &SystemSpec, opts: CatalogOptions) -> Result<Vec<TransitionEntry>> {
    let basis = system.basis();
    let modes = system.modes();
    let couplers = system.couplers();
    let coupler_occ = |s: &BareState| couplers.iter().map(|&c| s.0[c]).max().unwrap_or(0);
    let energies: Vec<f64> = match opts.detunings {
        DetuningSource::Bare => (0..basis.len()).map(|i| system.bare_energy_index(i)).collect(),
        DetuningSource::Dressed => exact_dressed_spectrum(system)?.energies,
    };
    let energy = |s: &BareState| -> Result<f64> {
        Ok(energies[system.state_index(s)?])
    };
    let mut out = Vec::new();
    for (a, b, via) in interaction_pairs(system) {
        let channel = if modes[a].role == ModeRole::Coupler || modes[b].role == ModeRole::Coupler {
            Channel::Coupler
        } else {
            Channel::Qubit
        };
        let sw = match via {
            Some(c) if channel == Channel::Qubit => {
                let sub = three_mode_view(system, a, c, b)?;
                Some(sw_effective_params(&sub)?)
            }
            _ => None,
        };
        let direct = system.coupling_strength(a, b);
        for x in basis.states() {
            if x.excitations() > opts.max_excitations || coupler_occ(&x) > opts.max_coupler {
                continue;
            }
            let mut push = |bra: BareState, ket: BareState, rotating: Rotating| -> Result<()> {
                let c = (bra.0[a].max(ket.0[a]) * bra.0[b].max(ket.0[b])) as u32;
                let (base, effective) = match (rotating, &sw) {
                    (Rotating::Co, Some(p)) => qubit_channel_strength(p, &bra, &ket, a, b, c, direct),
                    _ => ((c as f64).sqrt() * direct, None),
                };
                out.push(TransitionEntry {
                    detuning: energy(&bra)? - energy(&ket)?,
                    bra,
                    ket,
                    rotating,
                    channel,
                    modes: (a, b),
                    level_coefficient: c,
                    base_strength: base,
                    effective,
                });
                Ok(())
            };
            // co-rotating: bra = b_a b_b† x
            if x.0[a] >= 1 && x.0[b] + 1 < basis.dims()[b] {
                let mut y = x.clone();
                y.0[a] -= 1;
                y.0[b] += 1;
                let ok_coupler = coupler_occ(&y) <= opts.max_coupler
                    && (channel == Channel::Coupler || (coupler_occ(&x) == 0 && coupler_occ(&y) == 0));
                if ok_coupler && y.excitations() <= opts.max_excitations {
                    push(y, x.clone(), Rotating::Co)?;
                }
            }
            // counter-rotating: ket = b_a† b_b† x, lower state free of coupler quanta
            if opts.include_counter
                && coupler_occ(&x) == 0
                && x.0[a] + 1 < basis.dims()[a]
                && x.0[b] + 1 < basis.dims()[b]
            {
                let mut y = x.clone();
                y.0[a] += 1;
                y.0[b] += 1;
                if coupler_occ(&y) <= opts.max_coupler {
                    push(x.clone(), y, Rotating::Counter)?;
                }
            }
        }
    }
    out.sort_by(|p, q| {
        (p.rotating, p.channel, p.modes, basis.index_of(&p.bra), basis.index_of(&p.ket))
            .cmp(&(q.rotating, q.channel, q.modes, basis.index_of(&q.bra), basis.index_of(&q.ket)))
    });
    Ok(out)
}

fn qubit_channel_strength(
    p: &crate::statics::EffectiveQQParams,
    bra: &BareState,
    ket: &BareState,
    a: usize,
    b: usize,
    c: u32,
    direct: f64,
) -> (f64, Option<EffectiveCoupling>) {
    let pair = |s: &BareState| (s.0[a], s.0[b]);
    let mut key = [pair(bra), pair(ket)];
    key.sort();
    match key {
        [(0, 1), (1, 0)] => (p.j_tilde_12, Some(EffectiveCoupling::SingleExcitation)),
        [(0, 2), (1, 1)] => (p.j_tilde_101_002, Some(EffectiveCoupling::ToSecondQubitDouble)),
        [(1, 1), (2, 0)] => (p.j_tilde_101_200, Some(EffectiveCoupling::ToFirstQubitDouble)),
        _ => ((c as f64).sqrt() * direct, None),
    }
}

/// The (qubit a, coupler c, qubit b) subsystem with its three couplings.
pub(crate) fn three_mode_view(system: &SystemSpec, a: usize, c: usize, b: usize) -> Result<SystemSpec> {
    let m = system.modes();
    let modes = vec![m[a].clone(), m[c].clone(), m[b].clone()];
    let mut couplings = Vec::new();
    for (x, y) in [(a, c), (c, b), (a, b)] {
        couplings.push(crate::model::CouplingSpec::new(
            &m[x].label,
            &m[y].label,
            system.coupling_strength(x, y),
        ));
    }
    SystemSpec::new(modes, couplings)
}

/// The nine primary transitions of two directly coupled transmons.
pub fn catalog_qq(system: &SystemSpec) -> Result<Vec<TransitionEntry>> {
    if system.n_modes() != 2 {
        return Err(Error::InvalidArgument("expected a two-mode system".into()));
    }
    catalog(system, CatalogOptions::qubit_qubit())
}

/// Co- and counter-rotating transitions of a qubit-coupler-qubit circuit.
pub fn catalog_qcq(system: &SystemSpec) -> Result<Vec<TransitionEntry>> {
    Triple::of(system)?;
    if system.n_modes() != 3 {
        return Err(Error::InvalidArgument("expected a three-mode system".into()));
    }
    catalog(system, CatalogOptions::qubit_coupler_qubit())
}

/// Finds the catalogue row joining two labeled states.
pub fn find_transition<'a>(entries: &'a [TransitionEntry], a: &str, b: &str) -> Result<&'a TransitionEntry> {
    let sa = BareState::parse(a)?;
    let sb = BareState::parse(b)?;
    entries
        .iter()
        .find(|e| e.involves(&sa, &sb))
        .ok_or_else(|| Error::UnknownState(format!("no catalogued transition {a}<->{b}")))
}
