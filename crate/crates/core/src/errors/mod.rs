//! Population-error budgets: every catalogued transition and harmonic is
//! treated as an independent off-resonant Rabi channel during the target
//! pulse.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{BareState, DriveSpec, ModeRole, SystemSpec};
use crate::sidebands::{
    coupler_mod_strength, default_taylor_order, harmonic_from_taylor, qubit_mod_strength, Channel, Derivatives,
    Rotating, TransitionEntry,
};
use crate::special::bessel_j;
use crate::statics::{dressed_qubit_function, exact_dressed_spectrum, Triple};

/// Length of the target pulse in units of its own exchange period.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pulse {
    #[default]
    Pi,
    HalfPi,
    TwoPi,
}

impl Pulse {
    /// Duration for a target of strength g_t.
    pub fn duration(&self, target_strength: f64) -> f64 {
        let pi = std::f64::consts::PI;
        match self {
            Pulse::Pi => pi / (2.0 * target_strength),
            Pulse::HalfPi => pi / (4.0 * target_strength),
            Pulse::TwoPi => pi / target_strength,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DetuningModel {
    /// Labeled exact eigenenergies, plus the mean Stark shift under coupler drive.
    Dressed,
    /// Bare energies.
    Bare,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BudgetOptions {
    /// Harmonics |n| ≤ this are summed.
    pub harmonics: i32,
    pub pulse: Pulse,
    pub detunings: DetuningModel,
    pub derivatives: Derivatives,
    /// Drive amplitude seen by transitions that do not involve the driven
    /// mode, as a fraction of the applied amplitude; 0 drops them.
    pub indirect_ratio: f64,
}

impl Default for BudgetOptions {
    fn default() -> Self {
        BudgetOptions {
            harmonics: 15,
            pulse: Pulse::Pi,
            detunings: DetuningModel::Dressed,
            derivatives: Derivatives::FiniteDifference,
            indirect_ratio: 0.0,
        }
    }
}

/// Error channel (transition i, harmonic n).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Contribution {
    pub transition: String,
    pub rotating: Rotating,
    pub channel: Channel,
    pub harmonic: i32,
    /// g_eff, rad/s
    pub strength: f64,
    /// Δ_{i,n}, rad/s
    pub detuning: f64,
    pub error: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorBudget {
    pub target: TransitionEntry,
    pub target_harmonic: i32,
    #[serde(skip)]
    pub drive: DriveSpec,
    /// g_t, rad/s
    pub target_strength: f64,
    /// s
    pub duration: f64,
    pub contributions: Vec<Contribution>,
    pub total_error: f64,
    pub total_bound: f64,
}

impl ErrorBudget {
    pub fn total_for(&self, rotating: Rotating) -> (f64, f64) {
        self.contributions
            .iter()
            .filter(|c| c.rotating == rotating)
            .fold((0.0, 0.0), |a, c| (a.0 + c.error, a.1 + c.bound))
    }

    /// (error, bound) summed per transition label.
    pub fn per_transition(&self) -> BTreeMap<String, (f64, f64)> {
        let mut out: BTreeMap<String, (f64, f64)> = BTreeMap::new();
        for c in &self.contributions {
            let e = out.entry(c.transition.clone()).or_default();
            e.0 += c.error;
            e.1 += c.bound;
        }
        out
    }

    pub fn per_channel(&self) -> BTreeMap<Channel, (f64, f64)> {
        let mut out: BTreeMap<Channel, (f64, f64)> = BTreeMap::new();
        for c in &self.contributions {
            let e = out.entry(c.channel).or_default();
            e.0 += c.error;
            e.1 += c.bound;
        }
        out
    }
}

/// (2g)²/((2g)² + Δ²) sin²(Ω t / 2) and the Lorentzian factor alone.
pub fn channel_error(strength: f64, detuning: f64, duration: f64) -> (f64, f64) {
    let g2 = (2.0 * strength).powi(2);
    let om2 = g2 + detuning * detuning;
    if om2 == 0.0 {
        return (0.0, 0.0);
    }
    let bound = g2 / om2;
    let s = (0.5 * om2.sqrt() * duration).sin();
    (bound * s * s, bound)
}

fn driven_mode(system: &SystemSpec, drive: &DriveSpec) -> Result<usize> {
    drive.validate(system)
}

/// Mean frequency shift of each qubit over the coupler swing.
fn stark_shifts(system: &SystemSpec, amplitude: f64, how: Derivatives) -> Result<Vec<f64>> {
    let mut shifts = vec![0.0; system.n_modes()];
    let t = Triple::of(system)?;
    let x = system.modes()[t.c].frequency;
    for (first, q) in [(true, t.q1), (false, t.q2)] {
        let f = dressed_qubit_function(system, t, first);
        shifts[q] = harmonic_from_taylor(&f, x, 0, amplitude, default_taylor_order(0), how)? - f.value(x)?;
    }
    Ok(shifts)
}

/// Static detuning of every entry under the chosen model.
pub fn entry_detunings(
    system: &SystemSpec,
    drive: &DriveSpec,
    entries: &[TransitionEntry],
    model: DetuningModel,
    how: Derivatives,
) -> Result<Vec<f64>> {
    let k = driven_mode(system, drive)?;
    match model {
        DetuningModel::Bare => Ok(entries
            .iter()
            .map(|e| system.bare_energy(&e.bra) - system.bare_energy(&e.ket))
            .collect()),
        DetuningModel::Dressed => {
            let spec = exact_dressed_spectrum(system)?;
            let shifts = if system.modes()[k].role == ModeRole::Coupler {
                stark_shifts(system, drive.amplitude, how)?
            } else {
                vec![0.0; system.n_modes()]
            };
            let shift_of = |s: &BareState| -> f64 { s.0.iter().zip(&shifts).map(|(&n, d)| n as f64 * d).sum() };
            entries
                .iter()
                .map(|e| {
                    Ok(spec.energy(&e.bra)? - spec.energy(&e.ket)? + shift_of(&e.bra) - shift_of(&e.ket))
                })
                .collect()
        }
    }
}

/// |g_eff^(n)| of one entry, or None when the drive leaves it untouched.
pub fn sideband_strength(
    system: &SystemSpec,
    drive: &DriveSpec,
    entry: &TransitionEntry,
    n: i32,
    opts: &BudgetOptions,
) -> Result<Option<f64>> {
    let k = driven_mode(system, drive)?;
    let touches = entry.modes.0 == k || entry.modes.1 == k;
    let coupler_drive = system.modes()[k].role == ModeRole::Coupler;
    if coupler_drive && entry.channel == Channel::Qubit {
        if let Some(which) = entry.effective {
            let m = n.unsigned_abs();
            let g = coupler_mod_strength(system, which, m, drive.amplitude, default_taylor_order(m), opts.derivatives)?;
            return Ok(Some(g.abs()));
        }
    }
    if touches {
        return Ok(Some(qubit_mod_strength(entry.base_strength, n, drive.amplitude, drive.frequency)?.abs()));
    }
    if opts.indirect_ratio > 0.0 {
        let x = opts.indirect_ratio * drive.modulation_index();
        return Ok(Some((entry.base_strength * bessel_j(n, x)).abs()));
    }
    Ok(None)
}

/// Error budget of a target (entry, harmonic n′) driven by `drive`.
pub fn population_error(
    system: &SystemSpec,
    entries: &[TransitionEntry],
    target: &TransitionEntry,
    target_harmonic: i32,
    drive: &DriveSpec,
    opts: &BudgetOptions,
) -> Result<ErrorBudget> {
    if opts.harmonics < 0 {
        return Err(Error::InvalidArgument("harmonic range must be non-negative".into()));
    }
    let g_t = sideband_strength(system, drive, target, target_harmonic, opts)?.unwrap_or(0.0);
    if !(g_t > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "target {} has zero strength at harmonic {target_harmonic}",
            target.label()
        )));
    }
    let duration = opts.pulse.duration(g_t);
    let detunings = entry_detunings(system, drive, entries, opts.detunings, opts.derivatives)?;
    let mut contributions = Vec::new();
    for (e, &det) in entries.iter().zip(&detunings) {
        let is_target = e.bra == target.bra && e.ket == target.ket;
        for n in -opts.harmonics..=opts.harmonics {
            if is_target && n == target_harmonic {
                continue;
            }
            let Some(g) = sideband_strength(system, drive, e, n, opts)? else {
                break;
            };
            let d = det + n as f64 * drive.frequency;
            let (error, bound) = channel_error(g, d, duration);
            contributions.push(Contribution {
                transition: e.label(),
                rotating: e.rotating,
                channel: e.channel,
                harmonic: n,
                strength: g,
                detuning: d,
                error,
                bound,
            });
        }
    }
    let total_error = contributions.iter().map(|c| c.error).sum();
    let total_bound = contributions.iter().map(|c| c.bound).sum();
    Ok(ErrorBudget {
        target: target.clone(),
        target_harmonic,
        drive: drive.clone(),
        target_strength: g_t,
        duration,
        contributions,
        total_error,
        total_bound,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarmonicShare {
    pub error: f64,
    pub bound: f64,
    /// Transition with the largest error at this harmonic.
    pub dominant: String,
}

/// Contributions regrouped by harmonic order.
pub fn per_harmonic_breakdown(budget: &ErrorBudget) -> BTreeMap<i32, HarmonicShare> {
    let mut out: BTreeMap<i32, (HarmonicShare, f64)> = BTreeMap::new();
    for c in &budget.contributions {
        let e = out.entry(c.harmonic).or_insert_with(|| {
            (
                HarmonicShare {
                    error: 0.0,
                    bound: 0.0,
                    dominant: c.transition.clone(),
                },
                f64::NEG_INFINITY,
            )
        });
        e.0.error += c.error;
        e.0.bound += c.bound;
        if c.error > e.1 {
            e.1 = c.error;
            e.0.dominant = c.transition.clone();
        }
    }
    out.into_iter().map(|(n, (s, _))| (n, s)).collect()
}

/// Drive frequency that puts the target on resonance at harmonic n′.
pub fn target_resonance(
    system: &SystemSpec,
    drive: &DriveSpec,
    target: &TransitionEntry,
    target_harmonic: i32,
    opts: &BudgetOptions,
) -> Result<f64> {
    if target_harmonic == 0 {
        return Err(Error::InvalidArgument("a resonance needs a nonzero harmonic".into()));
    }
    let det = entry_detunings(system, drive, std::slice::from_ref(target), opts.detunings, opts.derivatives)?[0];
    let w = -det / target_harmonic as f64;
    if !(w > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "harmonic {target_harmonic} of {} needs a negative drive frequency",
            target.label()
        )));
    }
    Ok(w)
}

/// One point of [`error_vs_resonance_sweep`].
#[derive(Clone, Debug, Serialize)]
pub struct SweepPoint {
    pub knob: f64,
    /// Target resonance, rad/s.
    pub resonance: f64,
    /// Re-solved drive amplitude, rad/s.
    pub amplitude: f64,
    /// Achieved 2g of the target, rad/s.
    pub target_gap: f64,
    pub total_bound: f64,
    pub per_transition: BTreeMap<String, f64>,
    pub per_channel: BTreeMap<Channel, f64>,
}

fn solve_amplitude(f: impl Fn(f64) -> Result<f64>, goal: f64, hi: f64) -> Result<f64> {
    // first root of f(ε) = goal on (0, hi], f increasing from 0 there
    let steps = 200;
    let mut prev = (0.0, f(0.0)? - goal);
    for k in 1..=steps {
        let x = hi * k as f64 / steps as f64;
        let v = f(x)? - goal;
        if prev.1 < 0.0 && v >= 0.0 {
            let (mut a, mut b) = (prev.0, x);
            for _ in 0..100 {
                let m = 0.5 * (a + b);
                if f(m)? - goal < 0.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            return Ok(0.5 * (a + b));
        }
        prev = (x, v);
    }
    Err(Error::Unsatisfiable(format!(
        "target strength {:.4} MHz unreachable below ε/2π = {:.4} MHz",
        crate::units::to_mhz(goal),
        crate::units::to_mhz(hi)
    )))
}

/// Bound budget while a knob moves the target resonance and the drive
/// amplitude is re-solved so the target keeps 2g = `target_gap`.
#[allow(clippy::too_many_arguments)]
pub fn error_vs_resonance_sweep<K>(
    knob: K,
    grid: &[f64],
    target_labels: (&str, &str),
    target_harmonic: i32,
    template: &DriveSpec,
    target_gap: f64,
    catalog: impl Fn(&SystemSpec) -> Result<Vec<TransitionEntry>>,
    opts: &BudgetOptions,
) -> Result<Vec<SweepPoint>>
where
    K: Fn(f64) -> Result<SystemSpec>,
{
    let goal = 0.5 * target_gap;
    let mut out = Vec::with_capacity(grid.len());
    for &x in grid {
        let system = knob(x)?;
        let entries = catalog(&system)?;
        let target = crate::sidebands::find_transition(&entries, target_labels.0, target_labels.1)?.clone();
        let k = driven_mode(&system, template)?;
        let coupler_drive = system.modes()[k].role == ModeRole::Coupler;
        let (amplitude, resonance) = if coupler_drive {
            let t = Triple::of(&system)?;
            let which = target
                .effective
                .ok_or_else(|| Error::InvalidArgument("coupler drive needs a coupler-mediated target".into()))?;
            let pole = crate::statics::effective_coupling_function(&system, t, which).pole_distance(system.modes()[t.c].frequency);
            let m = target_harmonic.unsigned_abs();
            let f = |e: f64| {
                Ok(coupler_mod_strength(&system, which, m, e, default_taylor_order(m), opts.derivatives)?.abs())
            };
            let eps = solve_amplitude(f, goal, 0.9 * pole)?;
            let w = target_resonance(&system, &template.with_amplitude(eps), &target, target_harmonic, opts)?;
            (eps, w)
        } else {
            let w = target_resonance(&system, template, &target, target_harmonic, opts)?;
            let f = |e: f64| Ok(qubit_mod_strength(target.base_strength, target_harmonic, e * w, w)?.abs());
            // first lobe of the Bessel function
            let ratio = solve_amplitude(f, goal, 1.84 + 1.2 * (target_harmonic.unsigned_abs() as f64 - 1.0).max(0.0))?;
            (ratio * w, w)
        };
        let drive = template.with_frequency(resonance).with_amplitude(amplitude);
        let budget = population_error(&system, &entries, &target, target_harmonic, &drive, opts)?;
        out.push(SweepPoint {
            knob: x,
            resonance,
            amplitude,
            target_gap: 2.0 * budget.target_strength,
            total_bound: budget.total_bound,
            per_transition: budget.per_transition().into_iter().map(|(k, v)| (k, v.1)).collect(),
            per_channel: budget.per_channel().into_iter().map(|(k, v)| (k, v.1)).collect(),
        });
    }
    Ok(out)
}
