use serde::Serialize;

use super::expr::Affine;
use super::problem::{AllocationProblem, Amplitude, Quantity};
use crate::error::{Error, Result};
use crate::model::{BareState, SystemSpec};
use crate::sidebands::{coupler_mod_strength, default_taylor_order, Channel, Derivatives, TransitionEntry};
use crate::special::bessel_j;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstraintKind {
    ResonanceEquality,
    ParametricLimit,
    DetuningMargin,
    ZzCap,
    BoxBound,
}

/// One row of the constraint system. `lhs` is written over the extended
/// vector (decision variables, then one ω_p per target) with bare energies.
#[derive(Clone, Debug, Serialize)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub label: String,
    pub target: Option<usize>,
    /// Catalog row of the transition involved.
    pub transition: Option<usize>,
    pub harmonic: Option<i32>,
    pub variable: Option<usize>,
    pub lhs: Affine,
    /// Right-hand strength when it does not depend on the decision variables.
    pub fixed_strength: Option<f64>,
}

/// Constraints together with the catalog they index into.
#[derive(Clone, Debug)]
pub struct ConstraintSet {
    pub catalog: Vec<TransitionEntry>,
    /// Catalog row of each target.
    pub target_rows: Vec<usize>,
    pub constraints: Vec<Constraint>,
    /// Width of the extended vector.
    pub width: usize,
}

impl ConstraintSet {
    pub fn count(&self, kind: ConstraintKind) -> usize {
        self.constraints.iter().filter(|c| c.kind == kind).count()
    }

    /// Distinct (driven mode, parasitic transition) families of margin rows.
    pub fn margin_families(&self, problem: &AllocationProblem) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = Vec::new();
        for c in &self.constraints {
            if c.kind != ConstraintKind::DetuningMargin {
                continue;
            }
            let key = (
                problem.targets[c.target.expect("margin rows carry a target")].drive.clone(),
                self.catalog[c.transition.expect("margin rows carry a transition")].label(),
            );
            if !out.contains(&key) {
                out.push(key);
            }
        }
        out
    }
}

/// Bare energy of a state as an affine form over the extended vector.
pub(crate) fn energy_affine(problem: &AllocationProblem, state: &BareState, width: usize) -> Affine {
    let mut a = Affine::constant(0.0, width);
    for (mode, spec) in problem.template.modes().iter().enumerate() {
        let n = state.0[mode] as f64;
        let pair = 0.5 * n * (n - 1.0);
        let var = |q: Quantity| problem.variables.iter().position(|v| v.mode == mode && v.quantity == q);
        match var(Quantity::Frequency) {
            Some(k) => a.coefficients[k] += n,
            None => a.constant += n * spec.frequency,
        }
        match var(Quantity::Anharmonicity) {
            Some(k) => a.coefficients[k] += pair,
            None => a.constant += pair * spec.anharmonicity,
        }
    }
    a
}

pub(crate) fn detuning_affine(problem: &AllocationProblem, entry: &TransitionEntry, width: usize) -> Affine {
    energy_affine(problem, &entry.bra, width).plus(&energy_affine(problem, &entry.ket, width).scaled(-1.0))
}

fn touches(entry: &TransitionEntry, mode: usize) -> bool {
    entry.modes.0 == mode || entry.modes.1 == mode
}

/// Whether a catalog row is constrained under a given target tone.
fn relevant(problem: &AllocationProblem, target: usize, entry: &TransitionEntry) -> Result<bool> {
    let k = problem.template.mode_index(&problem.targets[target].drive)?;
    Ok(touches(entry, k)
        || (problem.is_coupler_drive(target)? && entry.channel == Channel::Qubit && entry.effective.is_some())
        || problem.indirect_ratio > 0.0)
}

fn strength_is_fixed(problem: &AllocationProblem, target: usize, entry: &TransitionEntry) -> Result<bool> {
    let ratio = matches!(problem.targets[target].amplitude, Amplitude::Ratio(_));
    let coupler_path = problem.is_coupler_drive(target)? && entry.channel == Channel::Qubit && entry.effective.is_some();
    Ok(ratio && !coupler_path && entry.effective.is_none())
}

/// |g^(m)| of a catalog row under a target tone at drive frequency `wp`.
pub(crate) fn sideband_strength(
    problem: &AllocationProblem,
    system: &SystemSpec,
    entries: &[TransitionEntry],
    target: usize,
    row: usize,
    m: i32,
    wp: f64,
) -> Result<f64> {
    let t = &problem.targets[target];
    let e = &entries[row];
    let k = system.mode_index(&t.drive)?;
    let eps = t.amplitude.at(wp);
    if problem.is_coupler_drive(target)? && e.channel == Channel::Qubit {
        if let Some(which) = e.effective {
            let order = m.unsigned_abs();
            return Ok(coupler_mod_strength(system, which, order, eps, default_taylor_order(order), Derivatives::FiniteDifference)?.abs());
        }
    }
    if !(wp > 0.0) {
        return Err(Error::Singularity(format!("drive frequency {wp:.3e} rad/s is not positive")));
    }
    let x = if touches(e, k) { eps / wp } else { problem.indirect_ratio * eps / wp };
    Ok((e.base_strength * bessel_j(m, x)).abs())
}

/// Right-hand strength of a row at a point.
pub(crate) fn row_strength(
    problem: &AllocationProblem,
    set: &ConstraintSet,
    c: &Constraint,
    system: &SystemSpec,
    entries: &[TransitionEntry],
    wp: &[f64],
) -> Result<f64> {
    if let Some(g) = c.fixed_strength {
        return Ok(g);
    }
    let k = c.target.expect("strength rows carry a target");
    match c.kind {
        ConstraintKind::ParametricLimit => Ok(entries[set.target_rows[k]].base_strength.abs()),
        ConstraintKind::DetuningMargin => sideband_strength(
            problem,
            system,
            entries,
            k,
            c.transition.expect("margin rows carry a transition"),
            c.harmonic.expect("margin rows carry a harmonic"),
            wp[k],
        ),
        _ => Err(Error::InvalidArgument(format!("row `{}` has no strength", c.label))),
    }
}

/// Constraint rows for every target: resonance equality, parametric limit,
/// and a detuning margin per parasitic (transition, harmonic); plus box
/// bounds and the optional ZZ cap.
pub fn encode_constraints(problem: &AllocationProblem) -> Result<ConstraintSet> {
    problem.validate()?;
    let nv = problem.variables.len();
    let width = nv + problem.targets.len();
    let catalog = problem.catalog(&problem.template)?;
    let mut target_rows = Vec::with_capacity(problem.targets.len());
    let mut constraints = Vec::new();
    for (k, t) in problem.targets.iter().enumerate() {
        let row = catalog
            .iter()
            .position(|e| e.bra == t.bra && e.ket == t.ket)
            .ok_or_else(|| {
                let flipped = catalog.iter().any(|e| e.bra == t.ket && e.ket == t.bra);
                Error::InvalidArgument(if flipped {
                    format!("target {} is listed as {}<->{} in the catalog; swap bra and ket", t.label(), t.ket.compact(), t.bra.compact())
                } else {
                    format!("target {} is not a catalogued transition", t.label())
                })
            })?;
        target_rows.push(row);
        let wp = Affine::variable(nv + k, width);
        let det_t = detuning_affine(problem, &catalog[row], width);
        constraints.push(Constraint {
            kind: ConstraintKind::ResonanceEquality,
            label: format!("{} = -(E_bra - E_ket)/({}) for {}", problem.drive_name(k), t.harmonic, t.label()),
            target: Some(k),
            transition: Some(row),
            harmonic: Some(t.harmonic),
            variable: None,
            lhs: wp.plus(&det_t.scaled(1.0 / t.harmonic as f64)),
            fixed_strength: None,
        });
        let fixed = catalog[row].effective.is_none();
        constraints.push(Constraint {
            kind: ConstraintKind::ParametricLimit,
            label: format!("{} >> g({})", problem.drive_name(k), t.label()),
            target: Some(k),
            transition: Some(row),
            harmonic: None,
            variable: None,
            lhs: wp.clone(),
            fixed_strength: fixed.then(|| catalog[row].base_strength.abs()),
        });
        for (i, e) in catalog.iter().enumerate() {
            if !relevant(problem, k, e)? {
                continue;
            }
            let det = detuning_affine(problem, e, width);
            let fixed = strength_is_fixed(problem, k, e)?;
            for m in -problem.harmonics..=problem.harmonics {
                if i == row && m == t.harmonic {
                    continue;
                }
                let fixed_strength = if fixed {
                    Some(sideband_strength(problem, &problem.template, &catalog, k, i, m, 1.0)?)
                } else {
                    None
                };
                constraints.push(Constraint {
                    kind: ConstraintKind::DetuningMargin,
                    label: format!("|D({}) {:+}*{}| >> g", e.label(), m, problem.drive_name(k)),
                    target: Some(k),
                    transition: Some(i),
                    harmonic: Some(m),
                    variable: None,
                    lhs: det.plus(&wp.scaled(m as f64)),
                    fixed_strength,
                });
            }
        }
    }
    if problem.zz_cap.is_some() {
        constraints.push(Constraint {
            kind: ConstraintKind::ZzCap,
            label: "|static ZZ| <= cap".into(),
            target: None,
            transition: None,
            harmonic: None,
            variable: None,
            lhs: Affine::constant(0.0, width),
            fixed_strength: None,
        });
    }
    for v in 0..nv {
        constraints.push(Constraint {
            kind: ConstraintKind::BoxBound,
            label: format!("{} in box", problem.variable_name(v)),
            target: None,
            transition: None,
            harmonic: None,
            variable: Some(v),
            lhs: Affine::variable(v, width),
            fixed_strength: None,
        });
    }
    Ok(ConstraintSet {
        catalog,
        target_rows,
        constraints,
        width,
    })
}
