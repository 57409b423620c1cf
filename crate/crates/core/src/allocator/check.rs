use std::collections::BTreeMap;

use serde::Serialize;

use super::constraints::{row_strength, ConstraintKind, ConstraintSet};
use super::problem::AllocationProblem;
use crate::error::Result;
use crate::errors::{entry_detunings, DetuningModel};
use crate::model::DriveSpec;
use crate::sidebands::Derivatives;
use crate::statics::{static_zz, ZzMethod};

/// Values of the decision variables and one drive frequency per target, rad/s.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Assignment {
    pub values: Vec<f64>,
    pub drive_frequencies: Vec<f64>,
}

impl Assignment {
    pub fn extended(&self) -> Vec<f64> {
        self.values.iter().chain(&self.drive_frequencies).copied().collect()
    }

    pub fn named(&self, problem: &AllocationProblem) -> BTreeMap<String, f64> {
        let mut out = BTreeMap::new();
        for (k, v) in self.values.iter().enumerate() {
            out.insert(problem.variable_name(k), *v);
        }
        for (k, v) in self.drive_frequencies.iter().enumerate() {
            out.insert(problem.drive_name(k), *v);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EnergyModel {
    Bare,
    Dressed,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstraintReport {
    pub kind: ConstraintKind,
    pub label: String,
    /// Left-hand value: residual, ω_p, |Δ + mω_p|, |ζ| or the variable, rad/s.
    pub value: f64,
    /// Threshold the value is compared with, rad/s.
    pub required: f64,
    /// Achieved ratio value/strength for "much greater than" rows.
    pub ratio: Option<f64>,
    pub pass: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub rows: Vec<ConstraintReport>,
    /// Smallest achieved ratio over the margin and parametric-limit rows.
    pub worst_margin: f64,
    pub satisfied: bool,
}

impl CheckReport {
    pub fn violated(&self) -> impl Iterator<Item = &ConstraintReport> {
        self.rows.iter().filter(|r| !r.pass)
    }
}

/// Detunings E(bra) − E(ket) of every catalog row under each target tone.
pub(crate) fn detunings(
    problem: &AllocationProblem,
    set: &ConstraintSet,
    assignment: &Assignment,
    model: EnergyModel,
) -> Result<Vec<Vec<f64>>> {
    let x = assignment.extended();
    match model {
        EnergyModel::Bare => {
            let row: Vec<f64> = set
                .catalog
                .iter()
                .map(|e| super::constraints::detuning_affine(problem, e, set.width).eval(&x))
                .collect();
            Ok(vec![row; problem.targets.len()])
        }
        EnergyModel::Dressed => {
            let system = problem.system_at(&assignment.values)?;
            problem
                .targets
                .iter()
                .zip(&assignment.drive_frequencies)
                .map(|(t, &wp)| {
                    let drive = DriveSpec::new(&t.drive, t.amplitude.at(wp), wp.max(f64::MIN_POSITIVE));
                    entry_detunings(&system, &drive, &set.catalog, DetuningModel::Dressed, Derivatives::FiniteDifference)
                })
                .collect()
        }
    }
}

/// Evaluates every row at `assignment`; margins use `problem.margin`.
pub fn check(
    problem: &AllocationProblem,
    set: &ConstraintSet,
    assignment: &Assignment,
    model: EnergyModel,
) -> Result<CheckReport> {
    check_at_margin(problem, set, assignment, model, problem.margin)
}

pub(crate) fn check_at_margin(
    problem: &AllocationProblem,
    set: &ConstraintSet,
    assignment: &Assignment,
    model: EnergyModel,
    margin: f64,
) -> Result<CheckReport> {
    let system = problem.system_at(&assignment.values)?;
    let entries = problem.catalog(&system)?;
    let det = detunings(problem, set, assignment, model)?;
    let wp = &assignment.drive_frequencies;
    let mut rows = Vec::with_capacity(set.constraints.len());
    let mut worst = f64::INFINITY;
    for c in &set.constraints {
        let mut report = ConstraintReport {
            kind: c.kind,
            label: c.label.clone(),
            value: f64::NAN,
            required: f64::NAN,
            ratio: None,
            pass: false,
            error: None,
        };
        match c.kind {
            ConstraintKind::ResonanceEquality => {
                let k = c.target.expect("resonance rows carry a target");
                let d = det[k][set.target_rows[k]];
                report.value = wp[k] + d / problem.targets[k].harmonic as f64;
                report.required = problem.resonance_tolerance;
                report.pass = report.value.abs() <= report.required;
            }
            ConstraintKind::ParametricLimit | ConstraintKind::DetuningMargin => {
                let k = c.target.expect("strength rows carry a target");
                report.value = match c.kind {
                    ConstraintKind::ParametricLimit => wp[k],
                    _ => {
                        let i = c.transition.expect("margin rows carry a transition");
                        (det[k][i] + c.harmonic.expect("margin rows carry a harmonic") as f64 * wp[k]).abs()
                    }
                };
                match row_strength(problem, set, c, &system, &entries, wp) {
                    Ok(g) => {
                        report.required = margin * g;
                        let ratio = if g > 0.0 { report.value / g } else { f64::INFINITY };
                        report.ratio = Some(ratio);
                        report.pass = report.value >= report.required;
                        worst = worst.min(ratio);
                    }
                    Err(e) => {
                        report.error = Some(e.to_string());
                        worst = worst.min(0.0);
                    }
                }
            }
            ConstraintKind::ZzCap => {
                let cap = problem.zz_cap.expect("zz row present only with a cap");
                report.required = cap;
                match static_zz(&system, ZzMethod::Exact) {
                    Ok(z) => {
                        report.value = z.abs();
                        report.pass = z.abs() <= cap;
                    }
                    Err(e) => report.error = Some(e.to_string()),
                }
            }
            ConstraintKind::BoxBound => {
                let v = c.variable.expect("box rows carry a variable");
                let var = &problem.variables[v];
                report.value = assignment.values[v];
                report.required = var.lo;
                report.pass = var.lo <= report.value && report.value <= var.hi;
            }
        }
        rows.push(report);
    }
    let satisfied = rows.iter().all(|r| r.pass);
    Ok(CheckReport {
        rows,
        worst_margin: worst,
        satisfied,
    })
}
