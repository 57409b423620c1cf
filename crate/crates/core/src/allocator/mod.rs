//! Frequency allocation as a constraint problem.
//!
//! Every "much greater than" design rule becomes a ratio constraint with a
//! configurable margin. The bare-parameter stage runs a branch-and-prune
//! search over the decision box: resonance equalities fix each drive
//! frequency, so all detuning expressions are affine in the decision
//! variables and their ranges over a box are exact. A second stage
//! re-evaluates everything with dressed energies.

mod check;
mod constraints;
mod expr;
mod file;
mod problem;
mod search;
mod smt;
mod spot;

pub use check::{check, Assignment, CheckReport, ConstraintReport, EnergyModel};
pub use constraints::{encode_constraints, Constraint, ConstraintKind, ConstraintSet};
pub use expr::{Affine, Interval};
pub use file::{ProblemFile, TargetEntry, VariableEntry};
pub use problem::{AllocationProblem, Amplitude, Objective, Quantity, Target, Variable};
pub use smt::export_smt;
pub use spot::{floquet_spot_check, CrossCheck, SpotCheck, SpotCheckOptions, SpotPoint};

use serde::Serialize;

use crate::error::{Error, Result};
use check::{check_at_margin, detunings};
use search::{unsatisfiable, Outcome, Searcher};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Bare,
    Refined,
}

#[derive(Clone, Debug, Serialize)]
pub struct AllocationSolution {
    pub stage: Stage,
    pub assignment: Assignment,
    pub worst_margin: f64,
    /// Every row passes at the assignment under the stage's energy model.
    pub satisfied: bool,
    pub report: CheckReport,
    /// Boxes visited by the search.
    pub boxes: usize,
    /// Change of each ω_p made by refinement, rad/s.
    pub drive_shift: Vec<f64>,
}

fn domain(problem: &AllocationProblem) -> Vec<Interval> {
    problem.variables.iter().map(|v| Interval::new(v.lo, v.hi)).collect()
}

/// Bare-energy stage: a point of the decision box where every row holds.
pub fn solve(problem: &AllocationProblem) -> Result<AllocationSolution> {
    let set = encode_constraints(problem)?;
    solve_encoded(problem, &set)
}

pub fn solve_encoded(problem: &AllocationProblem, set: &ConstraintSet) -> Result<AllocationSolution> {
    let mut searcher = Searcher::new(problem, set, domain(problem), None);
    let x = match searcher.feasible(problem.margin) {
        Outcome::Found(x) => x,
        other => return Err(unsatisfiable(problem, set, other)),
    };
    let x = match problem.objective {
        Objective::None => x,
        Objective::MaxWorstMargin => {
            let mut best = x;
            let mut lo = searcher.worst_ratio(&best).max(problem.margin);
            let mut hi = searcher.ratio_ceiling();
            let mut iterations = 0;
            while hi.is_finite() && hi > lo * (1.0 + 1e-3) && iterations < 40 {
                iterations += 1;
                let mid = (lo * hi).sqrt();
                match searcher.feasible(mid) {
                    Outcome::Found(x) => {
                        lo = searcher.worst_ratio(&x).max(mid);
                        best = x;
                    }
                    _ => hi = mid,
                }
            }
            best
        }
        Objective::MinBound => searcher.min_bound(problem.margin, x),
    };
    let assignment = searcher.assignment(x);
    let report = check(problem, set, &assignment, EnergyModel::Bare)?;
    if !report.satisfied {
        let rows: Vec<&str> = report.violated().map(|r| r.label.as_str()).collect();
        return Err(Error::Unsatisfiable(format!(
            "search point failed verification: {}",
            rows.join("; ")
        )));
    }
    Ok(AllocationSolution {
        stage: Stage::Bare,
        worst_margin: report.worst_margin,
        satisfied: true,
        report,
        boxes: searcher.boxes,
        drive_shift: vec![0.0; problem.targets.len()],
        assignment,
    })
}

/// Dressed-energy stage: drive frequencies move to the dressed resonances;
/// with a nonzero trust radius the mode frequencies may move as well, using
/// the dressed-minus-bare shifts at the current point as constant offsets.
pub fn refine_with_dressed(problem: &AllocationProblem, solution: &AllocationSolution) -> Result<AllocationSolution> {
    let set = encode_constraints(problem)?;
    refine_encoded(problem, &set, solution)
}

pub fn refine_encoded(
    problem: &AllocationProblem,
    set: &ConstraintSet,
    solution: &AllocationSolution,
) -> Result<AllocationSolution> {
    const ROUNDS: usize = 5;
    let start = solution.assignment.clone();
    let mut x = start.values.clone();
    let mut boxes = 0;
    let mut last = None;
    for _ in 0..ROUNDS {
        let (assignment, offsets) = dressed_point(problem, set, &x, &start)?;
        let report = check(problem, set, &assignment, EnergyModel::Dressed)?;
        if report.satisfied || problem.trust_radius <= 0.0 {
            return Ok(refined(&start, assignment, report, boxes));
        }
        let trust: Vec<Interval> = problem
            .variables
            .iter()
            .zip(&x)
            .map(|(v, &c)| {
                let r = if v.quantity == Quantity::Frequency { problem.trust_radius } else { 0.0 };
                Interval::new((c - r).max(v.lo), (c + r).min(v.hi))
            })
            .collect();
        let mut searcher = Searcher::new(problem, set, trust, Some(&offsets));
        let found = searcher.feasible(problem.margin);
        boxes += searcher.boxes;
        last = Some((assignment, report));
        match found {
            Outcome::Found(next) => x = next,
            _ => break,
        }
    }
    let (assignment, report) = match last {
        Some(v) => v,
        None => {
            let (a, _) = dressed_point(problem, set, &x, &start)?;
            let r = check(problem, set, &a, EnergyModel::Dressed)?;
            (a, r)
        }
    };
    Ok(refined(&start, assignment, report, boxes))
}

fn refined(
    start: &Assignment,
    assignment: Assignment,
    report: CheckReport,
    boxes: usize,
) -> AllocationSolution {
    AllocationSolution {
        stage: Stage::Refined,
        worst_margin: report.worst_margin,
        satisfied: report.satisfied,
        drive_shift: assignment
            .drive_frequencies
            .iter()
            .zip(&start.drive_frequencies)
            .map(|(a, b)| a - b)
            .collect(),
        report,
        boxes,
        assignment,
    }
}

/// Dressed resonance drive frequencies at `x` and the dressed-minus-bare
/// detuning offsets per target and catalog row.
fn dressed_point(
    problem: &AllocationProblem,
    set: &ConstraintSet,
    x: &[f64],
    previous: &Assignment,
) -> Result<(Assignment, Vec<Vec<f64>>)> {
    // Stark shifts depend on ε, which may follow ω_p; iterate to a fixed point.
    let mut wp = previous.drive_frequencies.clone();
    let mut dressed = Vec::new();
    for _ in 0..4 {
        let a = Assignment {
            values: x.to_vec(),
            drive_frequencies: wp.clone(),
        };
        dressed = detunings(problem, set, &a, EnergyModel::Dressed)?;
        let next: Vec<f64> = problem
            .targets
            .iter()
            .enumerate()
            .map(|(k, t)| -dressed[k][set.target_rows[k]] / t.harmonic as f64)
            .collect();
        let moved = next.iter().zip(&wp).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        wp = next;
        if moved < 1e-3 * problem.resonance_tolerance {
            break;
        }
    }
    let assignment = Assignment {
        values: x.to_vec(),
        drive_frequencies: wp,
    };
    let bare = detunings(problem, set, &assignment, EnergyModel::Bare)?;
    let offsets = dressed
        .iter()
        .zip(&bare)
        .map(|(d, b)| d.iter().zip(b).map(|(d, b)| d - b).collect())
        .collect();
    Ok((assignment, offsets))
}

/// Check at an arbitrary margin; used to probe relaxation monotonicity.
pub fn check_with_margin(
    problem: &AllocationProblem,
    set: &ConstraintSet,
    assignment: &Assignment,
    model: EnergyModel,
    margin: f64,
) -> Result<CheckReport> {
    check_at_margin(problem, set, assignment, model, margin)
}
