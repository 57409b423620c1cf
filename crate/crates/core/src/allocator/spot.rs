use serde::Serialize;

use super::constraints::{ConstraintKind, ConstraintSet};
use super::problem::AllocationProblem;
use super::AllocationSolution;
use crate::error::{Error, Result};
use crate::floquet::{sampled_floquet, FloquetOptions};
use crate::model::DriveSpec;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpotCheckOptions {
    /// Half-width of the frequency window around each ω_p, rad/s.
    pub window: f64,
    /// Drive frequencies per window, ends included.
    pub points: usize,
    /// Samples per period for the harmonic angles.
    pub samples: usize,
    /// Allowed ratio between the measured gap and |Δ|/margin.
    pub slack: f64,
    pub floquet: FloquetOptions,
}

impl Default for SpotCheckOptions {
    fn default() -> Self {
        SpotCheckOptions {
            window: crate::units::mhz(5.0),
            points: 5,
            samples: 64,
            slack: 1.5,
            floquet: FloquetOptions::default(),
        }
    }
}

/// Largest parasitic angle at one drive frequency.
#[derive(Clone, Debug, Serialize)]
pub struct SpotPoint {
    pub target: usize,
    /// rad/s
    pub frequency: f64,
    pub transition: Option<String>,
    pub harmonic: Option<i32>,
    pub angle: Option<f64>,
    pub error: Option<String>,
}

/// Measured gap of one constrained (transition, harmonic) at ω_p.
#[derive(Clone, Debug, Serialize)]
pub struct CrossCheck {
    pub target: usize,
    pub transition: String,
    pub harmonic: i32,
    /// |Δ + mω_p| of the solution report, rad/s.
    pub detuning: f64,
    /// |Δ| tan θ_m, rad/s.
    pub measured_gap: f64,
    /// slack · |Δ| / margin, rad/s.
    pub allowed: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpotCheck {
    pub points: Vec<SpotPoint>,
    pub cross: Vec<CrossCheck>,
    /// Largest angle over all points; infinity when a point failed.
    pub max_angle: f64,
}

impl SpotCheck {
    pub fn passes(&self, limit: f64) -> bool {
        self.max_angle <= limit && self.cross.iter().all(|c| c.pass)
    }
}

/// Floquet collision angles of every catalogued transition other than the
/// target over a window around each target's operating point, plus the
/// measured-gap cross-check of the margin rows at ω_p.
pub fn floquet_spot_check(
    problem: &AllocationProblem,
    set: &ConstraintSet,
    solution: &AllocationSolution,
    opts: &SpotCheckOptions,
) -> Result<SpotCheck> {
    if opts.points == 0 {
        return Err(Error::InvalidArgument("spot check needs at least one point".into()));
    }
    let system = problem.system_at(&solution.assignment.values)?;
    let mut points = Vec::new();
    let mut cross = Vec::new();
    let mut max_angle = 0.0f64;
    for (k, t) in problem.targets.iter().enumerate() {
        let wp = solution.assignment.drive_frequencies[k];
        let row = set.target_rows[k];
        let count = opts.points.max(1);
        for j in 0..count {
            let w = if count == 1 {
                wp
            } else {
                wp - opts.window + 2.0 * opts.window * j as f64 / (count - 1) as f64
            };
            let drive = DriveSpec::new(&t.drive, t.amplitude.at(w), w);
            let centre = count == 1 || 2 * j + 1 == count;
            let sf = match sampled_floquet(&system, &drive, opts.samples, &opts.floquet) {
                Ok(sf) => sf,
                Err(e @ Error::TrackingAmbiguity { .. }) => {
                    max_angle = f64::INFINITY;
                    points.push(SpotPoint {
                        target: k,
                        frequency: w,
                        transition: None,
                        harmonic: None,
                        angle: None,
                        error: Some(e.to_string()),
                    });
                    continue;
                }
                Err(e) => return Err(e),
            };
            let mut worst: Option<(String, i32, f64)> = None;
            for (i, e) in set.catalog.iter().enumerate() {
                if i == row {
                    continue;
                }
                let pa = sf.pair_angles(&e.bra, &e.ket)?;
                let (n, th) = pa.max();
                if worst.as_ref().map_or(true, |w| th > w.2) {
                    worst = Some((e.label(), n, th));
                }
                if centre {
                    for (c, r) in set.constraints.iter().zip(&solution.report.rows) {
                        if c.kind != ConstraintKind::DetuningMargin || c.target != Some(k) || c.transition != Some(i) {
                            continue;
                        }
                        let m = c.harmonic.expect("margin rows carry a harmonic");
                        let th = pa.at(m).unwrap_or(0.0);
                        let measured = r.value * th.tan();
                        let allowed = opts.slack * r.value / problem.margin;
                        cross.push(CrossCheck {
                            target: k,
                            transition: e.label(),
                            harmonic: m,
                            detuning: r.value,
                            measured_gap: measured,
                            allowed,
                            pass: measured <= allowed,
                        });
                    }
                }
            }
            if let Some((_, _, th)) = &worst {
                max_angle = max_angle.max(*th);
            }
            points.push(SpotPoint {
                target: k,
                frequency: w,
                transition: worst.as_ref().map(|w| w.0.clone()),
                harmonic: worst.as_ref().map(|w| w.1),
                angle: worst.as_ref().map(|w| w.2),
                error: None,
            });
        }
    }
    Ok(SpotCheck {
        points,
        cross,
        max_angle,
    })
}
