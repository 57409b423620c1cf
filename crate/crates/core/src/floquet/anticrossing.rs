use serde::Serialize;

use super::angles::{AmplitudeRule, CollisionRecord};
use super::{floquet, FloquetOptions};
use crate::error::{Error, Result};
use crate::model::{BareState, DriveSpec, SystemSpec};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnticrossingOptions {
    /// Points of the coarse scan.
    pub grid: usize,
    /// Final bracket width on the knob, rad/s.
    pub tolerance: f64,
    pub floquet: FloquetOptions,
}

impl Default for AnticrossingOptions {
    fn default() -> Self {
        AnticrossingOptions {
            grid: 201,
            tolerance: crate::units::khz(1.0),
            floquet: FloquetOptions::default(),
        }
    }
}

/// Labeled-pair splitting along a knob.
#[derive(Clone, Debug, Serialize)]
pub struct SplittingScan {
    pub knob: Vec<f64>,
    /// None where labeling failed.
    pub splitting: Vec<Option<f64>>,
}

fn splitting<K>(knob: &K, x: f64, bra: &BareState, ket: &BareState, opts: &FloquetOptions) -> Result<f64>
where
    K: Fn(f64) -> Result<(SystemSpec, DriveSpec)>,
{
    let (system, drive) = knob(x)?;
    floquet(&system, &drive, opts)?.splitting(bra, ket)
}

impl SplittingScan {
    pub fn run<K>(knob: &K, bra: &BareState, ket: &BareState, points: &[f64], opts: &FloquetOptions) -> Result<Self>
    where
        K: Fn(f64) -> Result<(SystemSpec, DriveSpec)>,
    {
        let mut out = Vec::with_capacity(points.len());
        for &x in points {
            match splitting(knob, x, bra, ket, opts) {
                Ok(v) => out.push(Some(v)),
                Err(Error::TrackingAmbiguity { .. }) => out.push(None),
                Err(e) => return Err(e),
            }
        }
        Ok(SplittingScan {
            knob: points.to_vec(),
            splitting: out,
        })
    }
}

/// Minimum of the labeled-pair quasienergy splitting over `bracket` for a
/// generic one-parameter family of (system, drive).
pub fn find_anticrossing<K>(
    knob: K,
    bra: &BareState,
    ket: &BareState,
    bracket: (f64, f64),
    opts: &AnticrossingOptions,
) -> Result<CollisionRecord>
where
    K: Fn(f64) -> Result<(SystemSpec, DriveSpec)>,
{
    let (lo, hi) = bracket;
    if !(hi > lo) || opts.grid < 3 {
        return Err(Error::InvalidArgument("anticrossing bracket needs lo < hi and ≥ 3 points".into()));
    }
    let points: Vec<f64> = (0..opts.grid)
        .map(|k| lo + (hi - lo) * k as f64 / (opts.grid - 1) as f64)
        .collect();
    let scan = SplittingScan::run(&knob, bra, ket, &points, &opts.floquet)?;
    let best = scan
        .splitting
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i, v)))
        .fold(None, |acc: Option<(usize, f64)>, x| match acc {
            Some(b) if b.1 <= x.1 => Some(b),
            _ => Some(x),
        })
        .ok_or_else(|| Error::Bracket(format!("{bra}↔{ket}: no point of the scan could be labeled")))?;
    if best.0 == 0 || best.0 == opts.grid - 1 {
        return Err(Error::Bracket(format!(
            "{bra}↔{ket}: splitting is smallest at the bracket edge ({:.6} MHz)",
            crate::units::to_mhz(points[best.0])
        )));
    }
    let f = |x: f64| splitting(&knob, x, bra, ket, &opts.floquet);
    let (x, gap) = golden_minimum(f, points[best.0 - 1], points[best.0 + 1], opts.tolerance)?;
    let (x, gap) = if best.1 < gap { (points[best.0], best.1) } else { (x, gap) };
    Ok(CollisionRecord {
        bra: bra.clone(),
        ket: ket.clone(),
        gap,
        detuning: 0.0,
        angle: std::f64::consts::FRAC_PI_2,
        frequency: x,
    })
}

/// Anticrossing along the drive frequency with the amplitude following `rule`.
pub fn find_anticrossing_in_frequency(
    system: &SystemSpec,
    template: &DriveSpec,
    rule: AmplitudeRule,
    bra: &BareState,
    ket: &BareState,
    bracket: (f64, f64),
    opts: &AnticrossingOptions,
) -> Result<CollisionRecord> {
    template.validate(system)?;
    let knob = |w: f64| Ok((system.clone(), rule.drive(template, w)));
    find_anticrossing(knob, bra, ket, bracket, opts)
}

fn golden_minimum<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc < fd { (c, fc) } else { (d, fd) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, v) = golden_minimum(|x| Ok((x - 0.3).powi(2) + 2.0), -1.0, 1.0, 1e-9).unwrap();
        assert!((x - 0.3).abs() < 1e-7);
        assert!((v - 2.0).abs() < 1e-15);
    }
}
