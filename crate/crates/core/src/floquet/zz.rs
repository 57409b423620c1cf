use serde::Serialize;

use super::spectrum::Reference;
use super::{dressed_reference, floquet_with_reference, FloquetOptions, FloquetResult};
use crate::error::{Error, Result};
use crate::model::{DriveSpec, SystemSpec};
use crate::statics::computational_states;

/// ζ_d along an amplitude ramp from zero.
#[derive(Clone, Debug, Serialize)]
pub struct ZzRamp {
    /// rad/s
    pub amplitudes: Vec<f64>,
    /// Unfolded ζ_d at each amplitude, rad/s.
    pub zz: Vec<f64>,
    /// Static ζ of the same system, rad/s.
    pub static_zz: f64,
}

fn raw_zz(result: &FloquetResult, labels: &[String; 4]) -> Result<f64> {
    let e = |k: usize| result.quasienergy(&labels[k]);
    Ok(e(3)? + e(0)? - e(1)? - e(2)?)
}

fn nearest_image(x: f64, target: f64, w: f64) -> f64 {
    x + w * ((target - x) / w).round()
}

/// ζ_d = ε₁₁ + ε₀₀ − ε₀₁ − ε₁₀ of the first two qubits at the amplitudes in
/// `ramp`, visited in order after ε = 0. Branches are followed from
/// the static dressed states and ζ_d is unfolded by continuity.
pub fn dynamic_zz_ramp(system: &SystemSpec, drive: &DriveSpec, ramp: &[f64], opts: &FloquetOptions) -> Result<ZzRamp> {
    drive.validate(system)?;
    let states = computational_states(system)?;
    let labels = states.clone().map(|s| s.compact());
    let reference = dressed_reference(system, opts)?;
    let e = |k: usize| reference.energy(&states[k]);
    let static_zz = e(3)? + e(0)? - e(1)? - e(2)?;
    let w = drive.frequency;
    let mut amplitudes = Vec::with_capacity(ramp.len() + 1);
    let mut zz = Vec::with_capacity(ramp.len() + 1);
    let mut prev: Option<FloquetResult> = None;
    let mut last = static_zz;
    let mut points = Vec::with_capacity(ramp.len() + 1);
    if ramp.first().map_or(true, |&a| a != 0.0) {
        points.push(0.0);
    }
    points.extend_from_slice(ramp);
    for &amp in &points {
        let d = drive.with_amplitude(amp);
        let result = match &prev {
            None => floquet_with_reference(system, &d, Reference::Dressed(&reference), opts)?,
            Some(p) => floquet_with_reference(system, &d, Reference::Previous(p), opts)?,
        };
        let value = nearest_image(raw_zz(&result, &labels)?, last, w);
        if (value - last).abs() > 0.25 * w {
            return Err(Error::TrackingAmbiguity {
                context: format!("dynamic ZZ unfolding at ε/2π = {:.6} MHz", crate::units::to_mhz(amp)),
                state: labels[3].clone(),
                overlap: result.smallest_overlap(),
                floor: opts.floor,
            });
        }
        last = value;
        if ramp.contains(&amp) {
            amplitudes.push(amp);
            zz.push(value);
        }
        prev = Some(result);
    }
    Ok(ZzRamp {
        amplitudes,
        zz,
        static_zz,
    })
}

/// ζ_d at the drive amplitude, reached by a ramp of `steps` equal steps.
pub fn dynamic_zz(system: &SystemSpec, drive: &DriveSpec, steps: usize, opts: &FloquetOptions) -> Result<f64> {
    if steps == 0 {
        return Err(Error::InvalidArgument("ramp needs at least one step".into()));
    }
    let ramp: Vec<f64> = (1..=steps).map(|k| drive.amplitude * k as f64 / steps as f64).collect();
    let out = dynamic_zz_ramp(system, drive, &ramp, opts)?;
    Ok(*out.zz.last().expect("non-empty ramp"))
}
