use nalgebra::DVector;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use super::evolve::{evolve, EvolveOptions, TrackedState};
use crate::error::{Error, Result};
use crate::model::{DriveSpec, SystemSpec};
use crate::sidebands::TransitionEntry;
use crate::statics::{exact_dressed_spectrum_with, TrackingOptions};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Peak {
    pub frequency_hz: f64,
    pub amplitude: f64,
}

/// Single-sided amplitude spectrum of a real series.
#[derive(Clone, Debug, Serialize)]
pub struct AmplitudeSpectrum {
    pub resolution_hz: f64,
    /// Bin k sits at k · resolution_hz, k = 0 .. N/2.
    pub amplitudes: Vec<f64>,
}

impl AmplitudeSpectrum {
    /// Rectangular window, mean removed, amplitude 2|X_k|/N.
    pub fn of(trace: &[f64], dt: f64) -> Self {
        let n = trace.len();
        let mean = trace.iter().sum::<f64>() / n.max(1) as f64;
        let mut buf: Vec<Complex64> = trace.iter().map(|&v| Complex64::new(v - mean, 0.0)).collect();
        if n > 0 {
            FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        }
        let keep = if n == 0 { 0 } else { n / 2 + 1 };
        let amplitudes = buf[..keep]
            .iter()
            .map(|c| 2.0 * c.norm() / n as f64)
            .collect();
        AmplitudeSpectrum {
            resolution_hz: 1.0 / (n as f64 * dt),
            amplitudes,
        }
    }

    pub fn frequency(&self, k: usize) -> f64 {
        k as f64 * self.resolution_hz
    }

    pub fn nyquist_hz(&self) -> f64 {
        self.frequency(self.amplitudes.len().saturating_sub(1))
    }

    /// Local maxima above `relative_floor` times the largest non-DC bin,
    /// sorted by frequency, optionally limited to `max_hz`.
    pub fn peaks(&self, relative_floor: f64, max_hz: Option<f64>) -> Vec<Peak> {
        self.prominent_peaks(relative_floor, max_hz, 0.0)
    }

    /// Like [`peaks`](Self::peaks), keeping only maxima whose prominence
    /// (height above the higher of the two bases) is at least `prominence`
    /// times their height.
    pub fn prominent_peaks(&self, relative_floor: f64, max_hz: Option<f64>, prominence: f64) -> Vec<Peak> {
        let last = match max_hz {
            Some(f) => ((f / self.resolution_hz).floor() as usize).min(self.amplitudes.len().saturating_sub(1)),
            None => self.amplitudes.len().saturating_sub(1),
        };
        if last < 1 {
            return Vec::new();
        }
        let a = &self.amplitudes;
        let top = a[1..=last].iter().copied().fold(0.0, f64::max);
        if top == 0.0 {
            return Vec::new();
        }
        let floor = relative_floor * top;
        (1..=last)
            .filter(|&k| {
                let left = a[k - 1];
                let right = if k + 1 < a.len() { a[k + 1] } else { 0.0 };
                a[k] > floor && a[k] > left && a[k] >= right
            })
            .filter(|&k| prominence <= 0.0 || a[k] - self.base(k) >= prominence * a[k])
            .map(|k| {
                // two-bin interpolation for a rectangular window: |X_{k±1}|/|X_k| = δ/(1 − δ)
                let right = if k + 1 < a.len() { a[k + 1] } else { 0.0 };
                let (side, dir) = if right > a[k - 1] { (right, 1.0) } else { (a[k - 1], -1.0) };
                let delta = side / (a[k] + side);
                Peak {
                    frequency_hz: (k as f64 + dir * delta) * self.resolution_hz,
                    amplitude: a[k],
                }
            })
            .collect()
    }

    /// Higher of the two lowest points reached walking away from bin `k`
    /// until a taller bin or the spectrum edge.
    fn base(&self, k: usize) -> f64 {
        let a = &self.amplitudes;
        let mut left = a[k];
        for j in (1..k).rev() {
            if a[j] > a[k] {
                break;
            }
            left = left.min(a[j]);
        }
        let mut right = a[k];
        for &v in &a[k + 1..] {
            if v > a[k] {
                break;
            }
            right = right.min(v);
        }
        left.max(right)
    }
}

/// A predicted micromotion line |Δ_{i,n}|/2π.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SidebandLine {
    pub transition: String,
    pub harmonic: i32,
    pub frequency_hz: f64,
}

/// |Δ_i + nω|/2π for every entry and |n| ≤ max_harmonic.
pub fn sideband_lines(entries: &[TransitionEntry], drive_frequency: f64, max_harmonic: i32) -> Vec<SidebandLine> {
    let mut out = Vec::new();
    for e in entries {
        for n in -max_harmonic..=max_harmonic {
            out.push(SidebandLine {
                transition: e.label(),
                harmonic: n,
                frequency_hz: (e.detuning + n as f64 * drive_frequency).abs() / std::f64::consts::TAU,
            });
        }
    }
    out.sort_by(|a, b| a.frequency_hz.total_cmp(&b.frequency_hz));
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeakMatch {
    pub peak: Peak,
    pub nearest: Option<SidebandLine>,
    pub distance_hz: f64,
}

pub fn compare_peaks(peaks: &[Peak], lines: &[SidebandLine]) -> Vec<PeakMatch> {
    peaks
        .iter()
        .map(|p| {
            let nearest = lines
                .iter()
                .min_by(|a, b| {
                    (a.frequency_hz - p.frequency_hz)
                        .abs()
                        .total_cmp(&(b.frequency_hz - p.frequency_hz).abs())
                })
                .cloned();
            let distance_hz = nearest
                .as_ref()
                .map_or(f64::INFINITY, |l| (l.frequency_hz - p.frequency_hz).abs());
            PeakMatch { peak: *p, nearest, distance_hz }
        })
        .collect()
}

/// Every predicted line must sit below the Nyquist frequency of the sampling.
pub fn check_aliasing(lines: &[SidebandLine], sample_interval: f64) -> Result<()> {
    let nyquist = 0.5 / sample_interval;
    if let Some(l) = lines.iter().find(|l| l.frequency_hz >= nyquist) {
        return Err(Error::InvalidArgument(format!(
            "line {} (n = {}) at {:.3} MHz is above the Nyquist frequency {:.3} MHz",
            l.transition,
            l.harmonic,
            l.frequency_hz * 1e-6,
            nyquist * 1e-6
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MicromotionOptions {
    pub evolve: EvolveOptions,
    /// Relative amplitude floor for peaks.
    pub floor: f64,
    /// Prepare and track dressed states instead of bare ones.
    pub dressed: bool,
    pub max_frequency_hz: Option<f64>,
    /// Minimum prominence of a peak as a fraction of its height.
    pub prominence: f64,
}

impl Default for MicromotionOptions {
    fn default() -> Self {
        MicromotionOptions {
            evolve: EvolveOptions::default(),
            floor: 1e-4,
            dressed: true,
            max_frequency_hz: None,
            prominence: 0.5,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MicromotionReport {
    pub label: String,
    pub spectrum: AmplitudeSpectrum,
    pub peaks: Vec<Peak>,
    pub max_norm_drift: f64,
}

/// Equal superposition of `initial` states, evolved and Fourier analysed for
/// each of the `tracked` states.
pub fn micromotion_spectrum(
    system: &SystemSpec,
    drive: &DriveSpec,
    initial: &[&str],
    duration: f64,
    n_samples: usize,
    tracked: &[&str],
    opts: &MicromotionOptions,
) -> Result<Vec<MicromotionReport>> {
    let make = |labels: &[&str]| -> Result<Vec<TrackedState>> {
        if opts.dressed {
            let spec = exact_dressed_spectrum_with(
                system,
                TrackingOptions {
                    form: opts.evolve.form,
                    ..Default::default()
                },
            )?;
            labels.iter().map(|l| TrackedState::dressed(&spec, l)).collect()
        } else {
            labels.iter().map(|l| TrackedState::bare(system, l)).collect()
        }
    };
    let init = make(initial)?;
    let psi0: DVector<Complex64> = super::evolve::equal_superposition(&init)?;
    let track = make(tracked)?;
    let traj = evolve(system, drive, &psi0, duration, n_samples, &track, &opts.evolve)?;
    let dt = traj.sample_interval();
    track
        .iter()
        .map(|t| {
            let trace = traj.population(&t.label)?;
            let spectrum = AmplitudeSpectrum::of(trace, dt);
            let peaks = spectrum.prominent_peaks(opts.floor, opts.max_frequency_hz, opts.prominence);
            Ok(MicromotionReport {
                label: t.label.clone(),
                spectrum,
                peaks,
                max_norm_drift: traj.max_norm_drift,
            })
        })
        .collect()
}
