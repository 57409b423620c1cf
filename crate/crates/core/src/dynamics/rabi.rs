use rustfft::FftPlanner;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Fit of P(t) = A sin²(Ωt/2) with A = (2g)²/Ω² and Ω² = (2g)² + Δ².
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RabiFit {
    /// 2g, rad/s
    pub gap: f64,
    /// |Δ|, rad/s
    pub detuning: f64,
    /// Ω, rad/s
    pub frequency: f64,
    pub amplitude: f64,
    /// RMS of the fit residual.
    pub rms: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RabiFitOptions {
    /// RMS residual above which the trace is not a two-level exchange.
    pub max_rms: f64,
    /// Points of the scan around the spectral estimate.
    pub scan: usize,
}

impl Default for RabiFitOptions {
    fn default() -> Self {
        RabiFitOptions { max_rms: 0.05, scan: 61 }
    }
}

fn amplitude_and_rms(times: &[f64], trace: &[f64], omega: f64) -> (f64, f64) {
    let (mut sp, mut ss) = (0.0, 0.0);
    for (&t, &p) in times.iter().zip(trace) {
        let s = (0.5 * omega * t).sin().powi(2);
        sp += s * p;
        ss += s * s;
    }
    let a = if ss > 0.0 { sp / ss } else { 0.0 };
    let mut r = 0.0;
    for (&t, &p) in times.iter().zip(trace) {
        let d = p - a * (0.5 * omega * t).sin().powi(2);
        r += d * d;
    }
    (a, (r / times.len() as f64).sqrt())
}

/// Dominant nonzero angular frequency of a uniformly sampled series.
pub(crate) fn spectral_peak(trace: &[f64], dt: f64) -> Option<f64> {
    let n = trace.len();
    if n < 4 {
        return None;
    }
    let mean = trace.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex64> = trace.iter().map(|&v| Complex64::new(v - mean, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let (k, mag) = buf[1..n / 2]
        .iter()
        .enumerate()
        .map(|(i, c)| (i + 1, c.norm()))
        .fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    (mag > 0.0).then(|| std::f64::consts::TAU * k as f64 / (n as f64 * dt))
}

/// Least-squares generalized-Rabi fit: spectral estimate of Ω, a dense scan
/// within ±1.5 frequency bins, then golden-section refinement; A is solved
/// linearly at every trial Ω.
pub fn fit_generalized_rabi(times: &[f64], trace: &[f64], opts: &RabiFitOptions) -> Result<RabiFit> {
    if times.len() != trace.len() || times.len() < 8 {
        return Err(Error::InvalidArgument("Rabi fit needs ≥ 8 matching samples".into()));
    }
    let dt = times[1] - times[0];
    let span = dt * times.len() as f64;
    let guess = spectral_peak(trace, dt)
        .ok_or_else(|| Error::ModelMismatch("trace has no oscillation".into()))?;
    let bin = std::f64::consts::TAU / span;
    let lo = (guess - 1.5 * bin).max(0.25 * bin);
    let hi = guess + 1.5 * bin;
    let cost = |w: f64| amplitude_and_rms(times, trace, w).1;
    let m = opts.scan.max(3);
    let grid: Vec<f64> = (0..m).map(|k| lo + (hi - lo) * k as f64 / (m - 1) as f64).collect();
    let best = (0..m).min_by(|&a, &b| cost(grid[a]).total_cmp(&cost(grid[b]))).expect("non-empty grid");
    let (mut a, mut b) = (grid[best.saturating_sub(1)], grid[(best + 1).min(m - 1)]);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (cost(c), cost(d));
    while b - a > 1e-12 * hi {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = cost(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = cost(d);
        }
    }
    let omega = 0.5 * (a + b);
    let (amp, rms) = amplitude_and_rms(times, trace, omega);
    if rms > opts.max_rms {
        return Err(Error::ModelMismatch(format!(
            "generalized Rabi fit residual {rms:.3e} above {:.3e}",
            opts.max_rms
        )));
    }
    let a_clamped = amp.clamp(0.0, 1.0);
    Ok(RabiFit {
        gap: omega * a_clamped.sqrt(),
        detuning: omega * (1.0 - a_clamped).sqrt(),
        frequency: omega,
        amplitude: amp,
        rms,
    })
}
