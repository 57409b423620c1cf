//! Sideband coupling strengths for both modulation schemes.

use crate::error::{Error, Result};
use crate::model::SystemSpec;
use crate::special::{bessel_j, binomial, factorial};
use crate::statics::{dressed_qubit_function, effective_coupling_function, EffectiveCoupling, PoleSum, Triple};

/// base · J_n(ε/ω).
pub fn qubit_mod_strength(base_strength: f64, n: i32, amplitude: f64, frequency: f64) -> Result<f64> {
    if !(frequency > 0.0) {
        return Err(Error::InvalidArgument("modulation frequency must be positive".into()));
    }
    Ok(base_strength * bessel_j(n, amplitude / frequency))
}

const MAX_FD_ORDER: u32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Derivatives {
    /// Central differences with Richardson refinement up to sixth order;
    /// higher orders fall back to the closed form.
    #[default]
    FiniteDifference,
    Analytic,
}

/// Weights of the central stencil -p..=p for the `order`-th derivative
/// (Fornberg's recursion with unit spacing).
fn central_weights(order: usize, p: usize) -> Vec<f64> {
    let xs: Vec<f64> = (-(p as i64)..=p as i64).map(|k| k as f64).collect();
    let n = xs.len();
    let mut c = vec![vec![0.0; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0];
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i];
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] *= c4 / c3;
        }
        c1 = c2;
    }
    c.iter().map(|row| row[order]).collect()
}

/// Half-width of the central stencil with accuracy order 2⌈n/2⌉ + 2.
fn stencil_half_width(n: usize) -> usize {
    (n + 1) / 2 + n.div_ceil(2)
}

fn fd_derivative(f: &PoleSum, n: u32, x: f64) -> Result<f64> {
    if n == 0 {
        return f.value(x);
    }
    let dist = f.pole_distance(x);
    if !dist.is_finite() {
        return Ok(0.0);
    }
    // balances stencil truncation against cancellation for each order
    const STEP_FRACTION: [f64; 7] = [1.0, 256.0, 128.0, 32.0, 32.0, 20.0, 16.0];
    let h = dist / STEP_FRACTION[n as usize];
    let p = stencil_half_width(n as usize);
    let w = central_weights(n as usize, p);
    let eval = |h: f64| -> Result<f64> {
        let mut acc = 0.0;
        for (k, wk) in w.iter().enumerate() {
            if *wk != 0.0 {
                acc += wk * f.value(x + (k as f64 - p as f64) * h)?;
            }
        }
        Ok(acc / h.powi(n as i32))
    };
    let coarse = eval(h)?;
    let fine = eval(0.5 * h)?;
    let r = 2f64.powi(2 * (n as i32 + 1).div_euclid(2) + 2);
    Ok((r * fine - coarse) / (r - 1.0))
}

fn derivative(f: &PoleSum, n: u32, x: f64, how: Derivatives) -> Result<f64> {
    match how {
        Derivatives::Analytic => f.derivative(n, x),
        Derivatives::FiniteDifference if n <= MAX_FD_ORDER => fd_derivative(f, n, x),
        Derivatives::FiniteDifference => f.derivative(n, x),
    }
}

fn check_excursion(f: &PoleSum, x: f64, amplitude: f64) -> Result<()> {
    let d = f.pole_distance(x);
    if amplitude.abs() >= d {
        return Err(Error::Singularity(format!(
            "coupler excursion {:.3} MHz reaches a dispersive pole {:.3} MHz away",
            amplitude.abs() / std::f64::consts::TAU * 1e-6,
            d / std::f64::consts::TAU * 1e-6
        )));
    }
    Ok(())
}

/// Coefficient of the m-th harmonic (half of the cos(mωt) amplitude for
/// m ≥ 1, the mean for m = 0) of f(ω̄ + ε cos ωt) from its Taylor series
/// truncated at order N.
pub fn harmonic_from_taylor(
    f: &PoleSum,
    x: f64,
    m: u32,
    amplitude: f64,
    order: u32,
    how: Derivatives,
) -> Result<f64> {
    if order < m {
        return Err(Error::InvalidArgument(format!(
            "Taylor order {order} below harmonic {m}"
        )));
    }
    check_excursion(f, x, amplitude)?;
    let mut g = 0.0;
    for n in 0..=order {
        if n < m || (n - m) % 2 != 0 {
            continue;
        }
        if n == 0 {
            g += f.value(x)?;
            continue;
        }
        let k = (n - m) / 2;
        let dn = amplitude.powi(n as i32) / (2f64.powi(n as i32) * factorial(n))
            * derivative(f, n, x, how)?;
        g += dn * binomial(n, k);
    }
    Ok(g)
}

/// g_eff^(m) for a qubit-channel transition carried by `which`, with the
/// coupler modulated by amplitude `amplitude` around its static frequency.
pub fn coupler_mod_strength(
    system: &SystemSpec,
    which: EffectiveCoupling,
    m: u32,
    amplitude: f64,
    order: u32,
    how: Derivatives,
) -> Result<f64> {
    let t = Triple::of(system)?;
    let f = effective_coupling_function(system, t, which);
    harmonic_from_taylor(&f, system.modes()[t.c].frequency, m, amplitude, order, how)
}

/// Default Taylor truncation, m + 2.
pub fn default_taylor_order(m: u32) -> u32 {
    m + 2
}

/// Stark-shifted qubit difference ω̃₁ − ω̃₂ averaged over the coupler swing.
pub fn stark_shifted_detuning(system: &SystemSpec, amplitude: f64, order: u32, how: Derivatives) -> Result<f64> {
    let t = Triple::of(system)?;
    let f = dressed_qubit_function(system, t, true).sub(&dressed_qubit_function(system, t, false));
    harmonic_from_taylor(&f, system.modes()[t.c].frequency, 0, amplitude, order, how)
}
