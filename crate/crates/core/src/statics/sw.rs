//! Effective qubit-qubit parameters after eliminating a coupler to second
//! order, written as explicit functions of the coupler frequency so that
//! they can be differentiated.

use crate::error::{Error, Result};
use crate::model::SystemSpec;
use crate::special::factorial;

/// f(x) = constant + Σ coef / (offset + sign·x), sign = ±1.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleSum {
    pub constant: f64,
    pub terms: Vec<(f64, f64, f64)>,
}

impl PoleSum {
    pub fn constant(c: f64) -> Self {
        PoleSum {
            constant: c,
            terms: Vec::new(),
        }
    }

    fn pole(mut self, coef: f64, offset: f64, sign: f64) -> Self {
        self.terms.push((coef, offset, sign));
        self
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        self.derivative(0, x)
    }

    /// n-th derivative with respect to x.
    pub fn derivative(&self, n: u32, x: f64) -> Result<f64> {
        let mut acc = if n == 0 { self.constant } else { 0.0 };
        let nf = factorial(n);
        for &(c, a, s) in &self.terms {
            let den = a + s * x;
            if den == 0.0 || !den.is_finite() {
                return Err(Error::Singularity(format!(
                    "pole at coupler frequency {x:.6e} rad/s"
                )));
            }
            acc += c * (-s).powi(n as i32) * nf / den.powi(n as i32 + 1);
        }
        Ok(acc)
    }

    pub fn sub(&self, other: &PoleSum) -> PoleSum {
        let mut out = self.clone();
        out.constant -= other.constant;
        for &(c, a, s) in &other.terms {
            out.terms.push((-c, a, s));
        }
        out
    }

    /// Smallest |offset + sign·x| over the poles (distance to a singularity).
    pub fn pole_distance(&self, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(_, a, s)| (a + s * x).abs())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Mode indices of a qubit-coupler-qubit triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Triple {
    pub q1: usize,
    pub c: usize,
    pub q2: usize,
}

impl Triple {
    /// The (qubit, coupler, qubit) triple of a three-mode system.
    pub fn of(system: &SystemSpec) -> Result<Self> {
        let cs = system.couplers();
        let qs = system.qubits();
        if cs.len() != 1 || qs.len() != 2 {
            return Err(Error::InvalidArgument(
                "expected two qubits and one coupler".into(),
            ));
        }
        Ok(Triple {
            q1: qs[0],
            c: cs[0],
            q2: qs[1],
        })
    }
}

/// Which effective coupling a qubit-channel transition is carried by.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EffectiveCoupling {
    /// |001⟩ ↔ |100⟩
    SingleExcitation,
    /// |101⟩ ↔ |002⟩
    ToSecondQubitDouble,
    /// |101⟩ ↔ |200⟩
    ToFirstQubitDouble,
}

struct Raw {
    w1: f64,
    w2: f64,
    a1: f64,
    a2: f64,
    j1c: f64,
    j2c: f64,
    j12: f64,
}

fn raw(system: &SystemSpec, t: Triple) -> Raw {
    let m = system.modes();
    Raw {
        w1: m[t.q1].frequency,
        w2: m[t.q2].frequency,
        a1: m[t.q1].anharmonicity,
        a2: m[t.q2].anharmonicity,
        j1c: system.coupling_strength(t.q1, t.c),
        j2c: system.coupling_strength(t.q2, t.c),
        j12: system.coupling_strength(t.q1, t.q2),
    }
}

/// ω̃_i(ω_c) for qubit `qubit` (index of the triple's q1 or q2).
pub fn dressed_qubit_function(system: &SystemSpec, t: Triple, first: bool) -> PoleSum {
    let r = raw(system, t);
    let (w, j) = if first { (r.w1, r.j1c) } else { (r.w2, r.j2c) };
    let j2 = j * j;
    // J²/(ω − x) − J²/(ω + x)
    PoleSum::constant(w).pole(j2, w, -1.0).pole(-j2, w, 1.0)
}

/// Effective coupling as a function of ω_c.
pub fn effective_coupling_function(system: &SystemSpec, t: Triple, which: EffectiveCoupling) -> PoleSum {
    let r = raw(system, t);
    let jj = r.j1c * r.j2c;
    let s2 = std::f64::consts::SQRT_2;
    match which {
        EffectiveCoupling::SingleExcitation => PoleSum::constant(r.j12)
            .pole(0.5 * jj, r.w1, -1.0)
            .pole(0.5 * jj, r.w2, -1.0)
            .pole(-0.5 * jj, r.w1, 1.0)
            .pole(-0.5 * jj, r.w2, 1.0),
        EffectiveCoupling::ToSecondQubitDouble => PoleSum::constant(s2 * r.j12)
            .pole(jj / s2, r.w1, -1.0)
            .pole(jj / s2, r.w2 + r.a2, -1.0)
            .pole(-jj / s2, r.w1, 1.0)
            .pole(-jj / s2, r.w2 + r.a2, 1.0),
        EffectiveCoupling::ToFirstQubitDouble => PoleSum::constant(s2 * r.j12)
            .pole(jj / s2, r.w1 + r.a1, -1.0)
            .pole(jj / s2, r.w2, -1.0)
            .pole(-jj / s2, r.w1 + r.a1, 1.0)
            .pole(-jj / s2, r.w2, 1.0),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectiveQQParams {
    pub j_tilde_12: f64,
    pub omega_tilde_1: f64,
    pub omega_tilde_2: f64,
    pub j_tilde_101_002: f64,
    pub j_tilde_101_200: f64,
    /// exchange-only third-order coupling
    pub j_tilde_12_third: f64,
    /// smallest |Δ_ic| / |J_ic|; below 5 the dispersive expansion is doubtful
    pub dispersive_ratio: f64,
}

impl EffectiveQQParams {
    pub fn is_dispersive(&self) -> bool {
        self.dispersive_ratio >= 5.0
    }
}

pub fn sw_effective_params(system: &SystemSpec) -> Result<EffectiveQQParams> {
    let t = Triple::of(system)?;
    let wc = system.modes()[t.c].frequency;
    let r = raw(system, t);
    let d1c = r.w1 - wc;
    let d2c = r.w2 - wc;
    for (name, v) in [
        ("Δ1c", d1c),
        ("Δ2c", d2c),
        ("Σ1c", r.w1 + wc),
        ("Σ2c", r.w2 + wc),
    ] {
        if v == 0.0 {
            return Err(Error::Singularity(format!("{name} = 0")));
        }
    }
    let ratio = |d: f64, j: f64| if j == 0.0 { f64::INFINITY } else { (d / j).abs() };
    let dispersive_ratio = ratio(d1c, r.j1c).min(ratio(d2c, r.j2c));
    let third = r.j12 + 0.5 * r.j1c * r.j2c * (1.0 / d1c + 1.0 / d2c)
        - r.j12 * (r.j1c * r.j1c + r.j2c * r.j2c) / (2.0 * d1c * d2c);
    Ok(EffectiveQQParams {
        j_tilde_12: effective_coupling_function(system, t, EffectiveCoupling::SingleExcitation).value(wc)?,
        omega_tilde_1: dressed_qubit_function(system, t, true).value(wc)?,
        omega_tilde_2: dressed_qubit_function(system, t, false).value(wc)?,
        j_tilde_101_002: effective_coupling_function(system, t, EffectiveCoupling::ToSecondQubitDouble)
            .value(wc)?,
        j_tilde_101_200: effective_coupling_function(system, t, EffectiveCoupling::ToFirstQubitDouble)
            .value(wc)?,
        j_tilde_12_third: third,
        dispersive_ratio,
    })
}
