//! Static ZZ: the conditional shift E₁₁ + E₀₀ − E₀₁ − E₁₀ of two qubits.

use crate::error::{Error, Result};
use crate::model::{sparse_hamiltonian, BareState, CouplingForm, SystemSpec};

use super::closed_form::{closed_form_zz, two_mode_zz, QcqParams};
use super::dressed::{exact_dressed_spectrum_with, TrackingOptions};
use super::perturbative::terms_from_parts;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ZzMethod {
    /// Labeled exact diagonalization.
    Exact,
    /// Fourth-order-or-lower perturbation sums over the whole truncated basis.
    Perturbative { order: usize, form: CouplingForm },
    /// Printed-style closed forms: the two-mode formula or the
    /// qubit-coupler-qubit ζ⁽²⁾ + ζ⁽³⁾ + ζ⁽⁴⁾ series.
    ClosedForm { order: usize },
}

/// The four computational states of the first two qubits with every other
/// mode in its ground state: (|00⟩, |01⟩, |10⟩, |11⟩) with the second qubit
/// varying fastest.
pub fn computational_states(system: &SystemSpec) -> Result<[BareState; 4]> {
    let qs = system.qubits();
    if qs.len() < 2 {
        return Err(Error::InvalidArgument("ZZ needs two qubits".into()));
    }
    zz_states(system, qs[0], qs[1])
}

/// Computational states for an arbitrary qubit pair.
pub fn zz_states(system: &SystemSpec, a: usize, b: usize) -> Result<[BareState; 4]> {
    let n = system.n_modes();
    if a >= n || b >= n || a == b {
        return Err(Error::InvalidArgument(format!("invalid qubit pair ({a}, {b})")));
    }
    let mk = |na: usize, nb: usize| {
        let mut v = vec![0; n];
        v[a] = na;
        v[b] = nb;
        BareState(v)
    };
    Ok([mk(0, 0), mk(0, 1), mk(1, 0), mk(1, 1)])
}

fn combine(e: [f64; 4]) -> f64 {
    e[3] + e[0] - e[1] - e[2]
}

pub fn static_zz(system: &SystemSpec, method: ZzMethod) -> Result<f64> {
    let qs = system.qubits();
    if qs.len() < 2 {
        return Err(Error::InvalidArgument("ZZ needs two qubits".into()));
    }
    static_zz_pair(system, qs[0], qs[1], method)
}

/// Static ZZ between qubit modes `a` and `b`.
pub fn static_zz_pair(system: &SystemSpec, a: usize, b: usize, method: ZzMethod) -> Result<f64> {
    let states = zz_states(system, a, b)?;
    match method {
        ZzMethod::Exact => static_zz_exact_with(system, a, b, TrackingOptions::default()),
        ZzMethod::Perturbative { order, form } => {
            check_order(order)?;
            let h = sparse_hamiltonian(system, form)?;
            let mut e = [0.0; 4];
            for (k, s) in states.iter().enumerate() {
                let idx = system.state_index(s)?;
                e[k] = terms_from_parts(system, &h.diagonal, &h.upper, idx)?.up_to(order);
            }
            Ok(combine(e))
        }
        ZzMethod::ClosedForm { order } => {
            check_order(order)?;
            match system.n_modes() {
                2 => {
                    let m = system.modes();
                    Ok(two_mode_zz(
                        m[0].frequency,
                        m[1].frequency,
                        m[0].anharmonicity,
                        m[1].anharmonicity,
                        system.coupling_strength(0, 1),
                    ))
                }
                3 => {
                    let z = closed_form_zz(&QcqParams::from_system(system)?);
                    Ok(z[..order - 1].iter().sum())
                }
                _ => Err(Error::InvalidArgument(
                    "closed-form ZZ covers two- and three-mode circuits".into(),
                )),
            }
        }
    }
}

pub fn static_zz_exact_with(system: &SystemSpec, a: usize, b: usize, opts: TrackingOptions) -> Result<f64> {
    let states = zz_states(system, a, b)?;
    let spec = exact_dressed_spectrum_with(system, opts)?;
    let mut e = [0.0; 4];
    for (k, s) in states.iter().enumerate() {
        e[k] = spec.energy(s)?;
    }
    Ok(combine(e))
}

fn check_order(order: usize) -> Result<()> {
    if (2..=4).contains(&order) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "perturbative order must be 2, 3 or 4 (got {order})"
        )))
    }
}
