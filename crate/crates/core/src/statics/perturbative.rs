//! Nondegenerate Rayleigh-Schrödinger corrections to fourth order, summed
//! numerically over the truncated bare basis.

use crate::error::{Error, Result};
use crate::model::{sparse_hamiltonian, CouplingForm, SystemSpec};
use crate::units::khz;

/// Energy denominators smaller than this are treated as degenerate.
pub fn degeneracy_tolerance() -> f64 {
    khz(1.0)
}

/// Perturbative energy of one bare state, split by order (first order vanishes).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerturbativeTerms {
    pub e0: f64,
    pub e2: f64,
    pub e3: f64,
    pub e4: f64,
}

impl PerturbativeTerms {
    /// E⁽⁰⁾ plus every correction up to `order`.
    pub fn up_to(&self, order: usize) -> f64 {
        let mut e = self.e0;
        if order >= 2 {
            e += self.e2;
        }
        if order >= 3 {
            e += self.e3;
        }
        if order >= 4 {
            e += self.e4;
        }
        e
    }
}

/// Sparse symmetric coupling matrix in adjacency form.
struct Adjacency {
    rows: Vec<Vec<(usize, f64)>>,
}

impl Adjacency {
    fn new(dim: usize, upper: &[(usize, usize, f64)]) -> Self {
        let mut rows = vec![Vec::new(); dim];
        for &(i, j, v) in upper {
            rows[i].push((j, v));
            rows[j].push((i, v));
        }
        Adjacency { rows }
    }
}

pub fn perturbative_terms(system: &SystemSpec, state: usize, form: CouplingForm) -> Result<PerturbativeTerms> {
    let h = sparse_hamiltonian(system, form)?;
    terms_from_parts(system, &h.diagonal, &h.upper, state)
}

pub(crate) fn terms_from_parts(
    system: &SystemSpec,
    diag: &[f64],
    upper: &[(usize, usize, f64)],
    s: usize,
) -> Result<PerturbativeTerms> {
    let dim = diag.len();
    let adj = Adjacency::new(dim, upper);
    let es = diag[s];
    let tol = degeneracy_tolerance();
    let check = |j: usize| -> Result<f64> {
        let d = es - diag[j];
        if d.abs() < tol {
            let basis = system.basis();
            return Err(Error::Degenerate {
                state: basis.state(s).to_string(),
                partner: basis.state(j).to_string(),
                gap: d.abs(),
            });
        }
        Ok(d)
    };
    // first-order amplitudes w_j = V_js / E_sj
    let mut w = vec![0.0; dim];
    let mut e2 = 0.0;
    for &(j, v) in &adj.rows[s] {
        let d = check(j)?;
        w[j] += v / d;
    }
    for &(j, v) in &adj.rows[s] {
        e2 += v * v / check(j)?;
    }
    // x_k = Σ_j V_kj w_j  (k ≠ s)
    let mut x = vec![0.0; dim];
    for (j, &wj) in w.iter().enumerate() {
        if wj == 0.0 {
            continue;
        }
        for &(k, v) in &adj.rows[j] {
            if k != s {
                x[k] += v * wj;
            }
        }
    }
    let e3: f64 = (0..dim).map(|k| w[k] * x[k]).sum();
    let mut e4 = 0.0;
    for (k, &xk) in x.iter().enumerate() {
        if xk != 0.0 {
            e4 += xk * xk / check(k)?;
        }
    }
    let norm: f64 = w.iter().map(|v| v * v).sum();
    e4 -= e2 * norm;
    Ok(PerturbativeTerms {
        e0: es,
        e2,
        e3,
        e4,
    })
}

/// E⁽⁰⁾ + Σ corrections up to `order` (2, 3 or 4).
pub fn perturbative_energy(
    system: &SystemSpec,
    state: &crate::model::BareState,
    order: usize,
    form: CouplingForm,
) -> Result<f64> {
    if !(2..=4).contains(&order) {
        return Err(Error::InvalidArgument(format!(
            "perturbative order must be 2, 3 or 4 (got {order})"
        )));
    }
    let idx = system.state_index(state)?;
    Ok(perturbative_terms(system, idx, form)?.up_to(order))
}
