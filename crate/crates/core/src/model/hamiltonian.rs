use nalgebra::DMatrix;
use num_complex::Complex64;

use super::system::{DriveSignature, DriveSpec, SystemSpec};
use crate::error::{Error, Result};

/// Which ladder products a coupling term keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CouplingForm {
    /// J (b_i + b_i†)(b_j + b_j†)
    Full,
    /// J (b_i† b_j + b_i b_j†)
    Rwa,
}

/// Real Hamiltonian split into its bare diagonal and a sparse upper triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseHamiltonian {
    pub diagonal: Vec<f64>,
    /// (row, col, value) with row < col.
    pub upper: Vec<(usize, usize, f64)>,
}

impl SparseHamiltonian {
    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn dense_real(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (i, &d) in self.diagonal.iter().enumerate() {
            m[(i, i)] = d;
        }
        for &(i, j, v) in &self.upper {
            m[(i, j)] += v;
            m[(j, i)] += v;
        }
        m
    }

    pub fn dense(&self) -> DMatrix<Complex64> {
        self.dense_real().map(|v| Complex64::new(v, 0.0))
    }

    /// Off-diagonal part only.
    pub fn coupling_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for &(i, j, v) in &self.upper {
            m[(i, j)] += v;
            m[(j, i)] += v;
        }
        m
    }
}

pub fn sparse_hamiltonian(system: &SystemSpec, form: CouplingForm) -> Result<SparseHamiltonian> {
    sparse_hamiltonian_capped(system, form, super::system::DEFAULT_DIMENSION_CAP)
}

pub fn sparse_hamiltonian_capped(
    system: &SystemSpec,
    form: CouplingForm,
    cap: usize,
) -> Result<SparseHamiltonian> {
    let dim = system.dimension();
    if dim > cap {
        return Err(Error::DimensionOverflow { dim, cap });
    }
    let basis = system.basis();
    let diagonal: Vec<f64> = (0..dim).map(|i| system.bare_energy_index(i)).collect();
    let mut upper = Vec::new();
    for p in 0..dim {
        for e in system.edges() {
            if e.strength == 0.0 {
                continue;
            }
            let (na, nb) = (basis.occupation(p, e.a), basis.occupation(p, e.b));
            let (da, db) = (basis.dims()[e.a], basis.dims()[e.b]);
            let (sa, sb) = (basis.stride(e.a), basis.stride(e.b));
            // (Δn_a, Δn_b) for the four ladder products
            let moves: &[(i32, i32)] = match form {
                CouplingForm::Full => &[(1, -1), (-1, 1), (1, 1), (-1, -1)],
                CouplingForm::Rwa => &[(1, -1), (-1, 1)],
            };
            for &(ma, mb) in moves {
                let ta = na as i32 + ma;
                let tb = nb as i32 + mb;
                if ta < 0 || tb < 0 || ta >= da as i32 || tb >= db as i32 {
                    continue;
                }
                let amp_a = (na.max(ta as usize) as f64).sqrt();
                let amp_b = (nb.max(tb as usize) as f64).sqrt();
                let q = (p as i64 + ma as i64 * sa as i64 + mb as i64 * sb as i64) as usize;
                if q > p {
                    upper.push((p, q, e.strength * amp_a * amp_b));
                }
            }
        }
    }
    upper.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
    Ok(SparseHamiltonian { diagonal, upper })
}

/// Dense H_static in the bare product basis.
pub fn build_static_hamiltonian(system: &SystemSpec) -> Result<DMatrix<Complex64>> {
    Ok(sparse_hamiltonian(system, CouplingForm::Full)?.dense())
}

/// Occupation of `mode` for each basis state.
pub fn number_diagonal(system: &SystemSpec, mode: usize) -> Vec<f64> {
    (0..system.dimension())
        .map(|i| system.basis().occupation(i, mode) as f64)
        .collect()
}

/// A = n̂_target and s(t) so that H(t) = H_static + s(t) A.
pub fn build_drive_operator(
    system: &SystemSpec,
    drive: &DriveSpec,
) -> Result<(DMatrix<Complex64>, DriveSignature)> {
    let k = drive.validate(system)?;
    let diag = number_diagonal(system, k);
    let n = diag.len();
    let mut a = DMatrix::zeros(n, n);
    for (i, v) in diag.into_iter().enumerate() {
        a[(i, i)] = Complex64::new(v, 0.0);
    }
    Ok((a, drive.signature()))
}
