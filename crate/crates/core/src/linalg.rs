//! Dense eigen-solvers and the optimal assignment used for state labeling.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

/// Eigenpairs of a real symmetric matrix, ascending.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Eigenvalues of a complex Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Eigen-decomposition of a unitary matrix through its complex Schur form.
/// For a normal matrix the Schur vectors are eigenvectors.
pub fn unitary_eigen(u: &DMatrix<Complex64>) -> (Vec<Complex64>, DMatrix<Complex64>) {
    let n = u.nrows();
    if n == 1 {
        return (vec![u[(0, 0)]], DMatrix::identity(1, 1));
    }
    let (q, t) = nalgebra::linalg::Schur::new(u.clone()).unpack();
    let values = (0..n).map(|k| t[(k, k)]).collect();
    (values, q)
}

/// max |M†M − I|
pub fn orthonormality_error(m: &DMatrix<Complex64>) -> f64 {
    let g = m.adjoint() * m;
    let n = g.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

pub fn orthonormality_error_real(m: &DMatrix<f64>) -> f64 {
    let g = m.transpose() * m;
    let n = g.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - target).abs());
        }
    }
    worst
}

/// Assignment maximizing Σ_i weight[i][assign[i]] over permutations
/// (Hungarian method with potentials). `weight` must be square.
pub fn max_weight_assignment(weight: &DMatrix<f64>) -> Vec<usize> {
    let n = weight.nrows();
    assert_eq!(n, weight.ncols(), "assignment needs a square matrix");
    if n == 0 {
        return Vec::new();
    }
    let cost = |i: usize, j: usize| -weight[(i, j)];
    // 1-based arrays; row 0 / column 0 are sentinels.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0usize; n];
    for j in 1..=n {
        assign[p[j] - 1] = j - 1;
    }
    assign
}
