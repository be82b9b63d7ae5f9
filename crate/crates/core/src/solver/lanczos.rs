//! Lanczos iteration with full reorthogonalization for the lowest eigenpair
//! of a real symmetric operator.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// A real symmetric linear map.
pub trait SymmetricOperator {
    fn dimension(&self) -> usize;
    fn apply_into(&self, x: &[f64], y: &mut [f64]);
}

impl SymmetricOperator for crate::model::SectorOperator {
    fn dimension(&self) -> usize {
        crate::model::SectorOperator::dimension(self)
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        crate::model::SectorOperator::apply_into(self, x, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosOptions {
    /// Stop once successive Ritz values move less than this (relative to `max(1, |E|)`).
    pub eigenvalue_tolerance: f64,
    /// ... and the Ritz residual `|beta_m s_m|` is below this.
    pub residual_tolerance: f64,
    /// Total matrix-vector products before giving up.
    pub max_iterations: usize,
    /// Krylov basis size before a restart from the current Ritz vector.
    pub max_basis: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            eigenvalue_tolerance: 1e-13,
            residual_tolerance: 1e-10,
            max_iterations: 5000,
            max_basis: 160,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

fn lowest_of_tridiagonal(alphas: &[f64], betas: &[f64]) -> (f64, Vec<f64>) {
    let m = alphas.len();
    let mut t = DMatrix::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alphas[i];
        if i + 1 < m {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let (idx, &value) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty tridiagonal");
    (value, eig.eigenvectors.column(idx).iter().copied().collect())
}

/// Lowest eigenpair of `op` starting from `seed` (need not be normalized).
pub fn lowest_eigenpair<O: SymmetricOperator>(op: &O, seed: &[f64], options: &LanczosOptions) -> Result<Eigenpair> {
    let dim = op.dimension();
    assert_eq!(seed.len(), dim);
    let mut start = seed.to_vec();
    let seed_norm = norm(&start);
    assert!(seed_norm > 0.0, "zero seed vector");
    start.iter_mut().for_each(|x| *x /= seed_norm);

    let mut total_iterations = 0usize;
    loop {
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let mut w = vec![0.0; dim];
        let mut previous: Option<f64> = None;
        let cap = options.max_basis.min(dim);

        loop {
            let m = basis.len();
            op.apply_into(&basis[m - 1], &mut w);
            total_iterations += 1;
            let alpha = dot(&w, &basis[m - 1]);
            alphas.push(alpha);
            // two passes of classical Gram-Schmidt against the whole basis
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(&w, v);
                    axpy(-c, v, &mut w);
                }
            }
            let beta = norm(&w);
            let (theta, s) = lowest_of_tridiagonal(&alphas, &betas);
            let residual = beta * s[m - 1].abs();
            let scale = theta.abs().max(1.0);
            let shift_ok = previous.is_some_and(|p: f64| (p - theta).abs() < options.eigenvalue_tolerance * scale);
            let exhausted = beta <= 1e-14 * scale || m == dim;
            if (shift_ok && residual < options.residual_tolerance) || exhausted {
                let vector = ritz_vector(&basis, &s);
                return finish(op, theta, vector, total_iterations);
            }
            if total_iterations >= options.max_iterations {
                return Err(Error::Convergence {
                    iterations: total_iterations,
                    residual,
                });
            }
            previous = Some(theta);
            if m == cap {
                // restart from the current Ritz vector
                start = ritz_vector(&basis, &s);
                break;
            }
            betas.push(beta);
            let next: Vec<f64> = w.iter().map(|x| x / beta).collect();
            basis.push(next);
        }
    }
}

fn ritz_vector(basis: &[Vec<f64>], coefficients: &[f64]) -> Vec<f64> {
    let dim = basis[0].len();
    let mut y = vec![0.0; dim];
    for (v, &c) in basis.iter().zip(coefficients) {
        axpy(c, v, &mut y);
    }
    let n = norm(&y);
    y.iter_mut().for_each(|x| *x /= n);
    y
}

fn finish<O: SymmetricOperator>(op: &O, theta: f64, vector: Vec<f64>, iterations: usize) -> Result<Eigenpair> {
    let mut hv = vec![0.0; vector.len()];
    op.apply_into(&vector, &mut hv);
    let value = dot(&vector, &hv);
    axpy(-value, &vector, &mut hv);
    let residual = norm(&hv);
    if residual > 1e-8 * value.abs().max(1.0) {
        return Err(Error::Convergence { iterations, residual });
    }
    debug_assert!((value - theta).abs() < 1e-8 * theta.abs().max(1.0));
    Ok(Eigenpair {
        value,
        vector,
        residual,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Dense(DMatrix<f64>);

    impl SymmetricOperator for Dense {
        fn dimension(&self) -> usize {
            self.0.nrows()
        }
        fn apply_into(&self, x: &[f64], y: &mut [f64]) {
            let v = &self.0 * nalgebra::DVector::from_column_slice(x);
            y.copy_from_slice(v.as_slice());
        }
    }

    #[test]
    fn finds_lowest_of_path_graph_laplacian() {
        // Laplacian of a path on 50 vertices: smallest eigenvalue 0.
        let n = 50;
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = if i == 0 || i == n - 1 { 1.0 } else { 2.0 };
            if i + 1 < n {
                m[(i, i + 1)] = -1.0;
                m[(i + 1, i)] = -1.0;
            }
        }
        let seed: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * i as f64).collect();
        let pair = lowest_eigenpair(&Dense(m), &seed, &LanczosOptions::default()).unwrap();
        assert!(pair.value.abs() < 1e-10);
        assert!(pair.residual < 1e-8);
    }

    #[test]
    fn restarts_preserve_convergence() {
        let n = 120;
        let m = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                (i as f64).sqrt()
            } else {
                0.01 / (1.0 + (i as f64 - j as f64).abs())
            }
        });
        let exact = SymmetricEigen::new(m.clone()).eigenvalues.min();
        let options = LanczosOptions {
            max_basis: 8,
            ..Default::default()
        };
        let seed = vec![1.0; n];
        let pair = lowest_eigenpair(&Dense(m), &seed, &options).unwrap();
        assert!((pair.value - exact).abs() < 1e-10, "{} vs {}", pair.value, exact);
    }
}
