//! Single-particle (Bogoliubov-de Gennes) description of the chain.
//!
//! With the Nambu vector `Psi = (a_1..a_N, a_1^†..a_N^†)` the Hamiltonian is
//! `H = 1/2 Psi^† M Psi` with `M = [[A, B], [B^†, -A^T]]`, where
//! `A` collects `a^† a` terms and the antisymmetric `B` the `a^† a^†` terms.
//! The `-mu (n - 1/2)` convention makes the additive constant vanish, so the
//! unconstrained many-body ground energy is `-1/2 sum_n E_n` over the
//! nonnegative BdG eigenvalues.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::model::ChainSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct BdGMatrix {
    pub n_sites: usize,
    pub matrix: DMatrix<f64>,
}

pub fn bdg_matrix(spec: &ChainSpec) -> BdGMatrix {
    let n = spec.n_sites;
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut b = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        a[(j, j)] = -spec.chemical_potential;
    }
    for (j, k) in spec.bonds() {
        a[(j, k)] -= spec.hopping;
        a[(k, j)] -= spec.hopping;
        // Delta a_k^† a_j^† with k = j+1
        b[(k, j)] += spec.pairing;
        b[(j, k)] -= spec.pairing;
    }
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(&a);
    m.view_mut((0, n), (n, n)).copy_from(&b);
    m.view_mut((n, 0), (n, n)).copy_from(&b.transpose());
    m.view_mut((n, n), (n, n)).copy_from(&(-a.transpose()));
    BdGMatrix { n_sites: n, matrix: m }
}

impl BdGMatrix {
    /// All `2N` eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut e: Vec<f64> = SymmetricEigen::new(self.matrix.clone()).eigenvalues.iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }

    /// The `N` quasiparticle energies (upper half of the symmetric spectrum).
    pub fn positive_eigenvalues(&self) -> Vec<f64> {
        let e = self.eigenvalues();
        e[self.n_sites..].iter().map(|x| x.abs()).collect()
    }
}

/// Smallest quasiparticle energy.
pub fn min_bdg_gap(spec: &ChainSpec) -> f64 {
    bdg_matrix(spec)
        .eigenvalues()
        .into_iter()
        .map(f64::abs)
        .fold(f64::INFINITY, f64::min)
}

/// `-1/2` times the sum of quasiparticle energies.
pub fn free_fermion_ground_energy(spec: &ChainSpec) -> f64 {
    -0.5 * bdg_matrix(spec).positive_eigenvalues().iter().sum::<f64>()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroModePotentials {
    /// Ascending `mu_n`; empty outside the domain.
    pub values: Vec<f64>,
    /// False when `|Delta| > |w|` makes the closed form complex.
    pub in_domain: bool,
}

/// `mu_n = 2 sqrt(w^2 - Delta^2) cos(pi n / (N + 1))`, `n = 1..N`.
pub fn majorana_zero_mode_potentials(n_sites: usize, hopping: f64, pairing: f64) -> ZeroModePotentials {
    let radicand = hopping * hopping - pairing * pairing;
    if radicand < 0.0 {
        return ZeroModePotentials {
            values: Vec::new(),
            in_domain: false,
        };
    }
    let amplitude = 2.0 * radicand.sqrt();
    let mut values: Vec<f64> = (1..=n_sites)
        .map(|k| {
            // cos(pi/2) is exactly zero for odd N
            if 2 * k == n_sites + 1 {
                0.0
            } else {
                amplitude * (std::f64::consts::PI * k as f64 / (n_sites + 1) as f64).cos()
            }
        })
        .collect();
    values.sort_by(f64::total_cmp);
    ZeroModePotentials { values, in_domain: true }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hopping_dimer() {
        let e = bdg_matrix(&ChainSpec::open(2, 1.0, 0.0, 0.0)).positive_eigenvalues();
        assert!((e[0] - 1.0).abs() < 1e-12 && (e[1] - 1.0).abs() < 1e-12, "{e:?}");
    }

    #[test]
    fn particle_hole_symmetric() {
        let e = bdg_matrix(&ChainSpec::open(7, 1.0, 0.8, 0.35)).eigenvalues();
        for k in 0..7 {
            assert!((e[k] + e[13 - k]).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_potentials() {
        let z = majorana_zero_mode_potentials(8, 1.0, 0.5);
        assert!(z.in_domain);
        let positive: Vec<f64> = z.values.iter().copied().filter(|&m| m > 0.0).collect();
        let want = [0.30077, 0.86603, 1.32683, 1.62760];
        for (got, want) in positive.iter().zip(want) {
            assert!((got - want).abs() < 5e-6, "{got} vs {want}");
        }
        assert!(majorana_zero_mode_potentials(6, 1.0, 1.0).values.iter().all(|&m| m == 0.0));
        let outside = majorana_zero_mode_potentials(6, 1.0, 1.5);
        assert!(!outside.in_domain && outside.values.is_empty());
    }

    #[test]
    fn count_inside_topological_window() {
        for n in 2..=12 {
            let z = majorana_zero_mode_potentials(n, 1.0, 0.3);
            let count = z.values.iter().filter(|&&m| m > 0.0 && m < 2.0).count();
            assert_eq!(count, n / 2, "N = {n}");
        }
    }

    #[test]
    fn gap_at_periodic_critical_point() {
        let g = min_bdg_gap(&ChainSpec::periodic(8, 1.0, 2.0, 0.5));
        assert!(g < 1e-12);
    }
}
