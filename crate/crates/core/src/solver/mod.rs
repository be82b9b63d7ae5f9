//! Ground states by sector-resolved exact diagonalization, the periodic
//! quasiparticle spectrum, and ground-state fidelity.

pub mod lanczos;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    build_kitaev_hamiltonian, parity_sign, sector_project, Boundary, ChainSpec, ManyBodyOperator, Parity,
    SectorOperator,
};
pub use lanczos::{Eigenpair, LanczosOptions};

/// Normalized amplitude vector over the `2^N` occupation basis.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    pub n_sites: usize,
    pub amplitudes: Vec<Complex64>,
    pub energy: f64,
    /// `<P>`, exactly `±1` for sector eigenstates.
    pub parity_expectation: f64,
    /// Set when both parity sectors were within the degeneracy tolerance.
    pub degenerate: bool,
    pub spec: Option<ChainSpec>,
}

impl QuantumState {
    /// Wraps an amplitude vector, normalizing it and measuring its parity.
    pub fn from_amplitudes(n_sites: usize, amplitudes: Vec<Complex64>) -> Result<QuantumState> {
        if amplitudes.len() != 1 << n_sites {
            return Err(Error::DimensionMismatch {
                left: amplitudes.len(),
                right: 1 << n_sites,
            });
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("state has zero or non-finite norm".into()));
        }
        let amplitudes: Vec<Complex64> = amplitudes.into_iter().map(|a| a / norm).collect();
        let parity_expectation = parity_expectation(&amplitudes);
        Ok(QuantumState {
            n_sites,
            amplitudes,
            energy: f64::NAN,
            parity_expectation,
            degenerate: false,
            spec: None,
        })
    }

    /// Basis state `|b>` with site `j` occupied iff bit `j` of `b` is set.
    pub fn basis_state(n_sites: usize, index: usize) -> QuantumState {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_sites];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        QuantumState::from_amplitudes(n_sites, amplitudes).expect("unit basis vector")
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Sector label when the state has definite parity.
    pub fn parity(&self) -> Option<Parity> {
        if (self.parity_expectation.abs() - 1.0).abs() <= 1e-8 {
            Some(Parity::from_sign(self.parity_expectation))
        } else {
            None
        }
    }

    /// `<self|O|self>` for a real operator.
    pub fn expectation(&self, op: &ManyBodyOperator) -> Complex64 {
        let out = op.apply(&self.amplitudes);
        self.amplitudes.iter().zip(&out).map(|(a, b)| a.conj() * b).sum()
    }
}

fn parity_expectation(amplitudes: &[Complex64]) -> f64 {
    amplitudes
        .iter()
        .enumerate()
        .map(|(b, a)| parity_sign(b) * a.norm_sqr())
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Dense diagonalization for small sectors, Lanczos otherwise.
    Auto,
    Lanczos,
    Dense,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub method: Method,
    pub lanczos: LanczosOptions,
    /// Sector energies closer than `tol * max(1, |E|)` count as degenerate.
    pub degeneracy_tolerance: f64,
    /// Sectors up to this dimension go to the dense solver under [`Method::Auto`].
    pub dense_threshold: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            method: Method::Auto,
            lanczos: LanczosOptions::default(),
            degeneracy_tolerance: 1e-10,
            dense_threshold: 128,
        }
    }
}

/// Lowest eigenpair of one parity sector, as a full-basis real vector.
#[derive(Debug, Clone)]
pub struct SectorGroundState {
    pub parity: Parity,
    pub energy: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
}

const SEED_STREAM: u64 = 0x6b69_7461_6576;

/// Deterministic start vector: uniform amplitudes with a fixed pseudo-random
/// perturbation, so momentum-pi and reflection-odd ground states are reached.
fn seed_vector(dim: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED_STREAM);
    (0..dim).map(|_| 1.0 + 0.5 * rng.gen_range(-1.0..1.0)).collect()
}

/// Ground state of one sector operator.
pub fn solve_sector(sector: &SectorOperator, options: &SolverOptions) -> Result<SectorGroundState> {
    let dim = sector.dimension();
    let use_dense = match options.method {
        Method::Dense => true,
        Method::Lanczos => false,
        Method::Auto => dim <= options.dense_threshold,
    };
    let (energy, vector, residual) = if use_dense {
        let eig = SymmetricEigen::new(sector.to_dense());
        let (idx, &e) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty sector");
        let v: Vec<f64> = eig.eigenvectors.column(idx).iter().copied().collect();
        let hv = sector.apply(&v);
        let r = hv.iter().zip(&v).map(|(a, b)| (a - e * b).powi(2)).sum::<f64>().sqrt();
        (e, v, r)
    } else {
        let pair = lanczos::lowest_eigenpair(sector, &seed_vector(dim), &options.lanczos)?;
        (pair.value, pair.vector, pair.residual)
    };
    Ok(SectorGroundState {
        parity: sector.parity(),
        energy,
        vector: fix_sign(sector.embed(&vector)),
        residual,
    })
}

/// Fixes the arbitrary sign of a real eigenvector: the largest-magnitude
/// component (lowest index on ties) is made positive.
fn fix_sign(mut v: Vec<f64>) -> Vec<f64> {
    let mut best = 0usize;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() * (1.0 + 1e-9) {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    v
}

/// Ground states of both parity sectors, even first.
pub fn sector_ground_states(spec: &ChainSpec, options: &SolverOptions) -> Result<[SectorGroundState; 2]> {
    let h = build_kitaev_hamiltonian(spec)?;
    let even = solve_sector(&sector_project(&h, Parity::Even)?, options)?;
    let odd = solve_sector(&sector_project(&h, Parity::Odd)?, options)?;
    Ok([even, odd])
}

/// Ground state of the Kitaev chain, the lower of the two sector ground
/// states. Near-degenerate sectors resolve to the odd state with
/// `degenerate = true`.
pub fn ground_state(spec: &ChainSpec) -> Result<QuantumState> {
    ground_state_with(spec, &SolverOptions::default())
}

pub fn ground_state_with(spec: &ChainSpec, options: &SolverOptions) -> Result<QuantumState> {
    let [even, odd] = sector_ground_states(spec, options)?;
    let scale = even.energy.abs().max(odd.energy.abs()).max(1.0);
    let degenerate = (even.energy - odd.energy).abs() < options.degeneracy_tolerance * scale;
    let chosen = if degenerate || odd.energy < even.energy {
        odd
    } else {
        even
    };
    Ok(QuantumState {
        n_sites: spec.n_sites,
        amplitudes: chosen.vector.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        energy: chosen.energy,
        parity_expectation: chosen.parity.sign() as f64,
        degenerate,
        spec: Some(*spec),
    })
}

/// Sign of the ground-state parity (`Odd` on degeneracy), without keeping vectors.
pub fn ground_parity(spec: &ChainSpec, options: &SolverOptions) -> Result<(Parity, bool)> {
    let [even, odd] = sector_ground_states(spec, options)?;
    let scale = even.energy.abs().max(odd.energy.abs()).max(1.0);
    let degenerate = (even.energy - odd.energy).abs() < options.degeneracy_tolerance * scale;
    let parity = if degenerate || odd.energy < even.energy {
        Parity::Odd
    } else {
        Parity::Even
    };
    Ok((parity, degenerate))
}

/// Bogoliubov energies of the periodic chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasiparticleSpectrum {
    pub lambdas: Vec<f64>,
    pub epsilons: Vec<f64>,
    /// `|Delta_k|`.
    pub deltas: Vec<f64>,
}

/// `eps_k = -mu - 2w cos(2 pi k/N)`, `|Delta_k| = |2 Delta sin(2 pi k/N)|`,
/// `Lambda_k = sqrt(eps_k^2 + |Delta_k|^2)` for `k = 0..N-1`.
pub fn quasiparticle_spectrum(spec: &ChainSpec) -> Result<QuasiparticleSpectrum> {
    if spec.boundary != Boundary::Periodic {
        return Err(Error::UnsupportedBoundary);
    }
    spec.validate()?;
    let n = spec.n_sites;
    let mut out = QuasiparticleSpectrum {
        lambdas: Vec::with_capacity(n),
        epsilons: Vec::with_capacity(n),
        deltas: Vec::with_capacity(n),
    };
    for k in 0..n {
        let (cos, sin) = momentum_trig(k, n);
        let eps = -spec.chemical_potential - 2.0 * spec.hopping * cos;
        let del = (2.0 * spec.pairing * sin).abs();
        out.epsilons.push(eps);
        out.deltas.push(del);
        out.lambdas.push((eps * eps + del * del).sqrt());
    }
    Ok(out)
}

/// `(cos, sin)` of `2 pi k / n`, exact on the axes so that `Lambda_0` and
/// `Lambda_{N/2}` carry no rounding from the pairing term.
fn momentum_trig(k: usize, n: usize) -> (f64, f64) {
    match (4 * k) % (4 * n) {
        0 => (1.0, 0.0),
        r if r == 2 * n => (-1.0, 0.0),
        r if r == n => (0.0, 1.0),
        r if r == 3 * n => (0.0, -1.0),
        _ => {
            let q = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            (q.cos(), q.sin())
        }
    }
}

/// `-1/2 sum_k Lambda_k`.
pub fn ground_energy_analytic(spec: &ChainSpec) -> Result<f64> {
    Ok(-0.5 * quasiparticle_spectrum(spec)?.lambdas.iter().sum::<f64>())
}

/// `|<a|b>|`.
pub fn fidelity(a: &QuantumState, b: &QuantumState) -> Result<f64> {
    if a.dimension() != b.dimension() {
        return Err(Error::DimensionMismatch {
            left: a.dimension(),
            right: b.dimension(),
        });
    }
    let overlap: Complex64 = a.amplitudes.iter().zip(&b.amplitudes).map(|(x, y)| x.conj() * y).sum();
    Ok(overlap.norm().min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_band_energy() {
        let spec = ChainSpec::periodic(8, 1.0, 0.0, 1.0);
        let q = quasiparticle_spectrum(&spec).unwrap();
        assert!(q.lambdas.iter().all(|l| (l - 2.0).abs() < 1e-14));
        assert!((ground_energy_analytic(&spec).unwrap() + 8.0).abs() < 1e-14);
        let g = ground_state(&spec).unwrap();
        assert!((g.energy + 8.0).abs() < 1e-10);
    }

    #[test]
    fn spectrum_edges() {
        let spec = ChainSpec::periodic(6, 1.3, 0.4, 0.7);
        let q = quasiparticle_spectrum(&spec).unwrap();
        assert!((q.lambdas[0] - (0.4f64 + 2.6).abs()).abs() < 1e-14);
        assert!((q.lambdas[3] - (2.6f64 - 0.4).abs()).abs() < 1e-14);
        for k in 1..6 {
            assert!((q.lambdas[k] - q.lambdas[6 - k]).abs() < 1e-14);
        }
        let gap_closing = quasiparticle_spectrum(&ChainSpec::periodic(6, 1.0, 2.0, 0.7)).unwrap();
        assert_eq!(gap_closing.lambdas[3], 0.0);
    }

    #[test]
    fn empty_band_energy() {
        let spec = ChainSpec::periodic(5, 0.0, 1.5, 0.0);
        assert!((ground_energy_analytic(&spec).unwrap() + 5.0 * 1.5 / 2.0).abs() < 1e-14);
    }

    #[test]
    fn open_chain_has_no_closed_form() {
        let spec = ChainSpec::open(4, 1.0, 0.0, 0.5);
        assert_eq!(quasiparticle_spectrum(&spec).unwrap_err(), Error::UnsupportedBoundary);
    }

    #[test]
    fn fidelity_properties() {
        let a = ground_state(&ChainSpec::periodic(6, 1.0, 1.0, 0.5)).unwrap();
        let b = ground_state(&ChainSpec::periodic(6, 1.0, 1.5, 0.5)).unwrap();
        assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(fidelity(&a, &b).unwrap(), fidelity(&b, &a).unwrap());
        let c = ground_state(&ChainSpec::periodic(4, 1.0, 1.5, 0.5)).unwrap();
        assert!(matches!(fidelity(&a, &c), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn lanczos_and_dense_agree_on_a_sector() {
        let spec = ChainSpec::open(9, 1.0, 0.7, 0.4);
        let dense = SolverOptions {
            method: Method::Dense,
            ..Default::default()
        };
        let iterative = SolverOptions {
            method: Method::Lanczos,
            ..Default::default()
        };
        let a = sector_ground_states(&spec, &dense).unwrap();
        let b = sector_ground_states(&spec, &iterative).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.energy - y.energy).abs() < 1e-10);
        }
    }
}
