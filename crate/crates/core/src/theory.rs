//! Closed-form factorization point of the periodic chain and the
//! permutation-symmetric odd-parity state that is its ground state there.
//!
//! Spin labels follow `sigma_z = 1 - 2 n`: spin-up is an empty site. Under
//! this orientation the ring's fermionic image has `mu = -h`, so for `mu > 0`
//! the factorized spin state is polarized along spin-down (filled sites) and
//! the odd component is generated from the fully occupied reference.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rdm::{reduce_all_pairs, RdmConvention};
use crate::solver::QuantumState;

/// `mu* = 2 sqrt(w^2 - Delta^2)`.
pub fn factorization_potential(hopping: f64, pairing: f64) -> Result<f64> {
    if pairing.abs() > hopping.abs() {
        return Err(Error::Domain(format!("|Delta| = {} exceeds |w| = {}", pairing.abs(), hopping.abs())));
    }
    Ok(2.0 * (hopping * hopping - pairing * pairing).sqrt())
}

/// `theta = arctan(sqrt(tan phi))` with `phi = arcsin(gamma / J) / 2`.
pub fn factorization_angle(coupling_sum: f64, anisotropy: f64) -> Result<f64> {
    if !(coupling_sum > 0.0) {
        return Err(Error::Domain(format!("J = {coupling_sum} must be positive")));
    }
    let ratio = anisotropy.abs() / coupling_sum;
    if ratio > 1.0 {
        return Err(Error::Domain(format!("|gamma| / J = {ratio} exceeds 1")));
    }
    let phi = ratio.asin() / 2.0;
    Ok(phi.tan().sqrt().atan())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FactorizationPoint {
    pub mu_star: f64,
    pub theta: f64,
    pub phi: f64,
}

pub fn factorization_point(hopping: f64, pairing: f64) -> Result<FactorizationPoint> {
    let mu_star = factorization_potential(hopping, pairing)?;
    let theta = factorization_angle(hopping.abs(), pairing)?;
    let phi = (pairing.abs() / hopping.abs()).asin() / 2.0;
    Ok(FactorizationPoint { mu_star, theta, phi })
}

/// Spin state the collective operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Reference {
    /// `|up ... up>`, the empty chain; excitations are `(S^-)^k`.
    AllUp,
    /// `|down ... down>`, the filled chain; excitations are `(S^+)^k`.
    AllDown,
}

/// Odd-parity component of the factorized state.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizedState {
    pub n_sites: usize,
    pub theta: f64,
    pub reference: Reference,
    /// `(k, f_{N,k})` for every excitation number included.
    pub weights: Vec<(usize, f64)>,
    /// Spin-basis amplitudes (bit set = spin down).
    pub amplitudes: Vec<f64>,
    /// `|norm - 1|` of the literal weights before renormalization.
    pub norm_deviation: f64,
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

/// `f_{N,k} = sqrt(2) sin^k(theta) cos^(N-k)(theta) / (k! sqrt(1 - cos^N(2 theta)))`.
pub fn factorization_weight(n: usize, k: usize, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    std::f64::consts::SQRT_2 * s.powi(k as i32) * c.powi((n - k) as i32)
        / (factorial(k) * (1.0 - (2.0 * theta).cos().powi(n as i32)).sqrt())
}

/// `sum_{k odd} f_{N,k} (S^-)^k |up ... up>`.
pub fn build_factorized_odd_state(n_sites: usize, theta: f64) -> Result<FactorizedState> {
    build_factorized_odd_state_from(n_sites, theta, Reference::AllUp)
}

/// Odd-parity (`prod sigma_z = -1`) part of the factorized state built on
/// `reference`. Terms flip `k` spins; only those leaving an odd number of
/// down spins are kept.
pub fn build_factorized_odd_state_from(n_sites: usize, theta: f64, reference: Reference) -> Result<FactorizedState> {
    if n_sites < 2 {
        return Err(Error::InvalidParameter {
            key: "n",
            reason: format!("need at least 2 sites, got {n_sites}"),
        });
    }
    if n_sites > crate::model::DEFAULT_MAX_SITES {
        return Err(Error::Capacity {
            n_sites,
            max_sites: crate::model::DEFAULT_MAX_SITES,
        });
    }
    if !(theta > 0.0) || theta > std::f64::consts::FRAC_PI_4 + 1e-15 {
        return Err(Error::DegenerateInput(format!(
            "theta = {theta} outside (0, pi/4]; the odd component is empty at theta = 0"
        )));
    }
    let n = n_sites;
    let downs = |k: usize| match reference {
        Reference::AllUp => k,
        Reference::AllDown => n - k,
    };
    let weights: Vec<(usize, f64)> = (0..=n)
        .filter(|&k| downs(k) % 2 == 1)
        .map(|k| (k, factorization_weight(n, k, theta)))
        .collect();
    // (S^-)^k on the reference puts k! on every configuration with k flips.
    let mut amplitudes = vec![0.0; 1 << n];
    for (b, amp) in amplitudes.iter_mut().enumerate() {
        let down = b.count_ones() as usize;
        let k = match reference {
            Reference::AllUp => down,
            Reference::AllDown => n - down,
        };
        if let Some(&(_, f)) = weights.iter().find(|(kk, _)| *kk == k) {
            *amp = f * factorial(k);
        }
    }
    let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
    let norm_deviation = (norm - 1.0).abs();
    if norm_deviation > 1e-10 {
        log::warn!("factorized state weights give norm {norm} for N = {n}; renormalizing");
        amplitudes.iter_mut().for_each(|a| *a /= norm);
    }
    Ok(FactorizedState {
        n_sites,
        theta,
        reference,
        weights,
        amplitudes,
        norm_deviation,
    })
}

/// Factorized odd state matching the periodic Kitaev ground state at
/// `mu = sign(mu) * mu*` for pairing `Delta`.
pub fn kitaev_factorized_state(n_sites: usize, hopping: f64, pairing: f64, mu_sign: f64) -> Result<FactorizedState> {
    let point = factorization_point(hopping, pairing)?;
    // fermionic mu maps to field h = -mu; the state polarizes along the field
    let reference = if mu_sign >= 0.0 {
        Reference::AllDown
    } else {
        Reference::AllUp
    };
    let mut state = build_factorized_odd_state_from(n_sites, point.theta, reference)?;
    if pairing < 0.0 {
        // Delta -> -Delta is the gauge a_j -> i a_j, which multiplies a
        // configuration with n particles by (-i)^n; for odd n this is
        // (-1)^((n-1)/2) up to a global phase.
        for (b, amp) in state.amplitudes.iter_mut().enumerate() {
            if (b.count_ones() / 2) % 2 == 1 {
                *amp = -*amp;
            }
        }
    }
    Ok(state)
}

/// Fermionic state with the same amplitude on every occupation label; the
/// Jordan-Wigner map with `sigma_z = 1 - 2 n` identifies labels one to one.
pub fn jw_image(state: &FactorizedState) -> QuantumState {
    let amplitudes = state.amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect();
    QuantumState::from_amplitudes(state.n_sites, amplitudes).expect("factorized state has unit norm")
}

/// `max_{i<j} ||rho_ij - rho_01||_max` under the qubit-style trace.
pub fn permutation_invariance_deviation(state: &QuantumState) -> Result<f64> {
    let pairs = reduce_all_pairs(state, RdmConvention::Spin)?;
    let first = &pairs[0];
    Ok(pairs.iter().map(|p| p.max_abs_diff(first)).fold(0.0, f64::max))
}
