//! One- and two-site reduced density matrices of a many-body state.
//!
//! The default trace treats each site as a qubit and traces the amplitude
//! vector directly. [`RdmConvention::Fermionic`] instead attaches the
//! Jordan-Wigner string of the sites between `i` and `j` to the elements
//! that move a fermion across them, giving string-free fermionic correlators.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::QuantumState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RdmConvention {
    /// Qubit-style partial trace in the occupation basis.
    #[default]
    Spin,
    /// Mode reduced state with string-free fermionic off-diagonals.
    Fermionic,
}

impl std::str::FromStr for RdmConvention {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "spin" | "qubit" => Ok(RdmConvention::Spin),
            "fermionic" | "mode" => Ok(RdmConvention::Fermionic),
            other => Err(format!("unknown RDM convention `{other}` (expected spin or fermionic)")),
        }
    }
}

/// `rho_ij` in the ordered basis `{|0_i 0_j>, |0_i 1_j>, |1_i 0_j>, |1_i 1_j>}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairDensityMatrix {
    pub entries: Matrix4<Complex64>,
    pub sites: (usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SiteDensityMatrix {
    pub entries: Matrix2<Complex64>,
    pub site: usize,
}

/// The five numbers that fill an X-shaped pair matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairCorrelators {
    pub n_i: f64,
    pub n_j: f64,
    pub n_i_n_j: f64,
    /// Entry `<0_i 1_j| rho |1_i 0_j>`.
    pub offdiag_hop: Complex64,
    /// Entry `<0_i 0_j| rho |1_i 1_j>`.
    pub offdiag_pair: Complex64,
    /// False when the state lacked definite parity and the record was read
    /// off a full reduction.
    pub x_state: bool,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn check_pair(state: &QuantumState, i: usize, j: usize) -> Result<()> {
    let n = state.n_sites;
    for index in [i, j] {
        if index >= n {
            return Err(Error::SiteOutOfRange { index, n_sites: n });
        }
    }
    if i == j {
        return Err(Error::SamePair(i));
    }
    Ok(())
}

/// Iterates over the `2^(N-2)` configurations of the traced sites, as basis
/// indices with bits `i` and `j` cleared.
fn environment(n_sites: usize, i: usize, j: usize) -> impl Iterator<Item = usize> {
    let (lo, hi) = (i.min(j), i.max(j));
    (0..1usize << (n_sites - 2)).map(move |r| {
        // spread r around the two holes at lo and hi
        let low = r & ((1 << lo) - 1);
        let mid = (r >> lo) & ((1 << (hi - lo - 1)) - 1);
        let high = r >> (hi - 1);
        low | (mid << (lo + 1)) | (high << (hi + 1))
    })
}

/// Two-site reduced density matrix `rho_ij`, `i < j`.
pub fn reduce_to_pair(state: &QuantumState, i: usize, j: usize) -> Result<PairDensityMatrix> {
    reduce_to_pair_with(state, i, j, RdmConvention::Spin)
}

pub fn reduce_to_pair_with(
    state: &QuantumState,
    i: usize,
    j: usize,
    convention: RdmConvention,
) -> Result<PairDensityMatrix> {
    check_pair(state, i, j)?;
    if i > j {
        return Err(Error::InvalidParameter {
            key: "pair",
            reason: format!("expected i < j, got ({i}, {j})"),
        });
    }
    let (bi, bj) = (1usize << i, 1usize << j);
    let between = (bj - 1) & !((bi << 1) - 1);
    let psi = &state.amplitudes;
    let mut rho = Matrix4::from_element(ZERO);
    for rest in environment(state.n_sites, i, j) {
        // index k = 2 n_i + n_j
        let a = [psi[rest], psi[rest | bj], psi[rest | bi], psi[rest | bi | bj]];
        if a.iter().all(|x| *x == ZERO) {
            continue;
        }
        let string = match convention {
            RdmConvention::Spin => 1.0,
            RdmConvention::Fermionic => {
                if (rest & between).count_ones() % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
        };
        for k in 0..4 {
            for l in 0..4 {
                let mut v = a[k] * a[l].conj();
                // elements that move one fermion between i and j
                if string < 0.0 && (k ^ l) == 3 {
                    v = -v;
                }
                rho[(k, l)] += v;
            }
        }
    }
    Ok(PairDensityMatrix {
        entries: rho,
        sites: (i, j),
    })
}

/// Single-site reduced density matrix in the basis `{|0>, |1>}`.
pub fn reduce_to_site(state: &QuantumState, i: usize) -> Result<SiteDensityMatrix> {
    if i >= state.n_sites {
        return Err(Error::SiteOutOfRange {
            index: i,
            n_sites: state.n_sites,
        });
    }
    let bit = 1usize << i;
    let mut rho = Matrix2::from_element(ZERO);
    for (b, amp) in state.amplitudes.iter().enumerate() {
        if b & bit != 0 {
            continue;
        }
        let a = [*amp, state.amplitudes[b | bit]];
        for k in 0..2 {
            for l in 0..2 {
                rho[(k, l)] += a[k] * a[l].conj();
            }
        }
    }
    Ok(SiteDensityMatrix { entries: rho, site: i })
}

impl PairDensityMatrix {
    /// Trace over site `j`, leaving `rho_i`.
    pub fn marginal_first(&self) -> Matrix2<Complex64> {
        let r = &self.entries;
        Matrix2::new(r[(0, 0)] + r[(1, 1)], r[(0, 2)] + r[(1, 3)], r[(2, 0)] + r[(3, 1)], r[(2, 2)] + r[(3, 3)])
    }

    /// Trace over site `i`, leaving `rho_j`.
    pub fn marginal_second(&self) -> Matrix2<Complex64> {
        let r = &self.entries;
        Matrix2::new(r[(0, 0)] + r[(2, 2)], r[(0, 1)] + r[(2, 3)], r[(1, 0)] + r[(3, 2)], r[(1, 1)] + r[(3, 3)])
    }

    /// Largest modulus among the entries that vanish for an X-state.
    pub fn x_state_violation(&self) -> f64 {
        [(0, 1), (0, 2), (1, 3), (2, 3)]
            .iter()
            .flat_map(|&(a, b)| [self.entries[(a, b)].norm(), self.entries[(b, a)].norm()])
            .fold(0.0, f64::max)
    }

    /// Rebuilds the X-shaped matrix from its correlators.
    pub fn from_correlators(c: &PairCorrelators, sites: (usize, usize)) -> PairDensityMatrix {
        let mut rho = Matrix4::from_element(ZERO);
        rho[(0, 0)] = Complex64::from(1.0 - c.n_i - c.n_j + c.n_i_n_j);
        rho[(1, 1)] = Complex64::from(c.n_j - c.n_i_n_j);
        rho[(2, 2)] = Complex64::from(c.n_i - c.n_i_n_j);
        rho[(3, 3)] = Complex64::from(c.n_i_n_j);
        rho[(1, 2)] = c.offdiag_hop;
        rho[(2, 1)] = c.offdiag_hop.conj();
        rho[(0, 3)] = c.offdiag_pair;
        rho[(3, 0)] = c.offdiag_pair.conj();
        PairDensityMatrix { entries: rho, sites }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &PairDensityMatrix) -> f64 {
        (self.entries - other.entries).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Definite parity, as required by the X-state fast path.
fn has_definite_parity(state: &QuantumState) -> bool {
    state.parity_expectation.abs() > 1.0 - 1e-8
}

/// Occupations and the two anti-diagonal coherences of sites `i < j`.
///
/// Definite-parity states are read directly off the amplitudes; anything
/// else goes through [`reduce_to_pair`].
pub fn pair_correlators(state: &QuantumState, i: usize, j: usize) -> Result<PairCorrelators> {
    check_pair(state, i, j)?;
    if !has_definite_parity(state) {
        let rho = reduce_to_pair(state, i.min(j), i.max(j))?;
        let e = &rho.entries;
        return Ok(PairCorrelators {
            n_i: (e[(2, 2)] + e[(3, 3)]).re,
            n_j: (e[(1, 1)] + e[(3, 3)]).re,
            n_i_n_j: e[(3, 3)].re,
            offdiag_hop: e[(1, 2)],
            offdiag_pair: e[(0, 3)],
            x_state: false,
        });
    }
    let (i, j) = (i.min(j), i.max(j));
    let (bi, bj) = (1usize << i, 1usize << j);
    let psi = &state.amplitudes;
    let (mut n_i, mut n_j, mut n_ij) = (0.0, 0.0, 0.0);
    let (mut hop, mut pair) = (ZERO, ZERO);
    for (b, amp) in psi.iter().enumerate() {
        let p = amp.norm_sqr();
        let (oi, oj) = (b & bi != 0, b & bj != 0);
        if oi {
            n_i += p;
        }
        if oj {
            n_j += p;
        }
        match (oi, oj) {
            (true, true) => n_ij += p,
            (false, true) => hop += amp * psi[b ^ bi ^ bj].conj(),
            (false, false) => pair += amp * psi[b | bi | bj].conj(),
            _ => {}
        }
    }
    Ok(PairCorrelators {
        n_i,
        n_j,
        n_i_n_j: n_ij,
        offdiag_hop: hop,
        offdiag_pair: pair,
        x_state: true,
    })
}

/// `rho_ij` for every pair `i < j`, in lexicographic order.
pub fn reduce_all_pairs(state: &QuantumState, convention: RdmConvention) -> Result<Vec<PairDensityMatrix>> {
    let n = state.n_sites;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    pairs
        .par_iter()
        .map(|&(i, j)| reduce_to_pair_with(state, i, j, convention))
        .collect()
}
