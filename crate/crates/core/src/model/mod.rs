//! Chain parameters and the many-body operators built from them.

mod operator;
mod sector;

pub use operator::{ordering_sign, parity_sign, Factor, ManyBodyOperator, Term};
pub use sector::{sector_project, Parity, SectorOperator};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on the number of sites.
pub const DEFAULT_MAX_SITES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Open,
}

impl Boundary {
    pub fn as_str(self) -> &'static str {
        match self {
            Boundary::Periodic => "periodic",
            Boundary::Open => "open",
        }
    }
}

impl std::str::FromStr for Boundary {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "periodic" | "pbc" => Ok(Boundary::Periodic),
            "open" | "obc" => Ok(Boundary::Open),
            other => Err(format!("unknown boundary `{other}` (expected periodic or open)")),
        }
    }
}

/// Physical parameters of one Kitaev chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub n_sites: usize,
    /// Hopping `w`.
    pub hopping: f64,
    /// Chemical potential `mu`.
    pub chemical_potential: f64,
    /// p-wave pairing `Delta`.
    pub pairing: f64,
    pub boundary: Boundary,
}

impl ChainSpec {
    pub fn new(n_sites: usize, hopping: f64, chemical_potential: f64, pairing: f64, boundary: Boundary) -> Self {
        ChainSpec {
            n_sites,
            hopping,
            chemical_potential,
            pairing,
            boundary,
        }
    }

    pub fn periodic(n_sites: usize, hopping: f64, chemical_potential: f64, pairing: f64) -> Self {
        Self::new(n_sites, hopping, chemical_potential, pairing, Boundary::Periodic)
    }

    pub fn open(n_sites: usize, hopping: f64, chemical_potential: f64, pairing: f64) -> Self {
        Self::new(n_sites, hopping, chemical_potential, pairing, Boundary::Open)
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.chemical_potential = mu;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_with_max(DEFAULT_MAX_SITES)
    }

    pub fn validate_with_max(&self, max_sites: usize) -> Result<()> {
        if self.n_sites < 2 {
            return Err(Error::InvalidParameter {
                key: "n",
                reason: format!("need at least 2 sites, got {}", self.n_sites),
            });
        }
        if self.n_sites > max_sites {
            return Err(Error::Capacity {
                n_sites: self.n_sites,
                max_sites,
            });
        }
        for (key, value) in [
            ("w", self.hopping),
            ("mu", self.chemical_potential),
            ("delta", self.pairing),
        ] {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    key,
                    reason: format!("must be finite, got {value}"),
                });
            }
        }
        Ok(())
    }

    /// Nearest-neighbour bonds `(j, j+1)`, including the wrap bond
    /// `(N-1, 0)` for periodic chains.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let n = self.n_sites;
        let last = match self.boundary {
            Boundary::Periodic => n,
            Boundary::Open => n - 1,
        };
        (0..last).map(|j| (j, (j + 1) % n)).collect()
    }
}

/// Cyclic XY chain `-sum (Jx sx sx + Jy sy sy) - h/2 sum sz`, stored as
/// `J = Jx + Jy` and `gamma = Jx - Jy`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XYSpec {
    pub n_sites: usize,
    pub coupling_sum: f64,
    pub anisotropy: f64,
    pub field: f64,
}

impl XYSpec {
    pub fn new(n_sites: usize, coupling_sum: f64, anisotropy: f64, field: f64) -> Self {
        XYSpec {
            n_sites,
            coupling_sum,
            anisotropy,
            field,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 {
            return Err(Error::InvalidParameter {
                key: "n",
                reason: format!("need at least 2 sites, got {}", self.n_sites),
            });
        }
        if self.n_sites > DEFAULT_MAX_SITES {
            return Err(Error::Capacity {
                n_sites: self.n_sites,
                max_sites: DEFAULT_MAX_SITES,
            });
        }
        for (key, value) in [("J", self.coupling_sum), ("gamma", self.anisotropy), ("h", self.field)] {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    key,
                    reason: format!("must be finite, got {value}"),
                });
            }
        }
        Ok(())
    }
}

/// Kitaev Hamiltonian
/// `sum_j [-w (a_j^† a_{j+1} + h.c.) - mu (n_j - 1/2) + Delta (a_j a_{j+1} + a_{j+1}^† a_j^†)]`
/// with `a_{N+1} = a_1` for periodic chains.
pub fn build_kitaev_hamiltonian(spec: &ChainSpec) -> Result<ManyBodyOperator> {
    spec.validate()?;
    let n = spec.n_sites;
    let (w, mu, delta) = (spec.hopping, spec.chemical_potential, spec.pairing);
    let mut terms = Vec::with_capacity(4 * n + n + 1);
    for (j, k) in spec.bonds() {
        terms.push(Term::new(-w, [Factor::Create(j), Factor::Annihilate(k)]));
        terms.push(Term::new(-w, [Factor::Create(k), Factor::Annihilate(j)]));
        terms.push(Term::new(delta, [Factor::Annihilate(j), Factor::Annihilate(k)]));
        terms.push(Term::new(delta, [Factor::Create(k), Factor::Create(j)]));
    }
    for j in 0..n {
        terms.push(Term::new(-mu, [Factor::Number(j)]));
    }
    terms.push(Term::constant(0.5 * mu * n as f64));
    Ok(ManyBodyOperator::new(n, terms))
}

/// Diagonal parity operator `prod_j (1 - 2 n_j)`.
pub fn build_parity_operator(n_sites: usize) -> ManyBodyOperator {
    ManyBodyOperator::new(n_sites, vec![Term::new(1.0, [Factor::Parity])])
}

/// Total `sum_j sigma_j^z`.
pub fn build_total_sz(n_sites: usize) -> ManyBodyOperator {
    let terms = (0..n_sites).map(|j| Term::new(1.0, [Factor::SpinZ(j)])).collect();
    ManyBodyOperator::new(n_sites, terms)
}

/// Cyclic XY Hamiltonian acting on spins (no fermionic strings).
///
/// `Jx sx sx + Jy sy sy = J (s+ s- + s- s+) + gamma (s+ s+ + s- s-)`.
pub fn build_xy_hamiltonian(spec: &XYSpec) -> Result<ManyBodyOperator> {
    spec.validate()?;
    let n = spec.n_sites;
    let (j_sum, gamma, h) = (spec.coupling_sum, spec.anisotropy, spec.field);
    let mut terms = Vec::with_capacity(4 * n + n);
    for i in 0..n {
        let k = (i + 1) % n;
        terms.push(Term::new(-j_sum, [Factor::SpinRaise(i), Factor::SpinLower(k)]));
        terms.push(Term::new(-j_sum, [Factor::SpinLower(i), Factor::SpinRaise(k)]));
        terms.push(Term::new(-gamma, [Factor::SpinRaise(i), Factor::SpinRaise(k)]));
        terms.push(Term::new(-gamma, [Factor::SpinLower(i), Factor::SpinLower(k)]));
    }
    for i in 0..n {
        terms.push(Term::new(-0.5 * h, [Factor::SpinZ(i)]));
    }
    Ok(ManyBodyOperator::new(n, terms))
}

/// Open-chain fermionic image of the XY bulk under Jordan-Wigner with
/// `sigma_z = 1 - 2 n`: an open Kitaev chain with `w = J`, `Delta = gamma`,
/// `mu = -h`.
pub fn build_jw_bulk_term(spec: &XYSpec) -> Result<ManyBodyOperator> {
    spec.validate()?;
    build_kitaev_hamiltonian(&ChainSpec::open(
        spec.n_sites,
        spec.coupling_sum,
        -spec.field,
        spec.anisotropy,
    ))
}

/// Fermionic boundary correction `P (J a_N^† a_1 + gamma a_N^† a_1^† + h.c.)`
/// that completes [`build_jw_bulk_term`] to the full image of the ring.
pub fn build_jw_boundary_term(spec: &XYSpec) -> Result<ManyBodyOperator> {
    spec.validate()?;
    let n = spec.n_sites;
    let (j_sum, gamma) = (spec.coupling_sum, spec.anisotropy);
    let last = n - 1;
    let p = Factor::Parity;
    let terms = vec![
        Term::new(j_sum, [p, Factor::Create(last), Factor::Annihilate(0)]),
        Term::new(j_sum, [p, Factor::Create(0), Factor::Annihilate(last)]),
        Term::new(gamma, [p, Factor::Create(last), Factor::Create(0)]),
        Term::new(gamma, [p, Factor::Annihilate(0), Factor::Annihilate(last)]),
    ];
    let terms = terms.into_iter().filter(|t| t.coeff != 0.0).collect();
    Ok(ManyBodyOperator::new(n, terms))
}

/// Cyclic relabeling `j -> j+1 mod N` of basis states, as a permutation of
/// basis indices. Used to check translation invariance.
pub fn cyclic_shift_index(state: usize, n_sites: usize) -> usize {
    let mask = (1usize << n_sites) - 1;
    ((state << 1) | (state >> (n_sites - 1))) & mask
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;

    fn sorted_eigs(m: nalgebra::DMatrix<f64>) -> Vec<f64> {
        let mut e: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        e
    }

    #[test]
    fn dimer_hopping_spectrum() {
        let h = build_kitaev_hamiltonian(&ChainSpec::open(2, 1.0, 0.0, 0.0)).unwrap();
        let e = sorted_eigs(h.to_dense());
        for (got, want) in e.iter().zip([-1.0, 0.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-12, "{e:?}");
        }
    }

    #[test]
    fn number_only_chain_is_diagonal() {
        let h = build_kitaev_hamiltonian(&ChainSpec::open(2, 0.0, 2.0, 0.0)).unwrap();
        let m = h.to_dense();
        // occupations 0, 1, 1, 2 for b = 00, 01, 10, 11
        assert_eq!(m[(0, 0)], 2.0);
        assert_eq!(m[(1, 1)], 0.0);
        assert_eq!(m[(2, 2)], 0.0);
        assert_eq!(m[(3, 3)], -2.0);
        assert_eq!(m.clone() - nalgebra::DMatrix::from_diagonal(&m.diagonal()), nalgebra::DMatrix::zeros(4, 4));
    }

    #[test]
    fn parity_on_basis_states() {
        let p = build_parity_operator(3);
        let m = p.to_dense();
        assert_eq!(m[(0b000, 0b000)], 1.0);
        assert_eq!(m[(0b101, 0b101)], 1.0);
        assert_eq!(m[(0b001, 0b001)], -1.0);
        assert_eq!(&m * &m, nalgebra::DMatrix::identity(8, 8));
    }

    #[test]
    fn xy_dimer_spectrum() {
        let h = build_xy_hamiltonian(&XYSpec::new(2, 1.0, 0.0, 0.0)).unwrap();
        let e = sorted_eigs(h.to_dense());
        for (got, want) in e.iter().zip([-2.0, 0.0, 0.0, 2.0]) {
            assert!((got - want).abs() < 1e-12, "{e:?}");
        }
    }

    #[test]
    fn boundary_term_vanishes_without_couplings() {
        let b = build_jw_boundary_term(&XYSpec::new(4, 0.0, 0.0, 0.7)).unwrap();
        assert!(b.is_zero());
    }

    #[test]
    fn capacity_is_enforced() {
        let err = build_kitaev_hamiltonian(&ChainSpec::periodic(17, 1.0, 0.0, 0.5)).unwrap_err();
        assert_eq!(err, Error::Capacity { n_sites: 17, max_sites: 16 });
        assert!(ChainSpec::periodic(1, 1.0, 0.0, 0.5).validate().is_err());
        assert!(ChainSpec::periodic(4, f64::NAN, 0.0, 0.5).validate().is_err());
    }

    #[test]
    fn sector_dimensions_split_evenly() {
        let h = build_kitaev_hamiltonian(&ChainSpec::open(2, 1.0, 0.3, 0.4)).unwrap();
        for parity in [Parity::Even, Parity::Odd] {
            let s = sector_project(&h, parity).unwrap();
            assert_eq!(s.dimension(), 2);
            assert!(s.basis().iter().all(|&b| Parity::of_state(b) == parity));
        }
    }

    #[test]
    fn projecting_a_parity_breaking_operator_fails() {
        let op = ManyBodyOperator::new(3, vec![
            Term::new(1.0, [Factor::Create(1)]),
            Term::new(1.0, [Factor::Annihilate(1)]),
        ]);
        assert!(matches!(sector_project(&op, Parity::Even), Err(Error::SymmetryViolation { .. })));
    }

    #[test]
    fn cyclic_shift_wraps_top_bit() {
        assert_eq!(cyclic_shift_index(0b1001, 4), 0b0011);
        assert_eq!(cyclic_shift_index(0b0001, 4), 0b0010);
    }
}
