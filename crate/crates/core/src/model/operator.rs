//! Matrix-free many-body operators on the `2^N` occupation basis.
//!
//! Site `j` (zero-based) is stored in bit `j` of a basis index. Fermionic
//! ladder operators on site `j` pick up `(-1)^(occupied sites below j)`;
//! spin operators act on the same bits with spin-up meaning an empty site
//! (`sigma_z = 1 - 2 n`), so the Jordan-Wigner map is the identity on labels.

use std::ops::{AddAssign, Mul};

use nalgebra::DMatrix;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One factor of an operator product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    /// Fermionic creation `a_j^†`.
    Create(usize),
    /// Fermionic annihilation `a_j`.
    Annihilate(usize),
    /// Occupation number `n_j`.
    Number(usize),
    /// Spin raising `sigma_j^+` (occupied -> empty).
    SpinRaise(usize),
    /// Spin lowering `sigma_j^-` (empty -> occupied).
    SpinLower(usize),
    /// `sigma_j^z`, `+1` on an empty site.
    SpinZ(usize),
    /// Global parity `prod_j (1 - 2 n_j)`.
    Parity,
}

impl Factor {
    /// Acts on a basis state, returning the sign and the new basis index.
    #[inline]
    fn act(self, state: usize) -> Option<(f64, usize)> {
        match self {
            Factor::Create(j) => {
                let bit = 1usize << j;
                if state & bit != 0 {
                    return None;
                }
                Some((ordering_sign(state, j), state | bit))
            }
            Factor::Annihilate(j) => {
                let bit = 1usize << j;
                if state & bit == 0 {
                    return None;
                }
                Some((ordering_sign(state, j), state & !bit))
            }
            Factor::Number(j) => {
                if state & (1 << j) != 0 {
                    Some((1.0, state))
                } else {
                    None
                }
            }
            Factor::SpinRaise(j) => {
                let bit = 1usize << j;
                if state & bit == 0 {
                    None
                } else {
                    Some((1.0, state & !bit))
                }
            }
            Factor::SpinLower(j) => {
                let bit = 1usize << j;
                if state & bit != 0 {
                    None
                } else {
                    Some((1.0, state | bit))
                }
            }
            Factor::SpinZ(j) => {
                if state & (1 << j) == 0 {
                    Some((1.0, state))
                } else {
                    Some((-1.0, state))
                }
            }
            Factor::Parity => Some((parity_sign(state), state)),
        }
    }

    fn site(self) -> Option<usize> {
        match self {
            Factor::Create(j)
            | Factor::Annihilate(j)
            | Factor::Number(j)
            | Factor::SpinRaise(j)
            | Factor::SpinLower(j)
            | Factor::SpinZ(j) => Some(j),
            Factor::Parity => None,
        }
    }
}

/// `(-1)^(number of occupied sites with index < j)`.
#[inline]
pub fn ordering_sign(state: usize, j: usize) -> f64 {
    if (state & ((1usize << j) - 1)).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `(-1)^(number of occupied sites)`.
#[inline]
pub fn parity_sign(state: usize) -> f64 {
    if state.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// A real coefficient times an ordered product of factors. The product is
/// applied right to left, as written.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub factors: Vec<Factor>,
}

impl Term {
    pub fn new(coeff: f64, factors: impl Into<Vec<Factor>>) -> Self {
        Term {
            coeff,
            factors: factors.into(),
        }
    }

    pub fn constant(coeff: f64) -> Self {
        Term {
            coeff,
            factors: Vec::new(),
        }
    }

    /// `<out|T|state>` for the unique `out` reached from `state`.
    #[inline]
    pub fn act(&self, state: usize) -> Option<(f64, usize)> {
        let mut sign = self.coeff;
        let mut current = state;
        for factor in self.factors.iter().rev() {
            let (s, next) = factor.act(current)?;
            sign *= s;
            current = next;
        }
        Some((sign, current))
    }
}

/// A Hermitian operator on the occupation basis of `n_sites` modes, kept as
/// a sum of real terms and applied matrix-free.
#[derive(Debug, Clone, PartialEq)]
pub struct ManyBodyOperator {
    n_sites: usize,
    terms: Vec<Term>,
}

impl ManyBodyOperator {
    pub fn new(n_sites: usize, terms: Vec<Term>) -> Self {
        debug_assert!(terms
            .iter()
            .flat_map(|t| t.factors.iter())
            .filter_map(|f| f.site())
            .all(|j| j < n_sites));
        ManyBodyOperator { n_sites, terms }
    }

    pub fn zero(n_sites: usize) -> Self {
        ManyBodyOperator::new(n_sites, Vec::new())
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dimension(&self) -> usize {
        1 << self.n_sites
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coeff == 0.0)
    }

    /// Sum of two operators on the same chain.
    pub fn plus(&self, other: &ManyBodyOperator) -> ManyBodyOperator {
        assert_eq!(self.n_sites, other.n_sites, "operators act on different chains");
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        ManyBodyOperator::new(self.n_sites, terms)
    }

    pub fn scaled(&self, factor: f64) -> ManyBodyOperator {
        let terms = self
            .terms
            .iter()
            .map(|t| Term::new(t.coeff * factor, t.factors.clone()))
            .collect();
        ManyBodyOperator::new(self.n_sites, terms)
    }

    /// Product `self * other` (apply `other` first).
    pub fn compose(&self, other: &ManyBodyOperator) -> ManyBodyOperator {
        assert_eq!(self.n_sites, other.n_sites, "operators act on different chains");
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut factors = a.factors.clone();
                factors.extend(b.factors.iter().copied());
                terms.push(Term::new(a.coeff * b.coeff, factors));
            }
        }
        ManyBodyOperator::new(self.n_sites, terms)
    }

    /// Nonzero contributions `(row, value)` of column `state`, unmerged.
    pub fn column(&self, state: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.terms
            .iter()
            .filter_map(move |t| t.act(state).map(|(v, out)| (out, v)))
    }

    /// `out = O * input`.
    pub fn apply_into<T>(&self, input: &[T], out: &mut [T])
    where
        T: Copy + Zero + AddAssign + Mul<f64, Output = T>,
    {
        let dim = self.dimension();
        assert_eq!(input.len(), dim);
        assert_eq!(out.len(), dim);
        out.iter_mut().for_each(|x| *x = T::zero());
        for (state, &amp) in input.iter().enumerate() {
            if amp.is_zero() {
                continue;
            }
            for term in &self.terms {
                if let Some((v, target)) = term.act(state) {
                    out[target] += amp * v;
                }
            }
        }
    }

    pub fn apply<T>(&self, input: &[T]) -> Vec<T>
    where
        T: Copy + Zero + AddAssign + Mul<f64, Output = T>,
    {
        let mut out = vec![T::zero(); self.dimension()];
        self.apply_into(input, &mut out);
        out
    }

    /// Dense matrix; only sensible for small chains.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let dim = self.dimension();
        let mut m = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            for (row, v) in self.column(col) {
                m[(row, col)] += v;
            }
        }
        m
    }

    /// Largest `||(O P - P O) v||` over `probes` random unit vectors.
    pub fn parity_commutator_norm(&self, probes: usize, seed: u64) -> f64 {
        let parity = super::build_parity_operator(self.n_sites);
        self.commutator_norm(&parity, probes, seed)
    }

    /// Largest `||[self, other] v||` over random unit vectors.
    pub fn commutator_norm(&self, other: &ManyBodyOperator, probes: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = self.dimension();
        let mut worst = 0.0f64;
        for _ in 0..probes {
            let v = random_unit_vector(&mut rng, dim);
            let ab = self.apply(&other.apply(&v));
            let ba = other.apply(&self.apply(&v));
            let norm = ab
                .iter()
                .zip(&ba)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt();
            worst = worst.max(norm);
        }
        worst
    }
}

pub(crate) fn random_unit_vector(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn creation_sign_counts_lower_sites() {
        // |110> with sites 0,1 occupied; create on site 2 passes two fermions.
        let (s, out) = Factor::Create(2).act(0b011).unwrap();
        assert_eq!(out, 0b111);
        assert_eq!(s, 1.0);
        let (s, out) = Factor::Create(1).act(0b001).unwrap();
        assert_eq!(out, 0b011);
        assert_eq!(s, -1.0);
        assert!(Factor::Create(0).act(0b001).is_none());
    }

    #[test]
    fn anticommutation_on_basis() {
        // {a_0, a_1^†} = 0 on every basis state of three sites.
        let n = 3;
        let ab = ManyBodyOperator::new(
            n,
            vec![
                Term::new(1.0, [Factor::Annihilate(0), Factor::Create(1)]),
                Term::new(1.0, [Factor::Create(1), Factor::Annihilate(0)]),
            ],
        );
        assert_eq!(ab.to_dense(), DMatrix::zeros(8, 8));
        // {a_1, a_1^†} = 1
        let same = ManyBodyOperator::new(
            n,
            vec![
                Term::new(1.0, [Factor::Annihilate(1), Factor::Create(1)]),
                Term::new(1.0, [Factor::Create(1), Factor::Annihilate(1)]),
            ],
        );
        assert_eq!(same.to_dense(), DMatrix::identity(8, 8));
    }

    #[test]
    fn apply_is_linear() {
        let op = ManyBodyOperator::new(
            2,
            vec![
                Term::new(0.5, [Factor::Create(0), Factor::Annihilate(1)]),
                Term::new(0.5, [Factor::Create(1), Factor::Annihilate(0)]),
                Term::new(-1.5, [Factor::Number(1)]),
            ],
        );
        let u = [1.0, 2.0, -1.0, 0.5];
        let v = [0.3, -0.2, 0.7, 1.1];
        let combo: Vec<f64> = u.iter().zip(&v).map(|(a, b)| 2.0 * a - 3.0 * b).collect();
        let lhs = op.apply(&combo);
        let (ou, ov) = (op.apply(&u), op.apply(&v));
        for k in 0..4 {
            assert!((lhs[k] - (2.0 * ou[k] - 3.0 * ov[k])).abs() < 1e-12);
        }
    }
}
