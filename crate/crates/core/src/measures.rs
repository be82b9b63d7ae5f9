//! Bipartite correlation measures on reduced density matrices.

use nalgebra::{DMatrix, Matrix4, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rdm::{reduce_to_pair, reduce_to_site, PairDensityMatrix};
use crate::solver::QuantumState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    MutualInformation,
    Concurrence,
    L1Coherence,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 3] = [
        MeasureKind::MutualInformation,
        MeasureKind::Concurrence,
        MeasureKind::L1Coherence,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MeasureKind::MutualInformation => "mutual_information",
            MeasureKind::Concurrence => "concurrence",
            MeasureKind::L1Coherence => "l1_coherence",
        }
    }
}

impl std::fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for MeasureKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "mutual_information" | "mi" => Ok(MeasureKind::MutualInformation),
            "concurrence" => Ok(MeasureKind::Concurrence),
            "l1_coherence" | "coherence" => Ok(MeasureKind::L1Coherence),
            other => Err(format!(
                "unknown measure `{other}` (expected mutual_information, concurrence or l1_coherence)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Natural,
    Base2,
}

impl LogBase {
    fn ln_scale(self) -> f64 {
        match self {
            LogBase::Natural => 1.0,
            LogBase::Base2 => std::f64::consts::LN_2,
        }
    }
}

impl std::str::FromStr for LogBase {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "natural" | "e" | "ln" => Ok(LogBase::Natural),
            "base2" | "2" | "bits" => Ok(LogBase::Base2),
            other => Err(format!("unknown log base `{other}` (expected natural or base2)")),
        }
    }
}

const EIGENVALUE_FLOOR: f64 = 1e-14;
const TRACE_TOLERANCE: f64 = 1e-8;

fn to_dmatrix<R: nalgebra::Dim, C: nalgebra::Dim, S>(m: &nalgebra::Matrix<Complex64, R, C, S>) -> DMatrix<Complex64>
where
    S: nalgebra::RawStorage<Complex64, R, C>,
{
    DMatrix::from_fn(m.nrows(), m.ncols(), |a, b| m[(a, b)])
}

fn check_trace(rho: &DMatrix<Complex64>) -> Result<()> {
    let trace = rho.trace();
    if (trace.re - 1.0).abs() > TRACE_TOLERANCE || trace.im.abs() > TRACE_TOLERANCE {
        return Err(Error::InvalidState(format!("trace {trace} deviates from 1")));
    }
    Ok(())
}

fn hermitian_eigenvalues(rho: &DMatrix<Complex64>) -> Vec<f64> {
    let sym = (rho + rho.adjoint()) * Complex64::from(0.5);
    SymmetricEigen::new(sym).eigenvalues.iter().copied().collect()
}

/// `-sum lambda log lambda` over eigenvalues above `1e-14`.
pub fn von_neumann_entropy(rho: &DMatrix<Complex64>, base: LogBase) -> Result<f64> {
    check_trace(rho)?;
    let s: f64 = hermitian_eigenvalues(rho)
        .into_iter()
        .filter(|&l| l > EIGENVALUE_FLOOR)
        .map(|l| -l * l.ln())
        .sum();
    Ok((s / base.ln_scale()).max(0.0))
}

/// `S(rho_i) + S(rho_j) - S(rho_ij)` from the pair matrix alone.
pub fn mutual_information_of_pair(rho: &PairDensityMatrix, base: LogBase) -> Result<f64> {
    let s_i = von_neumann_entropy(&to_dmatrix(&rho.marginal_first()), base)?;
    let s_j = von_neumann_entropy(&to_dmatrix(&rho.marginal_second()), base)?;
    let s_ij = von_neumann_entropy(&to_dmatrix(&rho.entries), base)?;
    let mi = s_i + s_j - s_ij;
    // rounding can leave tiny negatives
    Ok(if mi < 0.0 && mi > -1e-12 { 0.0 } else { mi })
}

/// Mutual information between sites `i` and `j` of `state`.
pub fn mutual_information(state: &QuantumState, i: usize, j: usize, base: LogBase) -> Result<f64> {
    let (lo, hi) = (i.min(j), i.max(j));
    let rho = reduce_to_pair(state, lo, hi)?;
    let s_i = von_neumann_entropy(&to_dmatrix(&reduce_to_site(state, i)?.entries), base)?;
    let s_j = von_neumann_entropy(&to_dmatrix(&reduce_to_site(state, j)?.entries), base)?;
    let s_ij = von_neumann_entropy(&to_dmatrix(&rho.entries), base)?;
    let mi = s_i + s_j - s_ij;
    Ok(if mi < 0.0 && mi > -1e-12 { 0.0 } else { mi })
}

/// `sigma_y (x) sigma_y` in the occupation basis.
fn spin_flip() -> Matrix4<Complex64> {
    let mut m = Matrix4::from_element(Complex64::new(0.0, 0.0));
    m[(0, 3)] = Complex64::from(-1.0);
    m[(1, 2)] = Complex64::from(1.0);
    m[(2, 1)] = Complex64::from(1.0);
    m[(3, 0)] = Complex64::from(-1.0);
    m
}

fn psd_sqrt(rho: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let sym = (rho + rho.adjoint()) * Complex64::from(0.5);
    let eig = SymmetricEigen::new(sym);
    let roots = eig.eigenvalues.map(|l| Complex64::from(l.max(0.0).sqrt()));
    let v = eig.eigenvectors;
    v * Matrix4::from_diagonal(&roots) * v.adjoint()
}

/// Wootters concurrence, `max(0, l1 - l2 - l3 - l4)` with `l_k` the square
/// roots of the eigenvalues of `rho (sy sy) rho* (sy sy)`, in decreasing order.
///
/// The `l_k` are taken as singular values of `sqrt(rho) sqrt(rho~)`, which keeps
/// them accurate to rounding even when `rho` is rank deficient.
pub fn concurrence(rho: &PairDensityMatrix) -> Result<f64> {
    check_trace(&to_dmatrix(&rho.entries))?;
    let flip = spin_flip();
    let tilde = flip * rho.entries.map(|z| z.conj()) * flip;
    let product = psd_sqrt(&rho.entries) * psd_sqrt(&tilde);
    let mut lambdas: Vec<f64> = product.singular_values().iter().copied().collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0))
}

/// Closed form for X-shaped matrices:
/// `2 max(0, |rho_03| - sqrt(rho_11 rho_22), |rho_12| - sqrt(rho_00 rho_33))`.
pub fn concurrence_x_state(rho: &PairDensityMatrix) -> f64 {
    let e = &rho.entries;
    let d = |k: usize| e[(k, k)].re.max(0.0);
    let pair = e[(0, 3)].norm() - (d(1) * d(2)).sqrt();
    let hop = e[(1, 2)].norm() - (d(0) * d(3)).sqrt();
    (2.0 * pair.max(hop).max(0.0)).min(1.0)
}

/// `sum_{a != b} |rho_ab|` in the occupation basis.
pub fn l1_coherence(rho: &DMatrix<Complex64>) -> Result<f64> {
    check_trace(rho)?;
    let mut total = 0.0;
    for a in 0..rho.nrows() {
        for b in 0..rho.ncols() {
            if a != b {
                total += rho[(a, b)].norm();
            }
        }
    }
    Ok(total)
}

/// Evaluates `kind` on a pair matrix.
pub fn evaluate(kind: MeasureKind, rho: &PairDensityMatrix, base: LogBase) -> Result<f64> {
    match kind {
        MeasureKind::MutualInformation => mutual_information_of_pair(rho, base),
        MeasureKind::Concurrence => concurrence(rho),
        MeasureKind::L1Coherence => l1_coherence(&to_dmatrix(&rho.entries)),
    }
}
