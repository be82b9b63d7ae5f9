//! Weighted correlation networks over chain sites and their density and
//! clustering metrics.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::format_g17;
use crate::measures::{evaluate, LogBase, MeasureKind};
use crate::rdm::{reduce_all_pairs, reduce_to_pair_with, RdmConvention};
use crate::solver::QuantumState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    Raw,
    /// Weights divided by the largest weight before the clustering sums.
    #[default]
    MaxNormalized,
}

impl std::str::FromStr for Normalization {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "raw" => Ok(Normalization::Raw),
            "normalized" | "max_normalized" | "max" => Ok(Normalization::MaxNormalized),
            other => Err(format!("unknown clustering normalization `{other}` (expected raw or normalized)")),
        }
    }
}

/// Settings shared by every network build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct NetworkOptions {
    pub log_base: LogBase,
    pub convention: RdmConvention,
    pub normalization: Normalization,
}

/// Weights below this are treated as exact zeros.
pub const WEIGHT_FLOOR: f64 = 1e-14;

/// Symmetric, nonnegative weights with zero diagonal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationNetwork {
    n_nodes: usize,
    weights: Vec<f64>,
    pub measure: MeasureKind,
    pub normalization: Normalization,
}

impl CorrelationNetwork {
    /// Builds a network from a row-major `n x n` weight matrix.
    pub fn from_weights(n_nodes: usize, weights: Vec<f64>, measure: MeasureKind) -> Result<CorrelationNetwork> {
        if weights.len() != n_nodes * n_nodes {
            return Err(Error::DimensionMismatch {
                left: weights.len(),
                right: n_nodes * n_nodes,
            });
        }
        for i in 0..n_nodes {
            if weights[i * n_nodes + i] != 0.0 {
                return Err(Error::InvalidParameter {
                    key: "weights",
                    reason: format!("diagonal entry {i} is nonzero"),
                });
            }
            for j in 0..n_nodes {
                let w = weights[i * n_nodes + j];
                if !(w >= 0.0) || !w.is_finite() {
                    return Err(Error::InvalidParameter {
                        key: "weights",
                        reason: format!("weight ({i}, {j}) = {w} is not a finite nonnegative number"),
                    });
                }
                if w != weights[j * n_nodes + i] {
                    return Err(Error::InvalidParameter {
                        key: "weights",
                        reason: format!("weights ({i}, {j}) and ({j}, {i}) differ"),
                    });
                }
            }
        }
        Ok(CorrelationNetwork {
            n_nodes,
            weights,
            measure,
            normalization: Normalization::default(),
        })
    }

    /// Network with every edge carrying `weight`.
    pub fn uniform(n_nodes: usize, weight: f64, measure: MeasureKind) -> CorrelationNetwork {
        let weights = (0..n_nodes * n_nodes)
            .map(|k| if k / n_nodes == k % n_nodes { 0.0 } else { weight })
            .collect();
        CorrelationNetwork::from_weights(n_nodes, weights, measure).expect("uniform weights are valid")
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n_nodes + j]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `N(N-1)/2` upper-triangle weights, lexicographic in `(i, j)`.
    pub fn edges(&self) -> Vec<f64> {
        let n = self.n_nodes;
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| self.weight(i, j)).collect()
    }

    /// Permutes node labels: node `k` of the result is node `perm[k]` of `self`.
    pub fn relabeled(&self, perm: &[usize]) -> CorrelationNetwork {
        let n = self.n_nodes;
        let weights = (0..n * n).map(|k| self.weight(perm[k / n], perm[k % n])).collect();
        CorrelationNetwork {
            n_nodes: n,
            weights,
            measure: self.measure,
            normalization: self.normalization,
        }
    }

    /// Weights used by the clustering sums, with the floor applied and the
    /// configured normalization. `None` when every weight is zero.
    fn clustering_weights(&self) -> Option<Vec<f64>> {
        let floored: Vec<f64> = self.weights.iter().map(|&w| if w < WEIGHT_FLOOR { 0.0 } else { w }).collect();
        let max = floored.iter().copied().fold(0.0, f64::max);
        if max == 0.0 {
            return None;
        }
        Some(match self.normalization {
            Normalization::Raw => floored,
            Normalization::MaxNormalized => floored.into_iter().map(|w| w / max).collect(),
        })
    }
}

/// Builds the network whose edge `(i, j)` is `measure(rho_ij)`.
pub fn build_network(state: &QuantumState, measure: MeasureKind, options: &NetworkOptions) -> Result<CorrelationNetwork> {
    let n = state.n_sites;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let rho = reduce_to_pair_with(state, i, j, options.convention)?;
            evaluate(measure, &rho, options.log_base)
        })
        .collect::<Result<_>>()?;
    Ok(network_from_pair_values(n, &values, measure, options.normalization))
}

/// One network per measure from a single pass of pair reductions.
pub fn build_networks(
    state: &QuantumState,
    measures: &[MeasureKind],
    options: &NetworkOptions,
) -> Result<Vec<CorrelationNetwork>> {
    let rhos = reduce_all_pairs(state, options.convention)?;
    measures
        .iter()
        .map(|&measure| {
            let values: Vec<f64> = rhos
                .iter()
                .map(|rho| evaluate(measure, rho, options.log_base))
                .collect::<Result<_>>()?;
            Ok(network_from_pair_values(state.n_sites, &values, measure, options.normalization))
        })
        .collect()
}

/// Assembles a network from upper-triangle values in lexicographic order.
pub fn network_from_pair_values(
    n: usize,
    values: &[f64],
    measure: MeasureKind,
    normalization: Normalization,
) -> CorrelationNetwork {
    let mut weights = vec![0.0; n * n];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            let w = values[k].max(0.0);
            weights[i * n + j] = w;
            weights[j * n + i] = w;
            k += 1;
        }
    }
    CorrelationNetwork {
        n_nodes: n,
        weights,
        measure,
        normalization,
    }
}

/// `d_i = sum_{j != i} e_ij / (N - 1)` on raw weights.
pub fn node_density(net: &CorrelationNetwork, i: usize) -> Result<f64> {
    let n = net.n_nodes;
    if i >= n {
        return Err(Error::SiteOutOfRange { index: i, n_sites: n });
    }
    let sum: f64 = (0..n).filter(|&j| j != i).map(|j| net.weight(i, j)).sum();
    Ok(sum / (n - 1) as f64)
}

/// Weighted clustering coefficient
/// `C = sum_{i,j,k distinct} e_ij e_jk e_ki / sum_k sum_{i,j,k distinct} e_ik e_jk`.
///
/// Returns `None` when the denominator vanishes (e.g. an all-zero network).
pub fn clustering(net: &CorrelationNetwork) -> Option<f64> {
    let e = net.clustering_weights()?;
    let n = net.n_nodes;
    if n < 3 {
        return None;
    }
    // numerator: tr(E^3); zero diagonal removes coincident indices
    let mut e2 = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let eik = e[i * n + k];
            if eik == 0.0 {
                continue;
            }
            for j in 0..n {
                e2[i * n + j] += eik * e[k * n + j];
            }
        }
    }
    let numerator: f64 = (0..n * n).map(|idx| e2[idx] * e[idx]).sum();
    // denominator: sum_k (s_k^2 - sum_i e_ik^2)
    let denominator: f64 = (0..n)
        .map(|k| {
            let col = (0..n).map(|i| e[i * n + k]);
            let (s, sq) = col.fold((0.0, 0.0), |(s, sq), w| (s + w, sq + w * w));
            s * s - sq
        })
        .sum();
    if denominator <= 0.0 {
        return None;
    }
    Some(numerator / denominator)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkReport {
    pub measure: MeasureKind,
    pub densities: Vec<f64>,
    pub mean_density: f64,
    /// `null` when undefined.
    pub clustering: Option<f64>,
}

pub fn network_report(net: &CorrelationNetwork) -> NetworkReport {
    let densities: Vec<f64> = (0..net.n_nodes)
        .map(|i| node_density(net, i).expect("index in range"))
        .collect();
    let mean_density = densities.iter().sum::<f64>() / densities.len() as f64;
    NetworkReport {
        measure: net.measure,
        densities,
        mean_density,
        clustering: clustering(net),
    }
}

#[derive(Serialize)]
struct Sidecar<'a> {
    n: usize,
    measure: &'a str,
    normalization: Normalization,
}

/// Writes the weight matrix as CSV (`%.17g`, one row per node) and a JSON
/// sidecar `{n, measure, normalization}` next to it.
pub fn export_network(net: &CorrelationNetwork, csv_path: &Path) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(csv_path)?);
    f.write_all(network_csv(net).as_bytes())?;
    f.flush()?;
    let sidecar = Sidecar {
        n: net.n_nodes,
        measure: net.measure.as_str(),
        normalization: net.normalization,
    };
    let json = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
    std::fs::write(csv_path.with_extension("json"), json + "\n")?;
    Ok(())
}

pub fn network_csv(net: &CorrelationNetwork) -> String {
    let n = net.n_nodes;
    let mut out = String::new();
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format_g17(net.weight(i, j))).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
