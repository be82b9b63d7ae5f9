//! Sweeps over the chemical potential, parity-switch detection with
//! bisection, metric-jump detection, and the clustering-peak search.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::freefermion::majorana_zero_mode_potentials;
use crate::io::{format_optional, format_shortest};
use crate::measures::MeasureKind;
use crate::model::{Boundary, ChainSpec, Parity};
use crate::network::{build_networks, network_report, NetworkOptions};
use crate::solver::{fidelity, ground_parity, ground_state_with, SolverOptions};
use crate::theory::factorization_potential;

/// Grid points closer than this to a predicted degeneracy are moved off it.
pub const NUDGE: f64 = 1e-9;
pub const DEFAULT_RESOLUTION: f64 = 1e-3;
pub const DEFAULT_JUMP_FACTOR: f64 = 10.0;
/// Metric jumps below this absolute size are ignored.
pub const JUMP_FLOOR: f64 = 1e-9;
/// A clustering peak counts as `C = 1` when it reaches `1 - C1_THRESHOLD`.
pub const C1_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Every chain parameter except `mu`, which the sweep overrides.
    pub template: ChainSpec,
    pub mu_range: (f64, f64),
    pub base_points: usize,
    pub resolution: f64,
    pub measures: Vec<MeasureKind>,
    pub network: NetworkOptions,
    pub solver: SolverOptions,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl SweepSpec {
    pub fn new(template: ChainSpec, mu_range: (f64, f64), base_points: usize) -> SweepSpec {
        SweepSpec {
            template,
            mu_range,
            base_points,
            resolution: DEFAULT_RESOLUTION,
            measures: vec![MeasureKind::Concurrence],
            network: NetworkOptions::default(),
            solver: SolverOptions::default(),
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.template.validate()?;
        let (lo, hi) = self.mu_range;
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParameter {
                key: "mu_range",
                reason: "bounds must be finite".into(),
            });
        }
        if lo > hi {
            return Err(Error::InvalidParameter {
                key: "mu_range",
                reason: format!("lower bound {lo} exceeds upper bound {hi}"),
            });
        }
        if self.base_points < 2 && lo < hi {
            return Err(Error::InvalidParameter {
                key: "points",
                reason: format!("need at least 2 grid points, got {}", self.base_points),
            });
        }
        if !(self.resolution > 0.0) {
            return Err(Error::InvalidParameter {
                key: "resolution",
                reason: format!("must be positive, got {}", self.resolution),
            });
        }
        if self.measures.is_empty() {
            return Err(Error::InvalidParameter {
                key: "measure",
                reason: "at least one measure is required".into(),
            });
        }
        if self.workers == Some(0) {
            return Err(Error::InvalidParameter {
                key: "workers",
                reason: "must be at least 1".into(),
            });
        }
        Ok(())
    }

    /// Evenly spaced `mu` values, nudged off predicted degeneracies. A
    /// collapsed range yields one point.
    pub fn grid(&self) -> Vec<f64> {
        let (lo, hi) = self.mu_range;
        let raw: Vec<f64> = if lo == hi {
            vec![lo]
        } else {
            let m = self.base_points - 1;
            (0..=m)
                .map(|k| if k == m { hi } else { lo + (hi - lo) * k as f64 / m as f64 })
                .collect()
        };
        let marks = predicted_degeneracies(&self.template);
        raw.into_iter().map(|mu| nudge(mu, &marks, self.mu_range)).collect()
    }
}

/// Potentials where the two parity sectors are expected to cross.
pub fn predicted_degeneracies(template: &ChainSpec) -> Vec<f64> {
    match template.boundary {
        Boundary::Periodic => vec![-2.0 * template.hopping.abs(), 2.0 * template.hopping.abs()],
        Boundary::Open => {
            let z = majorana_zero_mode_potentials(template.n_sites, template.hopping, template.pairing);
            z.values
        }
    }
}

fn nudge(mu: f64, marks: &[f64], range: (f64, f64)) -> f64 {
    for &m in marks {
        if (mu - m).abs() < NUDGE {
            // step toward the interior so endpoints stay inside the range
            let up = m + NUDGE;
            return if up <= range.1 || range.0 == range.1 { up } else { m - NUDGE };
        }
    }
    mu
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureRecord {
    pub measure: MeasureKind,
    pub clustering: Option<f64>,
    pub mean_density: f64,
    pub densities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub mu: f64,
    pub parity: Option<Parity>,
    pub energy: Option<f64>,
    pub degenerate: bool,
    /// Solver or measure failure at this point; metrics are then absent.
    pub error: Option<String>,
    pub measures: Vec<MeasureRecord>,
}

impl SweepRecord {
    pub fn failed(&self) -> bool {
        self.error.is_some()
    }

    pub fn measure(&self, kind: MeasureKind) -> Option<&MeasureRecord> {
        self.measures.iter().find(|m| m.measure == kind)
    }
}

/// Ground state and all requested networks at one `mu`.
pub fn evaluate_point(spec: &SweepSpec, mu: f64) -> SweepRecord {
    let chain = spec.template.with_mu(mu);
    let outcome = ground_state_with(&chain, &spec.solver).and_then(|g| {
        let nets = build_networks(&g, &spec.measures, &spec.network)?;
        Ok((g, nets))
    });
    match outcome {
        Ok((g, nets)) => SweepRecord {
            mu,
            parity: Some(Parity::from_sign(g.parity_expectation)),
            energy: Some(g.energy),
            degenerate: g.degenerate,
            error: None,
            measures: nets
                .iter()
                .map(|net| {
                    let r = network_report(net);
                    MeasureRecord {
                        measure: r.measure,
                        clustering: r.clustering,
                        mean_density: r.mean_density,
                        densities: r.densities,
                    }
                })
                .collect(),
        },
        Err(e) => {
            log::warn!("sweep point mu = {mu} failed: {e}");
            SweepRecord {
                mu,
                parity: None,
                energy: None,
                degenerate: false,
                error: Some(e.to_string()),
                measures: Vec::new(),
            }
        }
    }
}

fn in_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParameter {
                    key: "workers",
                    reason: e.to_string(),
                })?;
            Ok(pool.install(job))
        }
    }
}

/// Solves every grid point; results come back in grid order regardless of
/// scheduling.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    let grid = spec.grid();
    in_pool(spec.workers, || grid.par_iter().map(|&mu| evaluate_point(spec, mu)).collect())
}

/// Adjacent grid points whose parities differ.
pub fn parity_switch_brackets(records: &[SweepRecord]) -> Vec<(usize, usize)> {
    let valid: Vec<usize> = (0..records.len()).filter(|&k| records[k].parity.is_some()).collect();
    valid
        .windows(2)
        .filter(|w| records[w[0]].parity != records[w[1]].parity)
        .map(|w| (w[0], w[1]))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Clustering,
    MeanDensity,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Clustering => "clustering",
            Metric::MeanDensity => "mean_density",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricJump {
    pub measure: MeasureKind,
    pub metric: Metric,
    pub mu_before: f64,
    pub mu_after: f64,
    pub jump: f64,
    /// Median absolute difference between adjacent points of the series.
    pub median_variation: f64,
    /// Whether the interval also contains a parity switch; jumps without one
    /// are anomalies.
    pub at_parity_switch: bool,
}

/// Adjacent differences exceeding `factor` times the median adjacent
/// difference of the same series.
pub fn metric_jumps(records: &[SweepRecord], factor: f64) -> Vec<MetricJump> {
    let mut out = Vec::new();
    let Some(first) = records.iter().find(|r| !r.failed()) else {
        return out;
    };
    let kinds: Vec<MeasureKind> = first.measures.iter().map(|m| m.measure).collect();
    for kind in kinds {
        for metric in [Metric::MeanDensity, Metric::Clustering] {
            let series: Vec<(usize, f64)> = records
                .iter()
                .enumerate()
                .filter_map(|(k, r)| {
                    let m = r.measure(kind)?;
                    match metric {
                        Metric::MeanDensity => Some((k, m.mean_density)),
                        Metric::Clustering => m.clustering.map(|c| (k, c)),
                    }
                })
                .collect();
            if series.len() < 3 {
                continue;
            }
            let diffs: Vec<f64> = series.windows(2).map(|w| (w[1].1 - w[0].1).abs()).collect();
            let median = median(&diffs);
            let threshold = (factor * median).max(JUMP_FLOOR);
            for (w, &d) in series.windows(2).zip(&diffs) {
                if d > threshold {
                    let (a, b) = (w[0].0, w[1].0);
                    out.push(MetricJump {
                        measure: kind,
                        metric,
                        mu_before: records[a].mu,
                        mu_after: records[b].mu,
                        jump: d,
                        median_variation: median,
                        at_parity_switch: records[a].parity.is_some()
                            && records[b].parity.is_some()
                            && records[a].parity != records[b].parity,
                    });
                }
            }
        }
    }
    out
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        0.0
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discontinuity {
    /// Midpoint of the final bracket.
    pub mu: f64,
    pub bracket: (f64, f64),
    pub parity_before: Parity,
    pub parity_after: Parity,
    /// Largest metric jump on the originating grid interval, if any.
    pub jumps: Vec<MetricJump>,
}

/// Bisects on ground-state parity between `lo` (parity `p_lo`) and `hi`
/// until the bracket is no wider than `resolution`.
pub fn bisect_parity(
    template: &ChainSpec,
    solver: &SolverOptions,
    mut lo: f64,
    mut hi: f64,
    p_lo: Parity,
    resolution: f64,
) -> Result<(f64, f64)> {
    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        let (p, _) = ground_parity(&template.with_mu(mid), solver)?;
        if p == p_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Parity switches of a sweep, each bisected to `spec.resolution`, with the
/// metric jumps that share their grid interval. Also returns jumps that sit
/// on no parity switch.
pub fn detect_discontinuities(
    spec: &SweepSpec,
    records: &[SweepRecord],
    jump_factor: f64,
) -> Result<(Vec<Discontinuity>, Vec<MetricJump>)> {
    if records.len() < 3 {
        return Ok((Vec::new(), Vec::new()));
    }
    let jumps = metric_jumps(records, jump_factor);
    let brackets = parity_switch_brackets(records);
    let refined: Vec<Result<Discontinuity>> = in_pool(spec.workers, || {
        brackets
            .par_iter()
            .map(|&(a, b)| {
                let (ra, rb) = (&records[a], &records[b]);
                let p_lo = ra.parity.expect("bracket has parity");
                let bracket = bisect_parity(&spec.template, &spec.solver, ra.mu, rb.mu, p_lo, spec.resolution)?;
                let local: Vec<MetricJump> = jumps
                    .iter()
                    .filter(|j| j.mu_before == ra.mu && j.mu_after == rb.mu)
                    .cloned()
                    .collect();
                Ok(Discontinuity {
                    mu: 0.5 * (bracket.0 + bracket.1),
                    bracket,
                    parity_before: p_lo,
                    parity_after: rb.parity.expect("bracket has parity"),
                    jumps: local,
                })
            })
            .collect()
    })?;
    let discontinuities = refined.into_iter().collect::<Result<Vec<_>>>()?;
    let anomalies = jumps.into_iter().filter(|j| !j.at_parity_switch).collect();
    Ok((discontinuities, anomalies))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PeakSource {
    /// Refined from a local maximum of the coarse grid.
    Grid,
    /// Refined around the closed-form factorization potential.
    Prediction,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct C1Point {
    pub measure: MeasureKind,
    pub found: bool,
    /// Best `mu` seen, reported even when the peak misses the threshold.
    pub mu: Option<f64>,
    pub clustering: Option<f64>,
    pub source: Option<PeakSource>,
    /// Closed-form `2 sqrt(w^2 - Delta^2)` when defined.
    pub predicted: Option<f64>,
    pub evaluations: usize,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakSearch {
    pub mu_range: (f64, f64),
    pub coarse_points: usize,
    pub resolution: f64,
    /// Number of coarse local maxima refined.
    pub candidates: usize,
    /// Half-width of the bracket opened around the closed-form potential.
    pub prediction_window: f64,
}

impl Default for PeakSearch {
    fn default() -> Self {
        PeakSearch {
            mu_range: (0.0, 3.0),
            coarse_points: 61,
            resolution: 1e-4,
            candidates: 3,
            prediction_window: 1e-3,
        }
    }
}

struct PeakProbe<'a> {
    template: ChainSpec,
    measure: MeasureKind,
    network: &'a NetworkOptions,
    solver: &'a SolverOptions,
    cache: BTreeMap<u64, f64>,
}

impl PeakProbe<'_> {
    /// Clustering at `mu`; undefined or failed points count as `-1`.
    fn eval(&mut self, mu: f64) -> f64 {
        if let Some(&c) = self.cache.get(&mu.to_bits()) {
            return c;
        }
        let c = ground_state_with(&self.template.with_mu(mu), self.solver)
            .and_then(|g| build_networks(&g, &[self.measure], self.network))
            .ok()
            .and_then(|nets| crate::network::clustering(&nets[0]))
            .unwrap_or(-1.0);
        self.cache.insert(mu.to_bits(), c);
        c
    }

    fn best(&self) -> Option<(f64, f64)> {
        self.cache
            .iter()
            .map(|(&bits, &c)| (f64::from_bits(bits), c))
            .filter(|&(_, c)| c >= 0.0)
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.total_cmp(&a.0)))
    }

    /// Maximizes over `[a, b]`: golden section when a nine-point pre-scan is
    /// unimodal, repeated zooming on the best sample otherwise.
    fn refine(&mut self, mut a: f64, mut b: f64, resolution: f64) {
        loop {
            if b - a <= resolution {
                return;
            }
            let samples: Vec<(f64, f64)> = (0..9)
                .map(|k| {
                    let mu = a + (b - a) * k as f64 / 8.0;
                    (mu, self.eval(mu))
                })
                .collect();
            let step = (b - a) / 8.0;
            let peaks = (0..9)
                .filter(|&k| {
                    let left = k == 0 || samples[k - 1].1 < samples[k].1;
                    let right = k == 8 || samples[k + 1].1 <= samples[k].1;
                    left && right
                })
                .count();
            let k_best = (0..9).max_by(|&x, &y| samples[x].1.total_cmp(&samples[y].1)).expect("nine samples");
            let lo = samples[k_best].0 - step;
            let hi = samples[k_best].0 + step;
            if peaks == 1 {
                self.golden(lo.max(a), hi.min(b), resolution);
                return;
            }
            a = lo.max(a);
            b = hi.min(b);
        }
    }

    fn golden(&mut self, mut a: f64, mut b: f64, resolution: f64) {
        let ratio = (5f64.sqrt() - 1.0) / 2.0;
        let mut x1 = b - ratio * (b - a);
        let mut x2 = a + ratio * (b - a);
        let mut f1 = self.eval(x1);
        let mut f2 = self.eval(x2);
        while b - a > resolution {
            if f1 >= f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - ratio * (b - a);
                f1 = self.eval(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + ratio * (b - a);
                f2 = self.eval(x2);
            }
        }
    }
}

/// Maximizes the clustering of `measure` networks over `mu` for pairing
/// `pairing`. Candidates are the largest coarse-grid local maxima and the
/// closed-form factorization potential; each is refined to
/// `search.resolution`. The peak is reported as found only for
/// `|Delta| < |w|` and a maximum of at least `1 - 1e-3`.
pub fn locate_c1_point(
    template: &ChainSpec,
    pairing: f64,
    measure: MeasureKind,
    search: &PeakSearch,
    network: &NetworkOptions,
    solver: &SolverOptions,
) -> Result<C1Point> {
    let template = ChainSpec { pairing, ..*template };
    template.validate()?;
    let predicted = factorization_potential(template.hopping, pairing).ok();
    if pairing.abs() >= template.hopping.abs() {
        return Ok(C1Point {
            measure,
            found: false,
            mu: None,
            clustering: None,
            source: None,
            predicted,
            evaluations: 0,
            note: Some(format!(
                "|Delta| = {} is not below |w| = {}; no fully regular point",
                pairing.abs(),
                template.hopping.abs()
            )),
        });
    }
    let mut probe = PeakProbe {
        template,
        measure,
        network,
        solver,
        cache: BTreeMap::new(),
    };
    let (lo, hi) = search.mu_range;
    let m = search.coarse_points.max(3) - 1;
    let coarse: Vec<f64> = (0..=m).map(|k| lo + (hi - lo) * k as f64 / m as f64).collect();
    let values: Vec<f64> = coarse.par_iter().map(|&mu| {
        let mut p = PeakProbe {
            template,
            measure,
            network,
            solver,
            cache: BTreeMap::new(),
        };
        p.eval(mu)
    }).collect();
    for (&mu, &c) in coarse.iter().zip(&values) {
        probe.cache.insert(mu.to_bits(), c);
    }
    let step = (hi - lo) / m as f64;
    let mut maxima: Vec<usize> = (0..=m)
        .filter(|&k| {
            values[k] >= 0.0
                && (k == 0 || values[k - 1] < values[k])
                && (k == m || values[k + 1] <= values[k])
        })
        .collect();
    maxima.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    maxima.truncate(search.candidates);
    let mut best_source = PeakSource::Grid;
    let mut best: Option<(f64, f64)> = None;
    for k in maxima {
        probe.refine((coarse[k] - step).max(lo), (coarse[k] + step).min(hi), search.resolution);
    }
    if let Some(b) = probe.best() {
        best = Some(b);
    }
    if let Some(mu_star) = predicted.filter(|&p| p >= lo && p <= hi) {
        probe.eval(mu_star);
        probe.refine(
            (mu_star - search.prediction_window).max(lo),
            (mu_star + search.prediction_window).min(hi),
            search.resolution,
        );
        if let Some(b) = probe.best() {
            if best.map_or(true, |g| b.1 > g.1) {
                best = Some(b);
                best_source = PeakSource::Prediction;
            }
        }
    }
    let found = best.is_some_and(|(_, c)| c >= 1.0 - C1_THRESHOLD);
    Ok(C1Point {
        measure,
        found,
        mu: best.map(|b| b.0),
        clustering: best.map(|b| b.1),
        source: best.map(|_| best_source),
        predicted,
        evaluations: probe.cache.len(),
        note: if found {
            None
        } else {
            Some(format!("maximum clustering below 1 - {C1_THRESHOLD}"))
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub kind: String,
    pub mu: f64,
    pub matched: bool,
    /// Distance to the nearest matching detection.
    pub offset: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremaGap {
    pub measure: MeasureKind,
    pub mu_clustering_max: f64,
    pub mu_density_min: f64,
    pub delta_mu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalPointReport {
    pub n_sites: usize,
    pub hopping: f64,
    pub pairing: f64,
    pub boundary: Boundary,
    pub mu_range: (f64, f64),
    pub resolution: f64,
    pub discontinuities: Vec<Discontinuity>,
    /// Metric jumps not accompanied by a parity switch.
    pub anomalies: Vec<MetricJump>,
    pub c1_points: Vec<C1Point>,
    pub predictions: Vec<Prediction>,
    /// Grid positions of the clustering maximum and mean-density minimum;
    /// the two need not coincide.
    pub extrema: Vec<ExtremaGap>,
    pub failed_points: usize,
}

fn match_prediction(kind: &str, mu: f64, detections: &[f64], tolerance: f64) -> Prediction {
    let offset = detections.iter().map(|d| (d - mu).abs()).min_by(f64::total_cmp);
    Prediction {
        kind: kind.to_string(),
        mu,
        matched: offset.is_some_and(|o| o <= tolerance),
        offset,
    }
}

fn extrema_gaps(records: &[SweepRecord], measures: &[MeasureKind]) -> Vec<ExtremaGap> {
    measures
        .iter()
        .filter_map(|&kind| {
            let cmax = records
                .iter()
                .filter_map(|r| Some((r.mu, r.measure(kind)?.clustering?)))
                .max_by(|a, b| a.1.total_cmp(&b.1))?;
            let dmin = records
                .iter()
                .filter_map(|r| Some((r.mu, r.measure(kind)?.mean_density)))
                .min_by(|a, b| a.1.total_cmp(&b.1))?;
            Some(ExtremaGap {
                measure: kind,
                mu_clustering_max: cmax.0,
                mu_density_min: dmin.0,
                delta_mu: cmax.0 - dmin.0,
            })
        })
        .collect()
}

/// Full detection pass: sweep, parity switches, metric jumps, clustering
/// peaks, and comparison with the closed-form potentials inside the range.
pub fn critical_point_report(spec: &SweepSpec, search_peaks: bool) -> Result<(Vec<SweepRecord>, CriticalPointReport)> {
    let records = run_sweep(spec)?;
    let (discontinuities, anomalies) = detect_discontinuities(spec, &records, DEFAULT_JUMP_FACTOR)?;
    let t = spec.template;
    let (lo, hi) = spec.mu_range;
    let tolerance = spec.resolution.max(DEFAULT_RESOLUTION);
    let inside = |mu: f64| mu >= lo && mu <= hi;
    let switches: Vec<f64> = discontinuities.iter().map(|d| d.mu).collect();

    let mut c1_points = Vec::new();
    if search_peaks {
        let search = PeakSearch {
            mu_range: spec.mu_range,
            ..PeakSearch::default()
        };
        for &m in &spec.measures {
            c1_points.push(locate_c1_point(&t, t.pairing, m, &search, &spec.network, &spec.solver)?);
        }
    }

    let mut predictions = Vec::new();
    if t.boundary == Boundary::Periodic {
        for mu_c in [-2.0 * t.hopping.abs(), 2.0 * t.hopping.abs()] {
            if inside(mu_c) {
                predictions.push(match_prediction("mu_c", mu_c, &switches, tolerance));
            }
        }
    } else {
        let z = majorana_zero_mode_potentials(t.n_sites, t.hopping, t.pairing);
        for (k, &mu_n) in z.values.iter().enumerate() {
            if inside(mu_n) {
                predictions.push(match_prediction(&format!("mu_n[{k}]"), mu_n, &switches, tolerance));
            }
        }
    }
    if let Ok(mu_star) = factorization_potential(t.hopping, t.pairing) {
        if inside(mu_star) && t.pairing.abs() < t.hopping.abs() {
            let peaks: Vec<f64> = c1_points.iter().filter(|c| c.found).filter_map(|c| c.mu).collect();
            predictions.push(match_prediction("mu_star", mu_star, &peaks, tolerance));
        }
    }

    let report = CriticalPointReport {
        n_sites: t.n_sites,
        hopping: t.hopping,
        pairing: t.pairing,
        boundary: t.boundary,
        mu_range: spec.mu_range,
        resolution: spec.resolution,
        discontinuities,
        anomalies,
        c1_points,
        predictions,
        extrema: extrema_gaps(&records, &spec.measures),
        failed_points: records.iter().filter(|r| r.failed()).count(),
    };
    Ok((records, report))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityPoint {
    pub mu: f64,
    pub fidelity: f64,
    pub parity: Parity,
}

/// `|<G(reference_mu)|G(mu)>|` over `grid`.
pub fn fidelity_sweep(
    template: &ChainSpec,
    reference_mu: f64,
    grid: &[f64],
    solver: &SolverOptions,
) -> Result<Vec<FidelityPoint>> {
    let reference = ground_state_with(&template.with_mu(reference_mu), solver)?;
    grid.par_iter()
        .map(|&mu| {
            let g = ground_state_with(&template.with_mu(mu), solver)?;
            Ok(FidelityPoint {
                mu,
                fidelity: fidelity(&reference, &g)?,
                parity: Parity::from_sign(g.parity_expectation),
            })
        })
        .collect()
}

pub const SWEEP_CSV_HEADER_PREFIX: &str = "mu,N,delta,w,boundary,parity,energy,degenerate,measure,clustering,mean_density";

/// One row per grid point and measure. Failed points keep a row per
/// requested measure with empty numeric fields.
pub fn sweep_csv(spec: &SweepSpec, records: &[SweepRecord]) -> String {
    let t = spec.template;
    let n = t.n_sites;
    let mut out = String::from(SWEEP_CSV_HEADER_PREFIX);
    for k in 0..n {
        let _ = write!(out, ",d_{k}");
    }
    out.push('\n');
    for r in records {
        for &kind in &spec.measures {
            let m = r.measure(kind);
            let _ = write!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                format_shortest(r.mu),
                n,
                format_shortest(t.pairing),
                format_shortest(t.hopping),
                t.boundary.as_str(),
                r.parity.map(|p| p.sign().to_string()).unwrap_or_default(),
                format_optional(r.energy),
                r.degenerate,
                kind,
                format_optional(m.and_then(|m| m.clustering)),
                format_optional(m.map(|m| m.mean_density)),
            );
            for k in 0..n {
                out.push(',');
                out.push_str(&format_optional(m.map(|m| m.densities[k])));
            }
            out.push('\n');
        }
    }
    out
}

/// `mu,fidelity,parity` rows.
pub fn fidelity_csv(points: &[FidelityPoint]) -> String {
    let mut out = String::from("mu,fidelity,parity\n");
    for p in points {
        let _ = writeln!(out, "{},{},{}", format_shortest(p.mu), format_shortest(p.fidelity), p.parity.sign());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(mu: f64, parity: Parity, density: f64) -> SweepRecord {
        SweepRecord {
            mu,
            parity: Some(parity),
            energy: Some(0.0),
            degenerate: false,
            error: None,
            measures: vec![MeasureRecord {
                measure: MeasureKind::Concurrence,
                clustering: Some(0.5),
                mean_density: density,
                densities: vec![density; 4],
            }],
        }
    }

    #[test]
    fn constant_series_has_no_detections() {
        let records: Vec<SweepRecord> = (0..20).map(|k| record(k as f64 * 0.1, Parity::Odd, 0.3)).collect();
        assert!(parity_switch_brackets(&records).is_empty());
        assert!(metric_jumps(&records, DEFAULT_JUMP_FACTOR).is_empty());
    }

    #[test]
    fn synthetic_jump_is_flagged() {
        let mut records: Vec<SweepRecord> = (0..20)
            .map(|k| record(k as f64 * 0.1, Parity::Odd, 0.3 + 0.001 * k as f64))
            .collect();
        for r in records.iter_mut().skip(10) {
            r.measures[0].mean_density += 0.5;
            r.parity = Some(Parity::Even);
        }
        assert_eq!(parity_switch_brackets(&records), vec![(9, 10)]);
        let jumps = metric_jumps(&records, DEFAULT_JUMP_FACTOR);
        assert_eq!(jumps.len(), 1);
        assert!(jumps[0].at_parity_switch);
        assert_eq!(jumps[0].metric, Metric::MeanDensity);
    }

    #[test]
    fn grid_nudges_off_predictions() {
        let spec = SweepSpec::new(ChainSpec::periodic(4, 1.0, 0.0, 0.5), (0.0, 3.0), 31);
        let grid = spec.grid();
        assert_eq!(grid.len(), 31);
        assert_eq!(grid[20], 2.0 + NUDGE);
        assert_eq!(grid[30], 3.0);
        let top = SweepSpec::new(ChainSpec::periodic(4, 1.0, 0.0, 0.5), (0.0, 2.0), 3);
        assert_eq!(top.grid()[2], 2.0 - NUDGE);
    }

    #[test]
    fn collapsed_range_single_record() {
        let spec = SweepSpec::new(ChainSpec::periodic(4, 1.0, 0.0, 0.5), (1.0, 1.0), 2);
        let records = run_sweep(&spec).unwrap();
        assert_eq!(records.len(), 1);
        let (d, a) = detect_discontinuities(&spec, &records, DEFAULT_JUMP_FACTOR).unwrap();
        assert!(d.is_empty() && a.is_empty());
    }

    #[test]
    fn rejects_reversed_range() {
        let spec = SweepSpec::new(ChainSpec::periodic(4, 1.0, 0.0, 0.5), (2.0, 1.0), 5);
        assert!(matches!(run_sweep(&spec), Err(Error::InvalidParameter { key: "mu_range", .. })));
    }

    #[test]
    fn small_periodic_switch_at_two() {
        let mut spec = SweepSpec::new(ChainSpec::periodic(6, 1.0, 0.0, 0.5), (0.5, 3.0), 26);
        spec.resolution = 1e-4;
        let records = run_sweep(&spec).unwrap();
        let (d, _) = detect_discontinuities(&spec, &records, DEFAULT_JUMP_FACTOR).unwrap();
        assert_eq!(d.len(), 1);
        assert!((d[0].mu - 2.0).abs() < 1e-4);
        assert!(d[0].bracket.1 - d[0].bracket.0 <= 1e-4);
        assert_eq!((d[0].parity_before, d[0].parity_after), (Parity::Odd, Parity::Even));
    }

    #[test]
    fn csv_header_and_rows() {
        let spec = SweepSpec::new(ChainSpec::periodic(4, 1.0, 0.0, 0.5), (0.0, 1.0), 2);
        let records = run_sweep(&spec).unwrap();
        let csv = sweep_csv(&spec, &records);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "mu,N,delta,w,boundary,parity,energy,degenerate,measure,clustering,mean_density,d_0,d_1,d_2,d_3"
        );
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0.0,4,0.5,1.0,periodic,-1,"));
    }
}
