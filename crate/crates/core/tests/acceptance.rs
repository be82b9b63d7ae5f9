//! Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::time::Instant;

use kitaev_net::freefermion::{majorana_zero_mode_potentials, min_bdg_gap};
use kitaev_net::measures::{concurrence, MeasureKind};
use kitaev_net::model::{Boundary, ChainSpec};
use kitaev_net::network::{build_networks, clustering, NetworkOptions};
use kitaev_net::oracle::{brute_force_pair, validation_suite};
use kitaev_net::rdm::{reduce_all_pairs, reduce_to_pair, RdmConvention};
use kitaev_net::scan::{
    detect_discontinuities, fidelity_sweep, locate_c1_point, run_sweep, Metric, PeakSearch, SweepSpec,
};
use kitaev_net::solver::{ground_energy_analytic, ground_state, ground_state_with, fidelity, SolverOptions};
use kitaev_net::theory::{factorization_potential, jw_image, kitaev_factorized_state, permutation_invariance_deviation};
use kitaev_net::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn spectrum_identity() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for n in [4, 6, 8, 10] {
        for _ in 0..20 {
            let spec = ChainSpec::periodic(n, 1.0, rng.gen_range(-3.0..3.0), rng.gen_range(-2.0..2.0));
            let ed = ground_state(&spec)?.energy;
            let analytic = ground_energy_analytic(&spec)?;
            worst = worst.max((ed - analytic).abs() / analytic.abs());
        }
    }
    Ok(outcome(worst <= 1e-10, format!("max relative deviation {worst:.3e} (tol 1e-10)")))
}

fn parity_rule() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for n in [10, 14] {
        for (mu, expected) in [(0.0, -1.0), (1.0, -1.0), (1.9, -1.0), (2.1, 1.0), (3.0, 1.0)] {
            let g = ground_state(&ChainSpec::periodic(n, 1.0, mu, 0.5))?;
            worst = worst.max((g.parity_expectation - expected).abs());
        }
    }
    Ok(outcome(worst <= 1e-8, format!("max |<P> - expected| {worst:.3e} (tol 1e-8)")))
}

fn regular_network() -> Result<Outcome> {
    let mut spread: f64 = 0.0;
    let mut min_c = f64::INFINITY;
    let mut clustering_dev: f64 = 0.0;
    let mut perm_dev: f64 = 0.0;
    for n in [8, 10, 12, 14] {
        for delta in [0.25, 0.5, 0.75] {
            let mu = factorization_potential(1.0, delta)?;
            let g = ground_state(&ChainSpec::periodic(n, 1.0, mu, delta))?;
            let cs = reduce_all_pairs(&g, RdmConvention::Spin)?
                .iter()
                .map(concurrence)
                .collect::<Result<Vec<f64>>>()?;
            let hi = cs.iter().copied().fold(f64::MIN, f64::max);
            let lo = cs.iter().copied().fold(f64::MAX, f64::min);
            spread = spread.max(hi - lo);
            min_c = min_c.min(lo);
            for net in build_networks(&g, &MeasureKind::ALL, &NetworkOptions::default())? {
                let c = clustering(&net).unwrap_or(f64::NAN);
                let d = (c - 1.0).abs();
                clustering_dev = if d.is_nan() { f64::INFINITY } else { clustering_dev.max(d) };
            }
            perm_dev = perm_dev.max(permutation_invariance_deviation(&g)?);
        }
    }
    let passed = spread <= 1e-8 && min_c > 0.0 && clustering_dev <= 1e-6 && perm_dev <= 1e-8;
    Ok(outcome(
        passed,
        format!(
            "concurrence spread {spread:.3e} (tol 1e-8), min concurrence {min_c:.3e}, \
             max |clustering - 1| {clustering_dev:.3e} (tol 1e-6), permutation deviation {perm_dev:.3e} (tol 1e-8)"
        ),
    ))
}

fn c1_peak() -> Result<Outcome> {
    let template = ChainSpec::periodic(14, 1.0, 0.0, 0.0);
    let search = PeakSearch::default();
    let (network, solver) = (NetworkOptions::default(), SolverOptions::default());
    let mut passed = true;
    let mut parts = Vec::new();
    for delta in [0.25, 0.5, 0.75] {
        let p = locate_c1_point(&template, delta, MeasureKind::Concurrence, &search, &network, &solver)?;
        let target = 2.0 * (1.0 - delta * delta).sqrt();
        let offset = p.mu.map_or(f64::INFINITY, |mu| (mu - target).abs());
        passed &= p.found && offset <= 1e-3;
        parts.push(format!("delta {delta}: found={} offset {offset:.1e}", p.found));
    }
    for delta in [1.0, 2.0] {
        let p = locate_c1_point(&template, delta, MeasureKind::Concurrence, &search, &network, &solver)?;
        // independent evidence: no grid point comes near C = 1
        let spec = SweepSpec::new(ChainSpec { pairing: delta, ..template }, (0.0, 3.0), 31);
        let peak = run_sweep(&spec)?
            .iter()
            .filter_map(|r| r.measure(MeasureKind::Concurrence)?.clustering)
            .fold(0.0, f64::max);
        passed &= !p.found && peak < 1.0 - 1e-3;
        parts.push(format!("delta {delta}: found={} grid max {peak:.3}", p.found));
    }
    Ok(outcome(passed, parts.join("; ")))
}

fn topological_discontinuity() -> Result<Outcome> {
    let mut passed = true;
    let mut parts = Vec::new();
    for delta in [0.5, 1.0, 2.0] {
        let mut spec = SweepSpec::new(ChainSpec::periodic(14, 1.0, 0.0, delta), (0.5, 3.0), 51);
        spec.measures = vec![MeasureKind::MutualInformation];
        let records = run_sweep(&spec)?;
        let (found, _) = detect_discontinuities(&spec, &records, 10.0)?;
        let ok = match found.as_slice() {
            [d] => {
                let width = d.bracket.1 - d.bracket.0;
                let jump = d
                    .jumps
                    .iter()
                    .filter(|j| j.measure == MeasureKind::MutualInformation && j.metric == Metric::MeanDensity)
                    .map(|j| j.jump / j.median_variation)
                    .fold(0.0, f64::max);
                parts.push(format!("delta {delta}: switch at {:.5} (bracket {width:.1e}), jump/median {jump:.0}", d.mu));
                (d.mu - 2.0).abs() <= 1e-3 && width <= 1e-3 && jump > 10.0
            }
            other => {
                parts.push(format!("delta {delta}: {} switches", other.len()));
                false
            }
        };
        passed &= ok;
    }
    Ok(outcome(passed, parts.join("; ")))
}

fn majorana_switches() -> Result<Outcome> {
    let mut passed = true;
    let mut parts = Vec::new();
    for (n, delta) in [(8, 0.1), (8, 0.5), (9, 0.1), (9, 0.5)] {
        let template = ChainSpec::open(n, 1.0, 0.0, delta);
        let mut spec = SweepSpec::new(template, (0.0, 3.0), 121);
        spec.resolution = 1e-4;
        let records = run_sweep(&spec)?;
        let (found, _) = detect_discontinuities(&spec, &records, 10.0)?;
        let switches: Vec<f64> = found.iter().map(|d| d.mu).filter(|&mu| mu > 0.0).collect();
        let predicted: Vec<f64> = majorana_zero_mode_potentials(n, 1.0, delta)
            .values
            .into_iter()
            .filter(|&mu| mu > 0.0)
            .collect();
        let mut ok = switches.len() == 4 && predicted.len() == 4;
        let mut worst: f64 = 0.0;
        if ok {
            for (s, p) in switches.iter().zip(&predicted) {
                worst = worst.max((s - p).abs());
            }
            ok &= worst <= 1e-3;
        }
        let gap = predicted
            .iter()
            .map(|&mu| min_bdg_gap(&template.with_mu(mu)))
            .fold(0.0, f64::max);
        ok &= gap <= 1e-8;
        passed &= ok;
        parts.push(format!(
            "N={n} delta {delta}: {} switches, max offset {worst:.1e}, max BdG gap {gap:.1e}",
            switches.len()
        ));
    }
    Ok(outcome(passed, parts.join("; ")))
}

fn fidelity_orthogonality() -> Result<Outcome> {
    let template = ChainSpec::periodic(14, 1.0, 0.0, 0.5);
    let solver = SolverOptions::default();
    let mut grid: Vec<f64> = (1..=50).map(|k| 2.0 + 0.02 * k as f64).collect();
    grid.push(1.0);
    let points = fidelity_sweep(&template, 1.0, &grid, &solver)?;
    let beyond = points.iter().filter(|p| p.mu > 2.0).map(|p| p.fidelity).fold(0.0, f64::max);
    let at_reference = points.iter().find(|p| p.mu == 1.0).map_or(f64::NAN, |p| p.fidelity);
    let passed = beyond <= 1e-10 && (at_reference - 1.0).abs() <= 1e-12;
    Ok(outcome(
        passed,
        format!("max F for mu > 2: {beyond:.1e} (tol 1e-10), F(1) = {at_reference:.15}"),
    ))
}

fn oracle_suites() -> Result<Outcome> {
    // (a) fast pair reduction against the full partial trace
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut rdm_dev: f64 = 0.0;
    for _ in 0..20 {
        let n = rng.gen_range(4..=8);
        let boundary = if rng.gen_bool(0.5) { Boundary::Periodic } else { Boundary::Open };
        let spec = ChainSpec::new(n, 1.0, rng.gen_range(-3.0..3.0), rng.gen_range(-2.0..2.0), boundary);
        let g = ground_state_with(&spec, &SolverOptions::default())?;
        for i in 0..n {
            for j in i + 1..n {
                rdm_dev = rdm_dev.max(reduce_to_pair(&g, i, j)?.max_abs_diff(&brute_force_pair(&g, i, j)));
            }
        }
    }
    // (b), (c), (d) from the built-in suite at every N up to 8
    let worst = |name: &str, checks: &[kitaev_net::oracle::Check], acc: &mut f64| {
        for c in checks.iter().filter(|c| c.name == name) {
            *acc = acc.max(c.value);
        }
    };
    let (mut conc, mut clus, mut jw) = (0.0f64, 0.0f64, 0.0f64);
    for n in 4..=8 {
        let checks = validation_suite(n, 20)?;
        worst("Wootters concurrence equals X-state closed form", &checks, &mut conc);
        worst("clustering equals triple-loop sum", &checks, &mut clus);
        worst("XY odd sector equals Kitaev odd sector", &checks, &mut jw);
    }
    let passed = rdm_dev <= 1e-12 && conc <= 1e-10 && clus <= 1e-12 && jw <= 1e-10;
    Ok(outcome(
        passed,
        format!(
            "(a) reduction {rdm_dev:.1e} (tol 1e-12); (b) concurrence {conc:.1e} (tol 1e-10); \
             (c) clustering {clus:.1e} (tol 1e-12); (d) odd sector {jw:.1e} (tol 1e-10)"
        ),
    ))
}

fn factorized_overlap() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for n in [6, 8, 10, 12] {
        let mu = factorization_potential(1.0, 0.5)?;
        let g = ground_state(&ChainSpec::periodic(n, 1.0, mu, 0.5))?;
        let f = jw_image(&kitaev_factorized_state(n, 1.0, 0.5, 1.0)?);
        worst = worst.max(1.0 - fidelity(&g, &f)?);
    }
    Ok(outcome(worst <= 1e-8, format!("max 1 - |overlap| {worst:.1e} (tol 1e-8)")))
}

type Criterion = (&'static str, fn() -> Result<Outcome>);

fn main() {
    let criteria: [Criterion; 9] = [
        ("spectrum identity", spectrum_identity),
        ("parity phase rule", parity_rule),
        ("fully regular network at the factorization point", regular_network),
        ("C = 1 peak location", c1_peak),
        ("topological discontinuity", topological_discontinuity),
        ("Majorana parity switches", majorana_switches),
        ("fidelity orthogonality", fidelity_orthogonality),
        ("oracle suites", oracle_suites),
        ("factorized-state overlap", factorized_overlap),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        let (passed, detail) = match result {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failures += 1;
        }
        println!(
            "{} criterion {}: {name}: {detail} [{secs:.1}s]",
            if passed { "PASS" } else { "FAIL" },
            k + 1
        );
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
