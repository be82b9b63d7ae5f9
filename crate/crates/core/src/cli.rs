//! Command-line front end: flag and config-file parsing, dispatch, and
//! output serialization.
//!
//! Exit codes: 0 success, 1 output could not be written, 2 invalid
//! configuration, 3 numerical failure or a failed validation check.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::freefermion::{majorana_zero_mode_potentials, min_bdg_gap};
use crate::io::format_shortest;
use crate::measures::{LogBase, MeasureKind};
use crate::model::{Boundary, ChainSpec, Parity};
use crate::network::{build_networks, export_network, network_report, NetworkOptions, Normalization};
use crate::oracle::validation_suite;
use crate::rdm::RdmConvention;
use crate::scan::{critical_point_report, fidelity_csv, fidelity_sweep, run_sweep, sweep_csv, SweepSpec};
use crate::solver::{ground_state_with, SolverOptions};
use crate::theory::factorization_point;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable supplying the default worker count.
pub const WORKERS_ENV: &str = "KITAEV_NET_WORKERS";

const DEFAULT_SITES: usize = 14;
const DEFAULT_VALIDATE_SITES: usize = 8;
const DEFAULT_POINTS: usize = 301;
const DEFAULT_MU_RANGE: (f64, f64) = (0.0, 3.0);
const VALIDATION_POINTS: usize = 20;

#[derive(Debug, Parser)]
#[command(name = "kitaev-net", version, about = "Correlation networks of the finite Kitaev chain")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Ground state and networks at one chemical potential.
    Point(Flags),
    /// Networks over a grid of chemical potentials (CSV).
    Sweep(Flags),
    /// Parity switches, metric jumps and clustering peaks (JSON).
    Detect(Flags),
    /// Closed-form Majorana zero-mode potentials of the open chain.
    ZeroModes(Flags),
    /// Built-in oracle suite; nonzero exit when a check misses tolerance.
    Validate(Flags),
    /// Ground-state fidelity against a reference potential (CSV).
    Fidelity(Flags),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Flat JSON object with any of the keys below; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of sites.
    #[arg(long)]
    pub n: Option<usize>,
    /// Hopping amplitude.
    #[arg(long, allow_negative_numbers = true)]
    pub w: Option<f64>,
    /// Chemical potential (point command).
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Pairing amplitude.
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// periodic or open.
    #[arg(long)]
    pub boundary: Option<String>,
    /// Sweep range `lo:hi`.
    #[arg(long = "mu-range", allow_hyphen_values = true)]
    pub mu_range: Option<String>,
    /// Grid points of the sweep.
    #[arg(long)]
    pub points: Option<usize>,
    /// mutual_information, concurrence or l1_coherence; repeatable.
    #[arg(long = "measure")]
    pub measures: Vec<String>,
    /// Clustering weights: normalized (default) or raw.
    #[arg(long)]
    pub clustering: Option<String>,
    /// Entropy logarithm: natural (default) or base2.
    #[arg(long = "log-base")]
    pub log_base: Option<String>,
    /// Pair reduction: spin (default) or fermionic.
    #[arg(long)]
    pub rdm: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Weight-matrix CSV for the point command.
    #[arg(long = "network-out")]
    pub network_out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Bisection resolution for parity switches.
    #[arg(long)]
    pub resolution: Option<f64>,
    /// Reference potential of the fidelity command.
    #[arg(long = "reference-mu", allow_negative_numbers = true)]
    pub reference_mu: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Point,
    Sweep,
    Detect,
    ZeroModes,
    Validate,
    Fidelity,
}

/// Fully validated settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Chain parameters; `chemical_potential` is only meaningful for `point`.
    pub chain: ChainSpec,
    pub mu: Option<f64>,
    pub mu_range: (f64, f64),
    pub points: usize,
    pub resolution: f64,
    pub measures: Vec<MeasureKind>,
    pub network: NetworkOptions,
    pub output: Option<PathBuf>,
    pub network_out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub reference_mu: f64,
}

/// Configuration error naming the offending key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid configuration for `{}`: {}", self.key, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn config_error(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        key: key.to_string(),
        message: message.into(),
    }
}

const CONFIG_KEYS: &[&str] = &[
    "n",
    "w",
    "mu",
    "delta",
    "boundary",
    "mu_range",
    "points",
    "measure",
    "clustering",
    "log_base",
    "rdm",
    "output",
    "network_out",
    "workers",
    "resolution",
    "reference_mu",
];

fn read_config_file(path: &Path) -> Result<Map<String, Value>, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| config_error("config", format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| config_error("config", format!("not valid JSON: {e}")))?;
    let Value::Object(map) = value else {
        return Err(config_error("config", "expected a flat JSON object"));
    };
    for key in map.keys() {
        // flag spellings with dashes are accepted as well
        if !CONFIG_KEYS.contains(&key.replace('-', "_").as_str()) {
            return Err(config_error(key, "unknown key"));
        }
    }
    Ok(map.into_iter().map(|(k, v)| (k.replace('-', "_"), v)).collect())
}

fn file_f64(file: &Map<String, Value>, key: &str) -> Result<Option<f64>, ConfigError> {
    match file.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v
            .as_f64()
            .map(Some)
            .ok_or_else(|| config_error(key, format!("expected a number, got {v}"))),
    }
}

fn file_usize(file: &Map<String, Value>, key: &str) -> Result<Option<usize>, ConfigError> {
    match file.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v
            .as_u64()
            .map(|x| Some(x as usize))
            .ok_or_else(|| config_error(key, format!("expected a nonnegative integer, got {v}"))),
    }
}

fn file_string(file: &Map<String, Value>, key: &str) -> Result<Option<String>, ConfigError> {
    match file.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(v) => Err(config_error(key, format!("expected a string, got {v}"))),
    }
}

fn file_strings(file: &Map<String, Value>, key: &str) -> Result<Vec<String>, ConfigError> {
    match file.get(key) {
        None | Some(Value::Null) => Ok(Vec::new()),
        Some(Value::String(s)) => Ok(vec![s.clone()]),
        Some(Value::Array(items)) => items
            .iter()
            .map(|v| {
                v.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| config_error(key, format!("expected strings, got {v}")))
            })
            .collect(),
        Some(v) => Err(config_error(key, format!("expected a string or list of strings, got {v}"))),
    }
}

fn parse_range(text: &str) -> Result<(f64, f64), ConfigError> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| config_error("mu_range", format!("expected lo:hi, got `{text}`")))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| config_error("mu_range", format!("`{s}` is not a number")))
    };
    Ok((parse(lo)?, parse(hi)?))
}

fn file_range(file: &Map<String, Value>) -> Result<Option<(f64, f64)>, ConfigError> {
    match file.get("mu_range") {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => parse_range(s).map(Some),
        Some(Value::Array(items)) if items.len() == 2 => {
            let lo = items[0].as_f64();
            let hi = items[1].as_f64();
            match (lo, hi) {
                (Some(lo), Some(hi)) => Ok(Some((lo, hi))),
                _ => Err(config_error("mu_range", "expected two numbers")),
            }
        }
        Some(v) => Err(config_error("mu_range", format!("expected \"lo:hi\" or [lo, hi], got {v}"))),
    }
}

fn parse_choice<T: std::str::FromStr<Err = String>>(key: &str, value: Option<String>) -> Result<Option<T>, ConfigError> {
    value.map(|s| s.parse::<T>().map_err(|e| config_error(key, e))).transpose()
}

fn workers_from_env() -> Result<Option<usize>, ConfigError> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(None),
        Ok(s) if s.trim().is_empty() => Ok(None),
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| config_error(WORKERS_ENV, format!("`{s}` is not a worker count"))),
    }
}

fn chain_error(e: Error) -> ConfigError {
    match e {
        Error::InvalidParameter { key, reason } => config_error(key, reason),
        Error::Capacity { n_sites, max_sites } => {
            config_error("n", format!("{n_sites} sites exceeds the maximum of {max_sites}"))
        }
        other => config_error("config", other.to_string()),
    }
}

/// Merges flags over the optional config file over defaults and validates
/// every physical parameter.
pub fn parse_config(command: Command, flags: &Flags) -> Result<RunConfig, ConfigError> {
    let file = match &flags.config {
        Some(path) => read_config_file(path)?,
        None => Map::new(),
    };
    let default_n = if command == Command::Validate {
        DEFAULT_VALIDATE_SITES
    } else {
        DEFAULT_SITES
    };
    let n = flags.n.or(file_usize(&file, "n")?).unwrap_or(default_n);
    let w = flags.w.or(file_f64(&file, "w")?).unwrap_or(1.0);
    let delta = flags.delta.or(file_f64(&file, "delta")?).unwrap_or(0.5);
    let mu = flags.mu.or(file_f64(&file, "mu")?);
    let boundary: Boundary = parse_choice("boundary", flags.boundary.clone().or(file_string(&file, "boundary")?))?
        .unwrap_or(Boundary::Periodic);
    let mu_range = match &flags.mu_range {
        Some(text) => parse_range(text)?,
        None => file_range(&file)?.unwrap_or(DEFAULT_MU_RANGE),
    };
    let points = flags.points.or(file_usize(&file, "points")?).unwrap_or(DEFAULT_POINTS);
    let resolution = flags
        .resolution
        .or(file_f64(&file, "resolution")?)
        .unwrap_or(crate::scan::DEFAULT_RESOLUTION);
    let measure_names = if flags.measures.is_empty() {
        file_strings(&file, "measure")?
    } else {
        flags.measures.clone()
    };
    let mut measures = Vec::new();
    for name in measure_names {
        let m: MeasureKind = name.parse().map_err(|e: String| config_error("measure", e))?;
        if !measures.contains(&m) {
            measures.push(m);
        }
    }
    if measures.is_empty() {
        measures.push(MeasureKind::Concurrence);
    }
    let normalization: Normalization =
        parse_choice("clustering", flags.clustering.clone().or(file_string(&file, "clustering")?))?.unwrap_or_default();
    let log_base: LogBase =
        parse_choice("log_base", flags.log_base.clone().or(file_string(&file, "log_base")?))?.unwrap_or_default();
    let convention: RdmConvention =
        parse_choice("rdm", flags.rdm.clone().or(file_string(&file, "rdm")?))?.unwrap_or_default();
    let output = flags.output.clone().or(file_string(&file, "output")?.map(PathBuf::from));
    let network_out = flags
        .network_out
        .clone()
        .or(file_string(&file, "network_out")?.map(PathBuf::from));
    let workers = match flags.workers.or(file_usize(&file, "workers")?) {
        Some(w) => Some(w),
        None => workers_from_env()?,
    };
    if workers == Some(0) {
        return Err(config_error("workers", "must be at least 1"));
    }
    let reference_mu = flags.reference_mu.or(file_f64(&file, "reference_mu")?).unwrap_or(1.0);

    let chain = ChainSpec::new(n, w, mu.unwrap_or(0.0), delta, boundary);
    chain.validate().map_err(chain_error)?;
    if command == Command::Point && mu.is_none() {
        return Err(config_error("mu", "the point command needs --mu"));
    }
    if matches!(command, Command::Sweep | Command::Detect | Command::Fidelity) {
        let (lo, hi) = mu_range;
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(config_error("mu_range", format!("need finite lo <= hi, got {lo}:{hi}")));
        }
        if points < 2 && lo < hi {
            return Err(config_error("points", format!("need at least 2, got {points}")));
        }
        if !(resolution > 0.0) || !resolution.is_finite() {
            return Err(config_error("resolution", format!("must be positive, got {resolution}")));
        }
    }
    if !reference_mu.is_finite() {
        return Err(config_error("reference_mu", "must be finite"));
    }
    if command == Command::Detect && points < 3 {
        return Err(config_error("points", "detection needs at least 3 grid points"));
    }
    if command == Command::Validate && !(4..=crate::oracle::MAX_DENSE_SITES).contains(&n) {
        return Err(config_error(
            "n",
            format!("validation runs dense oracles for 4 <= N <= {}", crate::oracle::MAX_DENSE_SITES),
        ));
    }
    Ok(RunConfig {
        command,
        chain,
        mu,
        mu_range,
        points,
        resolution,
        measures,
        network: NetworkOptions {
            log_base,
            convention,
            normalization,
        },
        output,
        network_out,
        workers,
        reference_mu,
    })
}

/// Failure while executing a valid configuration.
#[derive(Debug)]
pub enum RunError {
    Numerical(Error),
    Output(String),
    /// The validation suite ran but some checks failed.
    ChecksFailed(usize),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Numerical(_) | RunError::ChecksFailed(_) => EXIT_NUMERICAL,
            RunError::Output(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Numerical(e) => write!(f, "numerical failure: {e}"),
            RunError::Output(e) => write!(f, "cannot write output: {e}"),
            RunError::ChecksFailed(k) => write!(f, "{k} validation check(s) failed"),
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(msg) => RunError::Output(msg),
            other => RunError::Numerical(other),
        }
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), RunError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| RunError::Output(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

fn sweep_spec(cfg: &RunConfig) -> SweepSpec {
    SweepSpec {
        template: cfg.chain,
        mu_range: cfg.mu_range,
        base_points: cfg.points,
        resolution: cfg.resolution,
        measures: cfg.measures.clone(),
        network: cfg.network,
        solver: SolverOptions::default(),
        workers: cfg.workers,
    }
}

fn chain_json(spec: &ChainSpec) -> Value {
    json!({
        "n": spec.n_sites,
        "w": spec.hopping,
        "mu": spec.chemical_potential,
        "delta": spec.pairing,
        "boundary": spec.boundary.as_str(),
    })
}

fn network_path(base: &Path, measure: MeasureKind, several: bool) -> PathBuf {
    if !several {
        return base.to_path_buf();
    }
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("network");
    base.with_file_name(format!("{stem}_{measure}.csv"))
}

fn run_point(cfg: &RunConfig) -> Result<(), RunError> {
    let spec = cfg.chain.with_mu(cfg.mu.expect("validated"));
    let g = ground_state_with(&spec, &SolverOptions::default())?;
    let nets = build_networks(&g, &cfg.measures, &cfg.network)?;
    if let Some(base) = &cfg.network_out {
        for net in &nets {
            export_network(net, &network_path(base, net.measure, nets.len() > 1))?;
        }
    }
    let reports: Vec<_> = nets.iter().map(network_report).collect();
    let factorization = factorization_point(spec.hopping, spec.pairing).ok();
    let report = json!({
        "chain": chain_json(&spec),
        "energy": g.energy,
        "parity": Parity::from_sign(g.parity_expectation),
        "parity_expectation": g.parity_expectation,
        "degenerate": g.degenerate,
        "networks": reports,
        "options": cfg.network,
        "factorization": factorization,
    });
    emit(cfg.output.as_deref(), &to_json(&report))
}

fn run_sweep_command(cfg: &RunConfig) -> Result<(), RunError> {
    let spec = sweep_spec(cfg);
    let records = run_sweep(&spec)?;
    let failed = records.iter().filter(|r| r.failed()).count();
    if failed > 0 {
        log::warn!("{failed} of {} grid points failed; their rows carry empty fields", records.len());
    }
    emit(cfg.output.as_deref(), &sweep_csv(&spec, &records))
}

fn run_detect(cfg: &RunConfig) -> Result<(), RunError> {
    let spec = sweep_spec(cfg);
    let (_, report) = critical_point_report(&spec, true)?;
    emit(cfg.output.as_deref(), &to_json(&report))
}

/// Table of closed-form potentials with the BdG gap at each.
pub fn zero_mode_table(chain: &ChainSpec) -> String {
    let z = majorana_zero_mode_potentials(chain.n_sites, chain.hopping, chain.pairing);
    let mut out = String::new();
    if !z.in_domain {
        let _ = writeln!(
            out,
            "# domain: |Delta| = {} exceeds |w| = {}; the zero-mode potentials are complex and none are listed",
            format_shortest(chain.pairing.abs()),
            format_shortest(chain.hopping.abs())
        );
        return out;
    }
    out.push_str("index,mu_n,bdg_gap\n");
    for (k, &mu) in z.values.iter().enumerate() {
        let open = ChainSpec::open(chain.n_sites, chain.hopping, mu, chain.pairing);
        let _ = writeln!(out, "{},{},{}", k + 1, format_shortest(mu), format_shortest(min_bdg_gap(&open)));
    }
    out
}

fn run_zero_modes(cfg: &RunConfig) -> Result<(), RunError> {
    emit(cfg.output.as_deref(), &zero_mode_table(&cfg.chain))
}

fn run_validate(cfg: &RunConfig) -> Result<(), RunError> {
    let checks = validation_suite(cfg.chain.n_sites, VALIDATION_POINTS)?;
    for c in &checks {
        eprintln!(
            "{} {:<58} {:>10.3e} (tolerance {:.0e})",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.value,
            c.tolerance
        );
    }
    emit(cfg.output.as_deref(), &to_json(&json!({ "n": cfg.chain.n_sites, "checks": checks })))?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(RunError::ChecksFailed(failed));
    }
    Ok(())
}

fn run_fidelity(cfg: &RunConfig) -> Result<(), RunError> {
    let grid = sweep_spec(cfg).grid();
    let points = fidelity_sweep(&cfg.chain, cfg.reference_mu, &grid, &SolverOptions::default())?;
    emit(cfg.output.as_deref(), &fidelity_csv(&points))
}

/// Runs a validated configuration inside the requested worker pool.
pub fn execute(cfg: &RunConfig) -> Result<(), RunError> {
    let job = || match cfg.command {
        Command::Point => run_point(cfg),
        Command::Sweep => run_sweep_command(cfg),
        Command::Detect => run_detect(cfg),
        Command::ZeroModes => run_zero_modes(cfg),
        Command::Validate => run_validate(cfg),
        Command::Fidelity => run_fidelity(cfg),
    };
    match cfg.workers {
        None => job(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| RunError::Numerical(Error::InvalidParameter {
                key: "workers",
                reason: e.to_string(),
            }))?
            .install(job),
    }
}

impl CommandArgs {
    pub fn split(&self) -> (Command, &Flags) {
        match self {
            CommandArgs::Point(f) => (Command::Point, f),
            CommandArgs::Sweep(f) => (Command::Sweep, f),
            CommandArgs::Detect(f) => (Command::Detect, f),
            CommandArgs::ZeroModes(f) => (Command::ZeroModes, f),
            CommandArgs::Validate(f) => (Command::Validate, f),
            CommandArgs::Fidelity(f) => (Command::Fidelity, f),
        }
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (command, flags) = cli.command.split();
    let cfg = match parse_config(command, flags) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    match execute(&cfg) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags() -> Flags {
        Flags::default()
    }

    #[test]
    fn defaults() {
        let cfg = parse_config(Command::Sweep, &flags()).unwrap();
        assert_eq!(cfg.chain.n_sites, 14);
        assert_eq!(cfg.chain.hopping, 1.0);
        assert_eq!(cfg.chain.boundary, Boundary::Periodic);
        assert_eq!(cfg.measures, vec![MeasureKind::Concurrence]);
        assert_eq!(cfg.network.normalization, Normalization::MaxNormalized);
        assert_eq!(parse_config(Command::Validate, &flags()).unwrap().chain.n_sites, 8);
    }

    #[test]
    fn point_requires_mu() {
        let e = parse_config(Command::Point, &flags()).unwrap_err();
        assert_eq!(e.key, "mu");
    }

    #[test]
    fn bad_values_name_their_key() {
        let f = Flags {
            measures: vec!["negativity".into()],
            ..flags()
        };
        assert_eq!(parse_config(Command::Sweep, &f).unwrap_err().key, "measure");
        let f = Flags {
            mu_range: Some("3:0".into()),
            ..flags()
        };
        assert_eq!(parse_config(Command::Sweep, &f).unwrap_err().key, "mu_range");
        let f = Flags {
            n: Some(40),
            ..flags()
        };
        assert_eq!(parse_config(Command::Sweep, &f).unwrap_err().key, "n");
    }

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("-3:0").unwrap(), (-3.0, 0.0));
        assert!(parse_range("1").is_err());
    }

    #[test]
    fn zero_mode_domain_message() {
        let table = zero_mode_table(&ChainSpec::open(8, 0.0, 0.0, 0.5));
        assert!(table.contains("|Delta| = 0.5 exceeds |w| = 0.0"), "{table}");
    }
}
