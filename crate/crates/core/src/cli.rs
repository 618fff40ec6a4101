//! Command-line front end.
//!
//! Exit codes: 0 success, 1 internal error, 2 usage or configuration error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::network::{access_study, plan_min_nodes, sweep_backhaul, AccessLink, CdfSeries, PlanOutcome};
use crate::scenario::{Band, Condition, NodeKind, Scenario, ScenarioFile, SPEC_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Lowest-precedence source of the master seed.
pub const SEED_ENV: &str = "STRATOLINK_SEED";

#[derive(Debug, Parser)]
#[command(name = "stratolink", version, about = "HAPS emergency-network link and capacity studies")]
pub struct Cli {
    /// Worker threads for Monte Carlo trials (default: available processors).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: Option<u32>,

    /// Master seed; overrides the scenario seed and STRATOLINK_SEED.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Backhaul capacity over the scenario's distance x node-count sweep.
    Backhaul {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Access/fronthaul rate CDFs from the end-point HAPS.
    Access(AccessArgs),
    /// Minimal number of HAPS carrying a target backhaul rate in clear sky.
    Plan {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        target_gbps: f64,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        n_max: u64,
        /// Also write plan.json and manifest.json here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct AccessArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// One or more of fso, thz, ka, s, hybrid (comma separated).
    #[arg(long, value_delimiter = ',', required = true)]
    pub band: Vec<BandArg>,
    /// One or more of clear, cloud, fog, rain (default: the scenario's disaster weather).
    #[arg(long, value_delimiter = ',')]
    pub weather: Vec<WeatherArg>,
    /// Terminal population to place (default depends on the band).
    #[arg(long)]
    pub terminal: Option<TerminalArg>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub trials: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BandArg {
    Fso,
    Thz,
    Ka,
    S,
    Hybrid,
}

impl BandArg {
    fn link(self) -> AccessLink {
        match self {
            BandArg::Fso => AccessLink::Band(Band::Fso),
            BandArg::Thz => AccessLink::Band(Band::Thz),
            BandArg::Ka => AccessLink::Band(Band::KaBand),
            BandArg::S => AccessLink::Band(Band::SBand),
            BandArg::Hybrid => AccessLink::Hybrid,
        }
    }

    /// Series emitted for this token; hybrid brings its two components.
    fn emitted(self) -> Vec<AccessLink> {
        match self {
            BandArg::Hybrid => vec![
                AccessLink::Band(Band::Fso),
                AccessLink::Band(Band::Thz),
                AccessLink::Hybrid,
            ],
            other => vec![other.link()],
        }
    }

    fn default_terminal(self) -> NodeKind {
        match self {
            BandArg::S => NodeKind::HandheldUser,
            BandArg::Ka => NodeKind::VsatTerminal,
            _ => NodeKind::TerrestrialBs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeatherArg {
    Clear,
    Cloud,
    Fog,
    Rain,
}

impl From<WeatherArg> for Condition {
    fn from(w: WeatherArg) -> Self {
        match w {
            WeatherArg::Clear => Condition::Clear,
            WeatherArg::Cloud => Condition::Cloud,
            WeatherArg::Fog => Condition::Fog,
            WeatherArg::Rain => Condition::Rain,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TerminalArg {
    Handheld,
    Vsat,
    Uav,
    Bs,
}

impl From<TerminalArg> for NodeKind {
    fn from(t: TerminalArg) -> Self {
        match t {
            TerminalArg::Handheld => NodeKind::HandheldUser,
            TerminalArg::Vsat => NodeKind::VsatTerminal,
            TerminalArg::Uav => NodeKind::Uav,
            TerminalArg::Bs => NodeKind::TerrestrialBs,
        }
    }
}

/// Reproducibility record written next to every output set.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub spec_version: u32,
    pub scenario_sha256: String,
    pub master_seed: u64,
    pub command_line: Vec<String>,
    pub outputs: Vec<String>,
    pub wall_clock_seconds: f64,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_user_error() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

fn internal(e: impl std::fmt::Display) -> Failure {
    Failure::Internal(e.to_string())
}

/// SHA-256 of the canonical JSON form.
pub fn scenario_hash(scenario: &Scenario) -> String {
    hex::encode(Sha256::digest(scenario.to_json().as_bytes()))
}

/// Loads a scenario applying the seed precedence flag > file > environment > 0.
fn load_with_seed(path: &Path, flag_seed: Option<u64>) -> Result<Scenario, Failure> {
    let mut file = ScenarioFile::read(path)?;
    if file.rng_seed.is_none() {
        if let Ok(raw) = std::env::var(SEED_ENV) {
            let seed = raw
                .trim()
                .parse::<u64>()
                .map_err(|_| Failure::Usage(format!("{SEED_ENV} must be an unsigned 64-bit integer, got `{raw}`")))?;
            file.rng_seed = Some(seed);
        }
    }
    let mut scenario = file.into_scenario()?;
    if let Some(seed) = flag_seed {
        scenario.rng_seed = seed;
    }
    Ok(scenario)
}

/// Staged output files, renamed into place only once everything is computed.
struct Outputs {
    dir: PathBuf,
    files: Vec<(String, Vec<u8>)>,
}

impl Outputs {
    fn new(dir: &Path) -> Self {
        Outputs {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        }
    }

    fn add(&mut self, name: String, bytes: Vec<u8>) {
        if !self.files.iter().any(|(n, _)| *n == name) {
            self.files.push((name, bytes));
        }
    }

    fn names(&self) -> Vec<String> {
        self.files.iter().map(|(n, _)| n.clone()).collect()
    }

    fn commit(self) -> Result<(), Failure> {
        fs::create_dir_all(&self.dir).map_err(|e| internal(format!("cannot create {}: {e}", self.dir.display())))?;
        for (name, bytes) in self.files {
            let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(internal)?;
            tmp.write_all(&bytes).map_err(internal)?;
            tmp.persist(self.dir.join(&name)).map_err(internal)?;
        }
        Ok(())
    }
}

fn manifest_bytes(scenario: &Scenario, argv: &[String], outputs: &[String], started: Instant) -> Result<Vec<u8>, Failure> {
    let mut listed = outputs.to_vec();
    listed.push("manifest.json".into());
    let manifest = RunManifest {
        spec_version: SPEC_VERSION,
        scenario_sha256: scenario_hash(scenario),
        master_seed: scenario.rng_seed,
        command_line: argv.to_vec(),
        outputs: listed,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    };
    let mut bytes = serde_json::to_vec_pretty(&manifest).map_err(internal)?;
    bytes.push(b'\n');
    Ok(bytes)
}

#[derive(Serialize)]
struct BackhaulRow {
    distance_km: f64,
    n_haps: usize,
    end_to_end_gbps: f64,
    bottleneck_hop: usize,
}

fn cmd_backhaul(scenario: &Scenario, out: &Path, argv: &[String], started: Instant) -> Result<(), Failure> {
    let rows = sweep_backhaul(scenario, &scenario.sweep.distances_km, &scenario.sweep.node_counts)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        w.serialize(BackhaulRow {
            distance_km: r.total_distance_km,
            n_haps: r.n_haps,
            end_to_end_gbps: r.end_to_end_bps / 1e9,
            bottleneck_hop: r.bottleneck_hop,
        })
        .map_err(internal)?;
    }
    let csv_bytes = w.into_inner().map_err(internal)?;

    let mut outputs = Outputs::new(out);
    outputs.add("backhaul.csv".into(), csv_bytes);
    let manifest = manifest_bytes(scenario, argv, &outputs.names(), started)?;
    outputs.add("manifest.json".into(), manifest);
    outputs.commit()
}

/// File name of a CDF series.
pub fn cdf_file_name(link: AccessLink, weather: Condition, per_link: bool) -> String {
    if per_link {
        format!("cdf_{}_{}_per_link.csv", link.token(), weather)
    } else {
        format!("cdf_{}_{}.csv", link.token(), weather)
    }
}

fn series_bytes(series: &CdfSeries) -> Result<Vec<u8>, Failure> {
    let mut buf = Vec::new();
    series.write_csv(&mut buf).map_err(internal)?;
    Ok(buf)
}

fn cmd_access(scenario: &Scenario, args: &AccessArgs, argv: &[String], started: Instant) -> Result<(), Failure> {
    let trials = args.trials.unwrap_or(scenario.trials);
    let weathers: Vec<Condition> = if args.weather.is_empty() {
        vec![scenario.weather_disaster]
    } else {
        args.weather.iter().map(|w| Condition::from(*w)).collect()
    };

    let mut outputs = Outputs::new(&args.out);
    for &band in &args.band {
        let kind = args.terminal.map(NodeKind::from).unwrap_or_else(|| band.default_terminal());
        if scenario.populations.get(kind) == Some(0) {
            return Err(Failure::Usage(format!(
                "invalid value for `populations.{kind}`: the {kind} population is zero"
            )));
        }
        let links = band.emitted();
        for &weather in &weathers {
            let study = access_study(scenario, &links, kind, weather, trials)?;
            for &link in &links {
                let cdf = study.reported_cdf(link).expect("link evaluated");
                outputs.add(cdf_file_name(link, weather, false), series_bytes(&cdf)?);
                if link.is_shared() {
                    let per_link = study.per_link_cdf(link).expect("link evaluated");
                    outputs.add(cdf_file_name(link, weather, true), series_bytes(&per_link)?);
                }
            }
        }
    }
    let manifest = manifest_bytes(scenario, argv, &outputs.names(), started)?;
    outputs.add("manifest.json".into(), manifest);
    outputs.commit()
}

#[derive(Serialize)]
struct PlanReport {
    total_distance_km: f64,
    target_gbps: f64,
    n_max: usize,
    #[serde(flatten)]
    outcome: PlanOutcome,
}

fn cmd_plan(
    scenario: &Scenario,
    target_gbps: f64,
    n_max: usize,
    out: Option<&Path>,
    argv: &[String],
    started: Instant,
) -> Result<(), Failure> {
    if !(target_gbps.is_finite() && target_gbps >= 0.0) {
        return Err(Failure::Usage(format!(
            "--target-gbps must be finite and non-negative, got {target_gbps}"
        )));
    }
    let distance = scenario.disaster_center_arc_km;
    if !(distance > 0.0) {
        return Err(Failure::Usage("disaster_center_arc_km must be positive to plan a chain".into()));
    }
    let outcome = plan_min_nodes(scenario, distance, target_gbps * 1e9, n_max)?;
    let report = PlanReport {
        total_distance_km: distance,
        target_gbps,
        n_max,
        outcome,
    };
    let json = serde_json::to_string(&report).map_err(internal)?;
    match outcome.n_haps() {
        Some(n) => println!("{n}"),
        None => println!("INFEASIBLE"),
    }
    println!("{json}");

    if let Some(dir) = out {
        let mut outputs = Outputs::new(dir);
        outputs.add("plan.json".into(), format!("{json}\n").into_bytes());
        let manifest = manifest_bytes(scenario, argv, &outputs.names(), started)?;
        outputs.add("manifest.json".into(), manifest);
        outputs.commit()?;
    }
    Ok(())
}

fn execute(cli: Cli, argv: &[String]) -> Result<(), Failure> {
    let started = Instant::now();
    let workers = match cli.workers {
        Some(w) => w as usize,
        None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(internal)?;

    match &cli.command {
        Command::Backhaul { scenario, out } => {
            let s = load_with_seed(scenario, cli.seed)?;
            pool.install(|| cmd_backhaul(&s, out, argv, started))
        }
        Command::Access(args) => {
            let s = load_with_seed(&args.scenario, cli.seed)?;
            pool.install(|| cmd_access(&s, args, argv, started))
        }
        Command::Plan {
            scenario,
            target_gbps,
            n_max,
            out,
        } => {
            let s = load_with_seed(scenario, cli.seed)?;
            let n_max = usize::try_from(*n_max).map_err(|_| Failure::Usage("--n-max is too large".into()))?;
            pool.install(|| cmd_plan(&s, *target_gbps, n_max, out.as_deref(), argv, started))
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let argv: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli, &argv) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            EXIT_INTERNAL
        }
    }
}
