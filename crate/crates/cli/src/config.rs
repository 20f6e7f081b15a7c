//! Run configuration: clap flags over an optional `key = value` file, flags
//! winning. Unknown keys anywhere are usage errors.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use msle_core::numerics::Beta;

/// Exit codes used by the binary.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CRITERION_FAILED: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "usage error: {}", self.0)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "msle",
    version,
    about = "Dyson Brownian motion, multi-slit Loewner flows and convergence experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact-identity validator suite (Ward, resolvent, trace difference,
    /// Gaussian quadratic forms, integration by parts).
    Identities(CommonArgs),
    /// Sampler checks: semicircle law, support edge, SDE/matrix equivalence,
    /// extreme-particle bound; exports one driver path as CSV.
    Sample(CommonArgs),
    /// Fixed-time local law across an n-ladder with rate fit.
    Locallaw(CommonArgs),
    /// Time-uniform local law on the n^(2/3) knot net.
    Timeuniform(CommonArgs),
    /// Loewner flow diagnostics: displacement bound, trajectory export.
    Flow(CommonArgs),
    /// Map convergence |g^N - g^infty| across an n-ladder with rate fit and
    /// the Groenwall envelope check.
    Converge(CommonArgs),
    /// Concentration of M_t^N(z) across trials, sd slope in n.
    Concentration(CommonArgs),
    /// Fixed-point diagnostics: Burgers residual, general-measure agreement,
    /// perturbation stability exponents.
    Stability(CommonArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Identities(_) => "identities",
            Command::Sample(_) => "sample",
            Command::Locallaw(_) => "locallaw",
            Command::Timeuniform(_) => "timeuniform",
            Command::Flow(_) => "flow",
            Command::Converge(_) => "converge",
            Command::Concentration(_) => "concentration",
            Command::Stability(_) => "stability",
        }
    }

    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::Identities(a)
            | Command::Sample(a)
            | Command::Locallaw(a)
            | Command::Timeuniform(a)
            | Command::Flow(a)
            | Command::Converge(a)
            | Command::Concentration(a)
            | Command::Stability(a) => a,
        }
    }

    /// Disjoint stream-block base per subcommand.
    pub fn stream_base(&self) -> u64 {
        let idx = match self {
            Command::Identities(_) => 0,
            Command::Sample(_) => 1,
            Command::Locallaw(_) => 2,
            Command::Timeuniform(_) => 3,
            Command::Flow(_) => 4,
            Command::Converge(_) => 5,
            Command::Concentration(_) => 6,
            Command::Stability(_) => 7,
        };
        idx * 1_000_000
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Optional `key = value` configuration file; flags override file values.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Base seed (falls back to MSLE_SEED, then 0).
    #[arg(long)]
    pub seed: Option<u64>,

    /// Monte-Carlo trials per parameter point.
    #[arg(long)]
    pub trials: Option<usize>,

    /// Comma-separated ascending particle counts, e.g. 250,500,1000.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,

    /// Ensemble parameter, 1 or 2.
    #[arg(long)]
    pub beta: Option<u8>,

    /// Fixed evaluation time t.
    #[arg(long)]
    pub t: Option<f64>,

    /// Time horizon T for path/flow experiments.
    #[arg(long = "T", visible_alias = "horizon")]
    pub t_horizon: Option<f64>,

    /// Grid as re_min,re_max,im_min,im_max,n_re,n_im.
    #[arg(long, value_delimiter = ',', num_args = 6)]
    pub grid: Option<Vec<f64>>,

    /// Hull-exclusion margin above 2 sqrt(T).
    #[arg(long)]
    pub margin: Option<f64>,

    /// Flow-integrator absolute tolerance.
    #[arg(long)]
    pub tol: Option<f64>,

    /// Fixed-point solver tolerance.
    #[arg(long)]
    pub fp_tol: Option<f64>,

    /// Largest SDE substep.
    #[arg(long)]
    pub dt_max: Option<f64>,

    /// Knot-net multiplier on n^(2/3).
    #[arg(long)]
    pub net_mult: Option<f64>,

    /// Output directory for CSV and JSON artifacts.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,

    /// Worker threads (default: logical cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Fully resolved configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub subcommand: &'static str,
    pub stream_base: u64,
    pub seed: u64,
    pub trials: usize,
    pub n_list: Vec<usize>,
    pub beta: Beta,
    pub t: f64,
    pub t_horizon: f64,
    pub grid: (f64, f64, f64, f64, usize, usize),
    pub margin: f64,
    pub tol: f64,
    pub fp_tol: f64,
    pub dt_max: f64,
    pub net_mult: f64,
    pub output: PathBuf,
    pub threads: usize,
}

impl RunConfig {
    /// Echo as a flat string map for the JSON summary.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("subcommand".into(), self.subcommand.to_string());
        m.insert("seed".into(), self.seed.to_string());
        m.insert("trials".into(), self.trials.to_string());
        m.insert(
            "n_list".into(),
            self.n_list
                .iter()
                .map(|n| n.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        m.insert("beta".into(), format!("{}", self.beta.value() as u8));
        m.insert("t".into(), self.t.to_string());
        m.insert("T".into(), self.t_horizon.to_string());
        let g = self.grid;
        m.insert(
            "grid".into(),
            format!("{},{},{},{},{},{}", g.0, g.1, g.2, g.3, g.4, g.5),
        );
        m.insert("margin".into(), self.margin.to_string());
        m.insert("tol".into(), self.tol.to_string());
        m.insert("fp_tol".into(), self.fp_tol.to_string());
        m.insert("dt_max".into(), self.dt_max.to_string());
        m.insert("net_mult".into(), self.net_mult.to_string());
        m.insert("output".into(), self.output.display().to_string());
        m.insert("threads".into(), self.threads.to_string());
        m
    }
}

/// Key-value file contents (flat namespace, `#` comments).
#[derive(Debug, Default, Clone)]
struct FileConfig {
    values: BTreeMap<String, String>,
}

const KNOWN_KEYS: &[&str] = &[
    "seed", "trials", "n", "beta", "t", "T", "grid", "margin", "tol", "fp_tol", "dt_max",
    "net_mult", "output", "threads",
];

fn parse_config_file(path: &Path) -> Result<FileConfig, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config file {}: {e}", path.display())))?;
    let mut values = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(UsageError(format!(
                "line {} of {}: expected `key = value`, got `{raw}`",
                lineno + 1,
                path.display()
            )));
        };
        let key = key.trim();
        let value = value.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(UsageError(format!(
                "unknown key `{key}` in {} (line {})",
                path.display(),
                lineno + 1
            )));
        }
        values.insert(key.to_string(), value.to_string());
    }
    Ok(FileConfig { values })
}

fn parse_file_value<T: std::str::FromStr>(
    file: &FileConfig,
    key: &str,
) -> Result<Option<T>, UsageError> {
    match file.values.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse::<T>()
            .map(Some)
            .map_err(|_| UsageError(format!("type mismatch for key `{key}`: `{raw}`"))),
    }
}

fn parse_file_list<T: std::str::FromStr>(
    file: &FileConfig,
    key: &str,
) -> Result<Option<Vec<T>>, UsageError> {
    match file.values.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .split(',')
            .map(|s| s.trim().parse::<T>())
            .collect::<Result<Vec<T>, _>>()
            .map(Some)
            .map_err(|_| UsageError(format!("type mismatch for key `{key}`: `{raw}`"))),
    }
}

/// Per-subcommand defaults (overridable by file and flags).
struct Defaults {
    trials: usize,
    n_list: &'static [usize],
    t_horizon: f64,
}

fn defaults_for(name: &str) -> Defaults {
    match name {
        "sample" => Defaults {
            trials: 50,
            n_list: &[200, 2000],
            t_horizon: 1.0,
        },
        "timeuniform" => Defaults {
            trials: 20,
            n_list: &[1000],
            t_horizon: 1.0,
        },
        "flow" => Defaults {
            trials: 20,
            n_list: &[200],
            t_horizon: 0.25,
        },
        "converge" => Defaults {
            trials: 20,
            n_list: &[64, 128, 256, 512, 1024],
            t_horizon: 0.2,
        },
        "concentration" => Defaults {
            trials: 200,
            n_list: &[250, 500, 1000, 2000],
            t_horizon: 1.0,
        },
        _ => Defaults {
            trials: 20,
            n_list: &[250, 500, 1000, 2000],
            t_horizon: 1.0,
        },
    }
}

/// Resolve the final configuration: defaults, then file, then flags.
pub fn resolve(command: &Command) -> Result<RunConfig, UsageError> {
    let args = command.args();
    let defaults = defaults_for(command.name());
    let file = match &args.config {
        Some(path) => parse_config_file(path)?,
        None => FileConfig::default(),
    };

    let seed = args
        .seed
        .or(parse_file_value::<u64>(&file, "seed")?)
        .or_else(|| {
            std::env::var("MSLE_SEED")
                .ok()
                .and_then(|v| v.parse::<u64>().ok())
        })
        .unwrap_or(0);

    let trials = args
        .trials
        .or(parse_file_value(&file, "trials")?)
        .unwrap_or(defaults.trials);
    if trials == 0 {
        return Err(UsageError("trials must be >= 1".into()));
    }

    let n_list = args
        .n
        .clone()
        .or(parse_file_list(&file, "n")?)
        .unwrap_or_else(|| defaults.n_list.to_vec());
    if n_list.is_empty() {
        return Err(UsageError("n list must not be empty".into()));
    }
    if !n_list.windows(2).all(|w| w[0] < w[1]) {
        return Err(UsageError("n list must be strictly ascending".into()));
    }
    if n_list[0] == 0 {
        return Err(UsageError("n values must be >= 1".into()));
    }

    let beta_raw = args.beta.or(parse_file_value(&file, "beta")?).unwrap_or(1);
    let beta = Beta::from_u8(beta_raw)
        .map_err(|_| UsageError(format!("beta must be 1 or 2, got {beta_raw}")))?;

    let t = args.t.or(parse_file_value(&file, "t")?).unwrap_or(1.0);
    let t_horizon = args
        .t_horizon
        .or(parse_file_value(&file, "T")?)
        .unwrap_or(defaults.t_horizon);
    if !(t >= 0.0) || !(t_horizon >= 0.0) {
        return Err(UsageError("times must be nonnegative".into()));
    }

    let grid_raw = args
        .grid
        .clone()
        .or(parse_file_list(&file, "grid")?)
        .unwrap_or_else(|| vec![-2.0, 2.0, 1.0, 2.0, 21.0, 11.0]);
    if grid_raw.len() != 6 {
        return Err(UsageError(format!(
            "grid needs 6 fields re_min,re_max,im_min,im_max,n_re,n_im, got {}",
            grid_raw.len()
        )));
    }
    let n_re = grid_raw[4] as usize;
    let n_im = grid_raw[5] as usize;
    if n_re == 0 || n_im == 0 || grid_raw[2] <= 0.0 {
        return Err(UsageError("grid counts must be >= 1 and im_min > 0".into()));
    }
    let grid = (
        grid_raw[0],
        grid_raw[1],
        grid_raw[2],
        grid_raw[3],
        n_re,
        n_im,
    );

    let margin = args
        .margin
        .or(parse_file_value(&file, "margin")?)
        .unwrap_or(0.5);
    if !(margin > 0.0) {
        return Err(UsageError("margin must be positive".into()));
    }
    let tol = args.tol.or(parse_file_value(&file, "tol")?).unwrap_or(1e-8);
    let fp_tol = args
        .fp_tol
        .or(parse_file_value(&file, "fp_tol")?)
        .unwrap_or(1e-14);
    let dt_max = args
        .dt_max
        .or(parse_file_value(&file, "dt_max")?)
        .unwrap_or(1e-3);
    if !(tol > 0.0 && fp_tol > 0.0 && dt_max > 0.0) {
        return Err(UsageError("tolerances and dt_max must be positive".into()));
    }
    let net_mult = args
        .net_mult
        .or(parse_file_value(&file, "net_mult")?)
        .unwrap_or(1.0);
    if !(net_mult > 0.0) {
        return Err(UsageError("net_mult must be positive".into()));
    }
    let output = args
        .output
        .clone()
        .or(parse_file_value::<PathBuf>(&file, "output")?)
        .unwrap_or_else(|| PathBuf::from("out"));
    let threads = args
        .threads
        .or(parse_file_value(&file, "threads")?)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        });
    if threads == 0 {
        return Err(UsageError("threads must be >= 1".into()));
    }

    Ok(RunConfig {
        subcommand: command.name(),
        stream_base: command.stream_base(),
        seed,
        trials,
        n_list,
        beta,
        t,
        t_horizon,
        grid,
        margin,
        tol,
        fp_tol,
        dt_max,
        net_mult,
        output,
        threads,
    })
}
