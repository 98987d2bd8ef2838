//! Run configuration: command-line flags layered over an optional
//! `key = value` file. Flags win.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use waveguide_core::grid::{default_halfwidth, default_nx, DEFAULT_NY};
use waveguide_core::{make_grid, GridSpec};

use crate::CliError;

pub const OUT_ENV: &str = "WAVEGUIDE_OUT";

#[derive(Debug, Parser)]
#[command(name = "waveguide", version, about = "Line solitons and ground states on R x T")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lowest eigenvalues of L_+ and the growth rate lambda(a) of one frequency.
    Spectrum(Flags),
    /// Stability threshold omega_p by bisection, plus a growth-rate scan.
    Threshold(Flags),
    /// Ground states and least actions over one frequency or a range.
    Groundstate(Flags),
    /// Frequency at which the ground state leaves the line soliton.
    Omegastar(Flags),
    /// Split-step evolution from a (perturbed) line soliton.
    Evolve(Flags),
    /// Aggregate earlier runs under DIR into plot-ready tables.
    Report {
        /// Output root of earlier runs (defaults to the output root).
        dir: Option<PathBuf>,
        #[command(flatten)]
        flags: Flags,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::Threshold(_) => "threshold",
            Command::Groundstate(_) => "groundstate",
            Command::Omegastar(_) => "omegastar",
            Command::Evolve(_) => "evolve",
            Command::Report { .. } => "report",
        }
    }

    pub fn flags(&self) -> &Flags {
        match self {
            Command::Spectrum(f)
            | Command::Threshold(f)
            | Command::Groundstate(f)
            | Command::Omegastar(f)
            | Command::Evolve(f) => f,
            Command::Report { flags, .. } => flags,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Nonlinearity exponent, 1 < p < 5.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega_max: Option<f64>,
    #[arg(long)]
    pub omega_steps: Option<usize>,
    /// x half-width; the domain is [-L, L).
    #[arg(long = "L", id = "L")]
    pub l: Option<f64>,
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub ny: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub dt: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_final: Option<f64>,
    /// Amplitude of the transverse instability mode added to the soliton.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// Amplitude of a seeded random perturbation added to the initial data.
    #[arg(long)]
    pub noise: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Bisection tolerance (threshold, omegastar).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Number of L_+ eigenvalues per mode (spectrum).
    #[arg(long)]
    pub k: Option<usize>,
    /// Number of mode shifts a in the lambda(a) curve (spectrum).
    #[arg(long)]
    pub a_steps: Option<usize>,
    #[arg(long)]
    pub record_every: Option<usize>,
    /// Apply 2/3-rule dealiasing to the nonlinear substep.
    #[arg(long)]
    pub dealias: bool,
    /// Worker threads for scans (default: number of cores).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output root (default: $WAVEGUIDE_OUT, else ./waveguide-out).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// key = value file with defaults for any of the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Fully resolved settings, echoed into the manifest.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub p: f64,
    pub omega: Option<f64>,
    pub omega_min: Option<f64>,
    pub omega_max: Option<f64>,
    pub omega_steps: Option<usize>,
    pub x_halfwidth: Option<f64>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub dt: f64,
    pub t_final: f64,
    pub delta: f64,
    pub noise: f64,
    pub seed: u64,
    pub tol: Option<f64>,
    pub k: usize,
    pub a_steps: usize,
    pub record_every: usize,
    pub dealias: bool,
    pub workers: usize,
    pub output_dir: PathBuf,
}

const KEYS: [&str; 20] = [
    "p", "omega", "omega-min", "omega-max", "omega-steps", "L", "nx", "ny", "dt", "t-final", "delta", "noise",
    "seed", "tol", "k", "a-steps", "record-every", "dealias", "workers", "out",
];

/// Parses `key = value` lines; `#` starts a comment. Keys use the flag
/// spelling without dashes in front (`omega-min`, `t-final`, `L`).
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Validation(format!("config line {}: expected key = value", i + 1)))?;
        let k = k.trim().replace('_', "-");
        if !KEYS.contains(&k.as_str()) {
            return Err(CliError::Validation(format!("config line {}: unknown key {k:?}", i + 1)));
        }
        map.insert(k, v.trim().to_string());
    }
    Ok(map)
}

struct Layered<'a> {
    file: &'a BTreeMap<String, String>,
}

impl Layered<'_> {
    fn get<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Validation(format!("config value for {key} is not valid: {v:?}"))),
        }
    }
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Validation(format!("{name} must be positive")))
    }
}

impl RunConfig {
    pub fn resolve(command: &str, flags: &Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
                parse_config_file(&text)?
            }
            None => BTreeMap::new(),
        };
        let f = Layered { file: &file };
        let output_dir = match f.get(flags.out.clone(), "out")? {
            Some(dir) => dir,
            None => std::env::var_os(OUT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("waveguide-out")),
        };
        let cfg = RunConfig {
            command: command.to_string(),
            p: f.get(flags.p, "p")?.unwrap_or(3.0),
            omega: f.get(flags.omega, "omega")?,
            omega_min: f.get(flags.omega_min, "omega-min")?,
            omega_max: f.get(flags.omega_max, "omega-max")?,
            omega_steps: f.get(flags.omega_steps, "omega-steps")?,
            x_halfwidth: f.get(flags.l, "L")?,
            nx: f.get(flags.nx, "nx")?,
            ny: f.get(flags.ny, "ny")?,
            dt: f.get(flags.dt, "dt")?.unwrap_or(1e-3),
            t_final: f.get(flags.t_final, "t-final")?.unwrap_or(10.0),
            delta: f.get(flags.delta, "delta")?.unwrap_or(0.0),
            noise: f.get(flags.noise, "noise")?.unwrap_or(0.0),
            seed: f.get(flags.seed, "seed")?.unwrap_or(0),
            tol: f.get(flags.tol, "tol")?,
            k: f.get(flags.k, "k")?.unwrap_or(4),
            a_steps: f.get(flags.a_steps, "a-steps")?.unwrap_or(12),
            record_every: f.get(flags.record_every, "record-every")?.unwrap_or(10),
            dealias: flags.dealias || f.get(None, "dealias")?.unwrap_or(false),
            workers: f.get(flags.workers, "workers")?.unwrap_or(0),
            output_dir,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(self.p > 1.0 && self.p < 5.0) {
            return Err(CliError::Validation(format!("p must lie in (1, 5), got {}", self.p)));
        }
        for (name, v) in [("omega", self.omega), ("omega-min", self.omega_min), ("omega-max", self.omega_max)] {
            if let Some(v) = v {
                positive(name, v)?;
            }
        }
        if let (Some(lo), Some(hi)) = (self.omega_min, self.omega_max) {
            if hi < lo {
                return Err(CliError::Validation("omega-max must not be below omega-min".into()));
            }
        }
        if self.omega_steps == Some(0) {
            return Err(CliError::Validation("omega-steps must be at least 1".into()));
        }
        positive("dt", self.dt)?;
        positive("t-final", self.t_final)?;
        if let Some(t) = self.tol {
            positive("tol", t)?;
        }
        if !(self.delta.is_finite() && self.delta >= 0.0) || !(self.noise.is_finite() && self.noise >= 0.0) {
            return Err(CliError::Validation("delta and noise must be non-negative".into()));
        }
        if self.k == 0 || self.a_steps == 0 || self.record_every == 0 {
            return Err(CliError::Validation("k, a-steps and record-every must be at least 1".into()));
        }
        Ok(())
    }

    /// Frequencies of a scan: `--omega` alone, or `omega-steps` points
    /// spaced evenly on `[omega-min, omega-max]`.
    pub fn frequencies(&self, default: f64) -> Result<Vec<f64>, CliError> {
        match (self.omega_min, self.omega_max) {
            (Some(lo), Some(hi)) => {
                let n = self.omega_steps.unwrap_or(10);
                if n == 1 {
                    return Ok(vec![lo]);
                }
                Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
            }
            (None, None) => Ok(vec![self.omega.unwrap_or(default)]),
            _ => Err(CliError::Validation("omega-min and omega-max must be given together".into())),
        }
    }

    /// Default grid for `omega_ref` with any explicit `L`, `nx`, `ny`.
    pub fn grid(&self, omega_ref: f64) -> Result<GridSpec, CliError> {
        self.grid_for_range(omega_ref, omega_ref)
    }

    /// One grid for every frequency in `[lo, hi]`: wide enough for `lo`,
    /// fine enough for `hi`.
    pub fn grid_for_range(&self, lo: f64, hi: f64) -> Result<GridSpec, CliError> {
        positive("omega", lo)?;
        positive("omega", hi)?;
        let l = self.x_halfwidth.unwrap_or_else(|| default_halfwidth(lo));
        let nx = self.nx.unwrap_or_else(|| default_nx(self.p, hi, l));
        let ny = self.ny.unwrap_or(DEFAULT_NY);
        Ok(make_grid(l, nx, ny, self.p)?)
    }

    pub fn command_dir(&self) -> PathBuf {
        self.output_dir.join(&self.command)
    }
}

pub fn relative_to<'a>(path: &'a Path, base: &Path) -> &'a Path {
    path.strip_prefix(base).unwrap_or(path)
}
