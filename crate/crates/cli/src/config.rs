use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::exit::Failure;

#[derive(Parser, Debug)]
#[command(name = "tubegeo", version, about = "Complex geodesics and Kobayashi distances in tube domains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Kobayashi distance of a pair with the oracle sandwich.
    Distance,
    /// Complex geodesic through a pair, with case label and boundary limits.
    Geodesic,
    /// Four-point witness schedule.
    GromovScan,
    /// Property suite over the catalog.
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Distance => "distance",
            Command::Geodesic => "geodesic",
            Command::GromovScan => "gromov-scan",
            Command::Verify => "verify",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Flags {
    /// Catalog name or domain file (key = value lines).
    #[arg(long, global = true)]
    pub domain: Option<String>,
    /// Points separated by ';', coordinates by ',', e.g. "0,0;0.5+0.1i,0".
    #[arg(long, global = true)]
    pub points: Option<String>,
    /// Grid size: sample angles for geodesic, pairs for verify.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Level M for gromov-scan.
    #[arg(long, global = true)]
    pub target: Option<f64>,
    /// Polynomial degree of the upper-bound oracle.
    #[arg(long, global = true)]
    pub degree: Option<usize>,
    /// Step budget for gromov-scan.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Settings file with the same keys as the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Negative control: evaluate the Hilbert quotient upside down.
    #[arg(long, global = true, hide = true)]
    pub inject_hilbert_sign_bug: bool,
}

/// Resolved settings of one run; hashed into every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub domain: Option<String>,
    pub points: Vec<Vec<[f64; 2]>>,
    pub grid: usize,
    pub tol: f64,
    pub seed: u64,
    pub format: Format,
    pub target: Option<f64>,
    pub degree: usize,
    pub budget: usize,
    pub inject_hilbert_sign_bug: bool,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(command: Command, flags: &Flags) -> Result<Self, Failure> {
        let file = match &flags.config {
            Some(p) => read_settings(p)?,
            None => BTreeMap::new(),
        };
        let get = |k: &str| file.get(k).map(String::as_str);
        let domain = flags.domain.clone().or_else(|| get("domain").map(String::from));
        let points_text = flags.points.clone().or_else(|| get("points").map(String::from));
        let points = match points_text {
            Some(t) => parse_points(&t)?,
            None => Vec::new(),
        };
        let default_grid = if command == Command::Verify { 20 } else { 16 };
        let default_degree = if command == Command::GromovScan { 2 } else { 4 };
        let cfg = RunConfig {
            command: command.name(),
            domain,
            points,
            grid: pick(flags.grid, get("grid"), "grid")?.unwrap_or(default_grid),
            tol: pick(flags.tol, get("tol"), "tol")?.unwrap_or(1e-6),
            seed: pick(flags.seed, get("seed"), "seed")?.unwrap_or(7),
            format: match (flags.format, get("format")) {
                (Some(f), _) => f,
                (None, Some(s)) => Format::from_str(s, true).map_err(|_| Failure::Config(format!("bad format '{}'", s)))?,
                (None, None) => Format::Json,
            },
            target: pick(flags.target, get("target"), "target")?,
            degree: pick(flags.degree, get("degree"), "degree")?.unwrap_or(default_degree),
            budget: pick(flags.budget, get("budget"), "budget")?.unwrap_or(32),
            inject_hilbert_sign_bug: flags.inject_hilbert_sign_bug,
            out: flags.out.clone().or_else(|| get("out").map(PathBuf::from)),
        };
        if !(cfg.tol > 0.0 && cfg.tol.is_finite()) {
            return Err(Failure::Config("tolerance must be positive".into()));
        }
        if cfg.grid == 0 || cfg.degree == 0 || cfg.budget == 0 {
            return Err(Failure::Config("grid, degree and budget must be positive".into()));
        }
        Ok(cfg)
    }

    /// SHA-256 of the canonical JSON form (the output path is left out).
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        format!("{:x}", Sha256::digest(text.as_bytes()))
    }
}

fn pick<T: FromStr>(flag: Option<T>, file: Option<&str>, key: &str) -> Result<Option<T>, Failure> {
    match (flag, file) {
        (Some(v), _) => Ok(Some(v)),
        (None, Some(s)) => s.parse().map(Some).map_err(|_| Failure::Config(format!("bad value for {}: '{}'", key, s))),
        (None, None) => Ok(None),
    }
}

fn read_settings(path: &Path) -> Result<BTreeMap<String, String>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("cannot read config {}: {}", path.display(), e)))?;
    let mut kv = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Failure::Config(format!("config line {}: expected key = value", i + 1)))?;
        kv.insert(k.trim().replace('_', "-").to_ascii_lowercase(), v.trim().to_string());
    }
    Ok(kv)
}

pub fn parse_points(text: &str) -> Result<Vec<Vec<[f64; 2]>>, Failure> {
    text.split(';')
        .map(|p| {
            p.split(',')
                .map(|c| {
                    let c = c.trim();
                    Complex64::from_str(c)
                        .ok()
                        .filter(|z| z.re.is_finite() && z.im.is_finite())
                        .map(|z| [z.re, z.im])
                        .ok_or_else(|| Failure::Config(format!("malformed coordinate '{}'", c)))
                })
                .collect()
        })
        .collect()
}
