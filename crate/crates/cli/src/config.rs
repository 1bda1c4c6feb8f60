//! Run configuration: command-line flags layered over an optional JSON file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use photon_phase::{Boundary, CheckId, StateSpec, ToleranceProfile, Window};
use serde::Deserialize;

use crate::Failure;

/// Symmetric half-width used when neither the flags nor the file name a window.
pub const DEFAULT_N_MAX: i64 = 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Baseline {
    PeggBarnett,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// JSON config file; flags given on the command line take precedence.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Symmetric window: lo = -(n_max + 1), hi = n_max.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["lo", "hi"])]
    pub n_max: Option<i64>,

    #[arg(long, allow_negative_numbers = true, requires = "hi")]
    pub lo: Option<i64>,

    #[arg(long, allow_negative_numbers = true, requires = "lo")]
    pub hi: Option<i64>,

    /// open or cyclic.
    #[arg(long)]
    pub boundary: Option<Boundary>,

    /// Phase picked up by the cyclic wrap, in radians.
    #[arg(long, allow_negative_numbers = true)]
    pub wrap_phase: Option<f64>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub subcommand: Option<String>,
    pub n_max: Option<i64>,
    pub lo: Option<i64>,
    pub hi: Option<i64>,
    pub boundary: Option<Boundary>,
    pub wrap_phase: Option<f64>,
    pub state: Option<String>,
    pub phi0: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub tolerance_profile: Option<String>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    pub operator: Option<String>,
    pub baseline: Option<Baseline>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Failure::Config(format!("bad config {}: {e}", path.display())))
    }
}

/// Settings every subcommand shares, after merging.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub window: Window,
    pub format: Format,
    pub out: Option<PathBuf>,
}

pub fn load_file(common: &CommonArgs, subcommand: &str) -> Result<ConfigFile, Failure> {
    let file = match &common.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    if let Some(named) = &file.subcommand {
        if named != subcommand {
            return Err(Failure::Config(format!(
                "config file is for `{named}` but `{subcommand}` was requested"
            )));
        }
    }
    Ok(file)
}

pub fn resolve(common: &CommonArgs, file: &ConfigFile) -> Result<Resolved, Failure> {
    let boundary = common
        .boundary
        .or(file.boundary)
        .unwrap_or(Boundary::Cyclic);
    let wrap_phase = common.wrap_phase.or(file.wrap_phase).unwrap_or(0.0);
    if !wrap_phase.is_finite() {
        return Err(Failure::Config("wrap phase must be finite".into()));
    }
    let bounds = match (common.n_max, common.lo.zip(common.hi)) {
        (Some(n), _) => symmetric_bounds(n)?,
        (None, Some(pair)) => pair,
        (None, None) => match (file.n_max, file.lo, file.hi) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(Failure::Config("config gives both n_max and lo/hi".into()))
            }
            (Some(n), None, None) => symmetric_bounds(n)?,
            (None, Some(lo), Some(hi)) => (lo, hi),
            (None, None, None) => symmetric_bounds(DEFAULT_N_MAX)?,
            _ => {
                return Err(Failure::Config(
                    "config must give lo and hi together".into(),
                ))
            }
        },
    };
    let window = Window::new(bounds.0, bounds.1, boundary, wrap_phase).map_err(Failure::from)?;
    Ok(Resolved {
        window,
        format: common.format.or(file.format).unwrap_or(Format::Json),
        out: common.out.clone().or_else(|| file.out.clone()),
    })
}

fn symmetric_bounds(n_max: i64) -> Result<(i64, i64), Failure> {
    if n_max < 0 {
        return Err(Failure::Config(format!(
            "n_max = {n_max} must be nonnegative"
        )));
    }
    Ok((-(n_max + 1), n_max))
}

pub fn parse_state(text: &str) -> Result<StateSpec, Failure> {
    text.parse().map_err(Failure::from)
}

/// `ID=VALUE`, e.g. `C05=1e-9`.
pub fn parse_override(text: &str) -> Result<(CheckId, f64), String> {
    let (id, value) = text
        .split_once('=')
        .ok_or_else(|| format!("expected ID=VALUE, got {text:?}"))?;
    let id: CheckId = id.parse().map_err(|_| format!("unknown check id {id:?}"))?;
    let value: f64 = value
        .parse()
        .map_err(|_| format!("bad tolerance {value:?}"))?;
    if !(value >= 0.0 && value.is_finite()) {
        return Err(format!("tolerance for {id} must be a nonnegative number"));
    }
    Ok((id, value))
}

pub fn tolerance_profile(
    name: Option<&str>,
    file: &ConfigFile,
    overrides: &[(CheckId, f64)],
) -> Result<ToleranceProfile, Failure> {
    let name = name
        .or(file.tolerance_profile.as_deref())
        .unwrap_or("default");
    let mut profile = ToleranceProfile::named(name).map_err(Failure::from)?;
    for (id, value) in &file.tolerances {
        let (id, value) = parse_override(&format!("{id}={value}")).map_err(Failure::Config)?;
        profile = profile.with_override(id, value);
    }
    for (id, value) in overrides {
        profile = profile.with_override(*id, *value);
    }
    Ok(profile)
}
