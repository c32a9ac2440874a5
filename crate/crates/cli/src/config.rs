//! Run configuration: flag/file merging and validation.
//!
//! Every field can come from `--config file.json` (same names, snake_case);
//! explicit flags win on conflict. Validation errors name the offending
//! field and map to exit code 1.

use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};

use mapecho_core::maps::Coupling;

use crate::CliError;

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON config file; explicit flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Map family: pcm | harper.
    #[arg(long)]
    pub family: Option<String>,
    /// Hilbert-space dimension N (power of two between 4 and 8192).
    #[arg(long)]
    pub n: Option<usize>,
    /// PCM chaoticity parameter a.
    #[arg(long)]
    pub a: Option<f64>,
    /// PCM kick depth K.
    #[arg(long)]
    pub kick: Option<f64>,
    /// HM kick strength k.
    #[arg(long)]
    pub k: Option<f64>,
    /// HM momentum-kick strength k' (defaults to k).
    #[arg(long)]
    pub k_prime: Option<f64>,
    /// Coupling given directly (δK or δk).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Coupling as δ/ħ with ħ = 1/N.
    #[arg(long)]
    pub delta_over_hbar: Option<f64>,
    /// Number of map iterations T.
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Seed for sampling-based verification.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (0 = available parallelism).
    #[arg(long)]
    pub workers: Option<usize>,
}

/// The same fields as [`CommonArgs`] when read from a config file, plus the
/// per-command extras.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub family: Option<String>,
    pub n: Option<usize>,
    pub a: Option<f64>,
    pub kick: Option<f64>,
    pub k: Option<f64>,
    pub k_prime: Option<f64>,
    pub delta: Option<f64>,
    pub delta_over_hbar: Option<f64>,
    pub horizon: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub eval_time: Option<usize>,
    pub k_grid: Option<Vec<f64>>,
    pub grid_size: Option<usize>,
    pub steps: Option<usize>,
    pub samples: Option<usize>,
}

/// Map family with its parameters resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Pcm { a: f64, kick: f64 },
    Harper { k: f64, k_prime: f64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Pcm { .. } => "pcm",
            Family::Harper { .. } => "harper",
        }
    }
}

/// Fully resolved and validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub family: Family,
    pub n: usize,
    pub coupling: Coupling,
    pub horizon: usize,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub workers: usize,
}

impl RunConfig {
    pub fn delta(&self) -> f64 {
        self.coupling.resolve(self.n)
    }

    /// JSON block sufficient to re-run the command exactly.
    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        obj.insert("family".into(), self.family.name().into());
        obj.insert("n".into(), self.n.into());
        match self.family {
            Family::Pcm { a, kick } => {
                obj.insert("a".into(), a.into());
                obj.insert("kick".into(), kick.into());
            }
            Family::Harper { k, k_prime } => {
                obj.insert("k".into(), k.into());
                obj.insert("k_prime".into(), k_prime.into());
            }
        }
        match self.coupling {
            Coupling::Raw(d) => {
                obj.insert("delta".into(), d.into());
            }
            Coupling::OverHbar(x) => {
                obj.insert("delta_over_hbar".into(), x.into());
            }
        }
        obj.insert("resolved_delta".into(), self.delta().into());
        obj.insert("horizon".into(), self.horizon.into());
        obj.insert("out_dir".into(), self.out_dir.display().to_string().into());
        obj.insert("seed".into(), self.seed.into());
        obj.insert("workers".into(), self.workers.into());
        serde_json::Value::Object(obj)
    }
}

/// Merged view of flags over file values, before validation.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Merged {
    pub family: Option<String>,
    pub n: Option<usize>,
    pub a: Option<f64>,
    pub kick: Option<f64>,
    pub k: Option<f64>,
    pub k_prime: Option<f64>,
    pub delta: Option<f64>,
    pub delta_over_hbar: Option<f64>,
    pub horizon: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub eval_time: Option<usize>,
    pub k_grid: Option<Vec<f64>>,
    pub grid_size: Option<usize>,
    pub steps: Option<usize>,
    pub samples: Option<usize>,
}

pub fn load_file(path: &PathBuf) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("config: cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("config: {}: {e}", path.display())))
}

pub fn merge(args: &CommonArgs) -> Result<Merged, CliError> {
    let file = match &args.config {
        Some(path) => load_file(path)?,
        None => FileConfig::default(),
    };
    Ok(Merged {
        family: args.family.clone().or(file.family),
        n: args.n.or(file.n),
        a: args.a.or(file.a),
        kick: args.kick.or(file.kick),
        k: args.k.or(file.k),
        k_prime: args.k_prime.or(file.k_prime),
        delta: args.delta.or(file.delta),
        delta_over_hbar: args.delta_over_hbar.or(file.delta_over_hbar),
        horizon: args.horizon.or(file.horizon),
        out_dir: args.out_dir.clone().or(file.out_dir),
        seed: args.seed.or(file.seed),
        workers: args.workers.or(file.workers),
        eval_time: file.eval_time,
        k_grid: file.k_grid,
        grid_size: file.grid_size,
        steps: file.steps,
        samples: file.samples,
    })
}

fn invalid(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("{field}: {msg}"))
}

pub fn resolve_family(merged: &Merged, default_harper: bool) -> Result<Family, CliError> {
    let name = match (&merged.family, default_harper) {
        (Some(name), _) => name.as_str(),
        (None, true) => "harper",
        (None, false) => return Err(invalid("family", "required (pcm | harper)")),
    };
    match name {
        "pcm" => {
            let a = merged.a.ok_or_else(|| invalid("a", "required for the pcm family"))?;
            if !(a > 0.0) {
                return Err(invalid("a", "must be positive"));
            }
            let kick = merged
                .kick
                .ok_or_else(|| invalid("kick", "required for the pcm family"))?;
            Ok(Family::Pcm { a, kick })
        }
        "harper" => {
            let k = merged.k.ok_or_else(|| invalid("k", "required for the harper family"))?;
            Ok(Family::Harper {
                k,
                k_prime: merged.k_prime.unwrap_or(k),
            })
        }
        other => Err(invalid("family", format!("unknown family '{other}'"))),
    }
}

pub fn resolve_n(merged: &Merged, max: usize) -> Result<usize, CliError> {
    let n = merged.n.ok_or_else(|| invalid("n", "required"))?;
    if !(4..=8192).contains(&n) || !n.is_power_of_two() {
        return Err(invalid("n", "must be a power of two between 4 and 8192"));
    }
    if n > max {
        return Err(invalid("n", format!("must be at most {max} for this command")));
    }
    Ok(n)
}

pub fn resolve_coupling(merged: &Merged) -> Result<Coupling, CliError> {
    match (merged.delta, merged.delta_over_hbar) {
        (Some(d), None) => Ok(Coupling::Raw(d)),
        (None, Some(x)) => Ok(Coupling::OverHbar(x)),
        (Some(_), Some(_)) => Err(invalid(
            "delta/delta-over-hbar",
            "give exactly one coupling form, not both",
        )),
        (None, None) => Err(invalid(
            "delta/delta-over-hbar",
            "one coupling form is required",
        )),
    }
}

pub fn resolve_run(merged: &Merged, default_horizon: usize, max_n: usize) -> Result<RunConfig, CliError> {
    let family = resolve_family(merged, false)?;
    let n = resolve_n(merged, max_n)?;
    let coupling = resolve_coupling(merged)?;
    let horizon = merged.horizon.unwrap_or(default_horizon);
    if horizon < 1 {
        return Err(invalid("horizon", "must be at least 1"));
    }
    Ok(RunConfig {
        family,
        n,
        coupling,
        horizon,
        out_dir: merged.out_dir.clone().unwrap_or_else(|| PathBuf::from("out")),
        seed: merged.seed.unwrap_or(7),
        workers: merged.workers.unwrap_or(0),
    })
}
