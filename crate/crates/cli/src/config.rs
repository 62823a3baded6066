//! Run configuration: defaults, then a `key = value` file, then flags.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use motion_novelty::lof::{DEFAULT_K, DEFAULT_OFFSET, DEFAULT_THRESHOLD};
use motion_novelty::spectral::DEFAULT_BINS;
use motion_novelty::windowing::{DEFAULT_MIN_SAMPLES, DEFAULT_SPAN};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub const RUN_RECORD: &str = "run.json";

/// Settings shared by the pipeline subcommands. Every flag overrides the
/// matching key of `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Config file of `key = value` lines (TOML).
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Neighbors per LOF neighborhood.
    #[arg(long)]
    pub k: Option<usize>,
    /// PSD bins per channel.
    #[arg(long)]
    pub bins: Option<usize>,
    /// Frame intervals per window.
    #[arg(long)]
    pub span: Option<usize>,
    /// Fewest samples a window needs to be scored.
    #[arg(long)]
    pub min_samples: Option<usize>,
    /// Abnormality offset: abnormality = offset - LOF.
    #[arg(long, allow_negative_numbers = true)]
    pub offset: Option<f64>,
    /// Frames with abnormality below this are flagged.
    #[arg(long, allow_negative_numbers = true)]
    pub threshold: Option<f64>,
    /// Model file to write (fit) or read (score, eval, bench).
    #[arg(long, value_name = "FILE")]
    pub model: Option<PathBuf>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Keys accepted in a config file. Relative paths are taken from the
/// file's own directory.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub k: Option<usize>,
    pub bins: Option<usize>,
    pub span: Option<usize>,
    pub min_samples: Option<usize>,
    pub offset: Option<f64>,
    pub threshold: Option<f64>,
    pub model: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    /// Training mission traces for `fit`.
    pub train: Option<Vec<PathBuf>>,
    /// `label:path` missions for `eval`.
    pub missions: Option<Vec<String>>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)
            .map_err(|e| CliError::input(format!("config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        cfg.model.iter_mut().for_each(rebase);
        cfg.out.iter_mut().for_each(rebase);
        cfg.train.iter_mut().flatten().for_each(rebase);
        if let Some(missions) = &mut cfg.missions {
            for m in missions.iter_mut() {
                if let Some((label, p)) = m.split_once(':') {
                    if Path::new(p).is_relative() {
                        *m = format!("{label}:{}", base.join(p).display());
                    }
                }
            }
        }
        Ok(cfg)
    }
}

/// Fully resolved settings, echoed to `run.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub k: usize,
    pub bins: usize,
    pub span: usize,
    pub min_samples: usize,
    pub offset: f64,
    pub threshold: f64,
    pub model: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub train: Vec<PathBuf>,
    pub missions: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            k: DEFAULT_K,
            bins: DEFAULT_BINS,
            span: DEFAULT_SPAN,
            min_samples: DEFAULT_MIN_SAMPLES,
            offset: DEFAULT_OFFSET,
            threshold: DEFAULT_THRESHOLD,
            model: None,
            out: None,
            seed: None,
            train: Vec::new(),
            missions: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn resolve(flags: &Overrides) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        Self::merge(file, flags)
    }

    pub fn merge(file: FileConfig, flags: &Overrides) -> Result<Self, CliError> {
        let d = RunConfig::default();
        let cfg = RunConfig {
            k: flags.k.or(file.k).unwrap_or(d.k),
            bins: flags.bins.or(file.bins).unwrap_or(d.bins),
            span: flags.span.or(file.span).unwrap_or(d.span),
            min_samples: flags.min_samples.or(file.min_samples).unwrap_or(d.min_samples),
            offset: flags.offset.or(file.offset).unwrap_or(d.offset),
            threshold: flags.threshold.or(file.threshold).unwrap_or(d.threshold),
            model: flags.model.clone().or(file.model),
            out: flags.out.clone().or(file.out),
            seed: flags.seed.or(file.seed),
            train: file.train.unwrap_or_default(),
            missions: file.missions.unwrap_or_default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let at_least = |name: &str, v: usize, min: usize| {
            if v < min {
                Err(CliError::usage(format!("{name} must be at least {min}, got {v}")))
            } else {
                Ok(())
            }
        };
        at_least("k", self.k, 1)?;
        at_least("bins", self.bins, 1)?;
        at_least("span", self.span, 1)?;
        at_least("min_samples", self.min_samples, 2)?;
        for (name, v) in [("offset", self.offset), ("threshold", self.threshold)] {
            if !v.is_finite() {
                return Err(CliError::usage(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(())
    }

    pub fn require_model(&self) -> Result<&Path, CliError> {
        self.model.as_deref().ok_or_else(|| CliError::usage("--model is required"))
    }
}

/// Writes `<dir>/run.json` describing one invocation.
pub fn write_run_record(dir: &Path, command: &str, config: &impl Serialize, extra: Value) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::output(dir, e))?;
    let mut record = serde_json::json!({
        "tool": "novelty",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
    });
    if let (Value::Object(map), Value::Object(more)) = (&mut record, extra) {
        map.extend(more);
    }
    let path = dir.join(RUN_RECORD);
    let mut text = serde_json::to_string_pretty(&record).expect("run record serializes");
    text.push('\n');
    fs::write(&path, text).map_err(|e| CliError::output(&path, e))
}
