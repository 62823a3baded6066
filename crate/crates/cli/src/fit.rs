use std::fs;
use std::path::{Path, PathBuf};

use motion_novelty::pipeline::{fit_missions, FeatureConfig};
use serde::Serialize;

use crate::config::{write_run_record, Overrides, RunConfig};
use crate::error::CliError;
use crate::missions;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub model: PathBuf,
    pub missions: Vec<String>,
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub bins: usize,
    pub span: usize,
    pub min_samples: usize,
    pub offset: f64,
}

pub fn run(flags: &Overrides, paths: &[PathBuf]) -> Result<FitReport, CliError> {
    let mut cfg = RunConfig::resolve(flags)?;
    if !paths.is_empty() {
        cfg.train = paths.to_vec();
    }
    if cfg.train.is_empty() {
        return Err(CliError::usage("fit needs at least one training mission"));
    }
    let model_path = cfg.require_model()?.to_path_buf();

    let train = cfg.train.iter().map(|p| missions::load(p)).collect::<Result<Vec<_>, _>>()?;
    let features = FeatureConfig { span: cfg.span, min_samples: cfg.min_samples, bins: cfg.bins };
    let model = fit_missions(&train, &features, cfg.k, cfg.offset)?;

    if let Some(parent) = model_path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::output(parent, e))?;
    }
    model.save(&model_path).map_err(|e| CliError::output(&model_path, e))?;

    let report = FitReport {
        model: model_path.clone(),
        missions: train.iter().map(|m| m.id.clone()).collect(),
        n: model.n_train(),
        d: model.dim(),
        k: cfg.k,
        bins: cfg.bins,
        span: cfg.span,
        min_samples: cfg.min_samples,
        offset: cfg.offset,
    };
    let out = output_dir(&cfg, &model_path);
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    let report_path = out.join("fit.json");
    fs::create_dir_all(&out).map_err(|e| CliError::output(&out, e))?;
    fs::write(&report_path, text).map_err(|e| CliError::output(&report_path, e))?;
    write_run_record(&out, "fit", &cfg, serde_json::json!({}))?;
    Ok(report)
}

/// `--out`, or the directory holding the model.
fn output_dir(cfg: &RunConfig, model: &Path) -> PathBuf {
    cfg.out.clone().unwrap_or_else(|| match model.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    })
}
