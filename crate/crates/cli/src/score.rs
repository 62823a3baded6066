use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use motion_novelty::pipeline::score_mission;
use motion_novelty::score::write_score_csv;
use motion_novelty::{LofModel, NoveltyScore};

use crate::config::{write_run_record, Overrides, RunConfig};
use crate::error::CliError;
use crate::missions;

/// Loads the model named by `cfg` and rejects feature flags that contradict it.
pub fn load_model(cfg: &RunConfig, flags: &Overrides) -> Result<LofModel, CliError> {
    let model = LofModel::load(cfg.require_model()?)?;
    let p = model.params();
    let bins = flags.bins.unwrap_or(p.bins);
    let span = flags.span.unwrap_or(p.span);
    if (bins, span) != (p.bins, p.span) {
        return Err(CliError::usage(format!(
            "model was trained with bins = {}, span = {}; got bins = {bins}, span = {span}",
            p.bins, p.span
        )));
    }
    Ok(model)
}

/// Per-frame scores of one mission file. An empty frame clock yields no rows.
pub fn score_file(model: &LofModel, imu: &Path, min_samples: usize) -> Result<Vec<NoveltyScore>, CliError> {
    if missions::has_empty_clock(imu) {
        return Ok(Vec::new());
    }
    let mission = missions::load(imu)?;
    Ok(score_mission(model, &mission, min_samples)?)
}

/// Scores each mission; returns the written CSV paths (empty when printing to stdout).
pub fn run(flags: &Overrides, paths: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let cfg = RunConfig::resolve(flags)?;
    if paths.is_empty() {
        return Err(CliError::usage("score needs at least one mission"));
    }
    let model = load_model(&cfg, flags)?;
    let Some(out) = cfg.out.clone() else {
        if paths.len() > 1 {
            return Err(CliError::usage("scoring several missions needs --out"));
        }
        let scores = score_file(&model, &paths[0], cfg.min_samples)?;
        let stdout = io::stdout().lock();
        let mut w = BufWriter::new(stdout);
        write_score_csv(&mut w, &scores)
            .and_then(|_| w.flush())
            .map_err(|e| CliError::output(Path::new("<stdout>"), e))?;
        return Ok(Vec::new());
    };

    fs::create_dir_all(&out).map_err(|e| CliError::output(&out, e))?;
    let mut written = Vec::with_capacity(paths.len());
    for imu in paths {
        let scores = score_file(&model, imu, cfg.min_samples)?;
        let path = out.join(format!("{}.scores.csv", missions::mission_id(imu)));
        write_scores(&path, &scores)?;
        written.push(path);
    }
    write_run_record(&out, "score", &cfg, serde_json::json!({ "inputs": paths }))?;
    Ok(written)
}

fn write_scores(path: &Path, scores: &[NoveltyScore]) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::output(path, e))?;
    let mut w = BufWriter::new(file);
    write_score_csv(&mut w, scores)
        .and_then(|_| w.flush())
        .map_err(|e| CliError::output(path, e))
}
