use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use motion_novelty::synth::Label;
use motion_novelty::NoveltyScore;
use serde::Serialize;

use crate::config::{write_run_record, Overrides, RunConfig};
use crate::error::CliError;
use crate::missions::{self, LabeledPath};
use crate::score::{load_model, score_file};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MissionMetrics {
    pub id: String,
    pub label: Label,
    pub path: PathBuf,
    pub frames: usize,
    pub scored: usize,
    pub flagged: usize,
    /// Flagged share of scored frames; `None` when nothing was scored.
    pub flag_rate: Option<f64>,
    pub min: Option<f64>,
    pub mean: Option<f64>,
    pub max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub threshold: f64,
    pub missions: Vec<MissionMetrics>,
    /// Share of scored normal frames with abnormality >= threshold.
    pub normal_pass: Option<f64>,
    /// Share of scored abnormal frames with abnormality < threshold.
    pub abnormal_catch: Option<f64>,
}

pub fn mission_metrics(lp: &LabeledPath, scores: &[NoveltyScore], threshold: f64) -> MissionMetrics {
    let values: Vec<f64> = scores.iter().filter_map(|s| s.abnormality).collect();
    let flagged = scores.iter().filter(|s| s.is_flagged(threshold)).count();
    let scored = values.len();
    let (min, mean, max, flag_rate) = if scored == 0 {
        (None, None, None, None)
    } else {
        (
            values.iter().copied().reduce(f64::min),
            Some(values.iter().sum::<f64>() / scored as f64),
            values.iter().copied().reduce(f64::max),
            Some(flagged as f64 / scored as f64),
        )
    };
    MissionMetrics {
        id: missions::mission_id(&lp.path),
        label: lp.label,
        path: lp.path.clone(),
        frames: scores.len(),
        scored,
        flagged,
        flag_rate,
        min,
        mean,
        max,
    }
}

pub fn summarize(threshold: f64, missions: Vec<MissionMetrics>) -> EvalReport {
    let rate = |label: Label, pick: fn(&MissionMetrics) -> usize| {
        let (num, den) = missions
            .iter()
            .filter(|m| m.label == label)
            .fold((0, 0), |(n, d), m| (n + pick(m), d + m.scored));
        (den > 0).then(|| num as f64 / den as f64)
    };
    EvalReport {
        threshold,
        normal_pass: rate(Label::Normal, |m| m.scored - m.flagged),
        abnormal_catch: rate(Label::Abnormal, |m| m.flagged),
        missions,
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"))
}

impl EvalReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "threshold {}", self.threshold).unwrap();
        writeln!(
            s,
            "{:<24} {:<8} {:>7} {:>7} {:>7} {:>9} {:>12} {:>12} {:>12}",
            "mission", "label", "frames", "scored", "flagged", "flag_rate", "min", "mean", "max"
        )
        .unwrap();
        for m in &self.missions {
            writeln!(
                s,
                "{:<24} {:<8} {:>7} {:>7} {:>7} {:>9} {:>12} {:>12} {:>12}",
                m.id,
                m.label.as_str(),
                m.frames,
                m.scored,
                m.flagged,
                opt(m.flag_rate),
                opt(m.min),
                opt(m.mean),
                opt(m.max)
            )
            .unwrap();
        }
        writeln!(s, "normal-pass {}", opt(self.normal_pass)).unwrap();
        writeln!(s, "abnormal-catch {}", opt(self.abnormal_catch)).unwrap();
        s
    }
}

pub fn run(flags: &Overrides, args: &[String], labels: Option<&PathBuf>) -> Result<EvalReport, CliError> {
    let cfg = RunConfig::resolve(flags)?;
    let mut inputs: Vec<LabeledPath> = Vec::new();
    let listed = if args.is_empty() { &cfg.missions } else { args };
    for a in listed {
        inputs.push(missions::parse_labeled(a)?);
    }
    if let Some(list) = labels {
        inputs.extend(missions::read_label_file(list)?);
    }
    if inputs.is_empty() {
        return Err(CliError::usage("eval needs at least one labeled mission"));
    }
    let model = load_model(&cfg, flags)?;

    let mut per_mission = Vec::with_capacity(inputs.len());
    for lp in &inputs {
        let scores = score_file(&model, &lp.path, cfg.min_samples)?;
        per_mission.push(mission_metrics(lp, &scores, cfg.threshold));
    }
    let report = summarize(cfg.threshold, per_mission);

    if let Some(out) = &cfg.out {
        fs::create_dir_all(out).map_err(|e| CliError::output(out, e))?;
        let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
        for (name, body) in [("eval.json", json), ("eval.txt", report.to_text())] {
            let path = out.join(name);
            fs::write(&path, body).map_err(|e| CliError::output(&path, e))?;
        }
        let inputs_json: Vec<String> =
            inputs.iter().map(|lp| format!("{}:{}", lp.label.as_str(), lp.path.display())).collect();
        write_run_record(out, "eval", &cfg, serde_json::json!({ "inputs": inputs_json }))?;
    }
    Ok(report)
}
