use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use motion_novelty::synth::{write_mission, SynthPlan};

use crate::config::write_run_record;
use crate::error::CliError;

pub const LABELS_FILE: &str = "labels.txt";

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    /// Plan file (TOML): seed, normal, abnormal, duration, imu_rate,
    /// frame_rate, noise_w, noise_a, flip_peak_rate and a [vibration] table.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Overrides the plan's base seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory receiving the mission files.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

/// Parses a plan file; keys left out keep their defaults.
pub fn parse_plan(text: &str) -> Result<SynthPlan, String> {
    toml::from_str(text).map_err(|e| e.to_string())
}

pub fn load_plan(path: Option<&Path>) -> Result<SynthPlan, CliError> {
    let Some(path) = path else {
        return Ok(SynthPlan::default());
    };
    let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    parse_plan(&text).map_err(|e| CliError::input(format!("config {}: {e}", path.display())))
}

/// Generates every mission of the plan; returns the CSV paths in plan order.
pub fn run(args: &SynthArgs) -> Result<Vec<PathBuf>, CliError> {
    let mut plan = load_plan(args.config.as_deref())?;
    if let Some(seed) = args.seed {
        plan.seed = seed;
    }
    plan.validate()?;

    let out = &args.out;
    fs::create_dir_all(out).map_err(|e| CliError::output(out, e))?;
    let mut written = Vec::new();
    let mut labels = String::new();
    for planned in plan.missions() {
        let mission = planned.generate()?;
        let csv = write_mission(out, &mission).map_err(|e| CliError::output(out, e))?;
        labels.push_str(&format!("{} {}.csv\n", planned.label.as_str(), mission.id));
        written.push(csv);
    }
    let labels_path = out.join(LABELS_FILE);
    fs::write(&labels_path, labels).map_err(|e| CliError::output(&labels_path, e))?;
    write_run_record(out, "synth", &plan, serde_json::json!({}))?;
    Ok(written)
}
