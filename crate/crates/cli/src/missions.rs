//! Locating and loading mission files named on the command line.

use std::fs;
use std::path::{Path, PathBuf};

use motion_novelty::ingest::{frames_path_for, load_mission};
use motion_novelty::synth::Label;
use motion_novelty::Mission;

use crate::error::{ingest_error, CliError};

/// Loads `<stem>.csv` (or `.jsonl`) with its `<stem>.frames` clock.
/// Non-fatal findings go to stderr.
pub fn load(imu: &Path) -> Result<Mission, CliError> {
    let frames = frames_path_for(imu);
    let (mission, warnings) = load_mission(imu, &frames).map_err(|e| ingest_error(imu, e))?;
    for w in warnings {
        eprintln!("warning: {}: {w}", imu.display());
    }
    Ok(mission)
}

/// Mission id used for output file names.
pub fn mission_id(imu: &Path) -> String {
    imu.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// True when the frame clock of `imu` exists and holds no timestamps.
pub fn has_empty_clock(imu: &Path) -> bool {
    fs::read_to_string(frames_path_for(imu)).is_ok_and(|text| text.trim().is_empty())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPath {
    pub label: Label,
    pub path: PathBuf,
}

/// Parses `normal:<path>` or `abnormal:<path>`.
pub fn parse_labeled(arg: &str) -> Result<LabeledPath, CliError> {
    let (label, path) = arg.split_once(':').ok_or_else(|| {
        CliError::usage(format!("mission {arg:?} has no label; write normal:<path> or abnormal:<path>"))
    })?;
    let label = label.parse::<Label>().map_err(|e| CliError::usage(format!("mission {arg:?}: {e}")))?;
    if path.is_empty() {
        return Err(CliError::usage(format!("mission {arg:?} has an empty path")));
    }
    Ok(LabeledPath { label, path: PathBuf::from(path) })
}

/// Reads a label list of `<label> <path>` lines; paths are relative to the list.
pub fn read_label_file(list: &Path) -> Result<Vec<LabeledPath>, CliError> {
    let text = fs::read_to_string(list).map_err(|e| CliError::input(format!("{}: {e}", list.display())))?;
    let base = list.parent().unwrap_or(Path::new(""));
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || CliError::input(format!("{} line {}: expected `<label> <path>`", list.display(), i + 1));
        let (label, path) = line.split_once(char::is_whitespace).ok_or_else(bad)?;
        let label = label
            .parse::<Label>()
            .map_err(|e| CliError::input(format!("{} line {}: {e}", list.display(), i + 1)))?;
        out.push(LabeledPath { label, path: base.join(path.trim()) });
    }
    Ok(out)
}
