use std::fmt;
use std::path::Path;

use motion_novelty::ingest::IngestError;
use motion_novelty::lof::{LofError, ModelFileError};
use motion_novelty::pipeline::PipelineError;
use motion_novelty::synth::SynthError;

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Exit status for unreadable, malformed or inconsistent input and bad usage.
pub const EXIT_INPUT: i32 = 2;
/// Exit status when the data is valid but too small to fit or score.
pub const EXIT_INSUFFICIENT: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Input(String),
    Insufficient(String),
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Insufficient(_) => EXIT_INSUFFICIENT,
            CliError::Usage(_) | CliError::Input(_) | CliError::Output(_) => EXIT_INPUT,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn output(path: &Path, err: impl fmt::Display) -> Self {
        CliError::Output(format!("cannot write {}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Insufficient(m) => write!(f, "insufficient data: {m}"),
            CliError::Output(m) => write!(f, "output error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Ingest failure attributed to `path` (I/O errors already carry it).
pub fn ingest_error(path: &Path, err: IngestError) -> CliError {
    match err {
        IngestError::Io { .. } => CliError::Input(err.to_string()),
        other => CliError::Input(format!("{}: {other}", path.display())),
    }
}

impl From<PipelineError> for CliError {
    fn from(err: PipelineError) -> Self {
        match err {
            PipelineError::TooFewWindows { .. } | PipelineError::Lof(LofError::Insufficient { .. }) => {
                CliError::Insufficient(err.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<LofError> for CliError {
    fn from(err: LofError) -> Self {
        PipelineError::Lof(err).into()
    }
}

impl From<ModelFileError> for CliError {
    fn from(err: ModelFileError) -> Self {
        CliError::Input(format!("model file [{}]: {err}", err.code()))
    }
}

impl From<SynthError> for CliError {
    fn from(err: SynthError) -> Self {
        CliError::Input(err.to_string())
    }
}
