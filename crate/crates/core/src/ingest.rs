//! IMU trace and frame-clock parsing.
//!
//! A mission on disk is a pair of files: an IMU trace (CSV with the header
//! `t,qx,qy,qz,qw,wx,wy,wz,ax,ay,az`, or JSONL objects with the same keys)
//! and a frame clock (one decimal timestamp per line).

use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Physical channels in their normative order.
pub const CHANNEL_NAMES: [&str; 10] = ["qx", "qy", "qz", "qw", "wx", "wy", "wz", "ax", "ay", "az"];

/// Number of physical channels carried by every sample.
pub const NUM_CHANNELS: usize = CHANNEL_NAMES.len();

/// The exact CSV header of an IMU trace.
pub const IMU_CSV_HEADER: &str = "t,qx,qy,qz,qw,wx,wy,wz,ax,ay,az";

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("format error at row {row}: {message}")]
    Format { row: usize, message: String },
    #[error("ordering error at row {row}: t = {t} does not follow {prev}")]
    Ordering { row: usize, prev: f64, t: f64 },
    #[error("value error at row {row}, column {column}: {value:?} is not finite")]
    Value { row: usize, column: &'static str, value: String },
    #[error("insufficient data: {0}")]
    Insufficient(String),
    #[error(
        "coverage error: samples span [{}, {}] and frames span [{}, {}] do not overlap",
        samples.0, samples.1, frames.0, frames.1
    )]
    Coverage { samples: (f64, f64), frames: (f64, f64) },
}

impl IngestError {
    fn format(row: usize, message: impl Into<String>) -> Self {
        IngestError::Format { row, message: message.into() }
    }

    fn io(path: &Path, source: io::Error) -> Self {
        IngestError::Io { path: path.to_path_buf(), source }
    }
}

/// One timestamped 10-channel IMU reading.
///
/// Orientation is a quaternion stored `(x, y, z, w)`; its norm is not
/// enforced. Angular velocity is in rad/s and linear acceleration in m/s².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImuSample {
    pub t: f64,
    pub qx: f64,
    pub qy: f64,
    pub qz: f64,
    pub qw: f64,
    pub wx: f64,
    pub wy: f64,
    pub wz: f64,
    pub ax: f64,
    pub ay: f64,
    pub az: f64,
}

impl ImuSample {
    pub fn from_channels(t: f64, c: [f64; NUM_CHANNELS]) -> Self {
        ImuSample {
            t,
            qx: c[0],
            qy: c[1],
            qz: c[2],
            qw: c[3],
            wx: c[4],
            wy: c[5],
            wz: c[6],
            ax: c[7],
            ay: c[8],
            az: c[9],
        }
    }

    /// Channel values in [`CHANNEL_NAMES`] order.
    pub fn channels(&self) -> [f64; NUM_CHANNELS] {
        [
            self.qx, self.qy, self.qz, self.qw, self.wx, self.wy, self.wz, self.ax, self.ay, self.az,
        ]
    }

    /// Column name of the first non-finite field, if any.
    fn first_non_finite(&self) -> Option<(&'static str, f64)> {
        if !self.t.is_finite() {
            return Some(("t", self.t));
        }
        CHANNEL_NAMES
            .iter()
            .zip(self.channels())
            .find(|(_, v)| !v.is_finite())
            .map(|(name, v)| (*name, v))
    }
}

/// One recorded experiment: an IMU trace plus the frame clock it is scored on.
#[derive(Debug, Clone, PartialEq)]
pub struct Mission {
    pub id: String,
    pub samples: Vec<ImuSample>,
    pub frames: Vec<f64>,
}

impl Mission {
    pub fn sample_span(&self) -> (f64, f64) {
        (self.samples[0].t, self.samples[self.samples.len() - 1].t)
    }

    pub fn frame_span(&self) -> (f64, f64) {
        (self.frames[0], self.frames[self.frames.len() - 1])
    }
}

/// Non-fatal findings from [`validate_mission`].
#[derive(Debug, Clone, PartialEq)]
pub enum MissionWarning {
    /// The frame clock starts before or ends after the IMU trace.
    FramesExceedSamples { samples: (f64, f64), frames: (f64, f64) },
}

impl std::fmt::Display for MissionWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MissionWarning::FramesExceedSamples { samples, frames } => write!(
                f,
                "frame clock [{}, {}] extends beyond the IMU trace [{}, {}]",
                frames.0, frames.1, samples.0, samples.1
            ),
        }
    }
}

/// Reads an IMU trace, choosing JSONL for `.jsonl`/`.ndjson` files and CSV otherwise.
pub fn parse_imu(path: impl AsRef<Path>) -> Result<Vec<ImuSample>, IngestError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| IngestError::io(path, e))?;
    let jsonl = matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("jsonl") | Some("ndjson")
    );
    if jsonl {
        parse_imu_jsonl(BufReader::new(file))
    } else {
        parse_imu_csv(file)
    }
}

/// Parses an IMU CSV trace. Rows are numbered from 1, excluding the header.
pub fn parse_imu_csv<R: Read>(reader: R) -> Result<Vec<ImuSample>, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = rdr.headers().map_err(|e| IngestError::format(0, e.to_string()))?.clone();
    let found: Vec<&str> = headers.iter().collect();
    let expected: Vec<&str> = IMU_CSV_HEADER.split(',').collect();
    if found != expected {
        return Err(IngestError::format(
            0,
            format!("header must be `{IMU_CSV_HEADER}`, found `{}`", found.join(",")),
        ));
    }

    let mut samples: Vec<ImuSample> = Vec::new();
    let mut record = csv::StringRecord::new();
    let mut row = 0;
    loop {
        row += 1;
        match rdr.read_record(&mut record) {
            Ok(true) => {}
            Ok(false) => break,
            Err(e) => return Err(IngestError::format(row, e.to_string())),
        }
        if record.len() != expected.len() {
            return Err(IngestError::format(
                row,
                format!("expected {} columns, found {}", expected.len(), record.len()),
            ));
        }
        let mut values = [0.0; NUM_CHANNELS + 1];
        for (col, (field, slot)) in record.iter().zip(values.iter_mut()).enumerate() {
            let column = if col == 0 { "t" } else { CHANNEL_NAMES[col - 1] };
            *slot = field.parse::<f64>().map_err(|_| {
                IngestError::format(row, format!("column {column}: cannot parse {field:?}"))
            })?;
            if !slot.is_finite() {
                return Err(IngestError::Value { row, column, value: field.to_string() });
            }
        }
        let mut channels = [0.0; NUM_CHANNELS];
        channels.copy_from_slice(&values[1..]);
        push_ordered(&mut samples, ImuSample::from_channels(values[0], channels), row)?;
    }
    Ok(samples)
}

/// Parses an IMU JSONL trace: one object per non-blank line with the CSV header's keys.
pub fn parse_imu_jsonl<R: BufRead>(reader: R) -> Result<Vec<ImuSample>, IngestError> {
    let mut samples: Vec<ImuSample> = Vec::new();
    let mut row = 0;
    for line in reader.lines() {
        let line = line.map_err(|e| IngestError::format(row + 1, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        row += 1;
        let sample: ImuSample =
            serde_json::from_str(&line).map_err(|e| IngestError::format(row, e.to_string()))?;
        if let Some((column, v)) = sample.first_non_finite() {
            return Err(IngestError::Value { row, column, value: v.to_string() });
        }
        push_ordered(&mut samples, sample, row)?;
    }
    Ok(samples)
}

fn push_ordered(samples: &mut Vec<ImuSample>, s: ImuSample, row: usize) -> Result<(), IngestError> {
    if let Some(prev) = samples.last() {
        if s.t <= prev.t {
            return Err(IngestError::Ordering { row, prev: prev.t, t: s.t });
        }
    }
    samples.push(s);
    Ok(())
}

/// Reads a frame-clock file.
pub fn parse_frames(path: impl AsRef<Path>) -> Result<Vec<f64>, IngestError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| IngestError::io(path, e))?;
    parse_frames_reader(BufReader::new(file))
}

/// Parses frame timestamps, one per line. Blank lines are skipped; rows in
/// errors are 1-based line numbers.
pub fn parse_frames_reader<R: BufRead>(reader: R) -> Result<Vec<f64>, IngestError> {
    let mut frames: Vec<f64> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let row = i + 1;
        let line = line.map_err(|e| IngestError::format(row, e.to_string()))?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let t: f64 = text
            .parse()
            .map_err(|_| IngestError::format(row, format!("cannot parse {text:?}")))?;
        if !t.is_finite() {
            return Err(IngestError::Value { row, column: "t", value: text.to_string() });
        }
        if let Some(&prev) = frames.last() {
            if t <= prev {
                return Err(IngestError::Ordering { row, prev, t });
            }
        }
        frames.push(t);
    }
    if frames.len() < 2 {
        return Err(IngestError::format(
            frames.len(),
            format!("at least 2 frames are required, found {}", frames.len()),
        ));
    }
    Ok(frames)
}

/// Checks that the two parsed streams describe one usable mission.
///
/// Samples and frames must each be strictly increasing with at least two
/// entries, and their time spans must overlap. A frame clock running past the
/// IMU trace is accepted with a warning.
pub fn validate_mission(
    id: impl Into<String>,
    samples: Vec<ImuSample>,
    frames: Vec<f64>,
) -> Result<(Mission, Vec<MissionWarning>), IngestError> {
    if samples.len() < 2 {
        return Err(IngestError::Insufficient(format!(
            "a mission needs at least 2 IMU samples, found {}",
            samples.len()
        )));
    }
    if frames.len() < 2 {
        return Err(IngestError::Insufficient(format!(
            "a mission needs at least 2 frames, found {}",
            frames.len()
        )));
    }
    for (i, pair) in samples.windows(2).enumerate() {
        if pair[1].t <= pair[0].t {
            return Err(IngestError::Ordering { row: i + 2, prev: pair[0].t, t: pair[1].t });
        }
    }
    for (i, pair) in frames.windows(2).enumerate() {
        if pair[1] <= pair[0] {
            return Err(IngestError::Ordering { row: i + 2, prev: pair[0], t: pair[1] });
        }
    }
    for (i, s) in samples.iter().enumerate() {
        if let Some((column, v)) = s.first_non_finite() {
            return Err(IngestError::Value { row: i + 1, column, value: v.to_string() });
        }
    }

    let mission = Mission { id: id.into(), samples, frames };
    let s = mission.sample_span();
    let f = mission.frame_span();
    if f.1 < s.0 || f.0 > s.1 {
        return Err(IngestError::Coverage { samples: s, frames: f });
    }
    let mut warnings = Vec::new();
    if f.0 < s.0 || f.1 > s.1 {
        warnings.push(MissionWarning::FramesExceedSamples { samples: s, frames: f });
    }
    Ok((mission, warnings))
}

/// Loads `<stem>.csv` (or `.jsonl`) together with the frame clock at `frames`.
pub fn load_mission(
    imu_path: impl AsRef<Path>,
    frames_path: impl AsRef<Path>,
) -> Result<(Mission, Vec<MissionWarning>), IngestError> {
    let imu_path = imu_path.as_ref();
    let id = imu_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let samples = parse_imu(imu_path)?;
    let frames = parse_frames(frames_path)?;
    validate_mission(id, samples, frames)
}

/// Conventional frame-clock path for an IMU trace: same stem, `.frames` extension.
pub fn frames_path_for(imu_path: impl AsRef<Path>) -> PathBuf {
    imu_path.as_ref().with_extension("frames")
}

/// Writes samples as IMU CSV. Values use the shortest decimal form that
/// parses back to the same bits.
pub fn write_imu_csv<W: Write>(mut w: W, samples: &[ImuSample]) -> io::Result<()> {
    writeln!(w, "{IMU_CSV_HEADER}")?;
    for s in samples {
        write!(w, "{}", s.t)?;
        for v in s.channels() {
            write!(w, ",{v}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn write_frames<W: Write>(mut w: W, frames: &[f64]) -> io::Result<()> {
    for t in frames {
        writeln!(w, "{t}")?;
    }
    Ok(())
}
