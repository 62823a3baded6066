//! Per-frame novelty scores and their CSV form.
//!
//! Schema: `frame_index,t,lof,abnormality,status`. Unscored frames
//! (`warmup`, `insufficient`) leave `lof` and `abnormality` empty.

use std::fmt;
use std::io::{self, Read, Write};
use std::str::FromStr;

use thiserror::Error;

use crate::lof::Abnormality;

pub const SCORE_CSV_HEADER: &str = "frame_index,t,lof,abnormality,status";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScoreStatus {
    Scored,
    Insufficient,
    Warmup,
}

impl ScoreStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ScoreStatus::Scored => "scored",
            ScoreStatus::Insufficient => "insufficient",
            ScoreStatus::Warmup => "warmup",
        }
    }
}

impl fmt::Display for ScoreStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScoreStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "scored" => Ok(ScoreStatus::Scored),
            "insufficient" => Ok(ScoreStatus::Insufficient),
            "warmup" => Ok(ScoreStatus::Warmup),
            other => Err(format!("unknown status {other:?}")),
        }
    }
}

/// Abnormality measure for one frame. `lof` and `abnormality` are present
/// exactly when `status` is [`ScoreStatus::Scored`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoveltyScore {
    pub frame_index: usize,
    pub t: f64,
    pub lof: Option<f64>,
    pub abnormality: Option<f64>,
    pub status: ScoreStatus,
}

impl NoveltyScore {
    pub fn scored(frame_index: usize, t: f64, a: Abnormality) -> Self {
        NoveltyScore {
            frame_index,
            t,
            lof: Some(a.lof),
            abnormality: Some(a.abnormality),
            status: ScoreStatus::Scored,
        }
    }

    pub fn unscored(frame_index: usize, t: f64, status: ScoreStatus) -> Self {
        NoveltyScore { frame_index, t, lof: None, abnormality: None, status }
    }

    /// Abnormality strictly below `threshold`; unscored frames are never flagged.
    pub fn is_flagged(&self, threshold: f64) -> bool {
        self.abnormality.is_some_and(|a| a < threshold)
    }
}

pub fn write_score_csv<W: Write>(mut w: W, scores: &[NoveltyScore]) -> io::Result<()> {
    writeln!(w, "{SCORE_CSV_HEADER}")?;
    for s in scores {
        match (s.lof, s.abnormality) {
            (Some(lof), Some(a)) => writeln!(w, "{},{},{},{},{}", s.frame_index, s.t, lof, a, s.status)?,
            _ => writeln!(w, "{},{},,,{}", s.frame_index, s.t, s.status)?,
        }
    }
    Ok(())
}

#[derive(Debug, Error, PartialEq)]
#[error("score CSV row {row}: {message}")]
pub struct ScoreCsvError {
    pub row: usize,
    pub message: String,
}

/// Parses a score CSV written by [`write_score_csv`].
pub fn parse_score_csv<R: Read>(reader: R) -> Result<Vec<NoveltyScore>, ScoreCsvError> {
    let err = |row: usize, message: String| ScoreCsvError { row, message };
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(reader);
    let header = rdr.headers().map_err(|e| err(0, e.to_string()))?;
    if header.iter().collect::<Vec<_>>().join(",") != SCORE_CSV_HEADER {
        return Err(err(0, format!("header must be `{SCORE_CSV_HEADER}`")));
    }
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| err(row, e.to_string()))?;
        if rec.len() != 5 {
            return Err(err(row, format!("expected 5 columns, found {}", rec.len())));
        }
        let frame_index: usize = rec[0].parse().map_err(|_| err(row, format!("bad frame_index {:?}", &rec[0])))?;
        let t: f64 = parse_finite(&rec[1]).ok_or_else(|| err(row, format!("bad t {:?}", &rec[1])))?;
        let status: ScoreStatus = rec[4].parse().map_err(|m| err(row, m))?;
        let score = match status {
            ScoreStatus::Scored => {
                let lof = parse_finite(&rec[2]).ok_or_else(|| err(row, format!("bad lof {:?}", &rec[2])))?;
                let abnormality =
                    parse_finite(&rec[3]).ok_or_else(|| err(row, format!("bad abnormality {:?}", &rec[3])))?;
                NoveltyScore::scored(frame_index, t, Abnormality { lof, abnormality })
            }
            other => {
                if !rec[2].is_empty() || !rec[3].is_empty() {
                    return Err(err(row, format!("{other} rows must leave lof and abnormality empty")));
                }
                NoveltyScore::unscored(frame_index, t, other)
            }
        };
        out.push(score);
    }
    Ok(out)
}

fn parse_finite(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}
