//! Frame-aligned overlapping windows over an IMU trace.
//!
//! The window for frame `i` covers the half-open interval
//! `[frames[i - span], frames[i])`, so consecutive windows share
//! `(span - 1) / span` of their extent when the frame clock is uniform.

use thiserror::Error;

use crate::ingest::{ImuSample, Mission};

pub const DEFAULT_SPAN: usize = 3;
pub const DEFAULT_MIN_SAMPLES: usize = 4;

#[derive(Debug, Error, PartialEq)]
pub enum WindowError {
    #[error("insufficient data: mean sampling rate needs at least 2 samples, got {0}")]
    Insufficient(usize),
    #[error("invalid window parameter: {0}")]
    Parameter(String),
}

/// What a window holds once it has been cut.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindowContent<'a> {
    /// Enough samples to estimate a spectrum.
    Samples { samples: &'a [ImuSample], mean_rate: f64 },
    /// Fewer than `min_samples` readings fell inside the interval.
    Insufficient { count: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window<'a> {
    pub frame_index: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub content: WindowContent<'a>,
}

impl<'a> Window<'a> {
    pub fn samples(&self) -> Option<&'a [ImuSample]> {
        match self.content {
            WindowContent::Samples { samples, .. } => Some(samples),
            WindowContent::Insufficient { .. } => None,
        }
    }

    pub fn mean_rate(&self) -> Option<f64> {
        match self.content {
            WindowContent::Samples { mean_rate, .. } => Some(mean_rate),
            WindowContent::Insufficient { .. } => None,
        }
    }

    pub fn is_insufficient(&self) -> bool {
        matches!(self.content, WindowContent::Insufficient { .. })
    }
}

/// Mean sampling rate `(count - 1) / (t_last - t_first)` in Hz.
pub fn mean_rate(samples: &[ImuSample]) -> Result<f64, WindowError> {
    if samples.len() < 2 {
        return Err(WindowError::Insufficient(samples.len()));
    }
    let first = samples[0].t;
    let last = samples[samples.len() - 1].t;
    Ok((samples.len() - 1) as f64 / (last - first))
}

/// Cuts one window per frame from `span` onward.
///
/// Frames before `span` have no causal window and are skipped; the caller
/// treats them as warm-up. `span >= frames.len()` yields no windows.
pub fn chop(mission: &Mission, span: usize, min_samples: usize) -> Result<Vec<Window<'_>>, WindowError> {
    if span == 0 {
        return Err(WindowError::Parameter("span must be at least 1".into()));
    }
    if min_samples < 2 {
        return Err(WindowError::Parameter("min_samples must be at least 2".into()));
    }
    let samples = &mission.samples;
    let frames = &mission.frames;
    let mut windows = Vec::with_capacity(frames.len().saturating_sub(span));
    for frame_index in span..frames.len() {
        let t_start = frames[frame_index - span];
        let t_end = frames[frame_index];
        let lo = samples.partition_point(|s| s.t < t_start);
        let hi = samples.partition_point(|s| s.t < t_end);
        let inside = &samples[lo..hi];
        let content = if inside.len() < min_samples {
            WindowContent::Insufficient { count: inside.len() }
        } else {
            WindowContent::Samples { samples: inside, mean_rate: mean_rate(inside)? }
        };
        windows.push(Window { frame_index, t_start, t_end, content });
    }
    Ok(windows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::ImuSample;

    fn at(t: f64) -> ImuSample {
        ImuSample::from_channels(t, [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 9.81])
    }

    fn mission(sample_times: &[f64], frames: &[f64]) -> Mission {
        Mission {
            id: "m".into(),
            samples: sample_times.iter().copied().map(at).collect(),
            frames: frames.to_vec(),
        }
    }

    #[test]
    fn span_three_overlaps_two_thirds() {
        let times: Vec<f64> = (0..8).map(|i| i as f64 * 0.5).collect();
        let m = mission(&times, &[0.0, 1.0, 2.0, 3.0, 4.0]);
        let w = chop(&m, 3, 4).unwrap();
        assert_eq!(w.len(), 2);

        assert_eq!(w[0].frame_index, 3);
        assert_eq!((w[0].t_start, w[0].t_end), (0.0, 3.0));
        assert_eq!(w[0].samples().unwrap().len(), 6);

        assert_eq!(w[1].frame_index, 4);
        assert_eq!((w[1].t_start, w[1].t_end), (1.0, 4.0));
        assert_eq!(w[1].samples().unwrap().len(), 6);

        let overlap = w[0].t_end.min(w[1].t_end) - w[0].t_start.max(w[1].t_start);
        assert_eq!(overlap / (w[0].t_end - w[0].t_start), 2.0 / 3.0);
    }

    #[test]
    fn too_few_frames_is_empty() {
        let m = mission(&[0.0, 0.5], &[0.0, 1.0]);
        assert!(chop(&m, 3, 4).unwrap().is_empty());
    }

    #[test]
    fn sparse_window_is_insufficient() {
        let m = mission(&[3.5, 3.6], &[0.0, 1.0, 2.0, 3.0]);
        let w = chop(&m, 3, 4).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].frame_index, 3);
        assert_eq!(w[0].content, WindowContent::Insufficient { count: 0 });
    }

    #[test]
    fn boundary_sample_belongs_to_later_window() {
        let times = [0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75];
        let m = mission(&times, &[0.0, 1.0, 2.0]);
        let w = chop(&m, 1, 2).unwrap();
        assert_eq!(w[0].samples().unwrap().last().unwrap().t, 0.75);
        assert_eq!(w[1].samples().unwrap()[0].t, 1.0);
    }

    #[test]
    fn mean_rate_examples() {
        let s: Vec<_> = [0.0, 0.1, 0.2, 0.3].iter().copied().map(at).collect();
        assert!((mean_rate(&s).unwrap() - 10.0).abs() < 1e-12);
        let s: Vec<_> = [0.0, 0.1, 0.4].iter().copied().map(at).collect();
        assert!((mean_rate(&s).unwrap() - 5.0).abs() < 1e-12);
        assert_eq!(mean_rate(&[at(5.0)]), Err(WindowError::Insufficient(1)));
    }

    #[test]
    fn bad_parameters() {
        let m = mission(&[0.0, 1.0], &[0.0, 1.0]);
        assert!(chop(&m, 0, 4).is_err());
        assert!(chop(&m, 1, 1).is_err());
    }
}
