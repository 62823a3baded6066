//! Mission → windows → features → scores.

use rayon::prelude::*;
use thiserror::Error;

use crate::ingest::{Mission, NUM_CHANNELS};
use crate::lof::{LofError, LofModel, ModelParams};
use crate::matrix::FeatureMatrix;
use crate::score::{NoveltyScore, ScoreStatus};
use crate::spectral::{feature_vector, FeatureVector, SpectralError, DEFAULT_BINS};
use crate::windowing::{chop, WindowError, DEFAULT_MIN_SAMPLES, DEFAULT_SPAN};

#[derive(Debug, Error, PartialEq)]
pub enum PipelineError {
    #[error(transparent)]
    Window(#[from] WindowError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Lof(#[from] LofError),
    #[error("insufficient data: {windows} usable windows, need more than k = {k}")]
    TooFewWindows { windows: usize, k: usize },
    #[error("model expects d = {model} features (B = {bins}), pipeline produces {pipeline}")]
    Dimension { model: usize, bins: usize, pipeline: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureConfig {
    pub span: usize,
    pub min_samples: usize,
    pub bins: usize,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig { span: DEFAULT_SPAN, min_samples: DEFAULT_MIN_SAMPLES, bins: DEFAULT_BINS }
    }
}

impl FeatureConfig {
    pub fn dim(&self) -> usize {
        NUM_CHANNELS * self.bins
    }
}

/// Per-frame outcome of feature extraction.
#[derive(Debug, Clone, PartialEq)]
pub enum FrameFeatures {
    Warmup { frame_index: usize },
    Insufficient { frame_index: usize },
    Ready(FeatureVector),
}

impl FrameFeatures {
    pub fn frame_index(&self) -> usize {
        match self {
            FrameFeatures::Warmup { frame_index } | FrameFeatures::Insufficient { frame_index } => *frame_index,
            FrameFeatures::Ready(fv) => fv.frame_index,
        }
    }

    pub fn features(&self) -> Option<&FeatureVector> {
        match self {
            FrameFeatures::Ready(fv) => Some(fv),
            _ => None,
        }
    }
}

/// One entry per frame, in frame order. Windows are processed in parallel.
pub fn mission_features(mission: &Mission, cfg: &FeatureConfig) -> Result<Vec<FrameFeatures>, PipelineError> {
    let windows = chop(mission, cfg.span, cfg.min_samples)?;
    let warmup = mission.frames.len().min(cfg.span);
    let mut out: Vec<FrameFeatures> =
        (0..warmup).map(|frame_index| FrameFeatures::Warmup { frame_index }).collect();
    let tail: Result<Vec<FrameFeatures>, SpectralError> = windows
        .par_iter()
        .map(|w| {
            if w.is_insufficient() {
                Ok(FrameFeatures::Insufficient { frame_index: w.frame_index })
            } else {
                feature_vector(w, cfg.bins).map(FrameFeatures::Ready)
            }
        })
        .collect();
    out.extend(tail?);
    Ok(out)
}

/// Stacks every usable window of every mission into an n×d matrix.
pub fn training_matrix(missions: &[Mission], cfg: &FeatureConfig) -> Result<FeatureMatrix, PipelineError> {
    let mut rows = Vec::new();
    for m in missions {
        for f in mission_features(m, cfg)? {
            if let FrameFeatures::Ready(fv) = f {
                rows.push(fv.values);
            }
        }
    }
    FeatureMatrix::from_rows(cfg.dim(), rows).map_err(|e| PipelineError::Lof(LofError::Shape(e)))
}

/// Extracts training features and fits normalization plus LOF.
pub fn fit_missions(
    missions: &[Mission],
    cfg: &FeatureConfig,
    k: usize,
    offset: f64,
) -> Result<LofModel, PipelineError> {
    let x = training_matrix(missions, cfg)?;
    if x.rows() <= k {
        return Err(PipelineError::TooFewWindows { windows: x.rows(), k });
    }
    let params = ModelParams { k, offset, bins: cfg.bins, span: cfg.span };
    Ok(LofModel::fit(&x, params)?)
}

/// Feature configuration a model was trained with.
pub fn model_feature_config(model: &LofModel, min_samples: usize) -> FeatureConfig {
    let p = model.params();
    FeatureConfig { span: p.span, min_samples, bins: p.bins }
}

/// Scores every frame of a mission, in frame order.
pub fn score_mission(
    model: &LofModel,
    mission: &Mission,
    min_samples: usize,
) -> Result<Vec<NoveltyScore>, PipelineError> {
    let cfg = model_feature_config(model, min_samples);
    if cfg.dim() != model.dim() {
        return Err(PipelineError::Dimension { model: model.dim(), bins: cfg.bins, pipeline: cfg.dim() });
    }
    let frames = mission_features(mission, &cfg)?;
    let scores: Result<Vec<NoveltyScore>, LofError> = frames
        .par_iter()
        .map(|f| {
            let frame_index = f.frame_index();
            let t = mission.frames[frame_index];
            Ok(match f {
                FrameFeatures::Warmup { .. } => NoveltyScore::unscored(frame_index, t, ScoreStatus::Warmup),
                FrameFeatures::Insufficient { .. } => {
                    NoveltyScore::unscored(frame_index, t, ScoreStatus::Insufficient)
                }
                FrameFeatures::Ready(fv) => NoveltyScore::scored(frame_index, t, model.abnormality(&fv.values)?),
            })
        })
        .collect();
    Ok(scores?)
}
