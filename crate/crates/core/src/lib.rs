//! Motion novelty scoring for IMU traces.
//!
//! The pipeline cuts a 10-channel IMU trace into frame-aligned overlapping
//! windows, describes each window by binned per-channel periodograms,
//! z-normalizes the features with statistics learned from normal data, and
//! scores each frame with a Local Outlier Factor model fitted on normal
//! missions only. The per-frame abnormality measure is `offset - LOF`.
//!
//! ```no_run
//! use motion_novelty::{ingest, pipeline};
//!
//! let (train, _) = ingest::load_mission("normal_01.csv", "normal_01.frames")?;
//! let cfg = pipeline::FeatureConfig::default();
//! let model = pipeline::fit_missions(&[train], &cfg, 15, 1.5)?;
//!
//! let (query, _) = ingest::load_mission("abnormal_01.csv", "abnormal_01.frames")?;
//! for s in pipeline::score_mission(&model, &query, cfg.min_samples)? {
//!     if s.is_flagged(0.4) {
//!         println!("frame {} abnormality {:?}", s.frame_index, s.abnormality);
//!     }
//! }
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod ingest;
pub mod lof;
pub mod matrix;
pub mod normalize;
pub mod pipeline;
pub mod score;
pub mod spectral;
pub mod synth;
pub mod windowing;

pub use ingest::{ImuSample, Mission};
pub use lof::{LofModel, ModelParams};
pub use matrix::FeatureMatrix;
pub use normalize::NormStats;
pub use score::{NoveltyScore, ScoreStatus};
