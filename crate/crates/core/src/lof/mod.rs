//! Local Outlier Factor in novelty-detection mode.
//!
//! A [`LofModel`] memorizes normalized training features and scores unseen
//! vectors against them without ever inserting them. The per-frame
//! abnormality measure is `offset - LOF`: inliers (LOF ≈ 1) land near
//! `offset - 1`, isolated points go strongly negative.

mod format;
mod index;
mod knn;

use thiserror::Error;

pub use format::{ModelFileError, FORMAT_VERSION, MAGIC, SUPPORTED_VERSIONS};
pub use index::{LofIndex, LofQuery, DUPLICATE_EPS, DUPLICATE_LRD};
pub use knn::{euclidean, knn_query, KnnError, Neighborhood};

use crate::matrix::{FeatureMatrix, ShapeError};
use crate::normalize::{fit_norm, NormError, NormStats};
use crate::spectral::DEFAULT_BINS;
use crate::windowing::DEFAULT_SPAN;

pub const DEFAULT_K: usize = 15;
pub const DEFAULT_OFFSET: f64 = 1.5;
pub const DEFAULT_THRESHOLD: f64 = 0.4;

#[derive(Debug, Error, PartialEq)]
pub enum LofError {
    #[error("insufficient data: {n} training points, need more than k = {k}")]
    Insufficient { n: usize, k: usize },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Norm(#[from] NormError),
}

/// Scalars stored alongside the training data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub k: usize,
    pub offset: f64,
    /// PSD bins per channel the features were built with.
    pub bins: usize,
    /// Window span (frame intervals) the features were built with.
    pub span: usize,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams { k: DEFAULT_K, offset: DEFAULT_OFFSET, bins: DEFAULT_BINS, span: DEFAULT_SPAN }
    }
}

/// LOF value and the abnormality measure derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abnormality {
    pub lof: f64,
    pub abnormality: f64,
}

impl Abnormality {
    /// Strictly below the threshold counts as abnormal.
    pub fn is_flagged(&self, threshold: f64) -> bool {
        self.abnormality < threshold
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LofModel {
    params: ModelParams,
    norm: NormStats,
    index: LofIndex,
}

impl LofModel {
    /// Fits normalization on `raw`, then the LOF index on the normalized rows.
    pub fn fit(raw: &FeatureMatrix, params: ModelParams) -> Result<Self, LofError> {
        check_params(&params)?;
        if raw.rows() <= params.k {
            return Err(LofError::Insufficient { n: raw.rows(), k: params.k });
        }
        let norm = fit_norm(raw)?;
        Self::fit_with_stats(raw, norm, params)
    }

    /// Fits the index using already-known normalization statistics, e.g.
    /// [`NormStats::identity`] for pre-normalized data.
    pub fn fit_with_stats(raw: &FeatureMatrix, norm: NormStats, params: ModelParams) -> Result<Self, LofError> {
        check_params(&params)?;
        let normalized = norm.apply_matrix(raw)?;
        let index = LofIndex::fit(normalized, params.k)?;
        Ok(LofModel { params, norm, index })
    }

    pub(crate) fn from_parts(params: ModelParams, norm: NormStats, index: LofIndex) -> Result<Self, LofError> {
        check_params(&params)?;
        if norm.dim() != index.dim() {
            return Err(LofError::Shape(ShapeError::Dimension { expected: index.dim(), found: norm.dim() }));
        }
        if params.k != index.k() {
            return Err(LofError::Parameter("k does not match the index".into()));
        }
        Ok(LofModel { params, norm, index })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn norm_stats(&self) -> &NormStats {
        &self.norm
    }

    pub fn index(&self) -> &LofIndex {
        &self.index
    }

    pub fn dim(&self) -> usize {
        self.index.dim()
    }

    pub fn n_train(&self) -> usize {
        self.index.data().rows()
    }

    /// Copy of the model with a different abnormality offset.
    pub fn with_offset(&self, offset: f64) -> Result<Self, LofError> {
        let params = ModelParams { offset, ..self.params };
        check_params(&params)?;
        Ok(LofModel { params, ..self.clone() })
    }

    /// LOF of a raw (unnormalized) feature vector.
    pub fn lof_of_query(&self, x_raw: &[f64]) -> Result<f64, LofError> {
        let q = self.norm.apply(x_raw)?;
        Ok(self.index.lof(&q)?)
    }

    pub fn abnormality(&self, x_raw: &[f64]) -> Result<Abnormality, LofError> {
        let lof = self.lof_of_query(x_raw)?;
        Ok(Abnormality { lof, abnormality: self.params.offset - lof })
    }
}

fn check_params(p: &ModelParams) -> Result<(), LofError> {
    if p.k == 0 {
        return Err(LofError::Parameter("k must be at least 1".into()));
    }
    if !p.offset.is_finite() {
        return Err(LofError::Parameter("offset must be finite".into()));
    }
    if p.bins == 0 || p.span == 0 {
        return Err(LofError::Parameter("bins and span must be at least 1".into()));
    }
    Ok(())
}
