//! Per-feature z-normalization learned from training features only.

use thiserror::Error;

use crate::matrix::{FeatureMatrix, ShapeError};

/// Standard deviations below this are treated as zero and replaced by 1.
pub const SIGMA_FLOOR: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum NormError {
    #[error("insufficient data: normalization needs at least 2 rows, got {0}")]
    Insufficient(usize),
    #[error("value error: entry ({row}, {col}) is not finite")]
    Value { row: usize, col: usize },
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

/// Column means and population standard deviations.
#[derive(Debug, Clone, PartialEq)]
pub struct NormStats {
    pub mu: Vec<f64>,
    pub sigma: Vec<f64>,
    pub n_fit: usize,
}

impl NormStats {
    /// Pass-through statistics (mean 0, deviation 1).
    pub fn identity(d: usize) -> Self {
        NormStats { mu: vec![0.0; d], sigma: vec![1.0; d], n_fit: 0 }
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    /// `(x - mu) / sigma'`, with `sigma' = 1` for near-constant features.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>, ShapeError> {
        if x.len() != self.dim() {
            return Err(ShapeError::Dimension { expected: self.dim(), found: x.len() });
        }
        Ok(x
            .iter()
            .zip(self.mu.iter().zip(&self.sigma))
            .map(|(&v, (&m, &s))| (v - m) / effective_sigma(s))
            .collect())
    }

    pub fn apply_matrix(&self, x: &FeatureMatrix) -> Result<FeatureMatrix, ShapeError> {
        if x.cols() != self.dim() {
            return Err(ShapeError::Dimension { expected: self.dim(), found: x.cols() });
        }
        let mut data = Vec::with_capacity(x.as_slice().len());
        for row in x.iter_rows() {
            data.extend(self.apply(row)?);
        }
        FeatureMatrix::new(x.rows(), x.cols(), data)
    }
}

fn effective_sigma(s: f64) -> f64 {
    if s >= SIGMA_FLOOR {
        s
    } else {
        1.0
    }
}

/// Learns column statistics with the population (divide by n) deviation.
pub fn fit_norm(x: &FeatureMatrix) -> Result<NormStats, NormError> {
    let n = x.rows();
    if n < 2 {
        return Err(NormError::Insufficient(n));
    }
    let d = x.cols();
    // accumulate around the first row so constant columns get an exact mean
    let pivot = x.row(0).to_vec();
    let mut acc = vec![0.0; d];
    for (i, row) in x.iter_rows().enumerate() {
        for (j, ((&v, p), a)) in row.iter().zip(&pivot).zip(acc.iter_mut()).enumerate() {
            if !v.is_finite() {
                return Err(NormError::Value { row: i, col: j });
            }
            *a += v - p;
        }
    }
    let mu: Vec<f64> = pivot.iter().zip(&acc).map(|(p, a)| p + a / n as f64).collect();

    let mut var = vec![0.0; d];
    for row in x.iter_rows() {
        for ((&v, &m), acc) in row.iter().zip(&mu).zip(var.iter_mut()) {
            *acc += (v - m) * (v - m);
        }
    }
    let sigma = var.into_iter().map(|v| (v / n as f64).sqrt()).collect();
    Ok(NormStats { mu, sigma, n_fit: n })
}

/// Standardizes one vector with previously fitted statistics.
pub fn apply_norm(stats: &NormStats, x: &[f64]) -> Result<Vec<f64>, ShapeError> {
    stats.apply(x)
}
