use std::cmp::Ordering;

use crate::matrix::{FeatureMatrix, ShapeError};

/// The k-distance neighborhood of a point: every reference point no farther
/// than the k-th nearest one. Exact ties can make it larger than `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Neighborhood {
    /// Reference row indices, ordered by (distance, index).
    pub indices: Vec<usize>,
    pub distances: Vec<f64>,
    pub k_distance: f64,
}

impl Neighborhood {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Euclidean distance, accumulated in index order.
#[inline]
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn by_distance(a: &(f64, usize), b: &(f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

/// k-distance neighborhood of `q` among the rows of `reference`, skipping
/// row `exclude` if given.
///
/// Caller guarantees at least `k >= 1` candidate rows remain.
pub(crate) fn neighborhood(
    reference: &FeatureMatrix,
    q: &[f64],
    k: usize,
    exclude: Option<usize>,
) -> Neighborhood {
    let mut all: Vec<(f64, usize)> = reference
        .iter_rows()
        .enumerate()
        .filter(|(j, _)| Some(*j) != exclude)
        .map(|(j, row)| (euclidean(q, row), j))
        .collect();
    debug_assert!(k >= 1 && k <= all.len());

    let (_, kth, _) = all.select_nth_unstable_by(k - 1, by_distance);
    let k_distance = kth.0;

    let mut within: Vec<(f64, usize)> = all.into_iter().filter(|(d, _)| *d <= k_distance).collect();
    within.sort_unstable_by(by_distance);
    Neighborhood {
        indices: within.iter().map(|p| p.1).collect(),
        distances: within.iter().map(|p| p.0).collect(),
        k_distance,
    }
}

/// k-distance neighborhood of a query against a reference set.
pub fn knn_query(reference: &FeatureMatrix, q: &[f64], k: usize) -> Result<Neighborhood, KnnError> {
    if q.len() != reference.cols() {
        return Err(KnnError::Shape(ShapeError::Dimension {
            expected: reference.cols(),
            found: q.len(),
        }));
    }
    if k == 0 || reference.rows() < k {
        return Err(KnnError::TooFewPoints { n: reference.rows(), k });
    }
    Ok(neighborhood(reference, q, k, None))
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum KnnError {
    #[error("insufficient data: {n} reference points cannot supply {k} neighbors")]
    TooFewPoints { n: usize, k: usize },
    #[error(transparent)]
    Shape(#[from] ShapeError),
}
