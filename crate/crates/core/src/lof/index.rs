use rayon::prelude::*;

use super::knn::{neighborhood, Neighborhood};
use super::LofError;
use crate::matrix::{FeatureMatrix, ShapeError};

/// Local reachability density assigned when a point and its whole
/// neighborhood coincide (reachability sum below [`DUPLICATE_EPS`]).
pub const DUPLICATE_LRD: f64 = 1e12;
pub const DUPLICATE_EPS: f64 = 1e-12;

/// Reference set with precomputed k-distances and local reachability
/// densities. Immutable once built; queries never modify it.
#[derive(Debug, Clone, PartialEq)]
pub struct LofIndex {
    data: FeatureMatrix,
    k: usize,
    kdist: Vec<f64>,
    lrd: Vec<f64>,
}

/// Density estimate for a single query point.
#[derive(Debug, Clone, PartialEq)]
pub struct LofQuery {
    pub neighborhood: Neighborhood,
    pub lrd: f64,
    pub lof: f64,
}

impl LofIndex {
    /// Memorizes `data` and computes each row's k-distance and lrd, with each
    /// row excluded from its own neighborhood.
    pub fn fit(data: FeatureMatrix, k: usize) -> Result<Self, LofError> {
        if k == 0 {
            return Err(LofError::Parameter("k must be at least 1".into()));
        }
        if data.rows() <= k {
            return Err(LofError::Insufficient { n: data.rows(), k });
        }
        let hoods: Vec<Neighborhood> = (0..data.rows())
            .into_par_iter()
            .map(|i| neighborhood(&data, data.row(i), k, Some(i)))
            .collect();
        let kdist: Vec<f64> = hoods.iter().map(|h| h.k_distance).collect();
        let lrd = hoods.iter().map(|h| reachability_density(h, &kdist)).collect();
        Ok(LofIndex { data, k, kdist, lrd })
    }

    /// Reassembles an index from stored parts, checking their consistency.
    pub fn from_parts(
        data: FeatureMatrix,
        k: usize,
        kdist: Vec<f64>,
        lrd: Vec<f64>,
    ) -> Result<Self, LofError> {
        if k == 0 {
            return Err(LofError::Parameter("k must be at least 1".into()));
        }
        if data.rows() <= k {
            return Err(LofError::Insufficient { n: data.rows(), k });
        }
        if kdist.len() != data.rows() || lrd.len() != data.rows() {
            return Err(LofError::Parameter("kdist/lrd length does not match row count".into()));
        }
        if data.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(LofError::Parameter("training data must be finite".into()));
        }
        if kdist.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(LofError::Parameter("k-distances must be finite and non-negative".into()));
        }
        if lrd.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(LofError::Parameter("densities must be finite and positive".into()));
        }
        Ok(LofIndex { data, k, kdist, lrd })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn data(&self) -> &FeatureMatrix {
        &self.data
    }

    pub fn kdist(&self) -> &[f64] {
        &self.kdist
    }

    pub fn lrd(&self) -> &[f64] {
        &self.lrd
    }

    pub fn dim(&self) -> usize {
        self.data.cols()
    }

    /// Neighborhood, lrd and LOF of a point that is not part of the index.
    pub fn query(&self, q: &[f64]) -> Result<LofQuery, ShapeError> {
        if q.len() != self.dim() {
            return Err(ShapeError::Dimension { expected: self.dim(), found: q.len() });
        }
        let hood = neighborhood(&self.data, q, self.k, None);
        let lrd = reachability_density(&hood, &self.kdist);
        let lof = local_outlier_factor(&hood, lrd, &self.lrd);
        Ok(LofQuery { neighborhood: hood, lrd, lof })
    }

    /// Plain LOF value of a query point.
    pub fn lof(&self, q: &[f64]) -> Result<f64, ShapeError> {
        self.query(q).map(|r| r.lof)
    }

    /// LOF of training row `i` with itself excluded, as in the original
    /// outlier-detection setting.
    pub fn training_lof(&self, i: usize) -> f64 {
        let hood = neighborhood(&self.data, self.data.row(i), self.k, Some(i));
        local_outlier_factor(&hood, self.lrd[i], &self.lrd)
    }
}

fn reachability_density(hood: &Neighborhood, kdist: &[f64]) -> f64 {
    let sum: f64 = hood
        .indices
        .iter()
        .zip(&hood.distances)
        .map(|(&o, &d)| kdist[o].max(d))
        .sum();
    if sum < DUPLICATE_EPS {
        DUPLICATE_LRD
    } else {
        hood.len() as f64 / sum
    }
}

fn local_outlier_factor(hood: &Neighborhood, lrd_p: f64, lrd: &[f64]) -> f64 {
    let sum: f64 = hood.indices.iter().map(|&o| lrd[o]).sum();
    sum / (hood.len() as f64 * lrd_p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> FeatureMatrix {
        FeatureMatrix::from_rows(1, xs.iter().map(|x| [*x])).unwrap()
    }

    #[test]
    fn two_points_hand_evaluation() {
        let idx = LofIndex::fit(line(&[0.0, 1.0]), 1).unwrap();
        assert_eq!(idx.kdist(), &[1.0, 1.0]);
        assert_eq!(idx.lrd(), &[1.0, 1.0]);

        let near = idx.query(&[0.4]).unwrap();
        assert_eq!(near.neighborhood.indices, vec![0]);
        assert_eq!(near.lrd, 1.0);
        assert_eq!(near.lof, 1.0);

        let far = idx.query(&[10.0]).unwrap();
        assert_eq!(far.neighborhood.indices, vec![1]);
        assert!((far.lrd - 1.0 / 9.0).abs() < 1e-15);
        assert!((far.lof - 9.0).abs() < 1e-12);
    }

    #[test]
    fn coincident_points_use_sentinel() {
        let k = 3;
        let data = FeatureMatrix::from_rows(2, vec![[0.5, -0.5]; k + 1]).unwrap();
        let idx = LofIndex::fit(data, k).unwrap();
        assert!(idx.kdist().iter().all(|&d| d == 0.0));
        assert!(idx.lrd().iter().all(|&l| l == DUPLICATE_LRD));
        let same = idx.lof(&[0.5, -0.5]).unwrap();
        assert_eq!(same, 1.0);
        let away = idx.lof(&[1.5, -0.5]).unwrap();
        assert!(away.is_finite() && away > 1.0);
        assert!(idx.training_lof(0).is_finite());
    }

    #[test]
    fn rejects_small_training_sets() {
        assert_eq!(LofIndex::fit(line(&[0.0, 1.0]), 2).unwrap_err(), LofError::Insufficient { n: 2, k: 2 });
        assert!(matches!(LofIndex::fit(line(&[0.0, 1.0]), 0), Err(LofError::Parameter(_))));
    }

    #[test]
    fn query_shape_checked() {
        let idx = LofIndex::fit(line(&[0.0, 1.0, 2.0]), 1).unwrap();
        assert!(idx.query(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn from_parts_validates() {
        let idx = LofIndex::fit(line(&[0.0, 1.0, 2.0]), 1).unwrap();
        let rebuilt =
            LofIndex::from_parts(idx.data().clone(), 1, idx.kdist().to_vec(), idx.lrd().to_vec()).unwrap();
        assert_eq!(rebuilt, idx);
        assert!(LofIndex::from_parts(idx.data().clone(), 1, idx.kdist().to_vec(), vec![0.0; 3]).is_err());
        assert!(LofIndex::from_parts(idx.data().clone(), 1, vec![1.0; 2], idx.lrd().to_vec()).is_err());
    }
}
