mod support;

use motion_novelty::lof::{knn_query, LofIndex, LofModel, ModelParams};
use motion_novelty::{FeatureMatrix, NormStats};
use proptest::prelude::*;
use rand::Rng;
use support::{random_rows, rng, NaiveLof};

fn matrix(rows: &[Vec<f64>]) -> FeatureMatrix {
    FeatureMatrix::from_rows(rows[0].len(), rows.iter().cloned()).unwrap()
}

/// Points from a few clusters of very different spread, so LOF varies.
fn clustered(seed: u64, n: usize, d: usize) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    let centers = random_rows(&mut r, 4, d);
    (0..n)
        .map(|i| {
            let c = &centers[i % 4];
            let s = [0.05, 0.2, 0.5, 1.0][i % 4];
            c.iter().map(|x| x * 5.0 + s * r.random_range(-1.0..1.0)).collect()
        })
        .collect()
}

#[test]
fn matches_naive_reference() {
    let mut r = rng(7);
    let dims = [2, 10, 160];
    let ks = [1, 5, 15];
    for case in 0..20u64 {
        let n = r.random_range(50..=500);
        let d = dims[case as usize % 3];
        let k = ks[(case as usize / 3) % 3];
        let rows = clustered(100 + case, n, d);
        let oracle = NaiveLof::fit(rows.clone(), k);
        let index = LofIndex::fit(matrix(&rows), k).unwrap();
        for i in 0..n {
            assert!((index.kdist()[i] - oracle.kdist[i]).abs() <= 1e-9, "case {case} kdist {i}");
            assert!((index.lrd()[i] - oracle.lrd[i]).abs() <= 1e-9, "case {case} lrd {i}");
            assert!((index.training_lof(i) - oracle.lof[i]).abs() <= 1e-9, "case {case} lof {i}");
        }
        let queries = clustered(900 + case, 50, d);
        for q in &queries {
            assert!((index.lof(q).unwrap() - oracle.query(q)).abs() <= 1e-9, "case {case} query");
        }
    }
}

#[test]
fn exact_ties_widen_neighborhoods() {
    let line = matrix(&[vec![-2.0], vec![-1.0], vec![1.0], vec![2.0]]);
    let hood = knn_query(&line, &[0.0], 1).unwrap();
    assert_eq!(hood.indices, vec![1, 2]);
    assert_eq!(hood.k_distance, 1.0);

    let grid: Vec<Vec<f64>> = (0..6).flat_map(|x| (0..6).map(move |y| vec![x as f64, y as f64])).collect();
    for k in [1, 3, 4, 7] {
        let oracle = NaiveLof::fit(grid.clone(), k);
        let index = LofIndex::fit(matrix(&grid), k).unwrap();
        assert_eq!(index.kdist(), &oracle.kdist[..]);
        let mut widened = 0;
        for qx in 0..11 {
            for qy in 0..11 {
                let q = [qx as f64 * 0.5, qy as f64 * 0.5];
                let got = index.query(&q).unwrap();
                let mut members = got.neighborhood.indices.clone();
                members.sort_unstable();
                assert_eq!(members, oracle.query_neighbors(&q), "k {k} q {q:?}");
                assert!(got.neighborhood.len() >= k);
                if got.neighborhood.len() > k {
                    widened += 1;
                }
                assert!((got.lof - oracle.query(&q)).abs() <= 1e-12);
            }
        }
        assert!(widened > 0, "k {k}: no tie produced a larger neighborhood");
    }
}

#[test]
fn uniform_square_is_unremarkable() {
    let mut r = rng(11);
    let rows: Vec<Vec<f64>> = (0..400).map(|_| vec![r.random::<f64>(), r.random::<f64>()]).collect();
    let index = LofIndex::fit(matrix(&rows), 15).unwrap();
    let inside = (0..100)
        .filter(|_| {
            let q = [r.random_range(0.2..0.8), r.random_range(0.2..0.8)];
            let lof = index.lof(&q).unwrap();
            (0.85..=1.2).contains(&lof)
        })
        .count();
    assert!(inside >= 95, "{inside}/100 interior queries in [0.85, 1.2]");
}

#[test]
fn isolation_grows_with_distance() {
    let data = vec![vec![0.0], vec![1.0]];
    let oracle = NaiveLof::fit(data.clone(), 1);
    let index = LofIndex::fit(matrix(&data), 1).unwrap();
    let mut prev = f64::NEG_INFINITY;
    for step in 0..=200 {
        let q = 2.0 + step as f64 * 0.5;
        let lof = index.lof(&[q]).unwrap();
        assert!((lof - oracle.query(&[q])).abs() <= 1e-12);
        assert!(lof >= prev, "q = {q}");
        assert!(lof >= 1.0);
        prev = lof;
    }
    assert_eq!(index.lof(&[2.0]).unwrap(), 1.0);
    assert!((prev - 101.0).abs() < 1e-9);
}

fn random_rotation(seed: u64, d: usize) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while basis.len() < d {
        let mut v: Vec<f64> = (0..d).map(|_| r.random_range(-1.0..1.0)).collect();
        for b in &basis {
            let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            basis.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    basis
}

#[test]
fn rigid_motion_leaves_lof_unchanged() {
    let d = 10;
    let rows = clustered(3, 300, d);
    let queries = clustered(4, 50, d);
    let rot = random_rotation(5, d);
    let shift: Vec<f64> = random_rows(&mut rng(6), 1, d).remove(0).iter().map(|x| x * 100.0).collect();
    let move_pt = |p: &Vec<f64>| -> Vec<f64> {
        rot.iter().zip(&shift).map(|(row, s)| row.iter().zip(p).map(|(a, b)| a * b).sum::<f64>() + s).collect()
    };
    let a = LofIndex::fit(matrix(&rows), 5).unwrap();
    let moved: Vec<Vec<f64>> = rows.iter().map(move_pt).collect();
    let b = LofIndex::fit(matrix(&moved), 5).unwrap();
    for i in 0..rows.len() {
        assert!((a.training_lof(i) - b.training_lof(i)).abs() <= 1e-9);
    }
    for q in &queries {
        assert!((a.lof(q).unwrap() - b.lof(&move_pt(q)).unwrap()).abs() <= 1e-9);
    }
}

fn fitted_model(seed: u64, n: usize, d: usize) -> LofModel {
    let rows = clustered(seed, n, d);
    let params = ModelParams { k: 15, bins: d / 10, ..ModelParams::default() };
    LofModel::fit(&matrix(&rows), params).unwrap()
}

#[test]
fn scoring_never_touches_the_model() {
    let model = fitted_model(21, 300, 160);
    let before = model.to_bytes().unwrap();
    let snapshot = model.clone();
    let mut r = rng(22);
    for _ in 0..10_000 {
        let q: Vec<f64> = (0..160).map(|_| r.random_range(-6.0..6.0)).collect();
        model.abnormality(&q).unwrap();
    }
    assert_eq!(model, snapshot);
    assert_eq!(model.to_bytes().unwrap(), before);
}

#[test]
fn save_load_scores_identically() {
    let model = fitted_model(31, 250, 160);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.novm");
    model.save(&path).unwrap();
    let loaded = LofModel::load(&path).unwrap();
    for q in clustered(32, 100, 160) {
        let a = model.abnormality(&q).unwrap().abnormality;
        let b = loaded.abnormality(&q).unwrap().abnormality;
        assert!((a - b).abs() <= 1e-12);
    }
}

#[test]
fn damaged_files_report_their_code() {
    let bytes = fitted_model(41, 60, 20).to_bytes().unwrap();

    let mut flipped = bytes.clone();
    flipped[100] ^= 0x40;
    assert_eq!(LofModel::from_bytes(&flipped).unwrap_err().code(), "checksum");

    let mut versioned = bytes.clone();
    versioned[4..8].copy_from_slice(&2u32.to_le_bytes());
    assert_eq!(LofModel::from_bytes(&versioned).unwrap_err().code(), "unsupported-version");

    assert_eq!(LofModel::from_bytes(&bytes[..bytes.len() - 9]).unwrap_err().code(), "truncated");
    assert_eq!(LofModel::from_bytes(b"PK\x03\x04rest").unwrap_err().code(), "bad-magic");

    let dir = tempfile::tempdir().unwrap();
    assert_eq!(LofModel::load(dir.path().join("absent")).unwrap_err().code(), "io");
}

#[test]
fn identity_stats_keep_raw_geometry() {
    let rows = clustered(51, 80, 10);
    let params = ModelParams { k: 5, bins: 1, ..ModelParams::default() };
    let model = LofModel::fit_with_stats(&matrix(&rows), NormStats::identity(10), params).unwrap();
    let oracle = NaiveLof::fit(rows, 5);
    for q in clustered(52, 20, 10) {
        assert!((model.lof_of_query(&q).unwrap() - oracle.query(&q)).abs() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn small_sets_agree_with_reference(
        pts in prop::collection::vec(prop::collection::vec(-4i32..4, 3), 6..40),
        k in 1usize..5,
        q in prop::collection::vec(-5i32..5, 3),
    ) {
        let rows: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|v| *v as f64).collect()).collect();
        let q: Vec<f64> = q.iter().map(|v| *v as f64).collect();
        let oracle = NaiveLof::fit(rows.clone(), k);
        let index = LofIndex::fit(matrix(&rows), k).unwrap();
        prop_assert_eq!(index.kdist(), &oracle.kdist[..]);
        for i in 0..rows.len() {
            prop_assert!((index.lrd()[i] - oracle.lrd[i]).abs() <= 1e-9 * oracle.lrd[i].max(1.0));
        }
        let mut members = index.query(&q).unwrap().neighborhood.indices;
        members.sort_unstable();
        prop_assert_eq!(members, oracle.query_neighbors(&q));
    }
}
