//! Reference implementations used as test oracles.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct NaiveLof {
    pub data: Vec<Vec<f64>>,
    pub k: usize,
    pub kdist: Vec<f64>,
    pub lrd: Vec<f64>,
    pub lof: Vec<f64>,
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    s.sqrt()
}

/// Neighborhood of `q` by full sort: (index, distance) for every point
/// within the k-th smallest distance.
pub fn naive_neighbors(data: &[Vec<f64>], q: &[f64], k: usize, skip: Option<usize>) -> (Vec<(usize, f64)>, f64) {
    let mut ds: Vec<(usize, f64)> = Vec::new();
    for (j, p) in data.iter().enumerate() {
        if Some(j) != skip {
            ds.push((j, dist(q, p)));
        }
    }
    let mut sorted: Vec<f64> = ds.iter().map(|p| p.1).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let kd = sorted[k - 1];
    let hood: Vec<(usize, f64)> = ds.into_iter().filter(|p| p.1 <= kd).collect();
    (hood, kd)
}

fn density(hood: &[(usize, f64)], kdist: &[f64]) -> f64 {
    let mut s = 0.0;
    for &(o, d) in hood {
        s += if kdist[o] > d { kdist[o] } else { d };
    }
    if s < 1e-12 {
        1e12
    } else {
        hood.len() as f64 / s
    }
}

fn factor(hood: &[(usize, f64)], lrd_q: f64, lrd: &[f64]) -> f64 {
    let mut s = 0.0;
    for &(o, _) in hood {
        s += lrd[o];
    }
    s / (hood.len() as f64 * lrd_q)
}

impl NaiveLof {
    pub fn fit(data: Vec<Vec<f64>>, k: usize) -> Self {
        let n = data.len();
        let mut hoods = Vec::with_capacity(n);
        let mut kdist = vec![0.0; n];
        for i in 0..n {
            let (h, kd) = naive_neighbors(&data, &data[i], k, Some(i));
            kdist[i] = kd;
            hoods.push(h);
        }
        let lrd: Vec<f64> = hoods.iter().map(|h| density(h, &kdist)).collect();
        let lof = (0..n).map(|i| factor(&hoods[i], lrd[i], &lrd)).collect();
        NaiveLof { data, k, kdist, lrd, lof }
    }

    pub fn query(&self, q: &[f64]) -> f64 {
        let (h, _) = naive_neighbors(&self.data, q, self.k, None);
        let lrd_q = density(&h, &self.kdist);
        factor(&h, lrd_q, &self.lrd)
    }

    pub fn query_neighbors(&self, q: &[f64]) -> Vec<usize> {
        let mut idx: Vec<usize> = naive_neighbors(&self.data, q, self.k, None).0.into_iter().map(|p| p.0).collect();
        idx.sort_unstable();
        idx
    }
}

/// Direct O(N^2) two-sided periodogram |X[k]|^2 / (fs N).
pub fn naive_periodogram(x: &[f64], fs: f64) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (t, v) in x.iter().enumerate() {
                let ang = -2.0 * std::f64::consts::PI * (k * t % n) as f64 / n as f64;
                re += v * ang.cos();
                im += v * ang.sin();
            }
            (re * re + im * im) / (fs * n as f64)
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rows(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect()).collect()
}
