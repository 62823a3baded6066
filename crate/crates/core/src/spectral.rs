//! Per-channel periodogram features.
//!
//! Each window is turned into a fixed-length vector by estimating the
//! one-sided power spectral density of every channel with a plain
//! (rectangular, undetrended) periodogram and averaging it into `B` bins over
//! normalized frequency. Layout is channel-major: channel `c` occupies
//! `[c * B, (c + 1) * B)`.

use std::cell::RefCell;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use thiserror::Error;

use crate::ingest::NUM_CHANNELS;
use crate::windowing::Window;

pub const DEFAULT_BINS: usize = 16;

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("insufficient data: {0}")]
    Insufficient(String),
    #[error("value error: {0}")]
    Value(String),
}

/// One-sided power spectral density, `floor(N/2) + 1` values in units²/Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct Psd {
    pub values: Vec<f64>,
    pub fs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub frame_index: usize,
    pub values: Vec<f64>,
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Periodogram of `x` sampled at `fs` Hz.
///
/// Two-sided density is `|X[k]|² / (fs·N)`; non-DC, non-Nyquist bins are
/// doubled to fold in negative frequencies.
pub fn periodogram(x: &[f64], fs: f64) -> Result<Psd, SpectralError> {
    let n = x.len();
    if n < 2 {
        return Err(SpectralError::Insufficient(format!(
            "periodogram needs at least 2 samples, got {n}"
        )));
    }
    if !(fs.is_finite() && fs > 0.0) {
        return Err(SpectralError::Value(format!("sampling rate must be positive, got {fs}")));
    }
    if let Some(i) = x.iter().position(|v| !v.is_finite()) {
        return Err(SpectralError::Value(format!("sample {i} is not finite")));
    }

    let mut buf: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v, 0.0)).collect();
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n).process(&mut buf));

    let scale = 1.0 / (fs * n as f64);
    let len = n / 2 + 1;
    let values = (0..len)
        .map(|k| {
            let p = buf[k].norm_sqr() * scale;
            let unpaired = k == 0 || (n % 2 == 0 && k == n / 2);
            if unpaired {
                p
            } else {
                2.0 * p
            }
        })
        .collect();
    Ok(Psd { values, fs })
}

/// Averages `values` into `bins` groups; bin `j` covers indices
/// `floor(j·L/B) .. floor((j+1)·L/B)`. Empty bins are 0.
pub fn bin_psd(values: &[f64], bins: usize) -> Vec<f64> {
    let len = values.len();
    (0..bins)
        .map(|j| {
            let lo = j * len / bins;
            let hi = (j + 1) * len / bins;
            if hi > lo {
                values[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
            } else {
                0.0
            }
        })
        .collect()
}

/// Concatenated binned periodograms of all ten channels of a window.
pub fn feature_vector(window: &Window<'_>, bins: usize) -> Result<FeatureVector, SpectralError> {
    if bins == 0 {
        return Err(SpectralError::Value("bins must be at least 1".into()));
    }
    let (samples, fs) = match (window.samples(), window.mean_rate()) {
        (Some(s), Some(fs)) => (s, fs),
        _ => {
            return Err(SpectralError::Insufficient(format!(
                "window for frame {} has too few samples",
                window.frame_index
            )))
        }
    };

    let mut values = Vec::with_capacity(NUM_CHANNELS * bins);
    let mut channel = vec![0.0; samples.len()];
    for c in 0..NUM_CHANNELS {
        for (slot, s) in channel.iter_mut().zip(samples) {
            *slot = s.channels()[c];
        }
        let psd = periodogram(&channel, fs)?;
        values.extend(bin_psd(&psd.values, bins));
    }
    Ok(FeatureVector { frame_index: window.frame_index, values })
}
