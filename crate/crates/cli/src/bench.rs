use std::time::Instant;

use clap::Args;
use motion_novelty::ingest::NUM_CHANNELS;
use motion_novelty::lof::ModelParams;
use motion_novelty::spectral::feature_vector;
use motion_novelty::windowing::{Window, WindowContent};
use motion_novelty::{FeatureMatrix, ImuSample, LofModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{write_run_record, Overrides, RunConfig};
use crate::error::CliError;
use crate::score::load_model;

/// Per-frame budget at 30 frames per second.
pub const FRAME_BUDGET_MS: f64 = 1000.0 / 30.0;
/// IMU samples in each benchmark window (3 frame intervals at 90 Hz).
const WINDOW_SAMPLES: usize = 9;
const WINDOW_RATE: f64 = 90.0;

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub common: Overrides,
    /// Training rows of the generated model (ignored with --model).
    #[arg(long, default_value_t = 5000)]
    pub n: usize,
    /// Feature dimension of the generated model, a multiple of 10.
    #[arg(long, default_value_t = 160)]
    pub d: usize,
    /// Timed frames.
    #[arg(long, default_value_t = 200)]
    pub repetitions: usize,
    /// Latency budget per frame in milliseconds.
    #[arg(long, default_value_t = FRAME_BUDGET_MS)]
    pub budget_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub repetitions: usize,
    pub p50_ms: f64,
    pub p95_ms: f64,
    pub max_ms: f64,
    pub budget_ms: f64,
    pub pass: bool,
}

impl BenchReport {
    pub fn to_text(&self) -> String {
        format!(
            "bench n = {} d = {} k = {} repetitions = {}\np50 {:.3} ms  p95 {:.3} ms  max {:.3} ms\nbudget {:.1} ms: {}\n",
            self.n,
            self.d,
            self.k,
            self.repetitions,
            self.p50_ms,
            self.p95_ms,
            self.max_ms,
            self.budget_ms,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Nearest-rank percentile of sorted values.
pub fn percentile(sorted: &[f64], p: f64) -> f64 {
    let rank = ((p / 100.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

fn random_window(rng: &mut ChaCha8Rng) -> Vec<ImuSample> {
    (0..WINDOW_SAMPLES)
        .map(|i| {
            let mut c = [0.0; NUM_CHANNELS];
            c.iter_mut().for_each(|v| *v = rng.random_range(-1.0..1.0));
            ImuSample::from_channels(i as f64 / WINDOW_RATE, c)
        })
        .collect()
}

fn window_features(samples: &[ImuSample], bins: usize) -> Vec<f64> {
    let window = Window {
        frame_index: 0,
        t_start: samples[0].t,
        t_end: samples[samples.len() - 1].t,
        content: WindowContent::Samples { samples, mean_rate: WINDOW_RATE },
    };
    feature_vector(&window, bins).expect("benchmark window is valid").values
}

/// Model of `n` training windows of random motion.
pub fn synthetic_model(n: usize, d: usize, k: usize, seed: u64) -> Result<LofModel, CliError> {
    if d == 0 || d % NUM_CHANNELS != 0 {
        return Err(CliError::usage(format!("--d must be a positive multiple of {NUM_CHANNELS}, got {d}")));
    }
    let bins = d / NUM_CHANNELS;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..n).map(|_| window_features(&random_window(&mut rng), bins)).collect();
    let x = FeatureMatrix::from_rows(d, rows).map_err(|e| CliError::input(e.to_string()))?;
    Ok(LofModel::fit(&x, ModelParams { k, bins, ..ModelParams::default() })?)
}

pub fn run(args: &BenchArgs) -> Result<BenchReport, CliError> {
    if args.repetitions == 0 {
        return Err(CliError::usage("--repetitions must be at least 1"));
    }
    if !(args.budget_ms.is_finite() && args.budget_ms > 0.0) {
        return Err(CliError::usage("--budget-ms must be positive"));
    }
    let cfg = RunConfig::resolve(&args.common)?;
    let seed = cfg.seed.unwrap_or(1);
    let model = match &cfg.model {
        Some(_) => load_model(&cfg, &args.common)?,
        None => synthetic_model(args.n, args.d, cfg.k, seed)?,
    };
    let bins = model.params().bins;

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut times = Vec::with_capacity(args.repetitions);
    let warmup = 3;
    for i in 0..warmup + args.repetitions {
        let samples = random_window(&mut rng);
        let start = Instant::now();
        let x = window_features(&samples, bins);
        let a = model.abnormality(&x)?;
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        std::hint::black_box(a);
        if i >= warmup {
            times.push(elapsed);
        }
    }
    times.sort_by(f64::total_cmp);
    let p95 = percentile(&times, 95.0);
    let report = BenchReport {
        n: model.n_train(),
        d: model.dim(),
        k: model.params().k,
        repetitions: args.repetitions,
        p50_ms: percentile(&times, 50.0),
        p95_ms: p95,
        max_ms: times[times.len() - 1],
        budget_ms: args.budget_ms,
        pass: p95 < args.budget_ms,
    };
    if let Some(out) = &cfg.out {
        std::fs::create_dir_all(out).map_err(|e| CliError::output(out, e))?;
        let path = out.join("bench.json");
        let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
        std::fs::write(&path, json).map_err(|e| CliError::output(&path, e))?;
        let extra = serde_json::json!({ "n": args.n, "d": args.d, "repetitions": args.repetitions, "budget_ms": args.budget_ms });
        write_run_record(out, "bench", &cfg, extra)?;
    }
    Ok(report)
}
