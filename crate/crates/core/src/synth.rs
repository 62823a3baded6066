//! Deterministic synthetic missions for exercising the pipeline.
//!
//! This is test scaffolding, not a vehicle model. A normal mission is a
//! level platform with a small attitude wobble driven by band-limited gyro
//! noise and held near level by a proportional restoring rate; accelerometers
//! read gravity in the body frame plus band-limited noise. An optional
//! periodic chassis vibration (one fundamental plus harmonics, seed-dependent
//! phase) rides on both the rates and the accelerations. A flip mission adds
//! a raised-cosine rate pulse whose area is a half turn, leaving the platform
//! upside down.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`) seeded with
//! `seed_from_u64`, so output is identical across platforms. Orientation is a
//! Hamilton quaternion mapping body to world, stored `(x, y, z, w)`.

use std::f64::consts::PI;
use std::fs::{self, File};
use std::io::{self, BufWriter};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{write_frames, write_imu_csv, ImuSample, Mission};

pub const GRAVITY: f64 = 9.81;
/// Restoring rate gain (1/s) pulling the wobble attitude back to level.
pub const ATTITUDE_GAIN: f64 = 40.0;
/// Longest attitude integration step; sample intervals are subdivided to this.
pub const MAX_INTEGRATION_STEP: f64 = 1e-3;
/// Seconds of attitude dynamics simulated before t = 0 when vibration is on.
pub const VIBRATION_BURN_IN: f64 = 10.0;

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("config error in `{field}`: {message}")]
    Config { field: &'static str, message: String },
}

fn config_err(field: &'static str, message: impl Into<String>) -> SynthError {
    SynthError::Config { field, message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn unit(self) -> [f64; 3] {
        match self {
            Axis::X => [1.0, 0.0, 0.0],
            Axis::Y => [0.0, 1.0, 0.0],
            Axis::Z => [0.0, 0.0, 1.0],
        }
    }
}

/// A half-turn rotation pulse.
///
/// The rate follows `peak · (1 - cos(2π (t - t0) / L)) / 2` over
/// `L = 2π / peak_rate`, whose integral is exactly π. `duration` bounds the
/// pulse: it must be at least `L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlipConfig {
    pub t0: f64,
    pub duration: f64,
    pub peak_rate: f64,
    pub axis: Axis,
}

impl FlipConfig {
    pub fn pulse_length(&self) -> f64 {
        2.0 * PI / self.peak_rate
    }

    /// `[start, end]` of the nonzero part of the pulse.
    pub fn pulse_interval(&self) -> (f64, f64) {
        (self.t0, self.t0 + self.pulse_length())
    }

    /// Pulse rate (rad/s) at time `t`.
    pub fn rate_at(&self, t: f64) -> f64 {
        let (start, end) = self.pulse_interval();
        if t < start || t > end {
            return 0.0;
        }
        let phase = 2.0 * PI * (t - start) / self.pulse_length();
        0.5 * self.peak_rate * (1.0 - phase.cos())
    }
}

/// Periodic vibration sharing one phase across all axes.
///
/// Rate on axis `i` is `rate_amplitude · g_i · Σ_h c_h sin(h·φ(t) + p_i)`
/// with `φ(t) = 2π·freq·t + φ0` and `φ0` drawn from the mission seed;
/// accelerations follow the same form with their own gains and phases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VibrationConfig {
    /// Fundamental frequency (Hz).
    pub freq: f64,
    /// Angular-rate amplitude (rad/s).
    pub rate_amplitude: f64,
    /// Linear-acceleration amplitude (m/s²).
    pub accel_amplitude: f64,
}

impl Default for VibrationConfig {
    fn default() -> Self {
        VibrationConfig { freq: 7.3, rate_amplitude: 0.5, accel_amplitude: 1.0 }
    }
}

/// Relative weights of the fundamental and its harmonics.
const HARMONICS: [f64; 3] = [1.0, 0.5, 0.3];
/// Per-axis (gain, phase) of the rate vibration.
const RATE_AXES: [(f64, f64); 3] = [(1.0, 0.0), (0.6, 1.1), (0.8, 2.3)];
/// Per-axis (gain, phase) of the acceleration vibration.
const ACCEL_AXES: [(f64, f64); 3] = [(0.5, 0.4), (0.7, 1.9), (1.0, 0.0)];

impl VibrationConfig {
    fn validate(&self) -> Result<(), SynthError> {
        if !(self.freq.is_finite() && self.freq > 0.0) {
            return Err(config_err("vibration.freq", "must be positive and finite"));
        }
        for (field, v) in [
            ("vibration.rate_amplitude", self.rate_amplitude),
            ("vibration.accel_amplitude", self.accel_amplitude),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(config_err(field, "must be non-negative and finite"));
            }
        }
        Ok(())
    }

    fn wave(axes: &[(f64, f64); 3], amplitude: f64, phase: f64) -> [f64; 3] {
        axes.map(|(gain, offset)| {
            let sum: f64 = HARMONICS
                .iter()
                .enumerate()
                .map(|(h, c)| c * ((h + 1) as f64 * phase + offset).sin())
                .sum();
            amplitude * gain * sum
        })
    }

    fn rate(&self, phase: f64) -> [f64; 3] {
        Self::wave(&RATE_AXES, self.rate_amplitude, phase)
    }

    fn accel(&self, phase: f64) -> [f64; 3] {
        Self::wave(&ACCEL_AXES, self.accel_amplitude, phase)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub duration: f64,
    pub imu_rate: f64,
    pub frame_rate: f64,
    /// Gyro noise standard deviation (rad/s).
    pub noise_w: f64,
    /// Accelerometer noise standard deviation (m/s²).
    pub noise_a: f64,
    #[serde(default)]
    pub vibration: Option<VibrationConfig>,
    #[serde(default)]
    pub flip: Option<FlipConfig>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            seed: 1,
            duration: 30.0,
            imu_rate: 90.0,
            frame_rate: 30.0,
            noise_w: 0.05,
            noise_a: 0.2,
            vibration: None,
            flip: None,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        let positive = |field, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(config_err(field, format!("must be positive and finite, got {v}")))
            }
        };
        positive("duration", self.duration)?;
        positive("imu_rate", self.imu_rate)?;
        positive("frame_rate", self.frame_rate)?;
        for (field, v) in [("noise_w", self.noise_w), ("noise_a", self.noise_a)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(config_err(field, format!("must be non-negative and finite, got {v}")));
            }
        }
        if let Some(v) = &self.vibration {
            v.validate()?;
        }
        if let Some(flip) = &self.flip {
            positive("flip.peak_rate", flip.peak_rate)?;
            positive("flip.duration", flip.duration)?;
            if !(flip.t0.is_finite() && flip.t0 >= 0.0) {
                return Err(config_err("flip.t0", "must be non-negative"));
            }
            if flip.t0 + flip.duration > self.duration {
                return Err(config_err("flip.duration", "flip window extends past the mission end"));
            }
            // raised cosine of this peak and length has area peak·duration/2
            if flip.peak_rate * flip.duration / 2.0 < PI * (1.0 - 1e-9) {
                return Err(config_err(
                    "flip.peak_rate",
                    format!(
                        "peak_rate·duration/2 = {} rad cannot reach a half turn (π)",
                        flip.peak_rate * flip.duration / 2.0
                    ),
                ));
            }
        }
        Ok(())
    }

    /// IMU timestamps: `(i + 1/2) / imu_rate` inside `[0, duration)`.
    ///
    /// The half-period offset keeps samples off the frame clock so window
    /// sample counts do not jitter with rounding.
    pub fn sample_times(&self) -> Vec<f64> {
        (0..)
            .map(|i| (i as f64 + 0.5) / self.imu_rate)
            .take_while(|t| *t < self.duration)
            .collect()
    }

    /// Frame ticks `j / frame_rate` from the first IMU sample to `duration`.
    pub fn frame_times(&self) -> Vec<f64> {
        let first = 0.5 / self.imu_rate;
        (0..)
            .map(|j| j as f64 / self.frame_rate)
            .skip_while(|t| *t < first)
            .take_while(|t| *t < self.duration)
            .collect()
    }
}

/// Quaternion `(x, y, z, w)`.
pub type Quat = [f64; 4];

pub const IDENTITY: Quat = [0.0, 0.0, 0.0, 1.0];

/// Hamilton product `a ⊗ b`.
pub fn quat_mul(a: Quat, b: Quat) -> Quat {
    let [ax, ay, az, aw] = a;
    let [bx, by, bz, bw] = b;
    [
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
        aw * bw - ax * bx - ay * by - az * bz,
    ]
}

pub fn quat_conj(q: Quat) -> Quat {
    [-q[0], -q[1], -q[2], q[3]]
}

pub fn quat_normalize(q: Quat) -> Quat {
    let norm = q.iter().map(|v| v * v).sum::<f64>().sqrt();
    [q[0] / norm, q[1] / norm, q[2] / norm, q[3] / norm]
}

/// Rotates `v` by `q` (`q ⊗ v ⊗ q*`).
pub fn rotate(q: Quat, v: [f64; 3]) -> [f64; 3] {
    let u = [q[0], q[1], q[2]];
    let w = q[3];
    let uv = cross(u, v);
    let uuv = cross(u, uv);
    [
        v[0] + 2.0 * (w * uv[0] + uuv[0]),
        v[1] + 2.0 * (w * uv[1] + uuv[1]),
        v[2] + 2.0 * (w * uv[2] + uuv[2]),
    ]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// One first-order kinematics step `normalize(q + ½ q ⊗ (w, 0) dt)` with a
/// body-frame rate `w`.
pub fn integrate_quat(q: Quat, w: [f64; 3], dt: f64) -> Quat {
    let dq = quat_mul(q, [w[0], w[1], w[2], 0.0]);
    quat_normalize([
        q[0] + 0.5 * dq[0] * dt,
        q[1] + 0.5 * dq[1] * dt,
        q[2] + 0.5 * dq[2] * dt,
        q[3] + 0.5 * dq[3] * dt,
    ])
}

/// Small-angle rotation vector of a near-identity quaternion.
fn small_angle(q: Quat) -> [f64; 3] {
    let s = if q[3] < 0.0 { -2.0 } else { 2.0 };
    [s * q[0], s * q[1], s * q[2]]
}

/// First-order low-pass filtered Gaussian noise with a fixed stationary
/// standard deviation.
struct BandLimited {
    state: [f64; 3],
    alpha: f64,
    drive: f64,
}

impl BandLimited {
    fn new(std: f64, cutoff: f64, rate: f64, rng: &mut ChaCha8Rng) -> Self {
        let alpha = 1.0 - (-2.0 * PI * cutoff / rate).exp();
        // stationary variance of y += alpha (x - y) is alpha / (2 - alpha) var(x)
        let drive = std * ((2.0 - alpha) / alpha).sqrt();
        let mut state = [0.0; 3];
        for s in &mut state {
            *s = std * gauss(rng);
        }
        BandLimited { state, alpha, drive }
    }

    fn step(&mut self, rng: &mut ChaCha8Rng) -> [f64; 3] {
        for s in &mut self.state {
            *s += self.alpha * (self.drive * gauss(rng) - *s);
        }
        self.state
    }
}

fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn generate(cfg: &ScenarioConfig, id: &str) -> Mission {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let phase0 = rng.random_range(0.0..2.0 * PI);
    let cutoff = cfg.imu_rate / 8.0;
    let mut gyro = BandLimited::new(cfg.noise_w, cutoff, cfg.imu_rate, &mut rng);
    let mut accel = BandLimited::new(cfg.noise_a, cutoff, cfg.imu_rate, &mut rng);

    let flip = cfg.flip;
    let axis = flip.map(|f| f.axis.unit()).unwrap_or([0.0; 3]);
    let flip_rate = |t: f64| scale(axis, flip.map_or(0.0, |f| f.rate_at(t)));

    let vib = cfg.vibration;
    let phase_at = |t: f64| phase0 + 2.0 * PI * vib.map_or(0.0, |v| v.freq) * t;
    let vib_rate = |t: f64| vib.map_or([0.0; 3], |v| v.rate(phase_at(t)));
    let vib_accel = |t: f64| vib.map_or([0.0; 3], |v| v.accel(phase_at(t)));

    let mut q_wobble = IDENTITY;
    if vib.is_some() {
        // settle the attitude loop on the vibration alone so t = 0 is already periodic
        let steps = (VIBRATION_BURN_IN / MAX_INTEGRATION_STEP).ceil() as usize;
        let h = VIBRATION_BURN_IN / steps as f64;
        for s in 0..steps {
            let tm = -VIBRATION_BURN_IN + (s as f64 + 0.5) * h;
            let w = add(vib_rate(tm), scale(small_angle(q_wobble), -ATTITUDE_GAIN));
            q_wobble = integrate_quat(q_wobble, w, h);
        }
    }
    let mut q_flip = IDENTITY;
    let mut t = 0.0;
    let mut samples = Vec::new();
    for t_next in cfg.sample_times() {
        let gyro_noise = gyro.step(&mut rng);
        let accel_noise = accel.step(&mut rng);

        let steps = ((t_next - t) / MAX_INTEGRATION_STEP).ceil().max(1.0) as usize;
        let h = (t_next - t) / steps as f64;
        for s in 0..steps {
            let tm = t + (s as f64 + 0.5) * h;
            let drive = add(gyro_noise, vib_rate(tm));
            let w_wobble = add(drive, scale(small_angle(q_wobble), -ATTITUDE_GAIN));
            q_wobble = integrate_quat(q_wobble, w_wobble, h);
            if flip.is_some() {
                q_flip = integrate_quat(q_flip, flip_rate(tm), h);
            }
        }
        t = t_next;

        // body rate of q_flip ⊗ q_wobble
        let drive = add(gyro_noise, vib_rate(t));
        let w_wobble = add(drive, scale(small_angle(q_wobble), -ATTITUDE_GAIN));
        let w = add(rotate(quat_conj(q_wobble), flip_rate(t)), w_wobble);
        let q = quat_mul(q_flip, q_wobble);
        let a = add(add(rotate(quat_conj(q), [0.0, 0.0, GRAVITY]), accel_noise), vib_accel(t));
        // `+ 0.0` turns any -0.0 into 0.0 so zero-noise traces print cleanly
        let c = [q[0], q[1], q[2], q[3], w[0], w[1], w[2], a[0], a[1], a[2]].map(|v| v + 0.0);
        samples.push(ImuSample::from_channels(t, c));
    }
    Mission { id: id.to_string(), samples, frames: cfg.frame_times() }
}

/// A normal mission. `cfg.flip` must be `None`.
pub fn gen_normal_mission(cfg: &ScenarioConfig) -> Result<Mission, SynthError> {
    cfg.validate()?;
    if cfg.flip.is_some() {
        return Err(config_err("flip", "normal missions take no flip"));
    }
    Ok(generate(cfg, &format!("normal_seed{}", cfg.seed)))
}

/// A mission with a half-turn flip. `cfg.flip` must be set.
pub fn gen_flip_mission(cfg: &ScenarioConfig) -> Result<Mission, SynthError> {
    cfg.validate()?;
    if cfg.flip.is_none() {
        return Err(config_err("flip", "flip missions need a flip section"));
    }
    Ok(generate(cfg, &format!("flip_seed{}", cfg.seed)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Normal,
    Abnormal,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Normal => "normal",
            Label::Abnormal => "abnormal",
        }
    }
}

impl std::str::FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "normal" => Ok(Label::Normal),
            "abnormal" => Ok(Label::Abnormal),
            other => Err(format!("unknown label {other:?} (expected normal or abnormal)")),
        }
    }
}

/// A batch of normal and flip missions sharing one noise model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthPlan {
    pub seed: u64,
    pub normal: usize,
    pub abnormal: usize,
    pub duration: f64,
    pub imu_rate: f64,
    pub frame_rate: f64,
    pub noise_w: f64,
    pub noise_a: f64,
    pub vibration: Option<VibrationConfig>,
    pub flip_peak_rate: f64,
}

impl Default for SynthPlan {
    fn default() -> Self {
        let base = ScenarioConfig::default();
        SynthPlan {
            seed: 1,
            normal: 6,
            abnormal: 6,
            duration: base.duration,
            imu_rate: base.imu_rate,
            frame_rate: base.frame_rate,
            noise_w: 0.002,
            noise_a: 0.005,
            vibration: Some(VibrationConfig::default()),
            flip_peak_rate: 10.0,
        }
    }
}

/// One mission of a plan.
#[derive(Debug, Clone, PartialEq)]
pub struct PlannedMission {
    pub name: String,
    pub label: Label,
    pub config: ScenarioConfig,
}

impl SynthPlan {
    /// Normal missions use seeds `seed, seed + 1, ...`; abnormal ones
    /// `seed + 1000, ...`, flipping at staggered times and alternating the
    /// x and y axes.
    pub fn missions(&self) -> Vec<PlannedMission> {
        let base = |seed: u64| ScenarioConfig {
            seed,
            duration: self.duration,
            imu_rate: self.imu_rate,
            frame_rate: self.frame_rate,
            noise_w: self.noise_w,
            noise_a: self.noise_a,
            vibration: self.vibration,
            flip: None,
        };
        let mut out = Vec::with_capacity(self.normal + self.abnormal);
        for i in 0..self.normal {
            out.push(PlannedMission {
                name: format!("normal_{:02}", i + 1),
                label: Label::Normal,
                config: base(self.seed.wrapping_add(i as u64)),
            });
        }
        for i in 0..self.abnormal {
            let fraction = 0.3 + 0.1 * (i % 6) as f64;
            let mut config = base(self.seed.wrapping_add(1000 + i as u64));
            config.flip = Some(FlipConfig {
                t0: fraction * self.duration,
                duration: 2.0 * PI / self.flip_peak_rate,
                peak_rate: self.flip_peak_rate,
                axis: if i % 2 == 0 { Axis::X } else { Axis::Y },
            });
            out.push(PlannedMission { name: format!("abnormal_{:02}", i + 1), label: Label::Abnormal, config });
        }
        out
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        self.missions().iter().try_for_each(|m| m.config.validate())
    }
}

impl PlannedMission {
    pub fn generate(&self) -> Result<Mission, SynthError> {
        let mut m = match self.label {
            Label::Normal => gen_normal_mission(&self.config)?,
            Label::Abnormal => gen_flip_mission(&self.config)?,
        };
        m.id = self.name.clone();
        Ok(m)
    }
}

/// Writes `<dir>/<id>.csv` and `<dir>/<id>.frames`; returns the CSV path.
pub fn write_mission(dir: impl AsRef<Path>, mission: &Mission) -> io::Result<PathBuf> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let csv = dir.join(format!("{}.csv", mission.id));
    write_imu_csv(BufWriter::new(File::create(&csv)?), &mission.samples)?;
    write_frames(BufWriter::new(File::create(csv.with_extension("frames"))?), &mission.frames)?;
    Ok(csv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(noise: f64) -> ScenarioConfig {
        ScenarioConfig { duration: 5.0, noise_w: noise, noise_a: noise, ..ScenarioConfig::default() }
    }

    fn flip_cfg(axis: Axis) -> ScenarioConfig {
        ScenarioConfig {
            flip: Some(FlipConfig { t0: 1.0, duration: 2.0 * PI / 10.0, peak_rate: 10.0, axis }),
            ..cfg(0.0)
        }
    }

    #[test]
    fn zero_noise_is_level_and_still() {
        let m = gen_normal_mission(&cfg(0.0)).unwrap();
        assert_eq!(m.samples.len(), 450);
        assert_eq!(m.frames.len(), 149);
        for s in &m.samples {
            assert_eq!(s.channels(), [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, GRAVITY]);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = gen_normal_mission(&cfg(0.05)).unwrap();
        let b = gen_normal_mission(&cfg(0.05)).unwrap();
        assert_eq!(a, b);
        let c = gen_normal_mission(&ScenarioConfig { seed: 2, ..cfg(0.05) }).unwrap();
        assert_ne!(a.samples, c.samples);
        let ta: Vec<f64> = a.samples.iter().map(|s| s.t).collect();
        let tc: Vec<f64> = c.samples.iter().map(|s| s.t).collect();
        assert_eq!(ta, tc);
        assert_eq!(a.frames, c.frames);
    }

    #[test]
    fn wobble_stays_small() {
        let m = gen_normal_mission(&ScenarioConfig { duration: 30.0, ..cfg(0.05) }).unwrap();
        for s in &m.samples {
            assert!(s.qw > 0.999, "qw {}", s.qw);
            let norm = s.channels()[..4].iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn integrate_quat_basics() {
        assert_eq!(integrate_quat(IDENTITY, [0.0; 3], 0.1), IDENTITY);
        let mut q = IDENTITY;
        for _ in 0..10_000 {
            q = integrate_quat(q, [PI, 0.0, 0.0], 1e-4);
            let norm = q.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
        }
        // closed form: rotation by π about x is (1, 0, 0, 0)
        assert!((q[0].abs() - 1.0).abs() < 1e-3 && q[1].abs() < 1e-3 && q[2].abs() < 1e-3 && q[3].abs() < 1e-3);
    }

    #[test]
    fn zero_noise_flip_ends_upside_down() {
        let m = gen_flip_mission(&flip_cfg(Axis::X)).unwrap();
        let last = m.samples.last().unwrap();
        assert!((last.qx.abs() - 1.0).abs() < 1e-3, "{last:?}");
        assert!(last.qy.abs() < 1e-3 && last.qz.abs() < 1e-3 && last.qw.abs() < 1e-3);
        assert!((last.az + GRAVITY).abs() < 1e-2);
        // before the pulse nothing moves
        let before = m.samples.iter().find(|s| s.t > 0.5).unwrap();
        assert_eq!(before.qw, 1.0);
    }

    #[test]
    fn pulse_shape() {
        let flip = FlipConfig { t0: 2.0, duration: 2.0 * PI / 10.0, peak_rate: 10.0, axis: Axis::X };
        let (start, end) = flip.pulse_interval();
        let n = 100_000;
        let h = (end - start) / n as f64;
        let samples: Vec<f64> = (0..=n).map(|i| flip.rate_at(start + i as f64 * h)).collect();
        let peak = samples.iter().cloned().fold(0.0, f64::max);
        assert!((peak - 10.0).abs() < 1e-6);
        assert!((flip.rate_at(start + 0.5 * flip.pulse_length()) - 10.0).abs() < 1e-12);
        let area: f64 = samples.iter().sum::<f64>() * h;
        assert!((area - PI).abs() < 1e-4);
        assert_eq!(flip.rate_at(start - 0.01), 0.0);
    }

    #[test]
    fn flip_config_errors() {
        let mut c = flip_cfg(Axis::X);
        c.flip.as_mut().unwrap().duration = 0.3;
        assert!(matches!(gen_flip_mission(&c), Err(SynthError::Config { field: "flip.peak_rate", .. })));

        let mut late = flip_cfg(Axis::Y);
        late.flip.as_mut().unwrap().t0 = 4.9;
        assert!(gen_flip_mission(&late).is_err());

        assert!(gen_normal_mission(&flip_cfg(Axis::X)).is_err());
        assert!(gen_flip_mission(&cfg(0.0)).is_err());
        let bad = ScenarioConfig { imu_rate: 0.0, ..cfg(0.0) };
        assert!(matches!(gen_normal_mission(&bad), Err(SynthError::Config { field: "imu_rate", .. })));
    }

    #[test]
    fn flip_only_changes_rates_inside_pulse() {
        let plain = ScenarioConfig { seed: 9, ..cfg(0.05) };
        let flipped = ScenarioConfig { flip: flip_cfg(Axis::X).flip, ..plain.clone() };
        let a = gen_normal_mission(&plain).unwrap();
        let b = gen_flip_mission(&flipped).unwrap();
        let (start, end) = flipped.flip.unwrap().pulse_interval();
        for (sa, sb) in a.samples.iter().zip(&b.samples) {
            if sa.t < start {
                assert_eq!(sa, sb);
            } else if sa.t > end {
                // wobble is unchanged; the rate is just re-expressed
                let wa = (sa.wx * sa.wx + sa.wy * sa.wy + sa.wz * sa.wz).sqrt();
                let wb = (sb.wx * sb.wx + sb.wy * sb.wy + sb.wz * sb.wz).sqrt();
                assert!((wa - wb).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn default_plan_layout() {
        let plan = SynthPlan::default();
        let ms = plan.missions();
        assert_eq!(ms.len(), 12);
        assert_eq!(ms.iter().filter(|m| m.label == Label::Normal).count(), 6);
        plan.validate().unwrap();
        let seeds: std::collections::BTreeSet<u64> = ms.iter().map(|m| m.config.seed).collect();
        assert_eq!(seeds.len(), 12);
    }
}
