//! `NOVM` model container.
//!
//! Little-endian, version 1:
//!
//! | offset | size      | field                         |
//! |--------|-----------|-------------------------------|
//! | 0      | 4         | magic `NOVM`                  |
//! | 4      | 4         | format version (u32)          |
//! | 8      | 4         | k (u32)                       |
//! | 12     | 8         | offset (f64)                  |
//! | 20     | 4         | d (u32)                       |
//! | 24     | 4         | bins B (u32)                  |
//! | 28     | 4         | span (u32)                    |
//! | 32     | 8         | n (u64)                       |
//! | 40     | 8·d       | normalization means           |
//! |        | 8·d       | normalization std deviations  |
//! |        | 8·n·d     | normalized training rows      |
//! |        | 8·n       | k-distances                   |
//! |        | 8·n       | local reachability densities  |
//! |        | 4         | CRC-32 of every byte above    |

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::{LofIndex, LofModel, ModelParams};
use crate::matrix::FeatureMatrix;
use crate::normalize::NormStats;

pub const MAGIC: [u8; 4] = *b"NOVM";
pub const FORMAT_VERSION: u32 = 1;
pub const SUPPORTED_VERSIONS: &[u32] = &[FORMAT_VERSION];

const HEADER_LEN: usize = 40;
const CRC_LEN: usize = 4;

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("not a model file: bad magic bytes {0:02x?}")]
    BadMagic(Vec<u8>),
    #[error("unsupported model format version {found}; supported versions: {supported:?}")]
    UnsupportedVersion { found: u32, supported: &'static [u32] },
    #[error("truncated model file: need {needed} bytes, found {found}")]
    Truncated { needed: usize, found: usize },
    #[error("checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    Checksum { stored: u32, computed: u32 },
    #[error("invalid model file: {0}")]
    Invalid(String),
}

impl ModelFileError {
    /// Stable short code for each failure class.
    pub fn code(&self) -> &'static str {
        match self {
            ModelFileError::Io { .. } => "io",
            ModelFileError::BadMagic(_) => "bad-magic",
            ModelFileError::UnsupportedVersion { .. } => "unsupported-version",
            ModelFileError::Truncated { .. } => "truncated",
            ModelFileError::Checksum { .. } => "checksum",
            ModelFileError::Invalid(_) => "invalid",
        }
    }
}

fn usize_to_u32(v: usize, what: &str) -> Result<u32, ModelFileError> {
    u32::try_from(v).map_err(|_| ModelFileError::Invalid(format!("{what} = {v} exceeds u32")))
}

impl LofModel {
    pub fn to_bytes(&self) -> Result<Vec<u8>, ModelFileError> {
        let d = self.dim();
        let n = self.n_train();
        let mut out = Vec::with_capacity(HEADER_LEN + 8 * (2 * d + n * d + 2 * n) + CRC_LEN);
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&usize_to_u32(self.params.k, "k")?.to_le_bytes());
        out.extend_from_slice(&self.params.offset.to_le_bytes());
        out.extend_from_slice(&usize_to_u32(d, "d")?.to_le_bytes());
        out.extend_from_slice(&usize_to_u32(self.params.bins, "bins")?.to_le_bytes());
        out.extend_from_slice(&usize_to_u32(self.params.span, "span")?.to_le_bytes());
        out.extend_from_slice(&(n as u64).to_le_bytes());
        let arrays: [&[f64]; 5] = [
            &self.norm.mu,
            &self.norm.sigma,
            self.index.data().as_slice(),
            self.index.kdist(),
            self.index.lrd(),
        ];
        for v in arrays.iter().flat_map(|a| a.iter()) {
            out.extend_from_slice(&v.to_le_bytes());
        }
        let crc = crc32fast::hash(&out);
        out.extend_from_slice(&crc.to_le_bytes());
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, ModelFileError> {
        let magic_len = bytes.len().min(MAGIC.len());
        if bytes[..magic_len] != MAGIC[..magic_len] {
            return Err(ModelFileError::BadMagic(bytes[..magic_len].to_vec()));
        }
        if bytes.len() < 8 {
            return Err(ModelFileError::Truncated { needed: HEADER_LEN, found: bytes.len() });
        }
        let mut r = Reader { bytes, pos: 4 };
        let version = r.u32();
        if !SUPPORTED_VERSIONS.contains(&version) {
            return Err(ModelFileError::UnsupportedVersion { found: version, supported: SUPPORTED_VERSIONS });
        }
        if bytes.len() < HEADER_LEN {
            return Err(ModelFileError::Truncated { needed: HEADER_LEN, found: bytes.len() });
        }
        let k = r.u32() as usize;
        let offset = r.f64();
        let d = r.u32() as usize;
        let bins = r.u32() as usize;
        let span = r.u32() as usize;
        let n = usize::try_from(r.u64())
            .map_err(|_| ModelFileError::Invalid("row count does not fit in memory".into()))?;

        let needed = n
            .checked_mul(d)
            .and_then(|nd| nd.checked_add(2 * d))
            .and_then(|v| v.checked_add(n.checked_mul(2)?))
            .and_then(|v| v.checked_mul(8))
            .and_then(|v| v.checked_add(HEADER_LEN + CRC_LEN))
            .ok_or_else(|| ModelFileError::Invalid("declared dimensions overflow".into()))?;
        if bytes.len() < needed {
            return Err(ModelFileError::Truncated { needed, found: bytes.len() });
        }
        if bytes.len() > needed {
            return Err(ModelFileError::Invalid(format!(
                "{} trailing bytes after checksum",
                bytes.len() - needed
            )));
        }
        let body = &bytes[..needed - CRC_LEN];
        let stored = u32::from_le_bytes(bytes[needed - CRC_LEN..].try_into().expect("4 bytes"));
        let computed = crc32fast::hash(body);
        if stored != computed {
            return Err(ModelFileError::Checksum { stored, computed });
        }

        let mu = r.f64s(d);
        let sigma = r.f64s(d);
        let data = r.f64s(n * d);
        let kdist = r.f64s(n);
        let lrd = r.f64s(n);

        if mu.iter().any(|v| !v.is_finite()) || sigma.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(ModelFileError::Invalid("normalization statistics must be finite".into()));
        }
        let norm = NormStats { mu, sigma, n_fit: n };
        let data = FeatureMatrix::new(n, d, data).map_err(|e| ModelFileError::Invalid(e.to_string()))?;
        let index =
            LofIndex::from_parts(data, k, kdist, lrd).map_err(|e| ModelFileError::Invalid(e.to_string()))?;
        LofModel::from_parts(ModelParams { k, offset, bins, span }, norm, index)
            .map_err(|e| ModelFileError::Invalid(e.to_string()))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ModelFileError> {
        let path = path.as_ref();
        let bytes = self.to_bytes()?;
        fs::write(path, bytes).map_err(|source| ModelFileError::Io { path: path.to_path_buf(), source })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ModelFileError> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|source| ModelFileError::Io { path: path.to_path_buf(), source })?;
        Self::from_bytes(&bytes)
    }
}

/// Cursor over a buffer whose length has already been checked.
struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take<const N: usize>(&mut self) -> [u8; N] {
        let out: [u8; N] = self.bytes[self.pos..self.pos + N].try_into().expect("length checked");
        self.pos += N;
        out
    }

    fn u32(&mut self) -> u32 {
        u32::from_le_bytes(self.take())
    }

    fn u64(&mut self) -> u64 {
        u64::from_le_bytes(self.take())
    }

    fn f64(&mut self) -> f64 {
        f64::from_le_bytes(self.take())
    }

    fn f64s(&mut self, count: usize) -> Vec<f64> {
        (0..count).map(|_| self.f64()).collect()
    }
}
