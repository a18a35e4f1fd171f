use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied parameter is outside its valid domain.
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("sample rate mismatch: {0} Hz vs {1} Hz")]
    SampleRateMismatch(u32, u32),

    #[error("length mismatch: {0} vs {1} samples")]
    LengthMismatch(usize, usize),

    #[error("input is silent (RMS {rms:.3e} below {threshold:.0e})")]
    Silent { rms: f64, threshold: f64 },

    #[error("sample {index} is {value}; |x| > 1.0 would clip")]
    Clipping { index: usize, value: f64 },

    #[error("sample {index} is not finite")]
    NonFinite { index: usize },

    #[error("unsupported WAV encoding: {0}")]
    UnsupportedEncoding(String),

    #[error("unsupported channel count {0} (mono or stereo only)")]
    ChannelCount(u16),

    #[error("expected {expected} input, got {actual}")]
    ChannelLayout {
        expected: &'static str,
        actual: &'static str,
    },

    #[error("malformed WAV file {path}: {reason}")]
    MalformedWav { path: PathBuf, reason: String },

    #[error("band {low_hz:.1}-{high_hz:.1} Hz lies outside the analyzed range {min_hz:.1}-{max_hz:.1} Hz")]
    BandOutOfRange {
        low_hz: f64,
        high_hz: f64,
        min_hz: f64,
        max_hz: f64,
    },

    #[error("incompatible band grids: {0}")]
    IncompatibleBands(String),

    #[error("rig config line {line}: {reason}")]
    Config { line: usize, reason: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures caused by the filesystem rather than by the data.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. } | Error::MalformedWav { .. })
    }
}
