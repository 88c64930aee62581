use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the toolkit. Variants carry enough context
/// (file, line, frame, class) to locate the offending input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {reason}")]
    Wav { path: PathBuf, reason: String },

    #[error("{path}: expected 4 channels, found {found}")]
    ChannelCount { path: PathBuf, found: u16 },

    #[error("{path}: expected sample rate {expected} Hz, found {found} Hz")]
    SampleRate {
        path: PathBuf,
        expected: u32,
        found: u32,
    },

    #[error("{path}:{line}: {reason}")]
    Csv {
        path: PathBuf,
        line: u64,
        reason: String,
    },

    #[error("config: unknown key `{0}`")]
    UnknownConfigKey(String),

    #[error("config: `{key}`: {reason}")]
    ConfigValue { key: String, reason: String },

    #[error("{0}")]
    InvalidInput(String),

    #[error("signal too short: {0}")]
    TooShort(String),

    #[error("frame {frame}, class {class_id}: {count} simultaneous same-class events exceed the 3-track limit")]
    TooManyEvents {
        frame: usize,
        class_id: usize,
        count: usize,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("image: {0}")]
    Image(String),

    #[error("tensor file {path}: {reason}")]
    Tensor { path: PathBuf, reason: String },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
