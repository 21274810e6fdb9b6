use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("mask has no foreground pixels")]
    EmptyMask,
    #[error("window size {window} exceeds mask extent {height}x{width}")]
    WindowTooLarge {
        window: usize,
        height: usize,
        width: usize,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("dimension mismatch: {expected:?} vs {got:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("empty input list")]
    EmptyList,
    #[error("statistic undefined: {0}")]
    Undefined(&'static str),
    #[error("image has {got} channels, filter bank expects {expected}")]
    ChannelMismatch { expected: usize, got: usize },
    #[error("object or boundary band is empty at feature resolution")]
    DegenerateObject,
    #[error("too few samples: need at least {needed} per class, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("requested {requested} points but region holds only {available} pixels")]
    InsufficientPixels { requested: usize, available: usize },
    #[error("need at least 2 textures, found {0}")]
    InsufficientTextures(usize),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("bad filter bank file: {0}")]
    Format(String),
    #[error("manifest error: {0}")]
    Manifest(String),
    #[error("no record was processed successfully ({skipped} skipped)")]
    NoSuccessfulRecords { skipped: usize },
    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        source: image::ImageError,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-readable name, used for `skipped_reason` columns.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyMask => "EmptyMask",
            Error::WindowTooLarge { .. } => "WindowTooLarge",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::LengthMismatch(..) => "LengthMismatch",
            Error::EmptyList => "EmptyList",
            Error::Undefined(_) => "Undefined",
            Error::ChannelMismatch { .. } => "ChannelMismatch",
            Error::DegenerateObject => "DegenerateObject",
            Error::TooFewSamples { .. } => "TooFewSamples",
            Error::InsufficientPixels { .. } => "InsufficientPixels",
            Error::InsufficientTextures(_) => "InsufficientTextures",
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::Format(_) => "FormatError",
            Error::Manifest(_) => "ManifestError",
            Error::NoSuccessfulRecords { .. } => "NoSuccessfulRecords",
            Error::Image { .. } => "ImageError",
            Error::Io(_) => "IoError",
            Error::Json(_) => "JsonError",
            Error::Csv(_) => "CsvError",
        }
    }
}
