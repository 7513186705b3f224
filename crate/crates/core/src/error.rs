use std::io;

use thiserror::Error;

/// Errors produced anywhere in the flow pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("image is {width}x{height}; stencil operations need at least 3x3")]
    TooSmall { width: usize, height: usize },

    #[error(
        "dimension mismatch: expected {expected_width}x{expected_height}, got {width}x{height}"
    )]
    DimensionMismatch {
        expected_width: usize,
        expected_height: usize,
        width: usize,
        height: usize,
    },

    #[error("buffer holds {len} values but {width}x{height}x{channels} were expected")]
    BadLength {
        len: usize,
        width: usize,
        height: usize,
        channels: usize,
    },

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("expected a 3-channel image, got {0} channel(s)")]
    ChannelCount(usize),

    #[error("gaussian sigma must be positive and finite, got {0}")]
    InvalidSigma(f64),

    #[error("window must be odd and at least 3, got {0}")]
    InvalidWindow(usize),

    #[error("window {window} does not fit in a {width}x{height} frame")]
    WindowTooLarge {
        window: usize,
        width: usize,
        height: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("bad .flo magic {0}; expected 202021.25")]
    BadMagic(f32),

    #[error(".flo payload truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },

    #[error("non-positive .flo dimensions {width}x{height}")]
    InvalidDimensions { width: i64, height: i64 },

    #[error("invalid sequence spec: {0}")]
    InvalidSpec(String),

    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("need at least {needed} frames, got {found}")]
    NotEnoughFrames { needed: usize, found: usize },

    #[error("validity mask selects no pixels")]
    EmptyMask,

    #[error("unsupported image layout: {0}")]
    UnsupportedImage(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Image(#[from] image::ImageError),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_same_dims(expected: (usize, usize), found: (usize, usize)) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch {
            expected_width: expected.0,
            expected_height: expected.1,
            width: found.0,
            height: found.1,
        });
    }
    Ok(())
}
