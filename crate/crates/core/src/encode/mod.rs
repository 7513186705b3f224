//! Color encodings of flow fields and the on-disk interchange formats.

mod flo;
mod hsv;
mod plus;
mod png;
pub mod sidecar;

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

pub use flo::{read_flo, read_flo_file, write_flo, write_flo_file, FLO_MAGIC};
pub use hsv::{encode_hsv, encode_hsv_into, hsv_to_rgb};
pub use plus::{encode_plus, encode_plus_into};
pub use png::{read_png_rgb, write_png, write_png_file, PngImage};

use crate::error::{Error, Result};

/// Three-channel 8-bit image, interleaved RGB, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl EncodedImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || data.len() != width * height * 3 {
            return Err(Error::BadLength {
                len: data.len(),
                width,
                height,
                channels: 3,
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// A 0x0 image, for use as a reusable output buffer.
    pub(crate) fn empty() -> Self {
        Self {
            width: 0,
            height: 0,
            data: Vec::new(),
        }
    }

    /// Resize keeping the allocation. Contents are unspecified afterwards.
    pub(crate) fn reshape(&mut self, width: usize, height: usize) {
        self.width = width;
        self.height = height;
        self.data.resize(width * height * 3, 0);
    }

    pub(crate) fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = 3 * (y * self.width + x);
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    /// One channel (0 = R, 1 = G, 2 = B) as a plane.
    pub fn channel(&self, c: usize) -> Vec<u8> {
        self.data.iter().skip(c).step_by(3).copied().collect()
    }
}

/// How flow magnitudes are mapped onto `[0, 1]` before quantization.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum NormalizationPolicy {
    /// Divide by the largest magnitude in the frame (at least 1e-8).
    #[default]
    PerFrameMax,
    /// Divide by a fixed scale, then clamp to `[0, 1]`.
    FixedScale(f64),
}

const PER_FRAME_EPS: f64 = 1e-8;

impl NormalizationPolicy {
    pub fn validate(&self) -> Result<()> {
        match *self {
            NormalizationPolicy::FixedScale(s) if !(s > 0.0 && s.is_finite()) => {
                Err(Error::InvalidParameter(format!(
                    "fixed normalization scale must be positive, got {s}"
                )))
            }
            _ => Ok(()),
        }
    }

    /// Divisor for a field whose largest magnitude is `max_magnitude`.
    pub(crate) fn divisor(&self, max_magnitude: f64) -> f64 {
        match *self {
            NormalizationPolicy::PerFrameMax => max_magnitude.max(PER_FRAME_EPS),
            NormalizationPolicy::FixedScale(s) => s,
        }
    }
}

impl fmt::Display for NormalizationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalizationPolicy::PerFrameMax => f.write_str("per-frame"),
            NormalizationPolicy::FixedScale(s) => write!(f, "fixed:{s}"),
        }
    }
}

impl FromStr for NormalizationPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if matches!(s, "per-frame" | "per_frame" | "per_frame_max") {
            return Ok(NormalizationPolicy::PerFrameMax);
        }
        if let Some(scale) = s.strip_prefix("fixed:") {
            let scale: f64 = scale
                .parse()
                .map_err(|_| format!("bad fixed normalization scale '{scale}'"))?;
            let policy = NormalizationPolicy::FixedScale(scale);
            policy.validate().map_err(|e| e.to_string())?;
            return Ok(policy);
        }
        Err(format!(
            "unknown normalization '{s}' (per-frame|fixed:<scale>)"
        ))
    }
}

impl TryFrom<String> for NormalizationPolicy {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<NormalizationPolicy> for String {
    fn from(p: NormalizationPolicy) -> String {
        p.to_string()
    }
}

/// `[0, 1]` to a byte, rounding half to even.
#[inline]
pub(crate) fn quantize_unit(x: f64) -> u8 {
    round_small(x.clamp(0.0, 1.0) * 255.0) as u8
}

/// Intensity byte: clamp to `[0, 255]`, round half to even.
#[inline]
pub(crate) fn intensity_byte(f: f64) -> u8 {
    round_small(f.clamp(0.0, 255.0)) as u8
}

/// Round half to even for `0 <= x < 2^52`. Adding `2^52` leaves no
/// fractional bits, so the hardware rounding mode does the work.
#[inline]
fn round_small(x: f64) -> f64 {
    const SHIFT: f64 = 4_503_599_627_370_496.0;
    (x + SHIFT) - SHIFT
}

/// Reciprocal of the normalization divisor for one flow field.
pub(crate) fn magnitude_scale(u: &[f64], v: &[f64], norm: &NormalizationPolicy) -> f64 {
    // Four independent running maxima keep the loop vectorizable.
    let mut lanes = [0.0f64; 4];
    let (uc, vc) = (u.chunks_exact(4), v.chunks_exact(4));
    let tail = uc.remainder().iter().zip(vc.remainder());
    for (a, b) in uc.zip(vc) {
        for k in 0..4 {
            let m = a[k] * a[k] + b[k] * b[k];
            lanes[k] = if m > lanes[k] { m } else { lanes[k] };
        }
    }
    let max_sq = tail.fold(lanes.into_iter().fold(0.0, f64::max), |m, (a, b)| {
        m.max(a * a + b * b)
    });
    // sqrt is monotone and correctly rounded, so this is the largest magnitude.
    1.0 / norm.divisor(max_sq.sqrt())
}

#[inline]
pub(crate) fn magnitude_byte(u: f64, v: f64, scale: f64) -> u8 {
    quantize_unit((u * u + v * v).sqrt() * scale)
}

/// Normalized magnitude bytes for one flow field.
#[cfg(test)]
pub(crate) fn magnitude_bytes(u: &[f64], v: &[f64], norm: &NormalizationPolicy) -> Vec<u8> {
    let scale = magnitude_scale(u, v, norm);
    u.iter()
        .zip(v)
        .map(|(&a, &b)| magnitude_byte(a, b, scale))
        .collect()
}
