use serde::{Deserialize, Serialize};

use super::{correlate, par_rows, weighted_rows, BorderPolicy, Frame, PaddedRow};
use crate::error::{Error, Result};

/// Discrete Gaussian smoothing parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianSpec {
    pub sigma: f64,
    pub radius: usize,
}

impl GaussianSpec {
    /// Radius defaults to `ceil(3 * sigma)`.
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidSigma(sigma));
        }
        Ok(Self {
            sigma,
            radius: (3.0 * sigma).ceil() as usize,
        })
    }

    pub fn with_radius(sigma: f64, radius: usize) -> Result<Self> {
        Ok(Self {
            radius,
            ..Self::new(sigma)?
        })
    }

    /// Normalized 1-D taps, `2 * radius + 1` long.
    pub fn weights(&self) -> Vec<f64> {
        let r = self.radius as isize;
        let denom = 2.0 * self.sigma * self.sigma;
        let raw: Vec<f64> = (-r..=r)
            .map(|i| (-((i * i) as f64) / denom).exp())
            .collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|v| v / total).collect()
    }
}

/// Separable Gaussian blur: a horizontal pass followed by a vertical pass.
pub fn gaussian_blur(frame: &Frame, spec: &GaussianSpec, border: BorderPolicy) -> Result<Frame> {
    if !(spec.sigma > 0.0 && spec.sigma.is_finite()) {
        return Err(Error::InvalidSigma(spec.sigma));
    }
    let weights = spec.weights();
    let (w, h) = frame.dims();
    let horizontal = blur_rows(frame.data(), w, h, &weights, border);
    let data = blur_cols(&horizontal, w, h, &weights, border);
    Ok(Frame::from_parts(w, h, data))
}

pub(crate) fn blur_rows(
    src: &[f64],
    w: usize,
    h: usize,
    weights: &[f64],
    border: BorderPolicy,
) -> Vec<f64> {
    let r = weights.len() / 2;
    par_rows(w, h, |y, out| {
        let mut padded = PaddedRow::new(w, r);
        padded.load(Some(&src[y * w..(y + 1) * w]), border);
        correlate(padded.padded(), weights, out);
    })
}

pub(crate) fn blur_cols(
    src: &[f64],
    w: usize,
    h: usize,
    weights: &[f64],
    border: BorderPolicy,
) -> Vec<f64> {
    let r = weights.len() / 2;
    par_rows(w, h, |y, out| {
        let taps: Vec<(&[f64], f64)> = weights
            .iter()
            .enumerate()
            .filter_map(|(k, &wk)| {
                let sy = border.resolve(y as isize + k as isize - r as isize, h)?;
                Some((&src[sy * w..(sy + 1) * w], wk))
            })
            .collect();
        weighted_rows(&taps, out);
    })
}
