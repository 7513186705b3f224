use rayon::prelude::*;

use super::{intensity_byte, magnitude_byte, magnitude_scale, EncodedImage, NormalizationPolicy};
use crate::error::{check_same_dims, Result};
use crate::flow::FlowField;
use crate::imgcore::Frame;

/// Magnitude stack: R = normalized `|v_o|`, G = normalized `|v_r|`, B = the
/// frame intensity clamped to `[0, 255]`.
///
/// The two magnitudes are normalized independently. Directions are never
/// computed.
pub fn encode_plus(
    optical: &FlowField,
    reynolds: &FlowField,
    frame: &Frame,
    norm: &NormalizationPolicy,
) -> Result<EncodedImage> {
    let mut out = EncodedImage::empty();
    encode_plus_into(optical, reynolds, frame, norm, &mut out)?;
    Ok(out)
}

/// [`encode_plus`] into an existing image, reusing its buffer.
pub fn encode_plus_into(
    optical: &FlowField,
    reynolds: &FlowField,
    frame: &Frame,
    norm: &NormalizationPolicy,
    out: &mut EncodedImage,
) -> Result<()> {
    check_same_dims(optical.dims(), reynolds.dims())?;
    check_same_dims(optical.dims(), frame.dims())?;
    let red_scale = magnitude_scale(optical.u(), optical.v(), norm);
    let green_scale = magnitude_scale(reynolds.u(), reynolds.v(), norm);
    let w = frame.width();
    out.reshape(w, frame.height());
    out.data_mut()
        .par_chunks_mut(3 * w)
        .enumerate()
        .for_each_init(
            || [vec![0u8; w], vec![0u8; w], vec![0u8; w]],
            |channels, (y, row)| {
                let span = y * w..(y + 1) * w;
                let [red, green, blue] = channels;
                magnitude_row(
                    &optical.u()[span.clone()],
                    &optical.v()[span.clone()],
                    red_scale,
                    red,
                );
                magnitude_row(
                    &reynolds.u()[span.clone()],
                    &reynolds.v()[span.clone()],
                    green_scale,
                    green,
                );
                for (b, &f) in blue.iter_mut().zip(&frame.data()[span]) {
                    *b = intensity_byte(f);
                }
                for (x, px) in row.chunks_exact_mut(3).enumerate() {
                    px.copy_from_slice(&[red[x], green[x], blue[x]]);
                }
            },
        );
    Ok(())
}

fn magnitude_row(u: &[f64], v: &[f64], scale: f64, out: &mut [u8]) {
    for ((o, &a), &b) in out.iter_mut().zip(u).zip(v) {
        *o = magnitude_byte(a, b, scale);
    }
}
