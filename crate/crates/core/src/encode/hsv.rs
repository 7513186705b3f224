use rayon::prelude::*;

use super::{magnitude_byte, magnitude_scale, quantize_unit, EncodedImage};
use crate::encode::NormalizationPolicy;
use crate::flow::field::angle_degrees;
use crate::flow::FlowField;

/// Conventional flow visualization: hue from direction, value from
/// normalized magnitude, full saturation. Output is RGB.
///
/// The hue byte holds `angle / 2`, so the full circle spans `0..180`.
pub fn encode_hsv(flow: &FlowField, norm: &NormalizationPolicy) -> EncodedImage {
    let mut out = EncodedImage::empty();
    encode_hsv_into(flow, norm, &mut out);
    out
}

/// [`encode_hsv`] into an existing image, reusing its buffer.
pub fn encode_hsv_into(flow: &FlowField, norm: &NormalizationPolicy, out: &mut EncodedImage) {
    let scale = magnitude_scale(flow.u(), flow.v(), norm);
    let w = flow.width();
    out.reshape(w, flow.height());
    out.data_mut()
        .par_chunks_mut(3 * w)
        .enumerate()
        .for_each(|(y, row)| {
            let span = y * w..(y + 1) * w;
            let (us, vs) = (&flow.u()[span.clone()], &flow.v()[span]);
            for ((px, &u), &v) in row.chunks_exact_mut(3).zip(us).zip(vs) {
                let hue = (angle_degrees(u, v) / 2.0).round_ties_even() as u8;
                px.copy_from_slice(&hsv_to_rgb(hue, 255, magnitude_byte(u, v, scale)));
            }
        });
}

/// 8-bit HSV (hue in `0..=180`, i.e. degrees / 2) to 8-bit RGB with the
/// standard six-sector formula.
pub fn hsv_to_rgb(hue: u8, saturation: u8, value: u8) -> [u8; 3] {
    let h = (hue as f64 * 2.0) % 360.0;
    let s = saturation as f64 / 255.0;
    let v = value as f64 / 255.0;
    let hh = h / 60.0;
    let sector = hh.floor();
    let f = hh - sector;
    let p = v * (1.0 - s);
    let q = v * (1.0 - s * f);
    let t = v * (1.0 - s * (1.0 - f));
    let (r, g, b) = match sector as u32 {
        0 => (v, t, p),
        1 => (q, v, p),
        2 => (p, v, t),
        3 => (p, q, v),
        4 => (t, p, v),
        _ => (v, p, q),
    };
    let byte = |c: f64| quantize_unit(c);
    [byte(r), byte(g), byte(b)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_flow_is_black_for_any_policy() {
        for norm in [
            NormalizationPolicy::PerFrameMax,
            NormalizationPolicy::FixedScale(0.5),
        ] {
            let img = encode_hsv(&FlowField::zeros(4, 3), &norm);
            assert!(img.data().iter().all(|&b| b == 0));
        }
    }

    #[test]
    fn uniform_rightward_is_red() {
        let img = encode_hsv(
            &FlowField::uniform(5, 4, 1.0, 0.0),
            &NormalizationPolicy::PerFrameMax,
        );
        for y in 0..4 {
            for x in 0..5 {
                assert_eq!(img.pixel(x, y), [255, 0, 0]);
            }
        }
    }

    #[test]
    fn uniform_downward_hue_90() {
        let img = encode_hsv(
            &FlowField::uniform(2, 2, 0.0, 1.0),
            &NormalizationPolicy::PerFrameMax,
        );
        // Sector 1 with f = 0.5: (q, v, p) = (0.5, 1, 0).
        assert_eq!(img.pixel(1, 1), [128, 255, 0]);
    }

    #[test]
    fn primary_hues() {
        assert_eq!(hsv_to_rgb(0, 255, 255), [255, 0, 0]);
        assert_eq!(hsv_to_rgb(60, 255, 255), [0, 255, 0]);
        assert_eq!(hsv_to_rgb(120, 255, 255), [0, 0, 255]);
        assert_eq!(hsv_to_rgb(180, 255, 255), [255, 0, 0]);
        assert_eq!(hsv_to_rgb(37, 0, 200), [200, 200, 200]);
    }
}
