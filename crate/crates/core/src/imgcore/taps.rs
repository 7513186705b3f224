//! Fused multi-tap row loops. Every variant accumulates
//! `0 + w0 a0 + w1 a1 + ...` in tap order, so the specialized and generic
//! paths agree bit for bit.

/// `out[x] = sum_k weights[k] * src[x + k]`; `src` holds
/// `out.len() + weights.len() - 1` samples.
pub(crate) fn correlate(src: &[f64], weights: &[f64], out: &mut [f64]) {
    debug_assert_eq!(src.len() + 1, out.len() + weights.len());
    match weights.len() {
        3 => correlate_n::<3>(src, weights.try_into().unwrap(), out),
        5 => correlate_n::<5>(src, weights.try_into().unwrap(), out),
        7 => correlate_n::<7>(src, weights.try_into().unwrap(), out),
        9 => correlate_n::<9>(src, weights.try_into().unwrap(), out),
        _ => {
            out.iter_mut().for_each(|o| *o = 0.0);
            let w = out.len();
            for (k, &wk) in weights.iter().enumerate() {
                for (o, s) in out.iter_mut().zip(&src[k..k + w]) {
                    *o += wk * s;
                }
            }
        }
    }
}

#[inline]
fn correlate_n<const N: usize>(src: &[f64], weights: &[f64; N], out: &mut [f64]) {
    for (x, o) in out.iter_mut().enumerate() {
        let window: &[f64; N] = src[x..x + N].try_into().unwrap();
        let mut acc = 0.0;
        for k in 0..N {
            acc += weights[k] * window[k];
        }
        *o = acc;
    }
}

/// `out[x] = sum_k taps[k].1 * taps[k].0[x]`.
pub(crate) fn weighted_rows(taps: &[(&[f64], f64)], out: &mut [f64]) {
    match taps.len() {
        2 => weighted_rows_n::<2>(taps.try_into().unwrap(), out),
        3 => weighted_rows_n::<3>(taps.try_into().unwrap(), out),
        4 => weighted_rows_n::<4>(taps.try_into().unwrap(), out),
        5 => weighted_rows_n::<5>(taps.try_into().unwrap(), out),
        7 => weighted_rows_n::<7>(taps.try_into().unwrap(), out),
        _ => {
            out.iter_mut().for_each(|o| *o = 0.0);
            for &(row, c) in taps {
                for (o, s) in out.iter_mut().zip(row) {
                    *o += c * s;
                }
            }
        }
    }
}

#[inline]
fn weighted_rows_n<const N: usize>(taps: &[(&[f64], f64); N], out: &mut [f64]) {
    let w = out.len();
    let rows: [&[f64]; N] = std::array::from_fn(|k| &taps[k].0[..w]);
    let coef: [f64; N] = std::array::from_fn(|k| taps[k].1);
    for (x, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for k in 0..N {
            acc += coef[k] * rows[k][x];
        }
        *o = acc;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic_correlate(src: &[f64], weights: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (k, &wk) in weights.iter().enumerate() {
            for (o, s) in out.iter_mut().zip(&src[k..]) {
                *o += wk * s;
            }
        }
    }

    #[test]
    fn specialized_paths_match_generic_bitwise() {
        let src: Vec<f64> = (0..40)
            .map(|i| ((i * 37 % 23) as f64).sin() * 1e3)
            .collect();
        for n in 1..=11 {
            let weights: Vec<f64> = (0..n).map(|k| 0.1 + k as f64 * 0.37).collect();
            let w = src.len() + 1 - n;
            let (mut a, mut b) = (vec![0.0; w], vec![0.0; w]);
            correlate(&src, &weights, &mut a);
            generic_correlate(&src, &weights, &mut b);
            assert_eq!(a, b, "taps {n}");

            let rows: Vec<Vec<f64>> = (0..n).map(|k| src[k..k + 20].to_vec()).collect();
            let taps: Vec<(&[f64], f64)> = rows
                .iter()
                .map(|r| r.as_slice())
                .zip(weights.iter().copied())
                .collect();
            let mut c = vec![0.0; 20];
            weighted_rows(&taps, &mut c);
            let mut d = vec![0.0; 20];
            for (row, wk) in &taps {
                for (o, s) in d.iter_mut().zip(row.iter()) {
                    *o += wk * s;
                }
            }
            assert_eq!(c, d, "rows {n}");
        }
    }
}
