use serde::{Deserialize, Serialize};

use super::FlowField;
use crate::error::{check_same_dims, Result};
use crate::imgcore::{
    apply_kernel3, correlate, par_bands2_into, weighted_rows, BorderPolicy, Frame, GaussianSpec,
    Kernel3, PaddedRow, RowRing,
};

/// Parameters of the Reynolds flow smoothing stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReynoldsConfig {
    /// Standard deviation of the final Gaussian smoothing, in pixels.
    pub sigma: f64,
    pub border: BorderPolicy,
}

impl Default for ReynoldsConfig {
    fn default() -> Self {
        Self {
            sigma: 1.0,
            border: BorderPolicy::Replicate,
        }
    }
}

/// Simpson-rule boundary flux terms `((dfb)_x, (dfb)_y)` of a frame difference.
pub fn boundary_terms(delta: &Frame, border: BorderPolicy) -> Result<(Frame, Frame)> {
    Ok((
        apply_kernel3(delta, &Kernel3::simpson_x(), border)?,
        apply_kernel3(delta, &Kernel3::simpson_y(), border)?,
    ))
}

/// Domain terms: the Sobel response of the difference, then an unnormalized
/// 3x3 box aggregation.
pub fn domain_terms(delta: &Frame, border: BorderPolicy) -> Result<(Frame, Frame)> {
    let sx = apply_kernel3(delta, &Kernel3::sobel_x(), border)?;
    let sy = apply_kernel3(delta, &Kernel3::sobel_y(), border)?;
    Ok((
        apply_kernel3(&sx, &Kernel3::box_ones(), border)?,
        apply_kernel3(&sy, &Kernel3::box_ones(), border)?,
    ))
}

/// Reynolds flow of a frame difference:
///
/// ```text
/// u = G * (-(dfb)_y + (grad df_w)_y)
/// v = G * ( (dfb)_x - (grad df_w)_x)
/// ```
///
/// with the boundary terms from [`boundary_terms`], the domain terms from
/// [`domain_terms`], and `G` a Gaussian of the configured sigma. The result
/// equals that composition (up to rounding) under every border policy.
pub fn reynolds_flow(delta: &Frame, config: &ReynoldsConfig) -> Result<FlowField> {
    delta.ensure_stencil_size()?;
    let mut out = FlowField::empty();
    streamed(DeltaSource::Delta(delta), delta.dims(), config, &mut out)?;
    Ok(out)
}

/// [`reynolds_flow`] of `next - current` without materializing the
/// difference frame.
pub fn reynolds_flow_pair(
    current: &Frame,
    next: &Frame,
    config: &ReynoldsConfig,
) -> Result<FlowField> {
    let mut out = FlowField::empty();
    reynolds_flow_pair_into(current, next, config, &mut out)?;
    Ok(out)
}

/// [`reynolds_flow_pair`] into an existing field, reusing its buffers.
pub fn reynolds_flow_pair_into(
    current: &Frame,
    next: &Frame,
    config: &ReynoldsConfig,
    out: &mut FlowField,
) -> Result<()> {
    check_same_dims(current.dims(), next.dims())?;
    current.ensure_stencil_size()?;
    streamed(
        DeltaSource::Pair(current, next),
        current.dims(),
        config,
        out,
    )
}

enum DeltaSource<'a> {
    Delta(&'a Frame),
    Pair(&'a Frame, &'a Frame),
}

impl DeltaSource<'_> {
    fn row_into(&self, y: usize, out: &mut [f64]) {
        match self {
            DeltaSource::Delta(d) => out.copy_from_slice(d.row(y)),
            DeltaSource::Pair(c, n) => {
                for ((o, a), b) in out.iter_mut().zip(c.row(y)).zip(n.row(y)) {
                    *o = b - a;
                }
            }
        }
    }
}

// Every stencil factors into a vertical and a horizontal 3-tap pass:
//   simpson_x = (1/3) [1, 0, -1]^T (x) [1, 4, 1]
//   simpson_y = (1/3) [1, 4, 1]^T  (x) [-1, 0, 1]
//   sobel_x   = [1, 2, 1]^T  (x) [-1, 0, 1]
//   sobel_y   = [-1, 0, 1]^T (x) [1, 2, 1]
// The box stage is a 3-tap sum on each axis. Applying each 3-tap pass with
// its own border lookup reproduces the two-stage composition exactly,
// rims included.
const DIFF: [f64; 3] = [-1.0, 0.0, 1.0];
const SIMPSON: [f64; 3] = [1.0, 4.0, 1.0];
const SMOOTH: [f64; 3] = [1.0, 2.0, 1.0];
const BOX: [f64; 3] = [1.0, 1.0, 1.0];

// Channels of the per-row horizontal factor cache.
const H_DIFF: usize = 0;
const H_SIMPSON: usize = 1;
const H_BOX_DIFF: usize = 2;
const H_BOX_SMOOTH: usize = 3;

fn streamed(
    src: DeltaSource<'_>,
    (w, h): (usize, usize),
    config: &ReynoldsConfig,
    out: &mut FlowField,
) -> Result<()> {
    let spec = GaussianSpec::new(config.sigma)?;
    let weights = spec.weights();
    let radius = weights.len() / 2;
    let border = config.border;

    out.reshape(w, h);
    let (u, v) = out.parts_mut();
    par_bands2_into(w, u, v, |y0, u_band, v_band| {
        let mut factors = RowRing::new(5, 4, w);
        let mut blurred = RowRing::new(2 * radius + 1, 2, w);
        let mut scratch = Scratch::new(w, radius);
        for (i, (u_row, v_row)) in u_band.chunks_mut(w).zip(v_band.chunks_mut(w)).enumerate() {
            let y = y0 + i;
            let taps: Vec<(f64, usize)> = weights
                .iter()
                .enumerate()
                .filter_map(|(k, &wk)| {
                    border
                        .resolve(y as isize + k as isize - radius as isize, h)
                        .map(|sy| (wk, sy))
                })
                .collect();
            for &(_, sy) in &taps {
                blurred.ensure(sy, |dst| {
                    scratch.pre_smoothed(&src, &mut factors, sy, w, h, border, &weights, dst)
                });
            }
            let rows: Vec<(&[f64], f64)> =
                taps.iter().map(|&(wk, sy)| (blurred.get(sy), wk)).collect();
            weighted_rows_split(&rows, w, u_row, v_row);
        }
    });
    Ok(())
}

struct Scratch {
    delta: Vec<f64>,
    stage: Vec<f64>,
    pad1: PaddedRow,
    pad_blur: PaddedRow,
    acc: [Vec<f64>; 4],
}

impl Scratch {
    fn new(w: usize, radius: usize) -> Self {
        Self {
            delta: vec![0.0; w],
            stage: vec![0.0; w],
            pad1: PaddedRow::new(w, 1),
            pad_blur: PaddedRow::new(w, radius),
            acc: std::array::from_fn(|_| vec![0.0; w]),
        }
    }

    /// Horizontal factor rows of delta row `y`, one per channel of `dst`.
    fn factor_rows(
        &mut self,
        src: &DeltaSource<'_>,
        y: usize,
        w: usize,
        border: BorderPolicy,
        dst: &mut [f64],
    ) {
        src.row_into(y, &mut self.delta);
        self.pad1.load(Some(&self.delta), border);
        let (diff, rest) = dst.split_at_mut(w);
        let (simpson, rest) = rest.split_at_mut(w);
        let (box_diff, box_smooth) = rest.split_at_mut(w);
        let p = self.pad1.padded();
        for x in 0..w {
            let (a, b, c) = (p[x], p[x + 1], p[x + 2]);
            diff[x] = -a + c;
            simpson[x] = a + 4.0 * b + c;
            self.stage[x] = a + 2.0 * b + c;
        }
        self.pad1.load(Some(diff), border);
        correlate(self.pad1.padded(), &BOX, box_diff);
        self.pad1.load(Some(&self.stage), border);
        correlate(self.pad1.padded(), &BOX, box_smooth);
    }

    /// Horizontally blurred `(u, v)` pre-smoothing rows for row `p`, written
    /// as two channels of `dst`.
    #[allow(clippy::too_many_arguments)]
    fn pre_smoothed(
        &mut self,
        src: &DeltaSource<'_>,
        factors: &mut RowRing,
        p: usize,
        w: usize,
        h: usize,
        border: BorderPolicy,
        weights: &[f64],
        dst: &mut [f64],
    ) {
        let simpson_x = vertical_taps(p, h, border, &[1.0, 0.0, -1.0], None);
        let simpson_y = vertical_taps(p, h, border, &SIMPSON, None);
        let domain_x = vertical_taps(p, h, border, &SMOOTH, Some(&BOX));
        let domain_y = vertical_taps(p, h, border, &DIFF, Some(&BOX));
        let third = 1.0 / 3.0;
        for list in [&simpson_x, &simpson_y, &domain_x, &domain_y] {
            for &(row, _) in list.iter() {
                factors.ensure(row, |d| self.factor_rows(src, row, w, border, d));
            }
        }
        if p >= 2 && p + 2 < h {
            // Interior rows: the taps are fixed, so combine in one pass.
            let f = |row: usize, ch: usize| &factors.get(row)[ch * w..(ch + 1) * w];
            let (d0, d1, d2) = (f(p - 1, H_DIFF), f(p, H_DIFF), f(p + 1, H_DIFF));
            let (s0, s2) = (f(p - 1, H_SIMPSON), f(p + 1, H_SIMPSON));
            let (b0, b1, b2, b3, b4) = (
                f(p - 2, H_BOX_DIFF),
                f(p - 1, H_BOX_DIFF),
                f(p, H_BOX_DIFF),
                f(p + 1, H_BOX_DIFF),
                f(p + 2, H_BOX_DIFF),
            );
            let (m0, m1, m3, m4) = (
                f(p - 2, H_BOX_SMOOTH),
                f(p - 1, H_BOX_SMOOTH),
                f(p + 1, H_BOX_SMOOTH),
                f(p + 2, H_BOX_SMOOTH),
            );
            let (u_pre, v_pre) = (&mut self.delta[..w], &mut self.stage[..w]);
            for x in 0..w {
                let simpson_y = d0[x] + 4.0 * d1[x] + d2[x];
                let simpson_x = s0[x] - s2[x];
                let domain_x = b0[x] + 3.0 * b1[x] + 4.0 * b2[x] + 3.0 * b3[x] + b4[x];
                let domain_y = -m0[x] - m1[x] + m3[x] + m4[x];
                u_pre[x] = -(simpson_y * third) + domain_y;
                v_pre[x] = simpson_x * third - domain_x;
            }
        } else {
            let sums = [
                (&simpson_x, H_SIMPSON),
                (&simpson_y, H_DIFF),
                (&domain_x, H_BOX_DIFF),
                (&domain_y, H_BOX_SMOOTH),
            ];
            for (acc, (list, channel)) in self.acc.iter_mut().zip(sums) {
                let taps: Vec<(&[f64], f64)> = list
                    .iter()
                    .map(|&(row, c)| (&factors.get(row)[channel * w..(channel + 1) * w], c))
                    .collect();
                weighted_rows(&taps, acc);
            }
            let [sx, sy, dx, dy] = &self.acc;
            for x in 0..w {
                self.delta[x] = -(sy[x] * third) + dy[x];
                self.stage[x] = sx[x] * third - dx[x];
            }
        }
        let (u_out, v_out) = dst.split_at_mut(w);
        self.pad_blur.load(Some(&self.delta), border);
        correlate(self.pad_blur.padded(), weights, u_out);
        self.pad_blur.load(Some(&self.stage), border);
        correlate(self.pad_blur.padded(), weights, v_out);
    }
}

/// Row weights of a vertical 3-tap pass (optionally preceded by a second
/// 3-tap pass on its output) centred on row `p`, each stage resolving rows
/// with `border`. Weights on the same row are merged; zeros are dropped.
fn vertical_taps(
    p: usize,
    h: usize,
    border: BorderPolicy,
    inner: &[f64; 3],
    outer: Option<&[f64; 3]>,
) -> Vec<(usize, f64)> {
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(5);
    let mut add = |row: usize, c: f64| match out.iter_mut().find(|(r, _)| *r == row) {
        Some((_, w)) => *w += c,
        None => out.push((row, c)),
    };
    let centres: Vec<(usize, f64)> = match outer {
        None => vec![(p, 1.0)],
        Some(o) => (0..3)
            .filter_map(|j| {
                border
                    .resolve(p as isize + j as isize - 1, h)
                    .map(|q| (q, o[j]))
            })
            .collect(),
    };
    for (q, oc) in centres {
        for (j, &c) in inner.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if let Some(row) = border.resolve(q as isize + j as isize - 1, h) {
                add(row, oc * c);
            }
        }
    }
    out.retain(|&(_, c)| c != 0.0);
    out.sort_by_key(|&(r, _)| r);
    out
}

/// [`weighted_rows`] over rows that hold the `u` channel followed by the
/// `v` channel.
fn weighted_rows_split(rows: &[(&[f64], f64)], w: usize, u: &mut [f64], v: &mut [f64]) {
    let us: Vec<(&[f64], f64)> = rows.iter().map(|&(r, c)| (&r[..w], c)).collect();
    let vs: Vec<(&[f64], f64)> = rows.iter().map(|&(r, c)| (&r[w..], c)).collect();
    weighted_rows(&us, u);
    weighted_rows(&vs, v);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imgcore::{frame_delta, gaussian_blur};

    fn composed(delta: &Frame, config: &ReynoldsConfig) -> FlowField {
        let border = config.border;
        let (bx, by) = boundary_terms(delta, border).unwrap();
        let (dx, dy) = domain_terms(delta, border).unwrap();
        let (w, h) = delta.dims();
        let u_pre = Frame::from_fn(w, h, |x, y| -by.get(x, y) + dy.get(x, y));
        let v_pre = Frame::from_fn(w, h, |x, y| bx.get(x, y) - dx.get(x, y));
        let spec = GaussianSpec::new(config.sigma).unwrap();
        let u = gaussian_blur(&u_pre, &spec, border).unwrap();
        let v = gaussian_blur(&v_pre, &spec, border).unwrap();
        FlowField::new(w, h, u.into_data(), v.into_data()).unwrap()
    }

    fn pseudo_random(w: usize, h: usize, seed: u64) -> Frame {
        let mut state = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let data = (0..w * h)
            .map(|_| {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                ((state >> 33) % 2001) as f64 / 10.0 - 100.0
            })
            .collect();
        Frame::new(w, h, data).unwrap()
    }

    #[test]
    fn streamed_matches_composition_for_all_borders_and_sizes() {
        let sizes = [(3, 3), (3, 7), (4, 5), (5, 5), (6, 4), (9, 40), (37, 70)];
        for (n, &(w, h)) in sizes.iter().enumerate() {
            let delta = pseudo_random(w, h, n as u64);
            for border in [
                BorderPolicy::Replicate,
                BorderPolicy::Reflect,
                BorderPolicy::Zero,
            ] {
                for sigma in [0.5, 1.0, 2.0] {
                    let config = ReynoldsConfig { sigma, border };
                    let fast = reynolds_flow(&delta, &config).unwrap();
                    let slow = composed(&delta, &config);
                    let diff = fast
                        .u()
                        .iter()
                        .chain(fast.v())
                        .zip(slow.u().iter().chain(slow.v()))
                        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                    assert!(diff < 1e-9, "{w}x{h} {border} sigma {sigma}: {diff}");
                }
            }
        }
    }

    #[test]
    fn pair_entry_matches_delta_entry() {
        let a = pseudo_random(17, 11, 3);
        let b = pseudo_random(17, 11, 4);
        let config = ReynoldsConfig::default();
        let from_delta = reynolds_flow(&frame_delta(&a, &b).unwrap(), &config).unwrap();
        assert_eq!(reynolds_flow_pair(&a, &b, &config).unwrap(), from_delta);
    }

    #[test]
    fn vertical_taps_interior_and_rims() {
        let r = BorderPolicy::Replicate;
        assert_eq!(
            vertical_taps(5, 20, r, &SMOOTH, Some(&BOX)),
            vec![(3, 1.0), (4, 3.0), (5, 4.0), (6, 3.0), (7, 1.0)]
        );
        assert_eq!(
            vertical_taps(5, 20, r, &DIFF, Some(&BOX)),
            vec![(3, -1.0), (4, -1.0), (6, 1.0), (7, 1.0)]
        );
        assert_eq!(
            vertical_taps(0, 20, BorderPolicy::Zero, &SIMPSON, None),
            vec![(0, 4.0), (1, 1.0)]
        );
        assert_eq!(
            vertical_taps(0, 20, r, &SIMPSON, None),
            vec![(0, 5.0), (1, 1.0)]
        );
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(reynolds_flow(&Frame::zeros(2, 5), &ReynoldsConfig::default()).is_err());
        let bad = ReynoldsConfig {
            sigma: 0.0,
            ..ReynoldsConfig::default()
        };
        assert!(reynolds_flow(&Frame::zeros(5, 5), &bad).is_err());
        assert!(reynolds_flow_pair(
            &Frame::zeros(5, 5),
            &Frame::zeros(5, 6),
            &ReynoldsConfig::default()
        )
        .is_err());
    }
}
