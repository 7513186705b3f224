use serde::{Deserialize, Serialize};

use super::FlowField;
use crate::error::{check_same_dims, Error, Result};
use crate::imgcore::{
    correlate, par_bands2_into, par_rows2, weighted_rows, BorderPolicy, Frame, PaddedRow, RowRing,
};

/// Windowed least-squares optical flow parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LkConfig {
    /// Odd side length of the aggregation window.
    pub window: usize,
    /// Pixels whose smaller structure-tensor eigenvalue falls below this get
    /// zero flow.
    pub eigen_threshold: f64,
}

impl Default for LkConfig {
    fn default() -> Self {
        Self {
            window: 3,
            eigen_threshold: 1e-4,
        }
    }
}

impl LkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window < 3 || self.window.is_multiple_of(2) {
            return Err(Error::InvalidWindow(self.window));
        }
        if !(self.eigen_threshold >= 0.0 && self.eigen_threshold.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "eigen threshold must be finite and >= 0, got {}",
                self.eigen_threshold
            )));
        }
        Ok(())
    }
}

/// Central-difference gradients `(f_x, f_y)` with replicated borders.
pub fn spatial_gradient(frame: &Frame) -> Result<(Frame, Frame)> {
    frame.ensure_stencil_size()?;
    let (w, h) = frame.dims();
    let (gx, gy) = par_rows2(w, h, |y, gx, gy| gradient_row(frame, y, gx, gy));
    Ok((Frame::from_parts(w, h, gx), Frame::from_parts(w, h, gy)))
}

#[inline]
fn gradient_row(frame: &Frame, y: usize, gx: &mut [f64], gy: &mut [f64]) {
    let (w, h) = frame.dims();
    let row = frame.row(y);
    gx[0] = (row[1] - row[0]) * 0.5;
    for x in 1..w - 1 {
        gx[x] = (row[x + 1] - row[x - 1]) * 0.5;
    }
    gx[w - 1] = (row[w - 1] - row[w - 2]) * 0.5;
    let above = frame.row(y.saturating_sub(1));
    let below = frame.row((y + 1).min(h - 1));
    for ((g, a), b) in gy.iter_mut().zip(above).zip(below) {
        *g = (b - a) * 0.5;
    }
}

/// Dense optical flow from the brightness-constancy least-squares system,
/// solved per pixel with an eigenvalue-thresholded pseudo-inverse.
///
/// Per pixel the window sums `A = sum [fx^2, fx fy; fx fy, fy^2]` and
/// `b = -sum [fx ft; fy ft]` are formed (replicated borders, `ft = next -
/// current`) and the flow is `A^+ b`.
pub fn lucas_kanade(current: &Frame, next: &Frame, config: &LkConfig) -> Result<FlowField> {
    let mut out = FlowField::empty();
    lucas_kanade_into(current, next, config, &mut out)?;
    Ok(out)
}

/// [`lucas_kanade`] into an existing field, reusing its buffers.
pub fn lucas_kanade_into(
    current: &Frame,
    next: &Frame,
    config: &LkConfig,
    out: &mut FlowField,
) -> Result<()> {
    config.validate()?;
    check_same_dims(current.dims(), next.dims())?;
    current.ensure_stencil_size()?;
    let (w, h) = current.dims();
    if config.window > w || config.window > h {
        return Err(Error::WindowTooLarge {
            window: config.window,
            width: w,
            height: h,
        });
    }
    let r = config.window / 2;
    let tau = config.eigen_threshold;

    out.reshape(w, h);
    let (u, v) = out.parts_mut();
    par_bands2_into(w, u, v, |y0, u_band, v_band| {
        let mut ring = RowRing::new(2 * r + 1, 5, w);
        let mut scratch = ProductScratch::new(w, r);
        let mut acc = vec![0.0; 5 * w];
        for (i, (u_row, v_row)) in u_band.chunks_mut(w).zip(v_band.chunks_mut(w)).enumerate() {
            let y = y0 + i;
            let rows = (y as isize - r as isize..=y as isize + r as isize)
                .map(|sy| sy.clamp(0, h as isize - 1) as usize);
            for sy in rows.clone() {
                ring.ensure(sy, |dst| scratch.fill(current, next, sy, dst));
            }
            let taps: Vec<(&[f64], f64)> = rows.map(|sy| (ring.get(sy), 1.0)).collect();
            weighted_rows(&taps, &mut acc);
            let (xx, rest) = acc.split_at(w);
            let (xy, rest) = rest.split_at(w);
            let (yy, rest) = rest.split_at(w);
            let (xt, yt) = rest.split_at(w);
            solve_row([xx, xy, yy, xt, yt], tau, u_row, v_row);
        }
    });
    Ok(())
}

/// Per-row buffers for the horizontally windowed gradient products.
struct ProductScratch {
    gx: Vec<f64>,
    gy: Vec<f64>,
    products: [PaddedRow; 5],
    ones: Vec<f64>,
}

impl ProductScratch {
    fn new(w: usize, radius: usize) -> Self {
        Self {
            gx: vec![0.0; w],
            gy: vec![0.0; w],
            products: std::array::from_fn(|_| PaddedRow::new(w, radius)),
            ones: vec![1.0; 2 * radius + 1],
        }
    }

    /// Writes the horizontal window sums of `fx fx, fx fy, fy fy, fx ft,
    /// fy ft` for row `y` into the five `w`-long channels of `dst`.
    fn fill(&mut self, current: &Frame, next: &Frame, y: usize, dst: &mut [f64]) {
        let w = self.gx.len();
        gradient_row(current, y, &mut self.gx, &mut self.gy);
        let [p0, p1, p2, p3, p4] = &mut self.products;
        let (xx, xy, yy) = (p0.interior_mut(), p1.interior_mut(), p2.interior_mut());
        let (xt, yt) = (p3.interior_mut(), p4.interior_mut());
        let (cur, nxt) = (current.row(y), next.row(y));
        for x in 0..w {
            let (gx, gy, ft) = (self.gx[x], self.gy[x], nxt[x] - cur[x]);
            xx[x] = gx * gx;
            xy[x] = gx * gy;
            yy[x] = gy * gy;
            xt[x] = gx * ft;
            yt[x] = gy * ft;
        }
        for (p, out) in self.products.iter_mut().zip(dst.chunks_mut(w)) {
            p.fill_margins(BorderPolicy::Replicate);
            correlate(p.padded(), &self.ones, out);
        }
    }
}

/// [`solve_tensor`] over a row of window sums `[xx, xy, yy, xt, yt]`
/// (`b = -(xt, yt)`). Full-rank pixels take a branch-free path with the
/// same arithmetic; the rest go through [`solve_tensor`].
fn solve_row(sums: [&[f64]; 5], tau: f64, u: &mut [f64], v: &mut [f64]) {
    let [xx, xy, yy, xt, yt] = sums;
    let w = u.len();
    let mut pending = false;
    for x in 0..w {
        let (a, b, c, bx, by) = (xx[x], xy[x], yy[x], -xt[x], -yt[x]);
        let lmin = smaller_eigenvalue(a, b, c);
        let det = a * c - b * b;
        let ok = lmin >= tau && lmin > 0.0 && det > 0.0;
        let inv = 1.0 / det;
        u[x] = if ok { (c * bx - b * by) * inv } else { 0.0 };
        v[x] = if ok { (a * by - b * bx) * inv } else { 0.0 };
        pending |= !ok && lmin >= tau;
    }
    if pending {
        for x in 0..w {
            let (a, b, c) = (xx[x], xy[x], yy[x]);
            let lmin = smaller_eigenvalue(a, b, c);
            if lmin >= tau && !(lmin > 0.0 && a * c - b * b > 0.0) {
                (u[x], v[x]) = solve_tensor(a, b, c, -xt[x], -yt[x], tau);
            }
        }
    }
}

#[inline(always)]
fn eigenvalues(a: f64, b: f64, c: f64) -> (f64, f64) {
    let half_trace = 0.5 * (a + c);
    let disc = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    (half_trace + disc, (half_trace - disc).max(0.0))
}

#[inline(always)]
fn smaller_eigenvalue(a: f64, b: f64, c: f64) -> f64 {
    eigenvalues(a, b, c).1
}

/// `A^+ b` for the symmetric `A = [a, b; b, c]`, zero when the smaller
/// eigenvalue is below `tau`.
#[inline]
pub(crate) fn solve_tensor(a: f64, b: f64, c: f64, bx: f64, by: f64, tau: f64) -> (f64, f64) {
    let (lmax, lmin) = eigenvalues(a, b, c);
    if lmin < tau {
        return (0.0, 0.0);
    }
    if lmin > 0.0 {
        let det = a * c - b * b;
        if det > 0.0 {
            let inv = 1.0 / det;
            return ((c * bx - b * by) * inv, (a * by - b * bx) * inv);
        }
    }
    // Rank one (only reachable with tau == 0): A^+ = A / lmax^2.
    if lmax > 0.0 {
        let s = 1.0 / (lmax * lmax);
        ((a * bx + b * by) * s, (b * bx + c * by) * s)
    } else {
        (0.0, 0.0)
    }
}
