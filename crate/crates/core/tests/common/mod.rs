//! Naive reference implementations used as test oracles. They share no code
//! with the library's stencil, blur, or solver paths.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reynoldsflow::imgcore::{BorderPolicy, Frame};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_frame(rng: &mut ChaCha8Rng, w: usize, h: usize, lo: f64, hi: f64) -> Frame {
    let data = (0..w * h).map(|_| rng.random_range(lo..hi)).collect();
    Frame::new(w, h, data).unwrap()
}

/// Smooth random texture: a low-pass of white noise plus a few sinusoids,
/// on the [0, 255] scale.
pub fn random_texture(rng: &mut ChaCha8Rng, w: usize, h: usize) -> Frame {
    let waves: Vec<(f64, f64, f64, f64)> = (0..6)
        .map(|_| {
            (
                rng.random_range(10.0..30.0),
                rng.random_range(-0.6..0.6),
                rng.random_range(-0.6..0.6),
                rng.random_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect();
    Frame::from_fn(w, h, |x, y| {
        128.0
            + waves
                .iter()
                .map(|(a, kx, ky, p)| a * (kx * x as f64 + ky * y as f64 + p).sin())
                .sum::<f64>()
    })
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Independent border resolution.
fn fetch(data: &[f64], w: usize, h: usize, x: i64, y: i64, border: BorderPolicy) -> f64 {
    fn axis(i: i64, n: i64, border: BorderPolicy) -> Option<i64> {
        if i >= 0 && i < n {
            return Some(i);
        }
        match border {
            BorderPolicy::Zero => None,
            BorderPolicy::Replicate => Some(if i < 0 { 0 } else { n - 1 }),
            BorderPolicy::Reflect => {
                let mut i = i;
                // Bounce until inside; fine for the small offsets used here.
                while i < 0 || i >= n {
                    i = if i < 0 { -i } else { 2 * (n - 1) - i };
                }
                Some(i)
            }
        }
    }
    match (axis(x, w as i64, border), axis(y, h as i64, border)) {
        (Some(xi), Some(yi)) => data[yi as usize * w + xi as usize],
        _ => 0.0,
    }
}

/// Direct 3x3 correlation, double loop.
pub fn naive_correlate3(f: &Frame, k: [[f64; 3]; 3], norm: f64, border: BorderPolicy) -> Vec<f64> {
    let (w, h) = f.dims();
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for dy in -1i64..=1 {
                for dx in -1i64..=1 {
                    acc += k[(dy + 1) as usize][(dx + 1) as usize]
                        * fetch(f.data(), w, h, x as i64 + dx, y as i64 + dy, border);
                }
            }
            out[y * w + x] = norm * acc;
        }
    }
    out
}

pub fn to_frame(w: usize, h: usize, data: Vec<f64>) -> Frame {
    Frame::new(w, h, data).unwrap()
}

/// Non-separable 2-D Gaussian with radius `ceil(3 sigma)`.
pub fn naive_gaussian(f: &Frame, sigma: f64, border: BorderPolicy) -> Vec<f64> {
    let r = (3.0 * sigma).ceil() as i64;
    let (w, h) = f.dims();
    let mut weights = Vec::new();
    let mut total = 0.0;
    for j in -r..=r {
        for i in -r..=r {
            let g = (-((i * i + j * j) as f64) / (2.0 * sigma * sigma)).exp();
            weights.push((i, j, g));
            total += g;
        }
    }
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for &(i, j, g) in &weights {
                acc += g * fetch(f.data(), w, h, x as i64 + i, y as i64 + j, border);
            }
            out[y * w + x] = acc / total;
        }
    }
    out
}

pub const SIMPSON_X: [[f64; 3]; 3] = [[1.0, 4.0, 1.0], [0.0, 0.0, 0.0], [-1.0, -4.0, -1.0]];
pub const SIMPSON_Y: [[f64; 3]; 3] = [[-1.0, 0.0, 1.0], [-4.0, 0.0, 4.0], [-1.0, 0.0, 1.0]];
pub const SOBEL_X: [[f64; 3]; 3] = [[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]];
pub const SOBEL_Y: [[f64; 3]; 3] = [[-1.0, -2.0, -1.0], [0.0, 0.0, 0.0], [1.0, 2.0, 1.0]];
pub const ONES: [[f64; 3]; 3] = [[1.0; 3]; 3];

/// Reynolds flow by literal two-stage composition of the four stencils and a
/// 2-D Gaussian.
pub fn naive_reynolds(delta: &Frame, sigma: f64, border: BorderPolicy) -> (Vec<f64>, Vec<f64>) {
    let (w, h) = delta.dims();
    let bx = naive_correlate3(delta, SIMPSON_X, 1.0 / 3.0, border);
    let by = naive_correlate3(delta, SIMPSON_Y, 1.0 / 3.0, border);
    let sx = to_frame(w, h, naive_correlate3(delta, SOBEL_X, 1.0, border));
    let sy = to_frame(w, h, naive_correlate3(delta, SOBEL_Y, 1.0, border));
    let dx = naive_correlate3(&sx, ONES, 1.0, border);
    let dy = naive_correlate3(&sy, ONES, 1.0, border);
    let u_pre: Vec<f64> = (0..w * h).map(|i| -by[i] + dy[i]).collect();
    let v_pre: Vec<f64> = (0..w * h).map(|i| bx[i] - dx[i]).collect();
    (
        naive_gaussian(&to_frame(w, h, u_pre), sigma, border),
        naive_gaussian(&to_frame(w, h, v_pre), sigma, border),
    )
}

/// Central differences with clamped indices.
pub fn naive_gradient(f: &Frame) -> (Vec<f64>, Vec<f64>) {
    let (w, h) = f.dims();
    let at = |x: i64, y: i64| fetch(f.data(), w, h, x, y, BorderPolicy::Replicate);
    let mut gx = vec![0.0; w * h];
    let mut gy = vec![0.0; w * h];
    for y in 0..h as i64 {
        for x in 0..w as i64 {
            let i = y as usize * w + x as usize;
            gx[i] = (at(x + 1, y) - at(x - 1, y)) / 2.0;
            gy[i] = (at(x, y + 1) - at(x, y - 1)) / 2.0;
        }
    }
    (gx, gy)
}

/// Windowed least squares with per-pixel window sums and an
/// eigendecomposition-based solve.
pub fn naive_lk(cur: &Frame, next: &Frame, window: usize, tau: f64) -> (Vec<f64>, Vec<f64>) {
    let (w, h) = cur.dims();
    let (gx, gy) = naive_gradient(cur);
    let ft: Vec<f64> = next
        .data()
        .iter()
        .zip(cur.data())
        .map(|(n, c)| n - c)
        .collect();
    let r = (window / 2) as i64;
    let clamp = |v: i64, n: usize| v.clamp(0, n as i64 - 1) as usize;
    let mut u = vec![0.0; w * h];
    let mut v = vec![0.0; w * h];
    for y in 0..h as i64 {
        for x in 0..w as i64 {
            let (mut a, mut b, mut c, mut p, mut q) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for dy in -r..=r {
                for dx in -r..=r {
                    let j = clamp(y + dy, h) * w + clamp(x + dx, w);
                    a += gx[j] * gx[j];
                    b += gx[j] * gy[j];
                    c += gy[j] * gy[j];
                    p -= gx[j] * ft[j];
                    q -= gy[j] * ft[j];
                }
            }
            // Eigen-decomposition of [[a, b], [b, c]].
            let mean = (a + c) / 2.0;
            let rad = (((a - c) / 2.0).powi(2) + b * b).sqrt();
            let (l1, l2) = (mean + rad, mean - rad);
            if l2 < tau || l2 <= 0.0 {
                continue;
            }
            let (e1x, e1y) = if b.abs() > 1e-300 {
                let n = (b * b + (l1 - a).powi(2)).sqrt();
                (b / n, (l1 - a) / n)
            } else if a >= c {
                (1.0, 0.0)
            } else {
                (0.0, 1.0)
            };
            let (e2x, e2y) = (-e1y, e1x);
            let c1 = (e1x * p + e1y * q) / l1;
            let c2 = (e2x * p + e2y * q) / l2;
            let i = y as usize * w + x as usize;
            u[i] = c1 * e1x + c2 * e2x;
            v[i] = c1 * e1y + c2 * e2y;
        }
    }
    (u, v)
}
