use crate::error::{check_same_dims, Error, Result};
use crate::imgcore::Frame;

/// Two-channel per-pixel velocity in pixels per frame. `u` is horizontal
/// (column) velocity, `v` vertical (row) velocity with y pointing down.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowField {
    width: usize,
    height: usize,
    u: Vec<f64>,
    v: Vec<f64>,
}

impl FlowField {
    pub fn new(width: usize, height: usize, u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        for ch in [&u, &v] {
            if width == 0 || height == 0 || ch.len() != width * height {
                return Err(Error::BadLength {
                    len: ch.len(),
                    width,
                    height,
                    channels: 1,
                });
            }
            if let Some(i) = ch.iter().position(|x| !x.is_finite()) {
                return Err(Error::NonFinite(i));
            }
        }
        Ok(Self {
            width,
            height,
            u,
            v,
        })
    }

    pub(crate) fn from_parts(width: usize, height: usize, u: Vec<f64>, v: Vec<f64>) -> Self {
        debug_assert!(u.len() == width * height && v.len() == width * height);
        Self {
            width,
            height,
            u,
            v,
        }
    }

    /// A 0x0 field, for use as a reusable output buffer.
    pub(crate) fn empty() -> Self {
        Self::from_parts(0, 0, Vec::new(), Vec::new())
    }

    /// Resize to `width x height`, keeping the allocations. Contents are
    /// unspecified afterwards.
    pub(crate) fn reshape(&mut self, width: usize, height: usize) {
        self.width = width;
        self.height = height;
        self.u.resize(width * height, 0.0);
        self.v.resize(width * height, 0.0);
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut [f64], &mut [f64]) {
        (&mut self.u, &mut self.v)
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self::uniform(width, height, 0.0, 0.0)
    }

    pub fn uniform(width: usize, height: usize, u: f64, v: f64) -> Self {
        Self::from_fn(width, height, |_, _| (u, v))
    }

    /// # Panics
    /// If `f` yields a non-finite component.
    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> (f64, f64)) -> Self {
        let mut u = Vec::with_capacity(width * height);
        let mut v = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                let (a, b) = f(x, y);
                u.push(a);
                v.push(b);
            }
        }
        Self::new(width, height, u, v).expect("from_fn produced an invalid flow field")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> (f64, f64) {
        let i = y * self.width + x;
        (self.u[i], self.v[i])
    }

    pub fn is_zero(&self) -> bool {
        self.u.iter().chain(&self.v).all(|&c| c == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.u
            .iter()
            .chain(&self.v)
            .fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn u_frame(&self) -> Frame {
        Frame::from_parts(self.width, self.height, self.u.clone())
    }

    pub fn v_frame(&self) -> Frame {
        Frame::from_parts(self.width, self.height, self.v.clone())
    }
}

/// `v_R = v_o + v_r`, channel-wise.
pub fn combined_flow(optical: &FlowField, reynolds: &FlowField) -> Result<FlowField> {
    let mut out = FlowField::empty();
    combined_flow_into(optical, reynolds, &mut out)?;
    Ok(out)
}

/// [`combined_flow`] into an existing field, reusing its buffers.
pub fn combined_flow_into(
    optical: &FlowField,
    reynolds: &FlowField,
    out: &mut FlowField,
) -> Result<()> {
    check_same_dims(optical.dims(), reynolds.dims())?;
    out.reshape(optical.width, optical.height);
    let (u, v) = out.parts_mut();
    for (dst, (a, b)) in [
        (u, (&optical.u, &reynolds.u)),
        (v, (&optical.v, &reynolds.v)),
    ] {
        for ((d, x), y) in dst.iter_mut().zip(a.iter()).zip(b.iter()) {
            *d = x + y;
        }
    }
    Ok(())
}

/// Per-pixel speed `sqrt(u^2 + v^2)`.
pub fn flow_magnitude(flow: &FlowField) -> Frame {
    let data = flow
        .u
        .iter()
        .zip(&flow.v)
        .map(|(u, v)| (u * u + v * v).sqrt())
        .collect();
    Frame::from_parts(flow.width, flow.height, data)
}

/// Direction `atan2(v, u)` in degrees, in `[0, 360)`. The zero vector maps to 0.
pub fn flow_angle(flow: &FlowField) -> Frame {
    let data = flow
        .u
        .iter()
        .zip(&flow.v)
        .map(|(&u, &v)| angle_degrees(u, v))
        .collect();
    Frame::from_parts(flow.width, flow.height, data)
}

#[inline]
pub(crate) fn angle_degrees(u: f64, v: f64) -> f64 {
    let mut deg = v.atan2(u).to_degrees();
    if deg < 0.0 {
        deg += 360.0;
    }
    if deg >= 360.0 {
        deg = 0.0;
    }
    deg
}
