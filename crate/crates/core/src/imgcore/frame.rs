use crate::error::{check_same_dims, Error, Result};

/// Single-channel floating-point image, row-major.
///
/// Loaded images live on the `[0, 255]` intensity scale; derived fields such
/// as frame differences are unrestricted but always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Frame {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || data.len() != width * height {
            return Err(Error::BadLength {
                len: data.len(),
                width,
                height,
                channels: 1,
            });
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Constant frame.
    ///
    /// # Panics
    /// If `value` is not finite or a dimension is zero.
    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        assert!(value.is_finite(), "frame values must be finite");
        assert!(width > 0 && height > 0, "frame dimensions must be positive");
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self::filled(width, height, 0.0)
    }

    /// Builds a frame from `f(x, y)` with `x` the column and `y` the row.
    ///
    /// # Panics
    /// If `f` returns a non-finite value.
    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data).expect("from_fn produced an invalid frame")
    }

    /// Internal constructor for buffers produced by finite arithmetic on
    /// finite inputs.
    pub(crate) fn from_parts(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        Self {
            width,
            height,
            data,
        }
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

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn row(&self, y: usize) -> &[f64] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.data
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }

    /// Errors unless the frame is at least 3x3.
    pub fn ensure_stencil_size(&self) -> Result<()> {
        if self.width < 3 || self.height < 3 {
            return Err(Error::TooSmall {
                width: self.width,
                height: self.height,
            });
        }
        Ok(())
    }
}

/// `next - current`, the temporal difference of a frame pair.
pub fn frame_delta(current: &Frame, next: &Frame) -> Result<Frame> {
    check_same_dims(current.dims(), next.dims())?;
    let data = current
        .data
        .iter()
        .zip(&next.data)
        .map(|(c, n)| n - c)
        .collect();
    Ok(Frame::from_parts(current.width, current.height, data))
}
