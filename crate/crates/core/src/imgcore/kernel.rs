use super::{par_rows, BorderPolicy, Frame, PaddedRow};
use crate::error::Result;

/// Fixed 3x3 stencil applied by correlation: `out(x, y) = normalization *
/// sum k[dy+1][dx+1] * in(x+dx, y+dy)`. No kernel flip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel3 {
    /// Indexed `[row][col]`, row 0 is the row above the output pixel.
    pub coefficients: [[f64; 3]; 3],
    pub normalization: f64,
}

impl Kernel3 {
    pub const fn new(coefficients: [[f64; 3]; 3], normalization: f64) -> Self {
        Self {
            coefficients,
            normalization,
        }
    }

    pub const fn identity() -> Self {
        Self::new([[0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]], 1.0)
    }

    /// Simpson-rule boundary stencil producing the x component of the
    /// boundary flux term.
    pub const fn simpson_x() -> Self {
        Self::new(
            [[1.0, 4.0, 1.0], [0.0, 0.0, 0.0], [-1.0, -4.0, -1.0]],
            1.0 / 3.0,
        )
    }

    /// Simpson-rule boundary stencil for the y component.
    pub const fn simpson_y() -> Self {
        Self::new(
            [[-1.0, 0.0, 1.0], [-4.0, 0.0, 4.0], [-1.0, 0.0, 1.0]],
            1.0 / 3.0,
        )
    }

    pub const fn sobel_x() -> Self {
        Self::new([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]], 1.0)
    }

    pub const fn sobel_y() -> Self {
        Self::new([[-1.0, -2.0, -1.0], [0.0, 0.0, 0.0], [1.0, 2.0, 1.0]], 1.0)
    }

    /// Unnormalized all-ones aggregation.
    pub const fn box_ones() -> Self {
        Self::new([[1.0; 3]; 3], 1.0)
    }

    pub fn coefficient_sum(&self) -> f64 {
        self.coefficients.iter().flatten().sum()
    }

    /// `k[i][j] == -k[2-i][2-j]` for every entry, as for all four named
    /// difference stencils.
    pub fn is_antisymmetric(&self) -> bool {
        let k = &self.coefficients;
        (0..3).all(|i| (0..3).all(|j| k[i][j] == -k[2 - i][2 - j]))
    }

    pub fn is_finite(&self) -> bool {
        self.normalization.is_finite() && self.coefficients.iter().flatten().all(|c| c.is_finite())
    }
}

/// Correlates `frame` with `kernel`, resolving out-of-range samples with
/// `border`. Output has the input's dimensions.
pub fn apply_kernel3(frame: &Frame, kernel: &Kernel3, border: BorderPolicy) -> Result<Frame> {
    frame.ensure_stencil_size()?;
    let (w, h) = frame.dims();
    let k = kernel.coefficients;
    let norm = kernel.normalization;
    let antisymmetric = kernel.is_antisymmetric();
    let data = par_rows(w, h, |y, out| {
        let rows: [PaddedRow; 3] = std::array::from_fn(|dy| {
            let mut padded = PaddedRow::new(w, 1);
            let sy = border.resolve(y as isize + dy as isize - 1, h);
            padded.load(sy.map(|sy| frame.row(sy)), border);
            padded
        });
        let tap = |dy: usize, dx: usize| rows[dy].shifted(dx as isize - 1, w);
        if antisymmetric {
            // Differencing mirrored taps first makes constants cancel exactly.
            for (dy, dx) in [(0, 0), (0, 1), (0, 2), (1, 0)] {
                let c = k[dy][dx];
                if c == 0.0 {
                    continue;
                }
                let (a, b) = (tap(dy, dx), tap(2 - dy, 2 - dx));
                for ((o, p), q) in out.iter_mut().zip(a).zip(b) {
                    *o += c * (p - q);
                }
            }
        } else {
            for (dy, krow) in k.iter().enumerate() {
                for (dx, &c) in krow.iter().enumerate() {
                    if c == 0.0 {
                        continue;
                    }
                    for (o, s) in out.iter_mut().zip(tap(dy, dx)) {
                        *o += c * s;
                    }
                }
            }
        }
        if norm != 1.0 {
            out.iter_mut().for_each(|o| *o *= norm);
        }
    });
    Ok(Frame::from_parts(w, h, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_kernels_are_zero_sum() {
        for k in [
            Kernel3::simpson_x(),
            Kernel3::simpson_y(),
            Kernel3::sobel_x(),
            Kernel3::sobel_y(),
        ] {
            assert_eq!(k.coefficient_sum(), 0.0);
            assert!(k.is_antisymmetric());
        }
        assert!(!Kernel3::identity().is_antisymmetric());
        let b = Kernel3::box_ones();
        assert!(!b.is_antisymmetric());
        assert_eq!(b.coefficient_sum(), 9.0);
        assert_eq!(b.normalization, 1.0);
    }

    #[test]
    fn constant_frame_annihilated_under_every_policy_interior() {
        let f = Frame::filled(6, 5, 7.0);
        for border in [BorderPolicy::Replicate, BorderPolicy::Reflect] {
            let out = apply_kernel3(&f, &Kernel3::simpson_x(), border).unwrap();
            assert!(out.is_zero());
        }
        // Zero padding breaks constancy at the rim, not inside.
        let out = apply_kernel3(&f, &Kernel3::sobel_x(), BorderPolicy::Zero).unwrap();
        assert_eq!(out.get(2, 2), 0.0);
        assert_ne!(out.get(0, 2), 0.0);
    }

    #[test]
    fn identity_kernel_is_noop() {
        let f = Frame::from_fn(5, 4, |x, y| (x * 3 + y * 7) as f64 - 4.5);
        for border in [
            BorderPolicy::Replicate,
            BorderPolicy::Reflect,
            BorderPolicy::Zero,
        ] {
            assert_eq!(apply_kernel3(&f, &Kernel3::identity(), border).unwrap(), f);
        }
    }

    #[test]
    fn correlation_not_convolution() {
        // A ramp increasing to the right gives a positive sobel_x response.
        let f = Frame::from_fn(5, 5, |x, _| x as f64);
        let out = apply_kernel3(&f, &Kernel3::sobel_x(), BorderPolicy::Replicate).unwrap();
        assert_eq!(out.get(2, 2), 8.0);
    }

    #[test]
    fn too_small() {
        let f = Frame::zeros(2, 8);
        assert!(apply_kernel3(&f, &Kernel3::identity(), BorderPolicy::Replicate).is_err());
    }
}
