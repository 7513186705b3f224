//! Pixel buffers and the stencil machinery every flow computation runs on.

mod border;
mod frame;
pub(crate) mod gaussian;
mod io;
mod kernel;
mod rows;
mod taps;

pub use border::BorderPolicy;
pub use frame::{frame_delta, Frame};
pub use gaussian::{gaussian_blur, GaussianSpec};
pub use io::{load_frame, to_grayscale, Image8};
pub use kernel::{apply_kernel3, Kernel3};

pub(crate) use border::PaddedRow;
pub(crate) use rows::{par_bands2_into, par_rows, par_rows2, RowRing};
pub(crate) use taps::{correlate, weighted_rows};
