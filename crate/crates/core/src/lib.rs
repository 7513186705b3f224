//! Training-free dense flow estimation.
//!
//! The crate computes two complementary per-pixel velocity fields from a pair
//! of grayscale frames:
//!
//! * `v_o`, a windowed least-squares (Lucas-Kanade style) optical flow that
//!   assumes brightness constancy, and
//! * `v_r`, the Reynolds flow: an irrotational residual field obtained from the
//!   frame difference with Simpson-rule boundary stencils and box-aggregated
//!   Sobel domain stencils, followed by Gaussian smoothing.
//!
//! Their sum `v_R = v_o + v_r` is rendered in HSV ([`encode::encode_hsv`]), or
//! the magnitudes are stacked with the frame intensity into an RGB image
//! ([`encode::encode_plus`]).
//!
//! ```
//! use reynoldsflow::prelude::*;
//!
//! let cur = Frame::from_fn(32, 32, |x, y| ((x * 7 + y * 3) % 11) as f64 * 10.0);
//! let next = cur.clone();
//! let pair = FlowPipeline::default().compute(&cur, &next).unwrap();
//! assert!(pair.optical.is_zero() && pair.reynolds.is_zero());
//! ```
//!
//! All operations are pure; internal row parallelism goes through rayon and is
//! bit-identical for every thread count.

pub mod bench;
pub mod cli;
pub mod encode;
mod error;
pub mod flow;
pub mod imgcore;
pub mod pipeline;
pub mod synth;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::encode::{encode_hsv, encode_plus, EncodedImage, NormalizationPolicy};
    pub use crate::flow::{
        combined_flow, lucas_kanade, reynolds_flow, FlowField, LkConfig, ReynoldsConfig,
    };
    pub use crate::imgcore::{BorderPolicy, Frame, GaussianSpec, Kernel3};
    pub use crate::pipeline::{FlowPipeline, PairFlows};
    pub use crate::{Error, Result};
}
