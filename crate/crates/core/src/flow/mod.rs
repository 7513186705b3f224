//! Flow estimation: windowed least-squares optical flow, Reynolds flow, and
//! their sum.

pub(crate) mod field;
mod lk;
mod reynolds;

pub use field::{combined_flow, combined_flow_into, flow_angle, flow_magnitude, FlowField};
pub use lk::{lucas_kanade, lucas_kanade_into, spatial_gradient, LkConfig};
pub use reynolds::{
    boundary_terms, domain_terms, reynolds_flow, reynolds_flow_pair, reynolds_flow_pair_into,
    ReynoldsConfig,
};
