//! The per-pair flow computation shared by the CLI and the benchmark harness.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::flow::{
    combined_flow, lucas_kanade, lucas_kanade_into, reynolds_flow_pair, reynolds_flow_pair_into,
    FlowField, LkConfig, ReynoldsConfig,
};
use crate::imgcore::Frame;

/// Flow parameters for both estimators.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FlowPipeline {
    pub lk: LkConfig,
    pub reynolds: ReynoldsConfig,
}

/// `v_o`, `v_r`, and `v_R = v_o + v_r` for one frame pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairFlows {
    pub optical: FlowField,
    pub reynolds: FlowField,
    pub combined: FlowField,
}

impl FlowPipeline {
    pub fn new(lk: LkConfig, reynolds: ReynoldsConfig) -> Self {
        Self { lk, reynolds }
    }

    pub fn optical(&self, current: &Frame, next: &Frame) -> Result<FlowField> {
        lucas_kanade(current, next, &self.lk)
    }

    pub fn reynolds(&self, current: &Frame, next: &Frame) -> Result<FlowField> {
        reynolds_flow_pair(current, next, &self.reynolds)
    }

    /// Both estimators without the combined field.
    pub fn components(&self, current: &Frame, next: &Frame) -> Result<(FlowField, FlowField)> {
        Ok((self.optical(current, next)?, self.reynolds(current, next)?))
    }

    /// [`FlowPipeline::components`] into existing fields, reusing their
    /// buffers across frame pairs.
    pub fn components_into(
        &self,
        current: &Frame,
        next: &Frame,
        optical: &mut FlowField,
        reynolds: &mut FlowField,
    ) -> Result<()> {
        lucas_kanade_into(current, next, &self.lk, optical)?;
        reynolds_flow_pair_into(current, next, &self.reynolds, reynolds)
    }

    pub fn compute(&self, current: &Frame, next: &Frame) -> Result<PairFlows> {
        let (optical, reynolds) = self.components(current, next)?;
        let combined = combined_flow(&optical, &reynolds)?;
        Ok(PairFlows {
            optical,
            reynolds,
            combined,
        })
    }
}
