//! Reynolds flow under illumination changes on a static scene: a uniform
//! brightness ramp leaves no residual flow, a spatial ramp does.

use reynoldsflow::pipeline::FlowPipeline;
use reynoldsflow::synth::{generate, Illumination, Motion, Pattern, SequenceSpec};

fn main() -> reynoldsflow::Result<()> {
    let pipeline = FlowPipeline::default();
    for illumination in [
        Illumination::None,
        Illumination::UniformRamp { beta: 3.0 },
        Illumination::SpatialRamp { gamma: 0.2 },
    ] {
        let spec = SequenceSpec {
            frame_count: 2,
            pattern: Pattern::RandomSmooth,
            motion: Motion::Translation { dx: 0.0, dy: 0.0 },
            illumination,
            ..SequenceSpec::default()
        };
        let (frames, _) = generate(&spec)?;
        let pair = pipeline.compute(&frames[0], &frames[1])?;
        println!(
            "{illumination:?}: max |v_r| = {:.3e}, max |v_o| = {:.3e}",
            pair.reynolds.max_abs(),
            pair.optical.max_abs()
        );
    }
    Ok(())
}
