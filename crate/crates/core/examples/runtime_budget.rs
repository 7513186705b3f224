//! Per-frame runtime of the two encodings on a synthetic full-HD sequence.
//!
//! ```bash
//! cargo run --release -p reynoldsflow --example runtime_budget -- 20
//! ```

use reynoldsflow::bench::{time_pipeline_stream, BenchConfig, Method};
use reynoldsflow::synth::{render_frame, Pattern, SequenceSpec};

fn main() -> reynoldsflow::Result<()> {
    let frames: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(12);
    let spec = SequenceSpec {
        width: 1920,
        height: 1080,
        frame_count: frames,
        pattern: Pattern::RandomSmooth,
        ..SequenceSpec::default()
    };
    let config = BenchConfig::default();
    for method in [Method::ReynoldsPlus, Method::ReynoldsHsv, Method::LkOnly] {
        let stream = (0..spec.frame_count).map(|n| render_frame(&spec, n));
        let report = time_pipeline_stream(stream, method, &config)?;
        println!(
            "{:<14} mean {:.4} s  median {:.4} s  p95 {:.4} s  ({} pairs, {})",
            method.as_str(),
            report.mean,
            report.median,
            report.p95,
            report.frames,
            report.mode
        );
    }
    Ok(())
}
