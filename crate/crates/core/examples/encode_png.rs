//! Renders the HSV and magnitude-stack encodings of a moving blob to PNG.
//!
//! ```bash
//! cargo run -p reynoldsflow --example encode_png -- /tmp/encoded
//! ```

use std::path::PathBuf;

use reynoldsflow::encode::{encode_hsv, encode_plus, write_png_file, NormalizationPolicy};
use reynoldsflow::pipeline::FlowPipeline;
use reynoldsflow::synth::{generate, SequenceSpec};

fn main() -> reynoldsflow::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "encoded".into()));
    std::fs::create_dir_all(&dir)?;
    let spec = SequenceSpec {
        width: 160,
        height: 120,
        frame_count: 2,
        ..SequenceSpec::default()
    };
    let (frames, _) = generate(&spec)?;
    let pair = FlowPipeline::default().compute(&frames[0], &frames[1])?;
    let norm = NormalizationPolicy::default();
    write_png_file(&frames[0], dir.join("frame.png"))?;
    write_png_file(&encode_hsv(&pair.combined, &norm), dir.join("hsv.png"))?;
    write_png_file(
        &encode_plus(&pair.optical, &pair.reynolds, &frames[0], &norm)?,
        dir.join("plus.png"),
    )?;
    println!("wrote frame.png, hsv.png, plus.png to {}", dir.display());
    Ok(())
}
