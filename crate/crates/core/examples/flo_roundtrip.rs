//! Writes a flow field as Middlebury `.flo` and reads it back.

use reynoldsflow::encode::{read_flo, write_flo};
use reynoldsflow::flow::FlowField;

fn main() -> reynoldsflow::Result<()> {
    let flow = FlowField::from_fn(4, 3, |x, y| (x as f64 * 0.5, -(y as f64) * 0.25));
    let mut bytes = Vec::new();
    write_flo(&flow, &mut bytes)?;
    println!("{} bytes (12 header + 8 per pixel)", bytes.len());
    let back = read_flo(bytes.as_slice())?;
    assert_eq!(back, flow);
    println!("round-trip identical: u = {:?}", back.u());
    Ok(())
}
