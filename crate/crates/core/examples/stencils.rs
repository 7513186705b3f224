//! Responses of the difference stencils and the Gaussian blur on a small
//! ramp-plus-bump frame.

use reynoldsflow::imgcore::{
    apply_kernel3, gaussian_blur, BorderPolicy, Frame, GaussianSpec, Kernel3,
};

fn print(label: &str, f: &Frame) {
    println!("{label}:");
    for y in 0..f.height() {
        let row: Vec<String> = f.row(y).iter().map(|v| format!("{v:7.2}")).collect();
        println!("  {}", row.join(" "));
    }
}

fn main() -> reynoldsflow::Result<()> {
    let frame = Frame::from_fn(7, 5, |x, y| {
        2.0 * x as f64 + if (x, y) == (3, 2) { 10.0 } else { 0.0 }
    });
    print("input", &frame);
    for (name, k) in [
        ("sobel_x", Kernel3::sobel_x()),
        ("sobel_y", Kernel3::sobel_y()),
        ("simpson_x", Kernel3::simpson_x()),
        ("simpson_y", Kernel3::simpson_y()),
    ] {
        print(name, &apply_kernel3(&frame, &k, BorderPolicy::Replicate)?);
    }
    let spec = GaussianSpec::new(1.0)?;
    println!(
        "gaussian taps (radius {}): {:?}",
        spec.radius,
        spec.weights()
    );
    print(
        "blurred",
        &gaussian_blur(&frame, &spec, BorderPolicy::Reflect)?,
    );
    Ok(())
}
