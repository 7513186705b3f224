//! Convergence of the first-order area law `A' = (1 + div(v) dt) A` for a
//! unit square under `v = alpha * p`.

use reynoldsflow::synth::advect_patch_area;

fn main() -> reynoldsflow::Result<()> {
    let square = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
    let alpha = 0.2;
    let mut previous: Option<f64> = None;
    println!("{:>8} {:>12} {:>12} {:>7}", "dt", "ratio", "error", "order");
    for k in 0..6 {
        let dt = 1.0 / 2f64.powi(k);
        let (_, ratio) = advect_patch_area(alpha, dt, &square)?;
        let err = (ratio - (1.0 + 2.0 * alpha * dt)).abs();
        let order = previous.map_or(String::from("-"), |p| format!("{:.3}", (p / err).log2()));
        println!("{dt:>8.4} {ratio:>12.8} {err:>12.3e} {order:>7}");
        previous = Some(err);
    }
    Ok(())
}
