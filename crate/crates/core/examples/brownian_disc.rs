//! Mean exit time of standard Brownian motion from the unit disc by finite
//! differences, against the exact value (1 - |x|²)/2, at several grids.

use std::sync::Arc;
use std::time::Instant;

use locman::pde::{solve_mean_interval, DiscGrid};
use locman::DiffusionParams;

fn main() -> locman::Result<()> {
    let d = DiffusionParams::brownian(1.0);
    println!("nodes_per_radius,T(0,0),T(0.5,0),exact(0.5,0),seconds");
    for n in [16, 32, 64, 128] {
        let t0 = Instant::now();
        let grid = Arc::new(DiscGrid::new(1.0, n)?);
        let t = solve_mean_interval(&d, 1.0, 0.0, &grid)?;
        println!("{n},{:.6},{:.6},{:.6},{:.3}", t.at(0.0, 0.0), t.at(0.5, 0.0), 0.375, t0.elapsed().as_secs_f64());
    }
    Ok(())
}
