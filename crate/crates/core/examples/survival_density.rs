//! Survival curve of the diffusion in a 1 km disc from the backward equation,
//! and the mass left by the forward equation at the same times.

use std::sync::Arc;

use locman::pde::{solve_forward, solve_survival, DiscGrid, TimeGrid};
use locman::{compute_diffusion, MobilityParams};

fn main() -> locman::Result<()> {
    let d = compute_diffusion(&MobilityParams::reference(0.1))?;
    let grid = Arc::new(DiscGrid::new(1.0, 32)?);
    // A grid node, so both equations start from the same point.
    let x = [0.125, 0.0];
    let tgrid = TimeGrid::new(3.0, 600)?;
    let curve = solve_survival(&d, x, 1.0, &grid, &tgrid)?;
    let times = [0.1, 0.25, 0.5, 1.0, 2.0, 3.0];
    let fwd = solve_forward(&d, x, 1.0, &grid, &tgrid, &times)?;
    println!("t_hr,survival_backward,mass_forward");
    for (t, dens) in fwd.times.iter().zip(&fwd.densities) {
        let g = curve.g[tgrid.step_of(*t)?];
        println!("{t:.3},{g:.6},{:.6}", dens.integral());
    }
    Ok(())
}
