//! Sequential paging: wedge angles for m rounds and the resulting paging
//! cost on the density surviving to the mean interval, per-round against
//! cumulative charging.

use std::sync::Arc;

use locman::cost::{build_paging_plan, paging_cost, CostParams, PagingMode};
use locman::mobility::direction_moments;
use locman::pde::{solve_forward, solve_mean_interval, DiscGrid, TimeGrid};
use locman::{compute_diffusion, MobilityParams};

fn main() -> locman::Result<()> {
    let k = 5.0;
    let costs = CostParams::reference();
    let d = compute_diffusion(&MobilityParams::reference(k))?;
    let var = direction_moments(k)?.var_theta;
    let grid = Arc::new(DiscGrid::new(1.0, 32)?);
    let x = [-0.5, 0.0];
    let t = solve_mean_interval(&d, 1.0, costs.lambda, &grid)?.at(x[0], x[1]);
    let tgrid = TimeGrid::new(t * 2.0, 800)?;
    let dens = solve_forward(&d, x, 1.0, &grid, &tgrid, &[t])?.densities.remove(0);
    println!("mean interval {t:.4} hr from x = {}", x[0]);
    println!("m,first_half_angle,C_p_per_round,C_p_cumulative");
    for m in 1..=5 {
        let plan = build_paging_plan(m, var, x, [1.0, 0.0])?;
        let a = paging_cost(&plan, &dens, costs.lambda, costs.v, PagingMode::PerRound)?;
        let b = paging_cost(&plan, &dens, costs.lambda, costs.v, PagingMode::Cumulative)?;
        println!("{m},{:.4},{:.4},{:.4}", plan.angles[0], a.c_p, b.c_p);
    }
    Ok(())
}
