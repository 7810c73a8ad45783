//! Monte-Carlo, finite-difference and Galerkin mean intervals side by side
//! at the reference defaults, centre start, R = 1 km.

use std::sync::Arc;
use std::time::Instant;

use locman::closed_form::galerkin_t;
use locman::ctrw::{estimate_t_multi, SimConfig};
use locman::pde::{solve_mean_interval, DiscGrid};
use locman::{compute_diffusion, MobilityParams};

fn main() -> locman::Result<()> {
    let n_trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let r = 1.0;
    let lambdas = [0.0, 0.2, 2.0];
    let grid = Arc::new(DiscGrid::new(r, 96)?);
    println!("k,lambda,mc,ci,pde,galerkin,seconds");
    for k in [0.1, 0.5, 2.0, 20.0] {
        let p = MobilityParams::reference(k);
        let d = compute_diffusion(&p)?;
        let t0 = Instant::now();
        let mc = estimate_t_multi([0.0, 0.0], r, &lambdas, &p, &SimConfig::new(n_trials, 1))?;
        let secs = t0.elapsed().as_secs_f64();
        for (e, &lam) in mc.iter().zip(&lambdas) {
            let pde = solve_mean_interval(&d, r, lam, &grid)?.at(0.0, 0.0);
            let gal = galerkin_t(&d, r, lam)?.t(0.0, 0.0);
            println!("{k},{lam},{:.5},{:.5},{pde:.5},{gal:.5},{secs:.2}", e.estimate.mean, e.estimate.half_width_95);
        }
    }
    Ok(())
}
