//! Optimal offset, optimal radius and cost saving ratio across drift
//! strengths at the reference defaults.

use std::time::Instant;

use locman::cost::CostParams;
use locman::optimize::{joint_optimize, results_row, OptimizerOptions, Provider, RESULTS_HEADER};
use locman::MobilityParams;

fn main() -> locman::Result<()> {
    let provider: Provider = std::env::args().nth(1).as_deref().unwrap_or("pde").parse()?;
    let opts = OptimizerOptions::new(provider);
    let costs = CostParams::reference();
    println!("{RESULTS_HEADER}");
    let t0 = Instant::now();
    for k in [1e-4, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0, 1e6] {
        let res = joint_optimize(&MobilityParams::reference(k), &costs, &opts)?;
        println!("{}", results_row(k, costs.lambda, &res));
    }
    eprintln!("{:.1} s", t0.elapsed().as_secs_f64());
    Ok(())
}
