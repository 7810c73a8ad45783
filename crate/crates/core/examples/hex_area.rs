//! Builds a location area on the hexagonal cell grid for a terminal with
//! strong drift and pages it in three rounds from a few true cells.

use locman::cost::CostParams;
use locman::optimize::{OptimizerOptions, Provider};
use locman::protocol::{Msg1, Network, NetworkConfig, Strategy};
use locman::MobilityParams;

fn main() -> locman::Result<()> {
    let mut costs = CostParams::reference();
    costs.m = 3;
    let mut net = Network::new(NetworkConfig {
        costs,
        opts: OptimizerOptions::new(Provider::Asymptotic),
        strategy: Strategy::Optimal,
        r_override: None,
        grid: Default::default(),
    });
    let msg = Msg1 { pm1: MobilityParams::reference(20.0), y_tau: [0.0, 0.0], direction: [1.0, 0.0] };
    net.network_update(1, &msg)?;
    let la = net.la(1).cloned().ok_or_else(|| locman::Error::Consistency("no area stored".into()))?;
    println!("R = {:.3} km, centre ({:.3}, {:.3})", la.r, la.center[0], la.center[1]);
    println!("interior {} cells, boundary {} cells", la.interior_cells.len(), la.boundary_cells.len());
    for (i, s) in la.sub_area_cells.iter().enumerate() {
        println!("round {}: {} cells", i + 1, s.len());
    }
    println!("true_cell,rounds,cells_paged");
    for s in la.sub_area_cells.iter().filter(|s| !s.is_empty()) {
        let out = net.page(1, s[0])?;
        println!("{},{},{}", s[0], out.rounds, out.cells_paged);
    }
    Ok(())
}
