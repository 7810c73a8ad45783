//! Figure sweeps over k written as CSV to stdout: Galerkin against the
//! asymptotic limits, then the call-rate and dwell-variance family.

use locman::cost::CostParams;
use locman::figures::{fig5, fig5_csv, fig6, fig6_csv, k_grid};
use locman::mobility::SECONDS_PER_HOUR;
use locman::MobilityParams;

fn main() -> locman::Result<()> {
    let ks = k_grid();
    let base = MobilityParams::reference(1.0).with_var_time(0.1 / (SECONDS_PER_HOUR * SECONDS_PER_HOUR))?;
    let costs = CostParams::reference().with_lambda(0.2)?;
    print!("{}", fig5_csv(&fig5(&base, &costs, 1.0, &ks)?));
    println!();
    print!("{}", fig6_csv(&fig6(&MobilityParams::reference(1.0), 1.0, &ks)?));
    Ok(())
}
