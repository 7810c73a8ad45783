//! Reads a run configuration from text and optimises the area for it.
//! Pass a file path to use that instead of the built-in text.

use locman::config::RunConfig;
use locman::optimize::{joint_optimize, OptimizerOptions};

const TEXT: &str = "\
# strong drift, frequent calls
k = 20
lambda_per_hr = 0.5
provider = asymptotic
";

fn main() -> locman::Result<()> {
    let cfg = match std::env::args().nth(1) {
        Some(path) => RunConfig::load(path.as_ref())?,
        None => RunConfig::parse(TEXT)?,
    };
    let r = joint_optimize(&cfg.mobility()?, &cfg.costs()?, &OptimizerOptions::new(cfg.provider))?;
    println!("provider {}: x_opt {:.4} km, R_opt {:.4} km, C_min {:.4}", r.provider, r.x_opt, r.r_opt, r.c_min);
    println!("saving over a centred area {:.4}", r.saving_ratio.unwrap_or(0.0));
    Ok(())
}
