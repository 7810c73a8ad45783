//! Runs the cheap consistency checks clean and with each deliberate defect,
//! showing which checks catch which defect.

use locman::validate::{run_checks, Fault, ValidateOptions};

fn main() {
    for fault in [None, Some(Fault::FlipDriftSign), Some(Fault::FlipSigmaSign)] {
        let opts = ValidateOptions {
            fault,
            only: Some(vec!["0".into(), "2".into(), "4".into()]),
            ..Default::default()
        };
        println!("fault {fault:?}");
        for r in run_checks(&opts) {
            println!("  {r}");
        }
    }
}
