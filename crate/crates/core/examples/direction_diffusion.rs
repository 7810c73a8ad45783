//! Direction moments of the jump angle and the drift and diffusion they
//! induce, across concentration k, with the global drift over a 1 km disc.

use locman::mobility::{direction_moments, global_drift};
use locman::{compute_diffusion, MobilityParams};

fn main() -> locman::Result<()> {
    println!("k,E_cos,Var_theta,mu1_kmh,sigma11,sigma22,gamma_R1");
    for k in [0.0, 0.01, 0.1, 1.0, 10.0, 100.0, 1e4] {
        let m = direction_moments(k)?;
        let d = compute_diffusion(&MobilityParams::reference(k))?;
        println!(
            "{k},{:.6},{:.6},{:.6},{:.6},{:.6},{:.4}",
            m.e_cos,
            m.var_theta,
            d.mu1(),
            d.sigma11(),
            d.sigma22(),
            global_drift(&d, 1.0)?
        );
    }
    Ok(())
}
