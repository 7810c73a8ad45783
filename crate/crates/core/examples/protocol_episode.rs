//! End-to-end protocol run: optimal-offset and centred areas under the same
//! motion and calls, with empirical costs per hour.

use std::time::Instant;

use locman::cost::CostParams;
use locman::protocol::{run_episode, Scenario, Strategy, EPISODE_HEADER};
use locman::MobilityParams;

fn main() -> locman::Result<()> {
    let mut args = std::env::args().skip(1);
    let k: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(20.0);
    let lambda: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.2);
    let hours: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(2500.0);
    let costs = CostParams::reference().with_lambda(lambda)?;
    println!("{EPISODE_HEADER}");
    let mut ct = Vec::new();
    for strategy in [Strategy::Optimal, Strategy::Center] {
        let t0 = Instant::now();
        let m = run_episode(&Scenario::new(MobilityParams::reference(k), costs.clone(), strategy, hours, 42))?;
        println!("{}", m.csv_row());
        eprintln!(
            "{strategy}: R {:.3} km, offset {:.3} km, mean interval {:.4} hr, {:.1} s",
            m.mean_radius,
            m.mean_offset,
            m.mean_interval.mean,
            t0.elapsed().as_secs_f64()
        );
        ct.push(m.c_t);
    }
    eprintln!("C_t(center) / C_t(optimal) = {:.4}", ct[1] / ct[0]);
    Ok(())
}
